// Acceptance run: one PASS/FAIL line per criterion, followed by the numbers
// behind it. Exit status 0 only when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mpsdg/harness.hpp"
#include "mpsdg/limiter.hpp"
#include "mpsdg/verify.hpp"

using namespace mpsdg;

namespace {

constexpr double kBoundTol = 1e-12;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

/// Outside-the-bounds amounts of a row: u_min below m, u_max above M.
bool within_bounds(const ErrorTableRow& r) {
  return r.failure.empty() && r.min_violation >= -kBoundTol && r.max_violation <= kBoundTol;
}

std::vector<const ErrorTableRow*> rows_of(const ExperimentResult& res, bool limiter) {
  std::vector<const ErrorTableRow*> out;
  for (const auto& r : res.rows) {
    if (r.limiter == limiter) out.push_back(&r);
  }
  return out;
}

/// Periodic runs collected for the conservation criterion.
struct MassRecord {
  std::string name;
  double drift_rate = 0.0;
};
std::vector<MassRecord> g_mass;

void collect_mass(const std::string& name, const ExperimentResult& res) {
  for (const auto& r : res.rows) {
    const std::string tag = name + " L" + std::to_string(r.level) + (r.limiter ? " lim" : " nolim");
    if (!r.failure.empty() || !(r.final_time > 0.0)) {
      g_mass.push_back({tag, std::nan("")});
    } else {
      g_mass.push_back({tag, r.mass_drift / r.final_time});
    }
  }
}

ExperimentConfig base_config(ProblemKind kind, const std::optional<std::filesystem::path>& out,
                             const std::string& tag) {
  ExperimentConfig cfg;
  cfg.problem = kind;
  cfg.limiter = LimiterChoice::both;
  cfg.record_times = default_record_times(kind);
  if (out) cfg.output_dir = *out / tag;
  return cfg;
}

/// Convergence study: L2 orders of the last `pairs` refinement pairs for both
/// limiter settings, and limiter-on rows inside the bounds.
Outcome convergence(ExperimentConfig cfg, int levels, int pairs, double min_order, const std::string& name) {
  cfg.levels = levels;
  const ExperimentResult res = run_experiment(cfg);
  collect_mass(name, res);
  Outcome o{true, ""};
  for (bool lim : {false, true}) {
    const auto rows = rows_of(res, lim);
    o.detail += lim ? " limiter on: orders" : "limiter off: orders";
    for (const auto* r : rows) {
      if (!r->failure.empty()) {
        o.pass = false;
        o.detail += " [level " + std::to_string(r->level) + " failed: " + r->failure + "]";
      }
    }
    for (int i = static_cast<int>(rows.size()) - pairs; i < static_cast<int>(rows.size()); ++i) {
      const double ord = i >= 1 ? rows[i]->l2_order : std::nan("");
      o.detail += fmt(" %.3f", ord);
      if (!(ord >= min_order)) o.pass = false;
    }
    if (lim) {
      double worst = 0.0;
      for (const auto* r : rows) {
        if (!within_bounds(*r)) o.pass = false;
        worst = std::max({worst, -r->min_violation, r->max_violation});
      }
      o.detail += fmt(", largest excursion %.2e", worst);
    }
    o.detail += ";";
  }
  o.detail += fmt(" (threshold %.2f)", min_order);
  return o;
}

Outcome porous(const std::optional<std::filesystem::path>& out) {
  ExperimentConfig cfg = base_config(ProblemKind::porous, out, "porous");
  cfg.base_n = 24;
  cfg.levels = 1;
  const ExperimentResult res = run_experiment(cfg);
  Outcome o{true, ""};
  const std::vector<double> gated{0.1, 0.5, 2.0};
  for (double t : gated) {
    bool seen = false;
    for (const auto& s : res.snapshots) {
      if (!s.limiter || std::abs(s.t - t) > 1e-12) continue;
      seen = true;
      o.detail += fmt("lim min(t=%g)=", t) + fmt("%.3e ", s.u_min);
      if (!(s.u_min >= -kBoundTol)) o.pass = false;
    }
    if (!seen) {
      o.pass = false;
      o.detail += fmt("lim t=%g missing ", t);
    }
  }
  double neg = 0.0;
  double neg_t = std::nan("");
  for (const auto& s : res.snapshots) {
    if (!s.limiter && s.u_min < neg) {
      neg = s.u_min;
      neg_t = s.t;
    }
  }
  if (!(neg < 0.0)) o.pass = false;
  o.detail += fmt("| nolim most negative %.3e", neg) + fmt(" at t=%g", neg_t);
  for (const auto& r : res.rows) {
    if (!r.failure.empty()) {
      o.detail += std::string(r.limiter ? " | lim run failed: " : " | nolim run stopped at t=") +
                  (r.limiter ? r.failure : fmt("%.4g: ", r.final_time) + r.failure);
      if (r.limiter) o.pass = false;
    }
  }
  return o;
}

Outcome vortex(const std::optional<std::filesystem::path>& out) {
  Outcome o{true, ""};
  for (double re : {100.0, 10000.0}) {
    ExperimentConfig cfg = base_config(ProblemKind::ns_vortex, out, "ns-vortex-re" + fmt("%g", re));
    cfg.parameter = re;
    cfg.levels = 2;
    const ExperimentResult res = run_experiment(cfg);
    collect_mass(fmt("ns-vortex Re=%g", re), res);
    o.detail += fmt("Re=%g:", re);
    for (const auto& r : res.rows) {
      if (!r.failure.empty()) {
        o.pass = false;
        o.detail += " [failed: " + r.failure + "]";
        continue;
      }
      o.detail += " L" + std::to_string(r.level) + (r.limiter ? " lim " : " nolim ") + fmt("(%.2e,", r.min_violation) +
                  fmt(" %.2e)", r.max_violation);
      if (r.limiter) {
        if (!within_bounds(r)) o.pass = false;
      } else if (!(r.min_violation < 0.0 && r.max_violation > 0.0)) {
        o.pass = false;
      }
    }
    o.detail += "; ";
  }
  return o;
}

Outcome conservation() {
  if (g_mass.empty()) {
    // Run on its own: a short periodic run of each kind.
    for (ProblemKind kind : {ProblemKind::accuracy, ProblemKind::ns_accuracy, ProblemKind::ns_vortex}) {
      ExperimentConfig cfg = base_config(kind, std::nullopt, "");
      cfg.levels = 2;
      collect_mass(to_string(kind), run_experiment(cfg));
    }
  }
  Outcome o{true, ""};
  double worst = 0.0;
  std::string worst_name;
  for (const auto& m : g_mass) {
    if (!(m.drift_rate <= 1e-10)) o.pass = false;
    if (!(m.drift_rate <= worst)) {
      worst = m.drift_rate;
      worst_name = m.name;
    }
  }
  o.detail = std::to_string(g_mass.size()) + " periodic runs, largest relative drift per unit time " +
             fmt("%.3e", worst) + " (" + worst_name + ")";
  return o;
}

Outcome limiter_properties(std::uint64_t seed) {
  Outcome o{true, ""};
  // Worked example: average 0.5, cell range [-0.1, 1.2], bounds [0, 1].
  const double theta = mps_theta(0.5, Extrema{-0.1, 1.2}, 0.0, 1.0);
  const bool example = std::abs(theta - 5.0 / 7.0) <= 1e-15;
  o.pass = o.pass && example;
  o.detail += fmt("theta=%.16f", theta) + (example ? " (5/7)" : " (expected 5/7)");

  verify::Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr std::size_t kCells = 200;
  constexpr int kSide = 140;  // lattice with (kSide+1)(kSide+2)/2 > 10^4 points per cell
  DGField u(kCells);
  for (auto& p : u.cells) {
    const double avg = unit(rng);
    const double size = std::pow(10.0, 2.0 * unit(rng) - 1.0);
    for (auto& c : p.c) c = size * g(rng);
    p.c[0] += avg - p.average();
  }
  const DGField before = u;
  mps_limit(u, Bounds::constant(0.0, 1.0), 0.0);
  double avg_err = 0.0, excursion = 0.0;
  for (std::size_t k = 0; k < kCells; ++k) {
    avg_err = std::max(avg_err, std::abs(u.cells[k].average() - before.cells[k].average()));
    for (int i = 0; i <= kSide; ++i) {
      for (int j = 0; i + j <= kSide; ++j) {
        const double v = u.cells[k].at_bary(static_cast<double>(i) / kSide, static_cast<double>(j) / kSide);
        excursion = std::max({excursion, -v, v - 1.0});
      }
    }
  }
  DGField again = u;
  mps_limit(again, Bounds::constant(0.0, 1.0), 0.0);
  const bool idempotent = again.cells == u.cells;
  o.pass = o.pass && avg_err <= 1e-14 && excursion <= 1e-12 && idempotent;
  o.detail += fmt("; average change %.2e", avg_err) + fmt(", largest excursion %.2e", excursion) +
              " over " + std::to_string((kSide + 1) * (kSide + 2) / 2) + " samples/cell" +
              (idempotent ? ", idempotent" : ", NOT idempotent");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria of the solver"};
  std::string out_dir;
  std::uint64_t seed = 20240601;
  std::vector<int> only;
  app.add_option("-o,--out", out_dir, "directory for the experiment tables");
  app.add_option("--seed", seed, "seed of the randomized checks")->capture_default_str();
  app.add_option("--only", only, "run only these criteria (1-12), comma-separated")
      ->delimiter(',')
      ->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  std::optional<std::filesystem::path> out;
  if (!out_dir.empty()) out = out_dir;
  auto wanted = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"heat convergence, uniform mesh",
       [&] { return convergence(base_config(ProblemKind::accuracy, out, "accuracy-uniform"), 4, 2, 2.85,
                                "accuracy uniform"); }},
      {"heat convergence, obtuse mesh",
       [&] {
         ExperimentConfig cfg = base_config(ProblemKind::accuracy, out, "accuracy-obtuse");
         cfg.pattern = MeshPattern::obtuse;
         return convergence(cfg, 4, 2, 2.8, "accuracy obtuse");
       }},
      {"linear bound-preservation theorem",
       [&] {
         const auto c = verify::check_linear_theorem(50, 200, seed + 3);
         return Outcome{c.pass, verify::summary(c)};
       }},
      {"nonlinear bound-preservation theorem",
       [&] {
         const auto c = verify::check_nonlinear_theorem(50, 200, seed + 4);
         return Outcome{c.pass, verify::summary(c)};
       }},
      {"mapped vertex rule",
       [&] {
         const auto c = verify::check_mapped_vertex_rule(1000, seed);
         return Outcome{c.pass, verify::summary(c)};
       }},
      {"selected-point weights",
       [&] {
         const auto c = verify::check_selected_weights(100, seed + 1);
         return Outcome{c.pass, verify::summary(c)};
       }},
      {"edge flux closed form",
       [&] {
         const auto c = verify::check_edge_identity(500, seed + 2);
         return Outcome{c.pass, verify::summary(c)};
       }},
      {"porous medium bounds", [&] { return porous(out); }},
      {"vorticity convergence",
       [&] {
         return convergence(base_config(ProblemKind::ns_accuracy, out, "ns-accuracy"), 3, 1, 2.8, "ns-accuracy");
       }},
      {"vortex patch over/undershoot", [&] { return vortex(out); }},
      {"mass conservation", [&] { return conservation(); }},
      {"limiter properties", [&] { return limiter_properties(seed + 5); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!wanted(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s  %2d  %-38s %s  [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
