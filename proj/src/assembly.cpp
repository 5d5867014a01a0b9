#include "mpsdg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "mpsdg/error.hpp"

namespace mpsdg {

SpatialOperator::SpatialOperator(const TriMesh& mesh, const ProblemSpec& problem, SchemeConfig cfg)
    : mesh_(&mesh), problem_(&problem), cfg_(std::move(cfg)) {
  if (cfg_.edge_rule.degree < 3) throw ConfigError("edge rule must be exact to degree 3 or more");
  if (cfg_.volume_rule.degree < 2) throw ConfigError("volume rule must be exact to degree 2 or more");
  if (!problem.diffusion) throw ConfigError("problem has no diffusion matrix");
  nq_ = cfg_.edge_rule.size();
  faces_ = mesh.flux_edges();

  std::unordered_map<std::size_t, std::size_t> face_of;
  for (std::size_t f = 0; f < faces_.size(); ++f) face_of[faces_[f]] = f;

  sides_.resize(mesh.num_cells());
  for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
    const Cell& c = mesh.cell(k);
    for (int i = 0; i < 3; ++i) {
      const std::size_t e = c.edge_ids[i];
      const Edge& edge = mesh.edge(e);
      Side s;
      if (edge.boundary == BoundaryKind::periodic) {
        if (auto it = face_of.find(e); it != face_of.end()) {
          s = {it->second, true};
        } else {
          s = {face_of.at(*edge.partner), false};
        }
      } else if (edge.left_cell == k && edge.left_local == i) {
        s = {face_of.at(e), true};
      } else {
        s = {face_of.at(e), false};
      }
      sides_[k][i] = s;
    }
  }

  points_.resize(faces_.size() * nq_);
  h_point_.resize(faces_.size() * nq_);
  h_face_.resize(faces_.size());
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const Edge& edge = mesh.edge(faces_[f]);
    const Point2 a = mesh.vertices()[edge.vertex_ids[0]];
    const Point2 b = mesh.vertices()[edge.vertex_ids[1]];
    h_face_[f] = edge_length_scale(mesh, faces_[f], edge.unit_normal, edge.midpoint);
    for (std::size_t q = 0; q < nq_; ++q) {
      const Point2 x = a + (cfg_.edge_rule.nodes[q] + 0.5) * (b - a);
      points_[f * nq_ + q] = x;
      h_point_[f * nq_ + q] = edge_length_scale(mesh, faces_[f], edge.unit_normal, x);
    }
  }

  vol_dphi_.resize(cfg_.volume_rule.size());
  for (std::size_t q = 0; q < cfg_.volume_rule.size(); ++q) {
    const double xi = cfg_.volume_rule.points[q][0];
    const double eta = cfg_.volume_rule.points[q][1];
    vol_dphi_[q] = {{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {2.0 * xi, 0.0}, {eta, xi}, {0.0, 2.0 * eta}}};
  }
}

double SpatialOperator::length_scale(std::size_t face, std::size_t q, Vec2 dir) const {
  const Edge& edge = mesh_->edge(faces_[face]);
  switch (cfg_.flux.h_mode) {
    case ScaleMode::edge_length:
      return edge.length;
    case ScaleMode::edge_normal_scale:
      return h_face_[face];
    case ScaleMode::gauss_point_scale:
      break;
  }
  if (distance(dir, edge.unit_normal) < 1e-13) return h_point_[face * nq_ + q];
  return edge_length_scale(*mesh_, faces_[face], dir, points_[face * nq_ + q]);
}

SpatialOperator::PointFlux SpatialOperator::point_flux(const DGField& u, double t, std::size_t face,
                                                       std::size_t q) const {
  const std::size_t e = faces_[face];
  const Edge& edge = mesh_->edge(e);
  const Point2 x = points_[face * nq_ + q];
  const Vec2 n = edge.unit_normal;
  const std::size_t l = edge.left_cell;
  const Cell& cl = mesh_->cell(l);
  const QuadraticPoly& pl = u.cells[l];

  PointFlux out;
  out.u_left = evaluate(pl, cl, x);
  const Cell* cr = nullptr;
  const QuadraticPoly* pr = nullptr;
  const Point2 xr = x + edge.shift;
  if (edge.right_cell) {
    cr = &mesh_->cell(*edge.right_cell);
    pr = &u.cells[*edge.right_cell];
    out.u_right = evaluate(*pr, *cr, xr);
  }

  // Diffusion: |gamma| times the flux along the unit direction of gamma,
  // oriented to cross the edge from left to right.
  const Mat2 a = problem_->diffusion(0.5 * (out.u_left + out.u_right));
  const Vec2 gamma = a.apply_transpose(n);
  const double g = norm(gamma);
  if (g > 0.0) {
    const double gn = dot(gamma, n);
    if (std::abs(gn) <= 1e-14 * g) {
      throw NumericError("diffusion direction tangent to edge " + std::to_string(e));
    }
    const double orient = gn > 0.0 ? 1.0 : -1.0;
    // Rescale before normalizing: gamma can be subnormal where u is tiny.
    const double big = std::max(std::abs(gamma.x), std::abs(gamma.y));
    const Vec2 scaled{gamma.x / big, gamma.y / big};
    const Vec2 dir = (orient / norm(scaled)) * scaled;
    EdgeTracePair tr;
    tr.scale = length_scale(face, q, dir);
    tr.gamma = gamma;
    const auto dl = directional_derivatives(pl, cl, x, dir);
    tr.inner = {out.u_left, dl.first, dl.second};
    if (pr) {
      const auto dr = directional_derivatives(*pr, *cr, xr, dir);
      tr.outer = {out.u_right, dr.first, dr.second};
    }
    out.flux = orient * g * ddg_flux(cfg_.flux, tr);
  }

  if (problem_->has_convection()) {
    const double fl = dot(problem_->flux(out.u_left, x, l), n);
    const double fr = dot(problem_->flux(out.u_right, x, l), n);
    const double m = problem_->bounds.lower(t);
    const double big_m = problem_->bounds.upper(t);
    auto speed = [&](double v) { return std::abs(dot(problem_->flux_derivative(v, x, l), n)); };
    double alpha = 0.0;
    if (cfg_.alpha_policy == AlphaPolicy::per_edge) {
      alpha = std::max({speed(out.u_left), speed(out.u_right), speed(m), speed(big_m)});
    } else {
      constexpr int kSamples = 16;
      for (int i = 0; i <= kSamples; ++i) alpha = std::max(alpha, speed(m + (big_m - m) * i / kSamples));
    }
    out.flux -= lax_friedrichs(fl, fr, out.u_left, out.u_right, alpha);
  }

  if (!std::isfinite(out.flux)) {
    throw NumericError("non-finite flux on edge " + std::to_string(e) + " at point " + std::to_string(q));
  }
  return out;
}

void SpatialOperator::add_volume(const DGField& u, std::size_t k, std::array<double, 6>& r) const {
  const Cell& cell = mesh_->cell(k);
  const QuadraticPoly& p = u.cells[k];
  const auto& c = p.c;
  const QuadRule& rule = cfg_.volume_rule;
  const bool convection = problem_->has_convection();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto& b = rule.points[q];
    const double xi = b[0], eta = b[1];
    const double val = p.at_bary(xi, eta);
    const Vec2 grad = (c[1] + 2.0 * c[3] * xi + c[4] * eta) * cell.grad_xi +
                      (c[2] + c[4] * xi + 2.0 * c[5] * eta) * cell.grad_eta;
    Vec2 total = -1.0 * problem_->diffusion(val).apply(grad);
    if (convection) total = total + problem_->flux(val, cell.from_barycentric(b[0], b[1], b[2]), k);
    const double w = rule.weights[q] * cell.area;
    const double gx = w * dot(total, cell.grad_xi);
    const double ge = w * dot(total, cell.grad_eta);
    for (int j = 0; j < 6; ++j) r[j] += vol_dphi_[q][j][0] * gx + vol_dphi_[q][j][1] * ge;
  }
}

void SpatialOperator::add_edge_point(const DGField& u, std::size_t k, const Side& side, std::size_t q,
                                     const PointFlux& pf, std::array<double, 6>& r) const {
  (void)u;
  const Edge& edge = mesh_->edge(faces_[side.face]);
  const Cell& cell = mesh_->cell(k);
  const Point2 x = side.left ? points_[side.face * nq_ + q] : points_[side.face * nq_ + q] + edge.shift;
  const auto b = cell.barycentric(x);
  const auto phi = basis_values(b[0], b[1]);
  const double sign = side.left ? 1.0 : -1.0;
  const double w = cfg_.edge_rule.weights[q] * edge.length;
  const double outward_flux = sign * pf.flux;
  for (int j = 0; j < 6; ++j) r[j] += w * outward_flux * phi[j];

  if (!cfg_.interface_correction) return;
  const double u_self = side.left ? pf.u_left : pf.u_right;
  const double u_other = side.left ? pf.u_right : pf.u_left;
  const double jump = u_other - u_self;
  if (jump == 0.0) return;
  // (A(u_K) grad phi_j) . n_K = grad phi_j . (A^T n_K)
  const Vec2 gk = problem_->diffusion(u_self).apply_transpose(sign * edge.unit_normal);
  const double cx = dot(cell.grad_xi, gk);
  const double ce = dot(cell.grad_eta, gk);
  const double xi = b[0], eta = b[1];
  const std::array<double, 6> dphi_g{0.0, cx, ce, 2.0 * xi * cx, eta * cx + xi * ce, 2.0 * eta * ce};
  const double f = 0.5 * w * jump;
  for (int j = 0; j < 6; ++j) r[j] -= f * dphi_g[j];
}

void SpatialOperator::finish_cell(std::size_t k, const std::array<double, 6>& r, std::array<double, 6>& out) const {
  const double inv_area = 1.0 / mesh_->cell(k).area;
  out = solve_reference_mass(r);
  for (auto& v : out) {
    v *= inv_area;
    if (!std::isfinite(v)) throw NumericError("non-finite residual in cell " + std::to_string(k));
  }
}

void SpatialOperator::residual(const DGField& u, double t, Residual& out, Exec exec) const {
  if (u.size() != mesh_->num_cells()) throw Error("field size does not match mesh");
  out.resize(u.size());
  if (exec == Exec::serial) {
    residual_serial(u, t, out);
  } else {
    residual_parallel(u, t, out);
  }
}

Residual SpatialOperator::residual(const DGField& u, double t, Exec exec) const {
  Residual out;
  residual(u, t, out, exec);
  return out;
}

double SpatialOperator::average_rate(const DGField& u, double t, std::size_t cell) const {
  double s = 0.0;
  for (const Side& side : sides_[cell]) {
    const Edge& edge = mesh_->edge(faces_[side.face]);
    const double sign = side.left ? 1.0 : -1.0;
    for (std::size_t q = 0; q < nq_; ++q) {
      s += cfg_.edge_rule.weights[q] * edge.length * sign * point_flux(u, t, side.face, q).flux;
    }
  }
  return s / mesh_->cell(cell).area;
}

Residual spatial_residual(const TriMesh& mesh, const DGField& field, const ProblemSpec& problem,
                          const SchemeConfig& cfg, double t, Exec exec) {
  return SpatialOperator(mesh, problem, cfg).residual(field, t, exec);
}

double average_rate(const TriMesh& mesh, const DGField& field, const ProblemSpec& problem,
                    const SchemeConfig& cfg, std::size_t cell, double t) {
  return SpatialOperator(mesh, problem, cfg).average_rate(field, t, cell);
}

double average_of(const std::array<double, 6>& c) { return QuadraticPoly{c}.average(); }

}  // namespace mpsdg
