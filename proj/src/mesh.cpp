#include "mpsdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "mpsdg/error.hpp"

namespace mpsdg {

namespace {

using Triple = std::array<std::size_t, 3>;

double signed_area(Point2 a, Point2 b, Point2 c) { return 0.5 * cross(b - a, c - a); }

Cell make_cell_geometry(const std::vector<Point2>& verts, const Triple& ids) {
  Cell cell;
  cell.vertex_ids = ids;
  for (int i = 0; i < 3; ++i) cell.vertices[i] = verts[ids[i]];
  const auto& v = cell.vertices;
  cell.area = std::abs(signed_area(v[0], v[1], v[2]));
  cell.diameter = std::max({distance(v[0], v[1]), distance(v[1], v[2]), distance(v[2], v[0])});

  // x = v2 + xi (v0 - v2) + eta (v1 - v2)
  const Vec2 e0 = v[0] - v[2];
  const Vec2 e1 = v[1] - v[2];
  const double det = e0.x * e1.y - e1.x * e0.y;
  cell.grad_xi = {e1.y / det, -e1.x / det};
  cell.grad_eta = {-e0.y / det, e0.x / det};
  return cell;
}

std::pair<std::size_t, std::size_t> edge_key(std::size_t a, std::size_t b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

std::array<double, 3> Cell::barycentric(Point2 p) const {
  const Vec2 d = p - vertices[2];
  const double l0 = dot(grad_xi, d);
  const double l1 = dot(grad_eta, d);
  return {l0, l1, 1.0 - l0 - l1};
}

Point2 Cell::from_barycentric(double l0, double l1, double l2) const {
  return l0 * vertices[0] + l1 * vertices[1] + l2 * vertices[2];
}

Point2 Cell::centroid() const {
  return (1.0 / 3.0) * (vertices[0] + vertices[1] + vertices[2]);
}

Vec2 Cell::outward_normal(int i) const {
  const Point2 p = vertices[(i + 1) % 3];
  const Point2 q = vertices[(i + 2) % 3];
  const Vec2 t = q - p;
  Vec2 n = (1.0 / norm(t)) * Vec2{t.y, -t.x};
  if (dot(n, vertices[i] - p) > 0.0) n = -n;
  return n;
}

double Cell::edge_length(int i) const {
  return distance(vertices[(i + 1) % 3], vertices[(i + 2) % 3]);
}

Point2 Cell::edge_midpoint(int i) const {
  return 0.5 * (vertices[(i + 1) % 3] + vertices[(i + 2) % 3]);
}

double Cell::angle(int i) const {
  const Vec2 a = vertices[(i + 1) % 3] - vertices[i];
  const Vec2 b = vertices[(i + 2) % 3] - vertices[i];
  return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

double Cell::inradius() const {
  return 2.0 * area / (edge_length(0) + edge_length(1) + edge_length(2));
}

TriMesh TriMesh::from_arrays(std::vector<Point2> vertices, std::vector<Triple> cells,
                             const std::vector<PeriodicPair>& periodic) {
  TriMesh mesh;
  const std::size_t nv = vertices.size();
  if (cells.empty()) throw MeshError("mesh has no cells");

  for (const auto& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw MeshError("non-finite vertex coordinate");
  }

  std::vector<char> used(nv, 0);
  std::set<Triple> seen;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto& t = cells[c];
    for (auto id : t) {
      if (id >= nv) throw MeshError("cell " + std::to_string(c) + " references vertex out of range");
      used[id] = 1;
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw MeshError("cell " + std::to_string(c) + " repeats a vertex");
    }
    Triple sorted = t;
    std::sort(sorted.begin(), sorted.end());
    if (!seen.insert(sorted).second) throw MeshError("duplicate cell " + std::to_string(c));

    const double a = signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
    const double scale = std::max({distance(vertices[t[0]], vertices[t[1]]),
                                   distance(vertices[t[1]], vertices[t[2]]),
                                   distance(vertices[t[2]], vertices[t[0]])});
    if (std::abs(a) <= 1e-14 * scale * scale) {
      throw MeshError("degenerate (zero-area) cell " + std::to_string(c));
    }
    if (a > 0.0) std::swap(t[1], t[2]);  // counter-clockwise -> clockwise
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (!used[v]) throw MeshError("dangling vertex " + std::to_string(v));
  }

  mesh.cells_.reserve(cells.size());
  for (const auto& t : cells) mesh.cells_.push_back(make_cell_geometry(vertices, t));

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_of;
  for (std::size_t c = 0; c < mesh.cells_.size(); ++c) {
    Cell& cell = mesh.cells_[c];
    for (int i = 0; i < 3; ++i) {
      const std::size_t a = cell.vertex_ids[(i + 1) % 3];
      const std::size_t b = cell.vertex_ids[(i + 2) % 3];
      auto [it, inserted] = edge_of.try_emplace(edge_key(a, b), mesh.edges_.size());
      if (inserted) {
        Edge e;
        e.vertex_ids = {a, b};
        e.left_cell = c;
        e.left_local = i;
        mesh.edges_.push_back(e);
      } else {
        Edge& e = mesh.edges_[it->second];
        if (e.right_cell) {
          throw MeshError("non-conforming edge (" + std::to_string(a) + ", " + std::to_string(b) +
                          ") shared by more than two cells");
        }
        e.right_cell = c;
        e.right_local = i;
      }
      cell.edge_ids[i] = it->second;
    }
  }

  for (std::size_t k = 0; k < mesh.edges_.size(); ++k) {
    Edge& e = mesh.edges_[k];
    const Cell& left = mesh.cells_[e.left_cell];
    const Point2 p = vertices[e.vertex_ids[0]];
    const Point2 q = vertices[e.vertex_ids[1]];
    e.length = distance(p, q);
    e.midpoint = 0.5 * (p + q);
    e.unit_normal = left.outward_normal(e.left_local);
    if (e.right_cell) {
      const Cell& right = mesh.cells_[*e.right_cell];
      const double sl = cross(q - p, left.vertices[e.left_local] - p);
      const double sr = cross(q - p, right.vertices[e.right_local] - p);
      if (sl * sr >= 0.0) {
        throw MeshError("inverted element: cells " + std::to_string(e.left_cell) + " and " +
                        std::to_string(*e.right_cell) + " lie on the same side of edge " +
                        std::to_string(k));
      }
    } else {
      e.boundary = BoundaryKind::dirichlet_zero;
    }
  }

  for (const auto& pair : periodic) {
    for (auto id : {pair.a, pair.b, pair.c, pair.d}) {
      if (id >= nv) throw MeshError("periodic pair references vertex out of range");
    }
    auto i1 = edge_of.find(edge_key(pair.a, pair.b));
    auto i2 = edge_of.find(edge_key(pair.c, pair.d));
    if (i1 == edge_of.end() || i2 == edge_of.end()) {
      throw MeshError("periodic pair does not name existing edges");
    }
    Edge& e1 = mesh.edges_[i1->second];
    Edge& e2 = mesh.edges_[i2->second];
    if (e1.right_cell || e2.right_cell || &e1 == &e2) {
      throw MeshError("periodic pair must join two distinct boundary edges");
    }
    const Vec2 s1 = vertices[pair.c] - vertices[pair.a];
    const Vec2 s2 = vertices[pair.d] - vertices[pair.b];
    const double scale = std::max(e1.length, 1.0);
    if (norm(s1 - s2) > 1e-10 * scale || std::abs(e1.length - e2.length) > 1e-12 * scale) {
      throw MeshError("periodic pair edges are not translates of each other");
    }
    if (norm(e1.unit_normal + e2.unit_normal) > 1e-10) {
      throw MeshError("periodic pair edges must face opposite directions");
    }
    e1.boundary = e2.boundary = BoundaryKind::periodic;
    e1.partner = i2->second;
    e2.partner = i1->second;
    e1.right_cell = e2.left_cell;
    e1.right_local = e2.left_local;
    e2.right_cell = e1.left_cell;
    e2.right_local = e1.left_local;
    e1.shift = s1;
    e2.shift = -s1;
    mesh.periodic_.push_back(pair);
  }

  for (std::size_t c = 0; c < mesh.cells_.size(); ++c) {
    Cell& cell = mesh.cells_[c];
    for (int i = 0; i < 3; ++i) {
      const Edge& e = mesh.edges_[cell.edge_ids[i]];
      if (e.boundary == BoundaryKind::periodic) {
        cell.neighbor_ids[i] = e.right_cell;
        cell.neighbor_shift[i] = e.shift;
      } else if (e.boundary == BoundaryKind::none) {
        cell.neighbor_ids[i] = (e.left_cell == c) ? *e.right_cell : e.left_cell;
      }
    }
  }

  mesh.theta_min_ = std::numbers::pi;
  mesh.theta_max_ = 0.0;
  mesh.h_ = 0.0;
  for (const auto& cell : mesh.cells_) {
    for (int i = 0; i < 3; ++i) {
      mesh.theta_min_ = std::min(mesh.theta_min_, cell.angle(i));
      mesh.theta_max_ = std::max(mesh.theta_max_, cell.angle(i));
    }
    mesh.h_ = std::max(mesh.h_, cell.diameter);
  }
  mesh.vertices_ = std::move(vertices);
  return mesh;
}

double TriMesh::total_area() const {
  double a = 0.0;
  for (const auto& c : cells_) a += c.area;
  return a;
}

bool TriMesh::fully_periodic() const {
  return std::none_of(edges_.begin(), edges_.end(),
                      [](const Edge& e) { return e.boundary == BoundaryKind::dirichlet_zero; });
}

std::vector<std::size_t> TriMesh::flux_edges() const {
  std::vector<std::size_t> out;
  out.reserve(edges_.size());
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    if (e.boundary != BoundaryKind::periodic || k < *e.partner) out.push_back(k);
  }
  return out;
}

long TriMesh::euler_characteristic() const {
  return static_cast<long>(vertices_.size()) - static_cast<long>(edges_.size()) +
         static_cast<long>(cells_.size());
}

std::vector<PeriodicPair> match_periodic_edges(const std::vector<Point2>& vertices,
                                               const std::vector<Triple>& cells,
                                               const Rect& domain, double tol) {
  std::map<std::pair<std::size_t, std::size_t>, int> count;
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (const auto& t : cells) {
    for (int i = 0; i < 3; ++i) {
      auto key = edge_key(t[(i + 1) % 3], t[(i + 2) % 3]);
      if (count[key]++ == 0) order.push_back(key);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> boundary;
  for (const auto& k : order) {
    if (count[k] == 1) boundary.push_back(k);
  }

  auto on = [&](std::size_t v, bool x_side, double value) {
    return std::abs((x_side ? vertices[v].x : vertices[v].y) - value) < tol;
  };

  std::vector<PeriodicPair> pairs;
  for (bool x_side : {true, false}) {
    const double lo = x_side ? domain.x0 : domain.y0;
    const double hi = x_side ? domain.x1 : domain.y1;
    const Vec2 shift = x_side ? Vec2{hi - lo, 0.0} : Vec2{0.0, hi - lo};
    for (const auto& [a, b] : boundary) {
      if (!(on(a, x_side, lo) && on(b, x_side, lo))) continue;
      bool found = false;
      for (const auto& [c, d] : boundary) {
        if (!(on(c, x_side, hi) && on(d, x_side, hi))) continue;
        const Point2 ta = vertices[a] + shift;
        const Point2 tb = vertices[b] + shift;
        if (distance(ta, vertices[c]) < tol && distance(tb, vertices[d]) < tol) {
          pairs.push_back({a, b, c, d});
          found = true;
        } else if (distance(ta, vertices[d]) < tol && distance(tb, vertices[c]) < tol) {
          pairs.push_back({a, b, d, c});
          found = true;
        }
        if (found) break;
      }
      if (!found) throw MeshError("boundary edge has no periodic partner");
    }
  }
  return pairs;
}

TriMesh generate_structured(int nx, int ny, const Rect& domain, MeshPattern pattern,
                            bool periodic) {
  if (nx < 2 || ny < 2) throw MeshError("generate_structured needs nx, ny >= 2");
  const double dx = domain.width() / nx;
  const double dy = domain.height() / ny;
  // Amplitude of the alternating interior shift for the obtuse pattern,
  // as a fraction of the cell size; gives a largest angle near 0.6 pi.
  constexpr double kObtuseShift = 0.16;

  std::vector<Point2> verts;
  verts.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      Point2 p{domain.x0 + i * dx, domain.y0 + j * dy};
      if (j == ny) p.y = domain.y1;
      if (i == nx) p.x = domain.x1;
      if (pattern == MeshPattern::obtuse && i > 0 && i < nx && j > 0 && j < ny) {
        p.x += 0.5 * kObtuseShift * dx * (j % 2 ? 1.0 : -1.0);
        p.y += 0.5 * kObtuseShift * dy * (i % 2 ? 1.0 : -1.0);
      }
      verts.push_back(p);
    }
  }
  auto id = [nx](int i, int j) { return static_cast<std::size_t>(j * (nx + 1) + i); };
  std::vector<Triple> cells;
  cells.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  std::vector<PeriodicPair> pairs;
  if (periodic) pairs = match_periodic_edges(verts, cells, domain);
  return TriMesh::from_arrays(std::move(verts), std::move(cells), pairs);
}

std::string format_mesh(const TriMesh& mesh) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# mpsdg triangle mesh, 1-based indices\n";
  os << mesh.num_vertices() << " vertices\n";
  for (const auto& p : mesh.vertices()) os << p.x << ' ' << p.y << '\n';
  os << mesh.num_cells() << " cells\n";
  for (const auto& c : mesh.cells()) {
    os << c.vertex_ids[0] + 1 << ' ' << c.vertex_ids[1] + 1 << ' ' << c.vertex_ids[2] + 1 << '\n';
  }
  if (!mesh.periodic_pairs().empty()) {
    os << mesh.periodic_pairs().size() << " periodic\n";
    for (const auto& p : mesh.periodic_pairs()) {
      os << p.a + 1 << ' ' << p.b + 1 << ' ' << p.c + 1 << ' ' << p.d + 1 << '\n';
    }
  }
  return os.str();
}

TriMesh parse_mesh(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back(line);
  }
  std::size_t pos = 0;
  auto header = [&](const std::string& word) -> std::size_t {
    if (pos >= lines.size()) throw MeshError("missing '" + word + "' section");
    std::istringstream ls(lines[pos++]);
    long long n = -1;
    std::string w;
    if (!(ls >> n >> w) || w != word || n < 0) {
      throw MeshError("expected '<count> " + word + "' header");
    }
    return static_cast<std::size_t>(n);
  };
  auto index = [](long long v) {
    if (v < 1) throw MeshError("mesh indices are 1-based");
    return static_cast<std::size_t>(v - 1);
  };

  const std::size_t nv = header("vertices");
  std::vector<Point2> verts(nv);
  for (auto& p : verts) {
    if (pos >= lines.size()) throw MeshError("truncated vertex block");
    std::istringstream ls(lines[pos++]);
    if (!(ls >> p.x >> p.y)) throw MeshError("bad vertex line");
  }
  const std::size_t nc = header("cells");
  std::vector<Triple> cells(nc);
  for (auto& t : cells) {
    if (pos >= lines.size()) throw MeshError("truncated cell block");
    std::istringstream ls(lines[pos++]);
    long long a, b, c;
    if (!(ls >> a >> b >> c)) throw MeshError("bad cell line");
    t = {index(a), index(b), index(c)};
  }
  std::vector<PeriodicPair> pairs;
  if (pos < lines.size()) {
    const std::size_t np = header("periodic");
    for (std::size_t k = 0; k < np; ++k) {
      if (pos >= lines.size()) throw MeshError("truncated periodic block");
      std::istringstream ls(lines[pos++]);
      long long a, b, c, d;
      if (!(ls >> a >> b >> c >> d)) throw MeshError("bad periodic line");
      pairs.push_back({index(a), index(b), index(c), index(d)});
    }
  }
  if (pos != lines.size()) throw MeshError("trailing content in mesh file");
  return TriMesh::from_arrays(std::move(verts), std::move(cells), pairs);
}

TriMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_mesh(buf.str());
}

void write_mesh(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write mesh file " + path.string());
  out << format_mesh(mesh);
}

double exit_distance(const Cell& cell, Point2 origin, Vec2 dir) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 3; ++j) {
    const Vec2 n = cell.outward_normal(j);
    const double dn = dot(dir, n);
    if (dn <= 1e-14 * norm(dir)) continue;
    const double t = dot(cell.vertices[(j + 1) % 3] - origin, n) / dn;
    best = std::min(best, t);
  }
  if (!std::isfinite(best) || best <= 0.0) {
    throw NumericError("exit_distance: ray does not cross the cell");
  }
  return best;
}

double edge_length_scale(const TriMesh& mesh, std::size_t edge, Vec2 dir, Point2 origin) {
  const Edge& e = mesh.edge(edge);
  if (dot(dir, e.unit_normal) <= 0.0) {
    throw NumericError("edge_length_scale: direction must point from left into right cell");
  }
  double h = exit_distance(mesh.cell(e.left_cell), origin, -dir);
  if (e.right_cell) {
    h = std::min(h, exit_distance(mesh.cell(*e.right_cell), origin + e.shift, dir));
  }
  return h;
}

}  // namespace mpsdg
