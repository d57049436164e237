#include "volest/hull.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace volest::hull {

namespace {

struct Dedup {
  Matrix unique_pts;             // dim x m
  std::vector<int> first_index;  // unique id -> first cloud index
};

Dedup dedupe(const Matrix& pts) {
  const int d = static_cast<int>(pts.rows());
  const int n = static_cast<int>(pts.cols());
  std::map<std::vector<double>, int> index;
  Dedup out;
  std::vector<int> keep;
  std::vector<double> key(d);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) key[k] = pts(k, i);
    if (index.emplace(key, static_cast<int>(keep.size())).second) keep.push_back(i);
  }
  out.unique_pts.resize(d, static_cast<Index>(keep.size()));
  for (size_t j = 0; j < keep.size(); ++j) out.unique_pts.col(static_cast<Index>(j)) = pts.col(keep[j]);
  out.first_index = std::move(keep);
  return out;
}

// Finalize counts and per-vertex bookkeeping given the unique-point ids that
// turned out to be hull vertices.
void set_vertices(HullSummary& s, const Dedup& dd, std::vector<int> unique_vertex_ids) {
  std::sort(unique_vertex_ids.begin(), unique_vertex_ids.end());
  s.n_boundary = static_cast<long>(unique_vertex_ids.size());
  s.n_interior = s.n_total - s.n_boundary;
  s.vertices.resize(dd.unique_pts.rows(), static_cast<Index>(unique_vertex_ids.size()));
  s.vertex_cloud_ids.resize(unique_vertex_ids.size());
  for (size_t j = 0; j < unique_vertex_ids.size(); ++j) {
    s.vertices.col(static_cast<Index>(j)) = dd.unique_pts.col(unique_vertex_ids[j]);
    s.vertex_cloud_ids[j] = dd.first_index[unique_vertex_ids[j]];
  }
}

// Remap facet vertex entries from unique-point ids to hull-vertex slots.
std::vector<qh::Facet> remap_facets(std::vector<qh::Facet> facets,
                                    const std::vector<int>& unique_vertex_ids) {
  std::map<int, int> slot;
  {
    std::vector<int> sorted = unique_vertex_ids;
    std::sort(sorted.begin(), sorted.end());
    for (size_t j = 0; j < sorted.size(); ++j) slot[sorted[j]] = static_cast<int>(j);
  }
  for (auto& f : facets) {
    for (auto& v : f.vertices) v = slot.at(v);
  }
  return facets;
}

// Hull of points spanning a 1-dimensional flat: a segment.
void segment_summary(HullSummary& s, const Dedup& dd, const Vector& origin, const Vector& dir) {
  const int m = static_cast<int>(dd.unique_pts.cols());
  int lo = 0, hi = 0;
  double tlo = 0.0, thi = 0.0;
  for (int i = 0; i < m; ++i) {
    const double t = dir.dot(dd.unique_pts.col(i) - origin);
    if (i == 0 || t < tlo) { tlo = t; lo = i; }
    if (i == 0 || t > thi) { thi = t; hi = i; }
  }
  s.affine_dim = 1;
  s.flat_origin = origin;
  s.flat_basis = dir;
  if (s.dim == 1) {
    s.hull_volume = thi - tlo;  // dir is +1 in one dimension
    s.interior_point = origin + 0.5 * (tlo + thi) * dir;
  }
  std::vector<int> ids{lo, hi};
  set_vertices(s, dd, ids);
  // Two half-spaces capping the segment.
  const int lo_slot = (s.vertex_cloud_ids[0] == dd.first_index[lo]) ? 0 : 1;
  qh::Facet top{{1 - lo_slot}, dir, dir.dot(origin) + thi};
  qh::Facet bot{{lo_slot}, -dir, -(dir.dot(origin) + tlo)};
  s.facets = {std::move(top), std::move(bot)};
}

// 2D polygon summary from CCW-ordered unique-point ids.
void polygon_summary(HullSummary& s, const Dedup& dd, const std::vector<int>& ccw) {
  const int k = static_cast<int>(ccw.size());
  Vector centroid = Vector::Zero(2);
  for (int id : ccw) centroid += dd.unique_pts.col(id);
  centroid /= static_cast<double>(k);
  double area2 = 0.0;
  std::vector<qh::Facet> facets;
  facets.reserve(static_cast<size_t>(k));
  for (int j = 0; j < k; ++j) {
    const Vector a = dd.unique_pts.col(ccw[j]);
    const Vector b = dd.unique_pts.col(ccw[(j + 1) % k]);
    area2 += a.x() * b.y() - b.x() * a.y();
    Vector normal(2);
    normal << (b.y() - a.y()), -(b.x() - a.x());
    normal.normalize();
    facets.push_back(qh::Facet{{ccw[j], ccw[(j + 1) % k]}, normal, normal.dot(a)});
  }
  s.affine_dim = 2;
  s.hull_volume = 0.5 * std::abs(area2);
  s.interior_point = centroid;
  set_vertices(s, dd, ccw);
  s.facets = remap_facets(std::move(facets), ccw);
}

}  // namespace

std::vector<int> monotone_chain(const Matrix& pts, double tol) {
  const int n = static_cast<int>(pts.cols());
  std::vector<int> order(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pts(0, a) != pts(0, b)) return pts(0, a) < pts(0, b);
    return pts(1, a) < pts(1, b);
  });

  // Pop b when c fails to make a strict left turn, with "strict" meaning the
  // perpendicular distance of c from line(a, b) exceeds tol.
  auto keeps_turn = [&](int a, int b, int c) {
    const double abx = pts(0, b) - pts(0, a);
    const double aby = pts(1, b) - pts(1, a);
    const double acx = pts(0, c) - pts(0, a);
    const double acy = pts(1, c) - pts(1, a);
    const double cross = abx * acy - aby * acx;
    return cross > tol * std::hypot(abx, aby);
  };

  std::vector<int> chain;
  auto build = [&](auto first, auto last) {
    const size_t base = chain.size();
    for (auto it = first; it != last; ++it) {
      while (chain.size() >= base + 2 &&
             !keeps_turn(chain[chain.size() - 2], chain[chain.size() - 1], *it)) {
        chain.pop_back();
      }
      chain.push_back(*it);
    }
    chain.pop_back();  // endpoint repeats as the next half's start
  };
  build(order.begin(), order.end());
  build(order.rbegin(), order.rend());
  if (chain.empty()) chain.push_back(order[0]);  // single point
  return chain;
}

HullSummary convex_hull(const PointCloud& cloud) {
  HullSummary s;
  s.dim = static_cast<int>(cloud.dim());
  s.n_total = static_cast<long>(cloud.size());
  if (cloud.size() == 0) return s;
  if (cloud.dim() < 1) throw std::invalid_argument("convex_hull: dimension must be >= 1");

  const Dedup dd = dedupe(cloud.points);
  const int m = static_cast<int>(dd.unique_pts.cols());
  s.scale = qh::extent_scale(dd.unique_pts);
  const double tol = kGeomEps * (1.0 + s.scale);

  if (m == 1) {
    s.affine_dim = 0;
    s.flat_origin = dd.unique_pts.col(0);
    s.flat_basis = Matrix(s.dim, 0);
    set_vertices(s, dd, {0});
    return s;
  }

  if (s.dim == 1) {
    segment_summary(s, dd, Vector::Zero(1), Vector::Ones(1));
    return s;
  }

  if (s.dim == 2) {
    const std::vector<int> ccw = monotone_chain(dd.unique_pts, tol);
    if (ccw.size() == 1) {
      // Spread below tolerance: treat as a single point.
      s.affine_dim = 0;
      s.flat_origin = dd.unique_pts.col(ccw[0]);
      s.flat_basis = Matrix(s.dim, 0);
      set_vertices(s, dd, ccw);
    } else if (ccw.size() == 2) {
      const Vector origin = dd.unique_pts.col(ccw[0]);
      const Vector dir = (dd.unique_pts.col(ccw[1]) - origin).normalized();
      segment_summary(s, dd, origin, dir);
    } else {
      polygon_summary(s, dd, ccw);
    }
    return s;
  }

  // General dimension: quickhull, reducing to the carrier flat if degenerate.
  qh::Outcome outcome = qh::quickhull(dd.unique_pts, tol);
  if (auto* full = std::get_if<qh::HullData>(&outcome)) {
    s.affine_dim = s.dim;
    s.hull_volume = full->volume;
    s.interior_point = full->interior;
    set_vertices(s, dd, full->vertex_ids);
    s.facets = remap_facets(std::move(full->facets), full->vertex_ids);
    return s;
  }

  const auto& span = std::get<qh::AffineSpan>(outcome);
  if (span.rank == 0) {
    // Points distinct but within tolerance of each other.
    s.affine_dim = 0;
    s.flat_origin = span.origin;
    s.flat_basis = Matrix(s.dim, 0);
    set_vertices(s, dd, {0});
    return s;
  }
  if (span.rank == 1) {
    segment_summary(s, dd, span.origin, span.basis.col(0));
    return s;
  }

  // Project onto the flat and hull there; lift facets back to ambient space.
  Matrix reduced = span.basis.transpose() * (dd.unique_pts.colwise() - span.origin);
  qh::Outcome sub = qh::quickhull(reduced, tol);
  auto* rh = std::get_if<qh::HullData>(&sub);
  if (rh == nullptr) {
    throw std::runtime_error("convex_hull: rank detection disagreed with reduced hull");
  }
  s.affine_dim = span.rank;
  s.flat_origin = span.origin;
  s.flat_basis = span.basis;
  std::vector<qh::Facet> lifted = rh->facets;
  for (auto& f : lifted) {
    Vector ambient_normal = span.basis * f.normal;
    f.offset += ambient_normal.dot(span.origin);
    f.normal = std::move(ambient_normal);
  }
  set_vertices(s, dd, rh->vertex_ids);
  s.facets = remap_facets(std::move(lifted), rh->vertex_ids);
  return s;
}

bool HullSummary::contains(const Vector& p, double tol) const {
  if (affine_dim < 0) return false;
  if (p.size() != dim) throw std::invalid_argument("HullSummary::contains: dimension mismatch");
  if (affine_dim == 0) return (p - vertices.col(0)).norm() <= tol;
  if (affine_dim < dim) {
    Vector r = p - flat_origin;
    r -= flat_basis * (flat_basis.transpose() * r).eval();
    if (r.norm() > tol) return false;
  }
  for (const auto& f : facets) {
    if (f.normal.dot(p) > f.offset + tol) return false;
  }
  return true;
}

std::vector<PointLabel> classify_points(const PointCloud& cloud, const HullSummary& hull) {
  if (static_cast<long>(cloud.size()) != hull.n_total || static_cast<int>(cloud.dim()) != hull.dim) {
    throw std::invalid_argument("classify_points: hull was not built from this cloud");
  }
  std::vector<PointLabel> labels(static_cast<size_t>(cloud.size()), PointLabel::interior);
  for (size_t j = 0; j < hull.vertex_cloud_ids.size(); ++j) {
    const int id = hull.vertex_cloud_ids[j];
    if (id < 0 || id >= static_cast<int>(cloud.size()) ||
        (cloud.points.col(id).array() != hull.vertices.col(static_cast<Index>(j)).array()).any()) {
      throw std::invalid_argument("classify_points: hull was not built from this cloud");
    }
    labels[static_cast<size_t>(id)] = PointLabel::boundary;
  }
  return labels;
}

PointCloud read_cloud_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cloud file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(field, &pos);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed number '" +
                                 field + "'");
      }
      while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos]))) ++pos;
      if (pos != field.size()) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed number '" +
                                 field + "'");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": inconsistent column count");
    }
    if (row.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return PointCloud{};
  Matrix pts(static_cast<Index>(rows.front().size()), static_cast<Index>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t k = 0; k < rows[i].size(); ++k) {
      pts(static_cast<Index>(k), static_cast<Index>(i)) = rows[i][k];
    }
  }
  return PointCloud{std::move(pts)};
}

void write_cloud_csv(const std::string& path, const PointCloud& cloud) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write cloud file: " + path);
  char buf[40];
  for (Index i = 0; i < cloud.size(); ++i) {
    for (Index k = 0; k < cloud.dim(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", cloud.points(k, i));
      if (k > 0) out.put(',');
      out << buf;
    }
    out.put('\n');
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

nlohmann::json to_json(const HullSummary& h) {
  nlohmann::json j;
  j["dim"] = h.dim;
  j["affine_dim"] = h.affine_dim;
  j["volume"] = h.hull_volume;
  j["n_total"] = h.n_total;
  j["n_boundary"] = h.n_boundary;
  j["n_interior"] = h.n_interior;
  auto verts = nlohmann::json::array();
  for (Index c = 0; c < h.vertices.cols(); ++c) {
    auto v = nlohmann::json::array();
    for (Index r = 0; r < h.vertices.rows(); ++r) v.push_back(h.vertices(r, c));
    verts.push_back(std::move(v));
  }
  j["vertices"] = std::move(verts);
  j["vertex_cloud_ids"] = h.vertex_cloud_ids;
  auto facets = nlohmann::json::array();
  for (const auto& f : h.facets) {
    nlohmann::json fj;
    fj["vertices"] = f.vertices;
    auto n = nlohmann::json::array();
    for (Index r = 0; r < f.normal.size(); ++r) n.push_back(f.normal(r));
    fj["normal"] = std::move(n);
    fj["offset"] = f.offset;
    facets.push_back(std::move(fj));
  }
  j["facets"] = std::move(facets);
  return j;
}

}  // namespace volest::hull
