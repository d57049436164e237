#include "volest/quickhull.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace volest::qh {

namespace {

struct WorkFacet {
  std::vector<int> vertices;   // d point ids
  std::vector<int> neighbors;  // neighbors[k] lies across the ridge omitting vertices[k]
  Vector normal;
  double offset = 0.0;
  std::vector<int> outside;
  int furthest = -1;
  double furthest_dist = 0.0;
  bool alive = true;
};

template <typename PointExpr>
double dist_above(const WorkFacet& f, const PointExpr& p) {
  return f.normal.dot(p) - f.offset;
}

// Scratch space reused across facet_plane calls on one thread.
struct PlaneScratch {
  Matrix edges;
  Eigen::HouseholderQR<Matrix> qr;
  Vector normal;
};

// Shared tail of the facet-plane computation: orient the unit normal away
// from `inside` and store it on the facet.
template <typename NormalVec>
bool orient_and_store(const Matrix& pts, WorkFacet& f, const Vector& inside, double tol,
                      NormalVec& normal) {
  double b = normal.dot(pts.col(f.vertices[0]));
  const double side = normal.dot(inside) - b;
  if (std::abs(side) <= tol) return false;
  if (side > 0.0) {
    normal = -normal;
    b = -b;
  }
  f.normal = normal;
  f.offset = b;
  return true;
}

// Hyperplane through the facet's vertices, unit normal oriented away from
// `inside`. Returns false when the vertex set is affinely degenerate.
bool facet_plane_dynamic(const Matrix& pts, WorkFacet& f, const Vector& inside, double tol,
                         PlaneScratch& ws) {
  const int d = static_cast<int>(pts.rows());
  ws.edges.resize(d, d - 1);
  for (int j = 1; j < d; ++j) {
    ws.edges.col(j - 1) = pts.col(f.vertices[j]) - pts.col(f.vertices[0]);
  }
  ws.qr.compute(ws.edges);
  for (int j = 0; j < d - 1; ++j) {
    if (std::abs(ws.qr.matrixQR()(j, j)) <= tol) return false;
  }
  // Last column of Q, the orthogonal complement of the edge span, without
  // materializing the full matrix.
  ws.normal = ws.qr.householderQ() * Vector::Unit(d, d - 1);
  return orient_and_store(pts, f, inside, tol, ws.normal);
}

// Fixed-dimension variant: stack storage only, no allocations on the facet
// hot path.
template <int D>
bool facet_plane_fixed(const Matrix& pts, WorkFacet& f, const Vector& inside, double tol,
                       PlaneScratch&) {
  Eigen::Matrix<double, D, D - 1> edges;
  for (int j = 1; j < D; ++j) {
    edges.col(j - 1) =
        pts.col(f.vertices[j]).template head<D>() - pts.col(f.vertices[0]).template head<D>();
  }
  Eigen::HouseholderQR<Eigen::Matrix<double, D, D - 1>> qr(edges);
  for (int j = 0; j < D - 1; ++j) {
    if (std::abs(qr.matrixQR()(j, j)) <= tol) return false;
  }
  Eigen::Matrix<double, D, 1> normal =
      qr.householderQ() * Eigen::Matrix<double, D, 1>::Unit(D - 1);
  return orient_and_store(pts, f, inside, tol, normal);
}

using PlaneFn = bool (*)(const Matrix&, WorkFacet&, const Vector&, double, PlaneScratch&);

PlaneFn select_plane_fn(int d) {
  switch (d) {
    case 2: return &facet_plane_fixed<2>;
    case 3: return &facet_plane_fixed<3>;
    case 4: return &facet_plane_fixed<4>;
    case 5: return &facet_plane_fixed<5>;
    case 6: return &facet_plane_fixed<6>;
    case 7: return &facet_plane_fixed<7>;
    case 8: return &facet_plane_fixed<8>;
    default: return &facet_plane_dynamic;
  }
}

// |det| of the d x d matrix whose columns are pts.col(v[j]) - apex.
template <int D>
double simplex_det_fixed(const Matrix& pts, const std::vector<int>& v, const Vector& apex) {
  Eigen::Matrix<double, D, D> m;
  for (int j = 0; j < D; ++j) {
    m.col(j) = pts.col(v[j]).template head<D>() - apex.template head<D>();
  }
  return std::abs(m.determinant());
}

using DetFn = double (*)(const Matrix&, const std::vector<int>&, const Vector&);

double simplex_det_dynamic(const Matrix& pts, const std::vector<int>& v, const Vector& apex) {
  const int d = static_cast<int>(pts.rows());
  Matrix m(d, d);
  for (int j = 0; j < d; ++j) m.col(j) = pts.col(v[j]) - apex;
  return std::abs(m.determinant());
}

DetFn select_det_fn(int d) {
  switch (d) {
    case 2: return &simplex_det_fixed<2>;
    case 3: return &simplex_det_fixed<3>;
    case 4: return &simplex_det_fixed<4>;
    case 5: return &simplex_det_fixed<5>;
    case 6: return &simplex_det_fixed<6>;
    case 7: return &simplex_det_fixed<7>;
    case 8: return &simplex_det_fixed<8>;
    default: return &simplex_det_dynamic;
  }
}

// Greedy affinely independent subset: up to d+1 point ids together with an
// orthonormal basis of the directions they span.
struct SimplexPick {
  std::vector<int> ids;
  Matrix basis;  // d x (ids.size()-1)
};

SimplexPick pick_initial_simplex(const Matrix& pts, double tol) {
  const int d = static_cast<int>(pts.rows());
  const int n = static_cast<int>(pts.cols());
  SimplexPick out;
  out.basis.resize(d, 0);

  // Farthest pair among the axis extremes.
  std::vector<int> cand;
  for (int k = 0; k < d; ++k) {
    int lo = 0, hi = 0;
    for (int i = 1; i < n; ++i) {
      if (pts(k, i) < pts(k, lo)) lo = i;
      if (pts(k, i) > pts(k, hi)) hi = i;
    }
    cand.push_back(lo);
    cand.push_back(hi);
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  int best_a = cand[0], best_b = cand[0];
  double best = -1.0;
  for (size_t a = 0; a + 1 < cand.size(); ++a) {
    for (size_t b = a + 1; b < cand.size(); ++b) {
      const double ds = (pts.col(cand[a]) - pts.col(cand[b])).squaredNorm();
      if (ds > best) {
        best = ds;
        best_a = cand[a];
        best_b = cand[b];
      }
    }
  }
  out.ids.push_back(best_a);
  if (best <= tol * tol) return out;  // rank 0
  out.ids.push_back(best_b);
  Matrix basis(d, 1);
  basis.col(0) = (pts.col(best_b) - pts.col(best_a)).normalized();

  const Vector origin = pts.col(best_a);
  while (static_cast<int>(out.ids.size()) < d + 1) {
    const int r = static_cast<int>(basis.cols());
    int arg = -1;
    double best_res = tol;
    Vector resid(d);
    for (int i = 0; i < n; ++i) {
      Vector v = pts.col(i) - origin;
      v -= basis * (basis.transpose() * v).eval();
      const double rn = v.norm();
      if (rn > best_res) {
        best_res = rn;
        arg = i;
        resid = v;
      }
    }
    if (arg < 0) break;
    // One re-orthogonalization pass keeps the basis clean.
    resid -= basis * (basis.transpose() * resid).eval();
    basis.conservativeResize(d, r + 1);
    basis.col(r) = resid.normalized();
    out.ids.push_back(arg);
  }
  out.basis = basis;
  return out;
}

}  // namespace

double extent_scale(const Matrix& pts) {
  if (pts.cols() == 0) return 0.0;
  const Vector lo = pts.rowwise().minCoeff();
  const Vector hi = pts.rowwise().maxCoeff();
  return (hi - lo).norm();
}

Outcome quickhull(const Matrix& pts, double tol) {
  const int d = static_cast<int>(pts.rows());
  const int n = static_cast<int>(pts.cols());
  if (d < 2) throw std::invalid_argument("quickhull: dimension must be >= 2");
  if (n == 0) return AffineSpan{0, Vector::Zero(d), Matrix(d, 0)};

  SimplexPick pick = pick_initial_simplex(pts, tol);
  if (static_cast<int>(pick.ids.size()) < d + 1) {
    return AffineSpan{static_cast<int>(pick.ids.size()) - 1, pts.col(pick.ids[0]),
                      std::move(pick.basis)};
  }

  Vector interior = Vector::Zero(d);
  for (int id : pick.ids) interior += pts.col(id);
  interior /= static_cast<double>(d + 1);

  PlaneScratch ws;
  const PlaneFn facet_plane = select_plane_fn(d);
  std::vector<WorkFacet> facets;
  facets.reserve(static_cast<size_t>(2 * d + 2));
  for (int k = 0; k <= d; ++k) {
    WorkFacet f;
    f.vertices.reserve(d);
    f.neighbors.reserve(d);
    for (int j = 0; j <= d; ++j) {
      if (j == k) continue;
      f.vertices.push_back(pick.ids[j]);
      f.neighbors.push_back(j);  // ridge omitting pick.ids[j] is shared with facet j
    }
    if (!facet_plane(pts, f, interior, tol, ws)) {
      throw std::runtime_error("quickhull: initial simplex is numerically degenerate");
    }
    facets.push_back(std::move(f));
  }

  // Assign every point to the first facet it lies strictly above.
  std::vector<int> pending;
  for (int i = 0; i < n; ++i) {
    for (auto& f : facets) {
      const double dist = dist_above(f, pts.col(i));
      if (dist > tol) {
        f.outside.push_back(i);
        if (dist > f.furthest_dist) {
          f.furthest_dist = dist;
          f.furthest = i;
        }
        break;
      }
    }
  }
  for (int k = 0; k < static_cast<int>(facets.size()); ++k) {
    if (!facets[k].outside.empty()) pending.push_back(k);
  }

  std::vector<int> visible, stack;
  std::vector<int> seen;  // generation stamps, grown lazily
  int generation = 0;
  // Horizon stored flat: entry i has its ridge at hz_ridges[i*(d-1) ...].
  std::vector<int> hz_outer, hz_outer_slot, hz_ridges;
  // Ridge pairing uses a commutative 64-bit key over the ridge vertex ids;
  // every match is verified against the exact vertex tuples, so a key
  // collision cannot silently corrupt the adjacency.
  const auto mix64 = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  struct IdentityHash {
    size_t operator()(std::uint64_t k) const { return static_cast<size_t>(k); }
  };
  std::unordered_map<std::uint64_t, std::pair<int, int>, IdentityHash> ridge_map;
  std::vector<int> tuple_a, tuple_b;
  std::vector<int> candidates, new_ids, free_slots;
  Matrix packed_normals;  // normals of the new facets, one per column
  Vector packed_offsets;

  while (!pending.empty()) {
    const int fid = pending.back();
    pending.pop_back();
    if (!facets[fid].alive || facets[fid].outside.empty()) continue;
    const int p = facets[fid].furthest;
    const Vector point = pts.col(p);

    // All facets visible from p, found by flooding across neighbors.
    visible.clear();
    hz_outer.clear();
    hz_outer_slot.clear();
    hz_ridges.clear();
    stack.assign(1, fid);
    ++generation;
    seen.resize(facets.size(), 0);
    seen[fid] = generation;
    while (!stack.empty()) {
      const int g = stack.back();
      stack.pop_back();
      visible.push_back(g);
      for (int k = 0; k < d; ++k) {
        const int nb = facets[g].neighbors[k];
        if (seen[nb] == generation) continue;
        if (dist_above(facets[nb], point) > tol) {
          seen[nb] = generation;
          stack.push_back(nb);
        } else {
          // Ridge between g (visible) and nb (kept) is on the horizon.
          hz_outer.push_back(nb);
          int back_slot = -1;
          for (int s = 0; s < d; ++s) {
            if (facets[nb].neighbors[s] == g) {
              back_slot = s;
              break;
            }
          }
          hz_outer_slot.push_back(back_slot);
          for (int s = 0; s < d; ++s) {
            if (s != k) hz_ridges.push_back(facets[g].vertices[s]);
          }
        }
      }
    }

    // Collect the points that lose their facet, then retire the cone so its
    // slots can be recycled for the replacement facets.
    candidates.clear();
    for (const int g : visible) {
      for (const int q : facets[g].outside) {
        if (q != p) candidates.push_back(q);
      }
      facets[g].alive = false;
      facets[g].outside.clear();
      free_slots.push_back(g);
    }

    // New facets join p to each horizon ridge.
    new_ids.clear();
    const int n_horizon = static_cast<int>(hz_outer.size());
    for (int hi = 0; hi < n_horizon; ++hi) {
      int new_id;
      if (free_slots.empty()) {
        new_id = static_cast<int>(facets.size());
        facets.emplace_back();
      } else {
        new_id = free_slots.back();
        free_slots.pop_back();
      }
      WorkFacet& f = facets[new_id];
      const int* ridge = hz_ridges.data() + static_cast<size_t>(hi) * (d - 1);
      f.vertices.assign(ridge, ridge + (d - 1));
      f.vertices.push_back(p);
      f.neighbors.assign(static_cast<size_t>(d), -1);
      f.neighbors[d - 1] = hz_outer[hi];  // ridge omitting p
      f.furthest = -1;
      f.furthest_dist = 0.0;
      f.alive = true;
      if (!facet_plane(pts, f, interior, tol, ws)) {
        throw std::runtime_error("quickhull: degenerate horizon facet");
      }
      facets[hz_outer[hi]].neighbors[hz_outer_slot[hi]] = new_id;
      new_ids.push_back(new_id);
    }

    // Stitch new facets to each other along the ridges through p.
    ridge_map.clear();
    const int n_new = static_cast<int>(new_ids.size());
    const auto ridge_tuple = [&](int facet_id, int slot, std::vector<int>& out) {
      out.clear();
      for (int s = 0; s < d; ++s) {
        if (s != slot) out.push_back(facets[facet_id].vertices[s]);
      }
      std::sort(out.begin(), out.end());
    };
    for (const int id : new_ids) {
      const WorkFacet& f = facets[id];
      for (int k = 0; k + 1 < d; ++k) {  // slot d-1 is the horizon ridge
        std::uint64_t key = 0;
        for (int s = 0; s < d; ++s) {
          if (s != k) key += mix64(static_cast<std::uint64_t>(f.vertices[s]));
        }
        auto it = ridge_map.find(key);
        if (it == ridge_map.end()) {
          ridge_map.emplace(key, std::make_pair(id, k));
        } else {
          const auto [other, other_slot] = it->second;
          ridge_tuple(id, k, tuple_a);
          ridge_tuple(other, other_slot, tuple_b);
          if (tuple_a != tuple_b) {
            throw std::runtime_error("quickhull: ridge key collision");
          }
          facets[id].neighbors[k] = other;
          facets[other].neighbors[other_slot] = id;
          ridge_map.erase(it);
        }
      }
    }
    if (!ridge_map.empty()) {
      throw std::runtime_error("quickhull: unmatched interior ridge");
    }

    // Re-home the orphaned points onto the new facets. The normals are
    // packed into one matrix so the scan stays in cache.
    packed_normals.resize(d, n_new);
    packed_offsets.resize(n_new);
    for (int j = 0; j < n_new; ++j) {
      packed_normals.col(j) = facets[new_ids[j]].normal;
      packed_offsets(j) = facets[new_ids[j]].offset;
    }
    for (const int q : candidates) {
      const auto qp = pts.col(q);
      for (int j = 0; j < n_new; ++j) {
        const double dist = packed_normals.col(j).dot(qp) - packed_offsets(j);
        if (dist > tol) {
          WorkFacet& target = facets[new_ids[j]];
          target.outside.push_back(q);
          if (dist > target.furthest_dist) {
            target.furthest_dist = dist;
            target.furthest = q;
          }
          break;
        }
      }
    }
    for (const int id : new_ids) {
      if (!facets[id].outside.empty()) pending.push_back(id);
    }
  }

  HullData out;
  out.interior = interior;
  std::vector<int> verts;
  double vol = 0.0;
  const DetFn simplex_det = select_det_fn(d);
  for (auto& f : facets) {
    if (!f.alive) continue;
    vol += simplex_det(pts, f.vertices, interior);
    verts.insert(verts.end(), f.vertices.begin(), f.vertices.end());
    out.facets.push_back(Facet{std::move(f.vertices), std::move(f.normal), f.offset});
  }
  double dfact = 1.0;
  for (int k = 2; k <= d; ++k) dfact *= k;
  out.volume = vol / dfact;
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  out.vertex_ids = std::move(verts);
  return out;
}

}  // namespace volest::qh
