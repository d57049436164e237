#include "volest/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace volest::geometry {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

double unit_ball_volume(int d) {
  require(d >= 1, "unit_ball_volume: dimension must be >= 1");
  return std::pow(3.14159265358979323846, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

ConvexBody ConvexBody::box(Vector lower, Vector upper) {
  require(lower.size() >= 1 && lower.size() == upper.size(), "box: bound sizes differ");
  require(lower.allFinite() && upper.allFinite(), "box: bounds must be finite");
  require((lower.array() < upper.array()).all(), "box: requires lower[i] < upper[i]");
  ConvexBody b;
  b.kind_ = BodyKind::box;
  b.volume_ = (upper - lower).prod();
  b.lo_ = std::move(lower);
  b.hi_ = std::move(upper);
  return b;
}

ConvexBody ConvexBody::ellipsoid(Vector center, Matrix axes) {
  require(center.size() >= 1, "ellipsoid: empty center");
  require(axes.rows() == axes.cols() && axes.rows() == center.size(),
          "ellipsoid: axes must be square and match the center");
  require(center.allFinite() && axes.allFinite(), "ellipsoid: entries must be finite");
  const double det = axes.determinant();
  require(det != 0.0 && std::isfinite(det), "ellipsoid: axes matrix is singular");
  ConvexBody b;
  b.kind_ = BodyKind::ellipsoid;
  b.volume_ = std::abs(det) * unit_ball_volume(static_cast<int>(center.size()));
  b.inv_axes_ = axes.inverse();
  b.lo_ = std::move(center);
  b.mat_ = std::move(axes);
  return b;
}

ConvexBody ConvexBody::polytope(Matrix vertices) {
  require(vertices.rows() >= 1, "polytope: empty vertex set");
  require(vertices.allFinite(), "polytope: vertices must be finite");
  require(vertices.cols() >= vertices.rows() + 1,
          "polytope: needs at least dim+1 vertices");
  ConvexBody b;
  b.kind_ = BodyKind::polytope;
  b.hull_ = hull::convex_hull(hull::PointCloud{vertices});
  require(b.hull_.hull_volume > 0.0, "polytope: degenerate vertex set has zero volume");
  b.volume_ = b.hull_.hull_volume;
  b.mat_ = std::move(vertices);
  return b;
}

Index ConvexBody::dim() const {
  switch (kind_) {
    case BodyKind::box:
    case BodyKind::ellipsoid:
      return lo_.size();
    case BodyKind::polytope:
      return mat_.rows();
  }
  return 0;
}

bool ConvexBody::contains(const Vector& p) const {
  require(p.size() == dim(), "contains: dimension mismatch");
  switch (kind_) {
    case BodyKind::box:
      return (p.array() >= lo_.array()).all() && (p.array() <= hi_.array()).all();
    case BodyKind::ellipsoid:
      return (inv_axes_ * (p - lo_)).norm() <= 1.0 + 1e-12;
    case BodyKind::polytope:
      return hull_.contains(p);
  }
  return false;
}

ConvexBody ConvexBody::bounding_box() const {
  switch (kind_) {
    case BodyKind::box:
      return *this;
    case BodyKind::ellipsoid: {
      const Vector extent = mat_.rowwise().norm();
      return box(lo_ - extent, lo_ + extent);
    }
    case BodyKind::polytope:
      return box(mat_.rowwise().minCoeff(), mat_.rowwise().maxCoeff());
  }
  throw std::logic_error("bounding_box: unknown kind");
}

const Vector& ConvexBody::lower() const {
  require(kind_ == BodyKind::box, "lower: not a box");
  return lo_;
}
const Vector& ConvexBody::upper() const {
  require(kind_ == BodyKind::box, "upper: not a box");
  return hi_;
}
const Vector& ConvexBody::center() const {
  require(kind_ == BodyKind::ellipsoid, "center: not an ellipsoid");
  return lo_;
}
const Matrix& ConvexBody::axes() const {
  require(kind_ == BodyKind::ellipsoid, "axes: not an ellipsoid");
  return mat_;
}
const Matrix& ConvexBody::vertices() const {
  require(kind_ == BodyKind::polytope, "vertices: not a polytope");
  return mat_;
}
const hull::HullSummary& ConvexBody::polytope_hull() const {
  require(kind_ == BodyKind::polytope, "polytope_hull: not a polytope");
  return hull_;
}

Vector barycentre(const Matrix& vertices) {
  if (vertices.cols() == 0) throw std::invalid_argument("barycentre: empty vertex set");
  return vertices.rowwise().mean();
}

ConvexBody dilate(const ConvexBody& poly, const Vector& center, double factor) {
  require(poly.kind() == BodyKind::polytope, "dilate: body must be a polytope");
  require(center.size() == poly.dim(), "dilate: center dimension mismatch");
  require(factor > 0.0 && std::isfinite(factor), "dilate: factor must be positive");
  Matrix v = poly.vertices();
  v = ((v.colwise() - center) * factor).colwise() + center;
  return ConvexBody::polytope(std::move(v));
}

MonteCarloEstimate symdiff_volume(const ConvexBody& a, const ConvexBody& b, long n_samples,
                                  RngStream rng) {
  require(a.dim() == b.dim(), "symdiff_volume: dimension mismatch");
  require(n_samples > 0, "symdiff_volume: n_samples must be positive");
  const ConvexBody abox = a.bounding_box();
  const ConvexBody bbox = b.bounding_box();
  const Vector lo = abox.lower().cwiseMin(bbox.lower());
  const Vector hi = abox.upper().cwiseMax(bbox.upper());
  const double box_vol = (hi - lo).prod();
  const Index d = a.dim();
  Vector p(d);
  long hits = 0;
  for (long i = 0; i < n_samples; ++i) {
    for (Index k = 0; k < d; ++k) p(k) = lo(k) + rng.next_double() * (hi(k) - lo(k));
    if (a.contains(p) != b.contains(p)) ++hits;
  }
  const double phat = static_cast<double>(hits) / static_cast<double>(n_samples);
  MonteCarloEstimate out;
  out.value = box_vol * phat;
  out.std_error = box_vol * std::sqrt(phat * (1.0 - phat) / static_cast<double>(n_samples));
  return out;
}

MonteCarloEstimate symdiff_volume(const ConvexBody& a, const ConvexBody& b, long n_samples,
                                  std::uint64_t seed) {
  return symdiff_volume(a, b, n_samples, RngStream(seed));
}

ConvexBody body_from_json(const nlohmann::json& spec) {
  const auto vec = [](const nlohmann::json& j) {
    Vector v(static_cast<Index>(j.size()));
    Index i = 0;
    for (const auto& x : j) v(i++) = x.get<double>();
    return v;
  };
  const auto points = [&](const nlohmann::json& j) {
    if (j.empty()) throw std::invalid_argument("body spec: empty point list");
    const Index d = static_cast<Index>(j.front().size());
    Matrix m(d, static_cast<Index>(j.size()));
    Index c = 0;
    for (const auto& row : j) {
      if (static_cast<Index>(row.size()) != d) {
        throw std::invalid_argument("body spec: ragged point list");
      }
      m.col(c++) = vec(row);
    }
    return m;
  };
  if (!spec.is_object() || !spec.contains("kind")) {
    throw std::invalid_argument("body spec: missing \"kind\"");
  }
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "box") {
    return ConvexBody::box(vec(spec.at("lower")), vec(spec.at("upper")));
  }
  if (kind == "ellipsoid") {
    return ConvexBody::ellipsoid(vec(spec.at("center")), points(spec.at("axes")).transpose());
  }
  if (kind == "polytope") {
    return ConvexBody::polytope(points(spec.at("vertices")));
  }
  throw std::invalid_argument("body spec: unknown kind '" + kind + "'");
}

nlohmann::json to_json(const ConvexBody& body) {
  const auto vec = [](const Vector& v) {
    auto j = nlohmann::json::array();
    for (Index i = 0; i < v.size(); ++i) j.push_back(v(i));
    return j;
  };
  const auto rows = [&](const Matrix& m) {
    auto j = nlohmann::json::array();
    for (Index r = 0; r < m.rows(); ++r) j.push_back(vec(m.row(r).transpose()));
    return j;
  };
  const auto cols = [&](const Matrix& m) {
    auto j = nlohmann::json::array();
    for (Index c = 0; c < m.cols(); ++c) j.push_back(vec(m.col(c)));
    return j;
  };
  nlohmann::json j;
  switch (body.kind()) {
    case BodyKind::box:
      j["kind"] = "box";
      j["lower"] = vec(body.lower());
      j["upper"] = vec(body.upper());
      break;
    case BodyKind::ellipsoid:
      j["kind"] = "ellipsoid";
      j["center"] = vec(body.center());
      j["axes"] = rows(body.axes());
      break;
    case BodyKind::polytope:
      j["kind"] = "polytope";
      j["vertices"] = cols(body.vertices());
      break;
  }
  return j;
}

}  // namespace volest::geometry
