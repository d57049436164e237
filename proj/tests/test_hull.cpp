#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include "test_utils.hpp"
#include "volest/geometry.hpp"
#include "volest/hull.hpp"
#include "volest/ppp.hpp"
#include "volest/quickhull.hpp"
#include "volest/rng.hpp"

using namespace volest;
using hull::PointCloud;

namespace {

Matrix random_cloud(int d, int n, RngStream& rng) {
  Matrix m(d, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) m(k, i) = rng.next_double();
  }
  return m;
}

std::set<std::vector<double>> coord_set(const Matrix& pts) {
  std::set<std::vector<double>> out;
  for (Index i = 0; i < pts.cols(); ++i) {
    std::vector<double> v(static_cast<size_t>(pts.rows()));
    for (Index k = 0; k < pts.rows(); ++k) v[static_cast<size_t>(k)] = pts(k, i);
    out.insert(std::move(v));
  }
  return out;
}

// Leave-one-out volume-drop oracle: point i is extreme iff removing it
// shrinks the hull volume.
std::vector<int> extreme_by_volume_drop(const Matrix& pts) {
  const auto full = hull::convex_hull(PointCloud{pts});
  const double eps = std::max(1e-12, 1e-9 * full.hull_volume);
  std::vector<int> out;
  Matrix rest(pts.rows(), pts.cols() - 1);
  for (Index i = 0; i < pts.cols(); ++i) {
    Index c = 0;
    for (Index j = 0; j < pts.cols(); ++j) {
      if (j != i) rest.col(c++) = pts.col(j);
    }
    const auto sub = hull::convex_hull(PointCloud{rest});
    if (sub.hull_volume < full.hull_volume - eps) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace

TEST_SUITE("hull") {

TEST_CASE("unit square with center point") {
  Matrix pts(2, 5);
  pts << 0, 1, 0, 1, 0.5,
         0, 0, 1, 1, 0.5;
  const auto s = hull::convex_hull(PointCloud{pts});
  CHECK(s.hull_volume == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.n_total == 5);
  CHECK(s.n_boundary == 4);
  CHECK(s.n_interior == 1);
  CHECK(s.affine_dim == 2);

  const auto labels = hull::classify_points(PointCloud{pts}, s);
  CHECK(labels[4] == hull::PointLabel::interior);
  for (int i = 0; i < 4; ++i) CHECK(labels[static_cast<size_t>(i)] == hull::PointLabel::boundary);
}

TEST_CASE("three points in 3D are a degenerate hull") {
  Matrix pts(3, 3);
  pts << 0, 1, 0,
         0, 0, 1,
         0, 0, 0;
  const auto s = hull::convex_hull(PointCloud{pts});
  CHECK(s.hull_volume == 0.0);
  CHECK(s.n_interior == 0);
  CHECK(s.n_boundary == 3);
  CHECK(s.affine_dim == 2);
}

TEST_CASE("collinear points in 2D: endpoints are the hull") {
  Matrix pts(2, 5);
  pts << 0, 1, 2, 3, 1.5,
         0, 1, 2, 3, 1.5;
  const auto s = hull::convex_hull(PointCloud{pts});
  CHECK(s.hull_volume == 0.0);
  CHECK(s.affine_dim == 1);
  CHECK(s.n_boundary == 2);
  CHECK(s.n_interior == 3);
  const auto labels = hull::classify_points(PointCloud{pts}, s);
  CHECK(labels[0] == hull::PointLabel::boundary);
  CHECK(labels[3] == hull::PointLabel::boundary);
  CHECK(labels[1] == hull::PointLabel::interior);
  CHECK(labels[4] == hull::PointLabel::interior);
}

TEST_CASE("duplicate of a hull vertex counts as interior") {
  Matrix pts(2, 5);
  pts << 0, 1, 0, 1, 0,
         0, 0, 1, 1, 0;  // column 4 duplicates column 0
  const auto s = hull::convex_hull(PointCloud{pts});
  CHECK(s.n_boundary == 4);
  CHECK(s.n_interior == 1);
  CHECK(s.n_total == 5);
  const auto labels = hull::classify_points(PointCloud{pts}, s);
  CHECK(labels[0] == hull::PointLabel::boundary);
  CHECK(labels[4] == hull::PointLabel::interior);
}

TEST_CASE("empty and tiny clouds") {
  const auto empty = hull::convex_hull(PointCloud{});
  CHECK(empty.n_total == 0);
  CHECK(empty.hull_volume == 0.0);

  Matrix one(3, 1);
  one << 0.3, 0.4, 0.5;
  const auto pt = hull::convex_hull(PointCloud{one});
  CHECK(pt.n_boundary == 1);
  CHECK(pt.affine_dim == 0);
  CHECK(pt.contains(one.col(0)));

  Matrix two(3, 2);
  two << 0, 1, 0, 1, 0, 1;
  const auto seg = hull::convex_hull(PointCloud{two});
  CHECK(seg.n_boundary == 2);
  CHECK(seg.hull_volume == 0.0);
  CHECK(seg.affine_dim == 1);
  CHECK(seg.contains(0.5 * (two.col(0) + two.col(1))));
  Vector off(3);
  off << 0.5, 0.5, 0.9;
  CHECK_FALSE(seg.contains(off));
}

TEST_CASE("one-dimensional clouds") {
  Matrix pts(1, 4);
  pts << 3.0, -1.0, 2.0, 0.5;
  const auto s = hull::convex_hull(PointCloud{pts});
  CHECK(s.hull_volume == doctest::Approx(4.0));
  CHECK(s.n_boundary == 2);
  CHECK(s.n_interior == 2);
  Vector p(1);
  p << 2.9;
  CHECK(s.contains(p));
  p << 3.1;
  CHECK_FALSE(s.contains(p));
}

TEST_CASE("leave-one-out oracle on 10 uniform points in the unit cube") {
  RngStream rng(777);
  Matrix pts = random_cloud(3, 10, rng);
  const auto s = hull::convex_hull(PointCloud{pts});
  const auto oracle = extreme_by_volume_drop(pts);
  std::vector<int> got = s.vertex_cloud_ids;
  std::sort(got.begin(), got.end());
  CHECK(got == oracle);
}

TEST_CASE("vertex sets match both brute-force oracles on small clouds") {
  RngStream rng(31337);
  for (int trial = 0; trial < 150; ++trial) {
    const int d = 2 + trial % 3;
    const int n = d + 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(12 - d));
    Matrix pts = random_cloud(d, n, rng);
    const auto s = hull::convex_hull(PointCloud{pts});
    std::vector<int> got = s.vertex_cloud_ids;
    std::sort(got.begin(), got.end());

    const auto by_volume = extreme_by_volume_drop(pts);
    REQUIRE_MESSAGE(got == by_volume, "volume-drop oracle disagreed, trial ", trial);

    const double tol = 1e-9 * (1.0 + qh::extent_scale(pts));
    Matrix rest(pts.rows(), pts.cols() - 1);
    for (Index i = 0; i < pts.cols(); ++i) {
      Index c = 0;
      for (Index j = 0; j < pts.cols(); ++j) {
        if (j != i) rest.col(c++) = pts.col(j);
      }
      const bool extreme_enum = !testutil::inside_by_facet_enumeration(rest, pts.col(i), tol);
      const bool extreme_got = std::binary_search(got.begin(), got.end(), static_cast<int>(i));
      REQUIRE_MESSAGE(extreme_enum == extreme_got, "facet enumeration disagreed, trial ", trial);
    }
  }
}

TEST_CASE("every input point is inside the hull half-spaces") {
  RngStream rng(4242);
  for (int d = 2; d <= 5; ++d) {
    Matrix pts = random_cloud(d, 60, rng);
    const auto s = hull::convex_hull(PointCloud{pts});
    for (Index i = 0; i < pts.cols(); ++i) REQUIRE(s.contains(pts.col(i)));
  }
}

TEST_CASE("idempotence: hulling the vertices reproduces the hull") {
  RngStream rng(555);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    Matrix pts = random_cloud(d, 40, rng);
    const auto s = hull::convex_hull(PointCloud{pts});
    const auto again = hull::convex_hull(PointCloud{s.vertices});
    CHECK(coord_set(again.vertices) == coord_set(s.vertices));
    CHECK(again.hull_volume == doctest::Approx(s.hull_volume).epsilon(1e-9));
    CHECK(again.n_interior == 0);
  }
}

TEST_CASE("adding an interior point changes nothing but the interior count") {
  RngStream rng(808);
  for (int trial = 0; trial < 15; ++trial) {
    const int d = 2 + trial % 3;
    Matrix pts = random_cloud(d, 30, rng);
    const auto s = hull::convex_hull(PointCloud{pts});
    REQUIRE(s.hull_volume > 0.0);
    // A convex combination of the vertices is strictly inside (generically).
    Vector inside = s.interior_point;
    Matrix grown(d, pts.cols() + 1);
    grown.leftCols(pts.cols()) = pts;
    grown.col(pts.cols()) = inside;
    const auto s2 = hull::convex_hull(PointCloud{grown});
    CHECK(coord_set(s2.vertices) == coord_set(s.vertices));
    CHECK(s2.hull_volume == doctest::Approx(s.hull_volume).epsilon(1e-12));
    CHECK(s2.n_interior == s.n_interior + 1);
  }
}

TEST_CASE("adding an outside point strictly grows the hull") {
  RngStream rng(909);
  for (int trial = 0; trial < 15; ++trial) {
    const int d = 2 + trial % 3;
    Matrix pts = random_cloud(d, 30, rng);
    const auto s = hull::convex_hull(PointCloud{pts});
    Vector outside = Vector::Constant(d, 1.5);  // beyond the unit-cube sample
    Matrix grown(d, pts.cols() + 1);
    grown.leftCols(pts.cols()) = pts;
    grown.col(pts.cols()) = outside;
    const auto s2 = hull::convex_hull(PointCloud{grown});
    CHECK(s2.hull_volume > s.hull_volume);
  }
}

TEST_CASE("sampled hulls never exceed the body volume") {
  RngStream rng(616);
  const auto square = geometry::ConvexBody::box(Vector::Zero(2), Vector::Ones(2));
  const auto cube = geometry::ConvexBody::box(Vector::Zero(4), Vector::Ones(4));
  const auto disc = geometry::ConvexBody::ellipsoid(Vector::Zero(2), Matrix::Identity(2, 2));
  int checked = 0;
  for (const auto& body : {square, cube, disc}) {
    for (int rep = 0; rep < 30; ++rep) {
      const auto cloud = ppp::sample_ppp(body, 50.0 / body.volume(), rng.stream(rep));
      const auto s = hull::convex_hull(cloud);
      REQUIRE(s.hull_volume <= body.volume());
      ++checked;
    }
    rng = rng.stream(17);
  }
  CHECK(checked == 90);
}

TEST_CASE("general quickhull agrees with the monotone chain in 2D") {
  RngStream rng(2718);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_u64() % 40);
    Matrix pts = random_cloud(2, n, rng);
    const double tol = 1e-9 * (1.0 + qh::extent_scale(pts));
    const auto outcome = qh::quickhull(pts, tol);
    const auto* data = std::get_if<qh::HullData>(&outcome);
    REQUIRE(data != nullptr);
    std::vector<int> chain = hull::monotone_chain(pts, tol);
    std::sort(chain.begin(), chain.end());
    CHECK(data->vertex_ids == chain);
  }
}

TEST_CASE("classify_points rejects mismatched inputs") {
  Matrix pts(2, 4);
  pts << 0, 1, 0, 1, 0, 0, 1, 1;
  const auto s = hull::convex_hull(PointCloud{pts});
  Matrix other = pts;
  other(0, 0) = 0.25;
  CHECK_THROWS_AS(hull::classify_points(PointCloud{other}, s), std::invalid_argument);
  Matrix fewer = pts.leftCols(3);
  CHECK_THROWS_AS(hull::classify_points(PointCloud{fewer}, s), std::invalid_argument);
}

TEST_CASE("cloud CSV round trip is exact") {
  RngStream rng(1212);
  Matrix pts = random_cloud(3, 17, rng);
  pts *= 1e-7;  // exercise awkward magnitudes
  pts.col(2).setConstant(1e155);
  const std::string path = "test_cloud_roundtrip.csv";
  hull::write_cloud_csv(path, PointCloud{pts});
  const auto back = hull::read_cloud_csv(path);
  REQUIRE(back.dim() == 3);
  REQUIRE(back.size() == 17);
  CHECK((back.points.array() == pts.array()).all());
  std::remove(path.c_str());
}

TEST_CASE("cloud CSV rejects malformed input") {
  const std::string path = "test_cloud_bad.csv";
  {
    std::ofstream out(path);
    out << "0.1,0.2\n0.3,zebra\n";
  }
  CHECK_THROWS_AS(hull::read_cloud_csv(path), std::runtime_error);
  {
    std::ofstream out(path);
    out << "0.1,0.2\n0.3\n";
  }
  CHECK_THROWS_AS(hull::read_cloud_csv(path), std::runtime_error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(hull::read_cloud_csv("does_not_exist.csv"), std::runtime_error);
}

TEST_CASE("hull summary JSON export") {
  Matrix pts(2, 5);
  pts << 0, 1, 0, 1, 0.5,
         0, 0, 1, 1, 0.5;
  const auto s = hull::convex_hull(PointCloud{pts});
  const auto j = hull::to_json(s);
  CHECK(j.at("n_boundary").get<long>() == 4);
  CHECK(j.at("n_interior").get<long>() == 1);
  CHECK(j.at("volume").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("vertices").size() == 4);
  CHECK(j.at("facets").size() == 4);
  for (const auto& f : j.at("facets")) {
    CHECK(f.at("vertices").size() == 2);
    CHECK(f.at("normal").size() == 2);
  }
}

}  // TEST_SUITE
