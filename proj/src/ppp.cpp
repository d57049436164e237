#include "volest/ppp.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace volest::ppp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr long kRejectionCap = 1000000;

double log_factorial(long k) {
  static const std::array<double, 256> table = [] {
    std::array<double, 256> t{};
    long double acc = 0.0L;
    for (int i = 1; i < 256; ++i) {
      acc += std::log(static_cast<long double>(i));
      t[static_cast<size_t>(i)] = static_cast<double>(acc);
    }
    return t;
  }();
  if (k < 256) return table[static_cast<size_t>(k)];
  const double x = static_cast<double>(k);
  const double x2 = x * x;
  return x * std::log(x) - x + 0.5 * std::log(kTwoPi * x) +
         (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / (1260.0 * x2)) / x2) / x;
}

// Hoermann's PTRS transformed-rejection sampler; exact for mean >= 10.
long poisson_ptrs(double mean, RngStream& rng) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.next_double() - 0.5;
    const double v = rng.next_double();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<long>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const long k = static_cast<long>(kf);
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        static_cast<double>(k) * loglam - mean - log_factorial(k)) {
      return k;
    }
  }
}

// Inversion by sequential search; safe for small means.
long poisson_inversion(double mean, RngStream& rng) {
  const double u = rng.next_double();
  double p = std::exp(-mean);
  double cum = p;
  long k = 0;
  const long cap = static_cast<long>(mean + 40.0 * std::sqrt(mean) + 100.0);
  while (u > cum && k < cap) {
    ++k;
    p *= mean / static_cast<double>(k);
    cum += p;
  }
  return k;
}

}  // namespace

long sample_poisson(double mean, RngStream& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("sample_poisson: mean must be nonnegative");
  }
  if (mean == 0.0) return 0;
  return mean < 30.0 ? poisson_inversion(mean, rng) : poisson_ptrs(mean, rng);
}

Vector sample_uniform(const geometry::ConvexBody& body, RngStream& rng) {
  const Index d = body.dim();
  Vector p(d);
  switch (body.kind()) {
    case geometry::BodyKind::box: {
      const Vector& lo = body.lower();
      const Vector& hi = body.upper();
      for (Index k = 0; k < d; ++k) p(k) = lo(k) + rng.next_double() * (hi(k) - lo(k));
      return p;
    }
    case geometry::BodyKind::ellipsoid: {
      Vector g(d);
      double norm = 0.0;
      do {
        for (Index k = 0; k < d; ++k) g(k) = rng.next_gaussian();
        norm = g.norm();
      } while (norm == 0.0);
      const double radius =
          std::pow(rng.next_double(), 1.0 / static_cast<double>(d));
      return body.center() + body.axes() * (g * (radius / norm));
    }
    case geometry::BodyKind::polytope: {
      const geometry::ConvexBody box = body.bounding_box();
      const Vector& lo = box.lower();
      const Vector& hi = box.upper();
      for (long attempt = 0; attempt < kRejectionCap; ++attempt) {
        for (Index k = 0; k < d; ++k) p(k) = lo(k) + rng.next_double() * (hi(k) - lo(k));
        if (body.contains(p)) return p;
      }
      throw std::runtime_error("sample_uniform: rejection cap exceeded for polytope");
    }
  }
  throw std::logic_error("sample_uniform: unknown body kind");
}

hull::PointCloud sample_ppp(const geometry::ConvexBody& body, double intensity, RngStream rng) {
  if (!(intensity > 0.0) || !std::isfinite(intensity)) {
    throw std::invalid_argument("sample_ppp: intensity must be positive");
  }
  const long n = sample_poisson(intensity * body.volume(), rng);
  Matrix pts(body.dim(), n);
  for (long i = 0; i < n; ++i) pts.col(i) = sample_uniform(body, rng);
  return hull::PointCloud{std::move(pts)};
}

hull::PointCloud sample_ppp(const PppConfig& config) {
  return sample_ppp(config.body, config.intensity, RngStream(config.seed));
}

}  // namespace volest::ppp
