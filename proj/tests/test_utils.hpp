#pragma once

// Test-only oracles, independent of the library implementations they check:
// incomplete-gamma based p-values, a KS test, the shoelace area, and two
// brute-force extreme-point tests for small clouds.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "volest/types.hpp"

namespace testutil {

inline double mean_of(const std::vector<double>& xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

inline double sample_variance(const std::vector<double>& xs) {
  const double m = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc / static_cast<double>(xs.size() - 1);
}

inline double stderr_of_mean(const std::vector<double>& xs) {
  return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

// Regularized incomplete gamma P(a,x); series for x < a+1, Lentz continued
// fraction otherwise.
inline double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

// p-value of a chi-square statistic with df degrees of freedom.
inline double chi2_pvalue(double stat, double df) { return 1.0 - gamma_p(0.5 * df, 0.5 * stat); }

// Kolmogorov-Smirnov p-value for statistic d on n samples (asymptotic with
// the usual finite-n correction).
inline double ks_pvalue(double d, long n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double t = (sn + 0.12 + 0.11 / sn) * d;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * t * t);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::max(0.0, std::min(1.0, 2.0 * sum));
}

// KS statistic of samples against the uniform distribution on [0,1].
inline double ks_statistic_uniform(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(xs[i] - lo, hi - xs[i]));
  }
  return d;
}

// Shoelace area of a polygon given in order (one vertex per column).
inline double shoelace(const volest::Matrix& poly) {
  double acc = 0.0;
  const auto k = poly.cols();
  for (volest::Index i = 0; i < k; ++i) {
    const auto& a = poly.col(i);
    const auto& b = poly.col((i + 1) % k);
    acc += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * std::abs(acc);
}

// Exhaustive supporting-hyperplane containment: is p inside conv(S)? Valid
// when S is affinely full-dimensional. O(|S|^(d+1)), for tiny clouds only.
inline bool inside_by_facet_enumeration(const volest::Matrix& s, const volest::Vector& p,
                                        double tol) {
  const int d = static_cast<int>(s.rows());
  const int n = static_cast<int>(s.cols());
  if (n < d) return false;
  std::vector<int> idx(static_cast<size_t>(d));
  std::vector<int> comb(static_cast<size_t>(d));
  for (int k = 0; k < d; ++k) comb[static_cast<size_t>(k)] = k;
  const auto advance = [&]() {
    int k = d - 1;
    while (k >= 0 && comb[static_cast<size_t>(k)] == n - d + k) --k;
    if (k < 0) return false;
    ++comb[static_cast<size_t>(k)];
    for (int j = k + 1; j < d; ++j) {
      comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
    }
    return true;
  };
  volest::Matrix edges(d, d - 1);
  do {
    for (int j = 1; j < d; ++j) {
      edges.col(j - 1) =
          s.col(comb[static_cast<size_t>(j)]) - s.col(comb[static_cast<size_t>(0)]);
    }
    Eigen::HouseholderQR<volest::Matrix> qr(edges);
    bool degenerate = false;
    for (int j = 0; j < d - 1; ++j) {
      if (std::abs(qr.matrixQR()(j, j)) <= tol) degenerate = true;
    }
    if (degenerate) continue;
    volest::Matrix q = qr.householderQ();
    const volest::Vector normal = q.col(d - 1);
    const double offset = normal.dot(s.col(comb[0]));
    double side_min = 0.0, side_max = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = normal.dot(s.col(i)) - offset;
      side_min = std::min(side_min, v);
      side_max = std::max(side_max, v);
    }
    const double pv = normal.dot(p) - offset;
    if (side_max <= tol && pv > tol) return false;   // supporting from above
    if (side_min >= -tol && pv < -tol) return false; // supporting from below
  } while (advance());
  return true;
}

}  // namespace testutil
