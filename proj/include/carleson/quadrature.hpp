#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace carleson {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // accumulated bisection error estimate
  long panels = 0;
};

namespace detail {

// 15-point Gauss-Legendre rule on [-1,1]. Nodes are roots of the Legendre
// polynomial, found once by Newton iteration on the three-term recurrence.
struct GaussLegendre15 {
  static constexpr int n = 15;
  std::array<double, n> x{};
  std::array<double, n> w{};

  GaussLegendre15() {
    for (int i = 0; i < n; ++i) {
      double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = xi;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
        const double step = p1 / dp;
        xi -= step;
        if (std::abs(step) < 1e-16) break;
      }
      x[i] = xi;
      w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
  }
};

inline const GaussLegendre15& gl15_rule() {
  static const GaussLegendre15 rule;
  return rule;
}

template <class F>
double gl15(const F& f, double a, double b) {
  const auto& rule = gl15_rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < GaussLegendre15::n; ++i) {
    acc += rule.w[i] * f(mid + half * rule.x[i]);
  }
  return acc * half;
}

template <class F>
void adapt(const F& f, double a, double b, double tol, int depth, QuadratureResult& out) {
  const double whole = gl15(f, a, b);
  const double mid = 0.5 * (a + b);
  const double halves = gl15(f, a, mid) + gl15(f, mid, b);
  const double err = std::abs(whole - halves);
  if (err <= tol || err <= 1e-15 * std::abs(halves) || depth >= 48 || !(a < mid && mid < b)) {
    out.value += halves;
    out.error += err;
    out.panels += 2;
    return;
  }
  adapt(f, a, mid, 0.5 * tol, depth + 1, out);
  adapt(f, mid, b, 0.5 * tol, depth + 1, out);
}

}  // namespace detail

// Adaptive composite Gauss-Legendre integration of f over [a,b] with
// absolute target tolerance `abs_tol`. The interval is pre-split at the
// supplied interior breakpoints (integrands from tabulated data are only
// piecewise smooth), then each panel is bisected until its error estimate
// fits its share of the tolerance.
template <class F>
QuadratureResult integrate(const F& f, double a, double b, double abs_tol = 1e-11,
                           const std::vector<double>& interior_knots = {}) {
  if (!(b >= a)) throw std::invalid_argument("integrate: reversed interval");
  QuadratureResult out;
  if (a == b) return out;

  std::vector<double> cuts;
  cuts.push_back(a);
  for (double k : interior_knots) {
    if (k > a && k < b) cuts.push_back(k);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double total = b - a;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double share = abs_tol * std::max(1e-3, (cuts[i + 1] - cuts[i]) / total);
    detail::adapt(f, cuts[i], cuts[i + 1], share, 0, out);
  }
  return out;
}

}  // namespace carleson
