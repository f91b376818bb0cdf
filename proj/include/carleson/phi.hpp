#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace carleson {

enum class Tri { Yes, No, Indeterminate };

inline const char* to_string(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    default: return "indeterminate";
  }
}

struct PhiTablePoint {
  double t;
  double phi;
};

// The weight functional: a non-negative function on [1, inf). Derived
// functions f(s) = Phi(s^2) and h(s) = f(s)/s^2 drive all candidate
// evaluations and the case dispatch.
//
// Kinds:
//   Power  -- Phi(t) = t^alpha, evaluable on all of [1, inf).
//   Table  -- piecewise-linear interpolation of sample points; the last
//             abscissa bounds the evaluable domain.
//   Poly   -- sum of c_j t^j with c_j >= 0; used for linearity checks.
class Phi {
 public:
  enum class Kind { Power, Table, Poly };

  static Phi power(double alpha) {
    Phi p;
    p.kind_ = Kind::Power;
    p.alpha_ = alpha;
    return p;
  }

  static Phi table(std::vector<PhiTablePoint> pts) {
    if (pts.size() < 2) throw std::invalid_argument("phi table needs at least two points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!std::isfinite(pts[i].t) || !std::isfinite(pts[i].phi) || pts[i].phi < 0.0)
        throw std::invalid_argument("phi table entries must be finite and non-negative");
      if (i > 0 && !(pts[i].t > pts[i - 1].t))
        throw std::invalid_argument("phi table abscissas must be strictly increasing");
    }
    if (pts.front().t > 1.0 + 1e-12)
      throw std::invalid_argument("phi table must cover t = 1");
    Phi p;
    p.kind_ = Kind::Table;
    p.table_ = std::move(pts);
    return p;
  }

  static Phi poly(std::vector<double> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("phi poly needs at least one coefficient");
    for (double c : coeffs) {
      if (!std::isfinite(c) || c < 0.0)
        throw std::invalid_argument("phi poly coefficients must be finite and non-negative");
    }
    Phi p;
    p.kind_ = Kind::Poly;
    p.coeffs_ = std::move(coeffs);
    return p;
  }

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const std::vector<PhiTablePoint>& table_points() const { return table_; }
  const std::vector<double>& poly_coeffs() const { return coeffs_; }

  // Largest t up to which Phi is evaluable.
  double domain_hint() const {
    return kind_ == Kind::Table ? table_.back().t : std::numeric_limits<double>::infinity();
  }

  double operator()(double t) const {
    if (t < 1.0 - 1e-12) throw std::domain_error("phi: argument below 1");
    t = std::max(t, 1.0);
    switch (kind_) {
      case Kind::Power:
        if (alpha_ == 0.0) return 1.0;
        return std::pow(t, alpha_);
      case Kind::Poly: {
        double acc = 0.0;
        for (std::size_t j = coeffs_.size(); j-- > 0;) acc = acc * t + coeffs_[j];
        return acc;
      }
      case Kind::Table:
      default: {
        if (t > table_.back().t * (1.0 + 1e-12))
          throw std::domain_error("phi: argument beyond table domain");
        t = std::min(t, table_.back().t);
        if (t <= table_.front().t) return table_.front().phi;
        auto it = std::upper_bound(table_.begin(), table_.end(), t,
                                   [](double v, const PhiTablePoint& p) { return v < p.t; });
        const PhiTablePoint& hi = *it;
        const PhiTablePoint& lo = *(it - 1);
        const double u = (t - lo.t) / (hi.t - lo.t);
        return lo.phi + u * (hi.phi - lo.phi);
      }
    }
  }

  double f(double s) const { return (*this)(s * s); }
  double h(double s) const { return f(s) / (s * s); }

  // Interior breakpoints of integrands written in the s variable (s^2 = t).
  std::vector<double> knots_s(double lo, double hi) const {
    std::vector<double> out;
    if (kind_ == Kind::Table) {
      for (const auto& p : table_) {
        const double s = std::sqrt(p.t);
        if (s > lo && s < hi) out.push_back(s);
      }
    }
    return out;
  }

  // Interior breakpoints of integrands written directly in t.
  std::vector<double> knots_t(double lo, double hi) const {
    std::vector<double> out;
    if (kind_ == Kind::Table) {
      for (const auto& p : table_) {
        if (p.t > lo && p.t < hi) out.push_back(p.t);
      }
    }
    return out;
  }

 private:
  Kind kind_ = Kind::Power;
  double alpha_ = 0.0;
  std::vector<PhiTablePoint> table_;
  std::vector<double> coeffs_;
};

struct PhiClassification {
  Tri phi_increasing = Tri::Indeterminate;
  Tri phi_decreasing = Tri::Indeterminate;
  Tri h_increasing = Tri::Indeterminate;
  Tri h_decreasing = Tri::Indeterminate;
  Tri h_convex = Tri::Indeterminate;
  Tri h_concave = Tri::Indeterminate;
  int grid_size = 0;

  std::string describe() const {
    std::string s;
    s += "phi_increasing=" + std::string(to_string(phi_increasing));
    s += " phi_decreasing=" + std::string(to_string(phi_decreasing));
    s += " h_increasing=" + std::string(to_string(h_increasing));
    s += " h_decreasing=" + std::string(to_string(h_decreasing));
    s += " h_convex=" + std::string(to_string(h_convex));
    s += " h_concave=" + std::string(to_string(h_concave));
    return s;
  }
};

namespace detail {

// Sign pattern of a difference sequence, with mixed signs reported as
// Indeterminate: finite data cannot certify monotonicity either way.
inline Tri tri_no_negatives(bool has_pos, bool has_neg) {
  if (!has_neg) return Tri::Yes;
  if (has_pos) return Tri::Indeterminate;
  return Tri::No;
}

inline std::pair<bool, bool> diff_signs(const std::vector<double>& v, double tol) {
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double d = v[i + 1] - v[i];
    if (d > tol) has_pos = true;
    if (d < -tol) has_neg = true;
  }
  return {has_pos, has_neg};
}

inline std::pair<bool, bool> second_diff_signs(const std::vector<double>& v, double tol) {
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double d = v[i + 1] - 2.0 * v[i] + v[i - 1];
    if (d > tol) has_pos = true;
    if (d < -tol) has_neg = true;
  }
  return {has_pos, has_neg};
}

}  // namespace detail

// Classification from finite differences on uniform grids over [1,q]
// (for Phi) and [1,sqrt(q)] (for h). Mixed signs beyond the tolerance are
// reported as Indeterminate rather than guessed.
inline PhiClassification classify_grid(const Phi& phi, double q, int grid_size = 256,
                                       double tol = 1e-12) {
  if (q < 1.0) throw std::invalid_argument("classify: q must be >= 1");
  if (grid_size < 3) throw std::invalid_argument("classify: grid_size must be >= 3");
  PhiClassification c;
  c.grid_size = grid_size;
  if (q <= 1.0 + 1e-15) {
    c.phi_increasing = c.phi_decreasing = Tri::Yes;
    c.h_increasing = c.h_decreasing = Tri::Yes;
    c.h_convex = c.h_concave = Tri::Yes;
    return c;
  }

  std::vector<double> phis(grid_size), hs(grid_size);
  const double sq = std::sqrt(q);
  for (int i = 0; i < grid_size; ++i) {
    const double u = static_cast<double>(i) / (grid_size - 1);
    phis[i] = phi(1.0 + u * (q - 1.0));
    hs[i] = phi.h(1.0 + u * (sq - 1.0));
  }

  auto [pp, pn] = detail::diff_signs(phis, tol);
  c.phi_increasing = detail::tri_no_negatives(pp, pn);
  c.phi_decreasing = detail::tri_no_negatives(pn, pp);

  auto [hp, hn] = detail::diff_signs(hs, tol);
  c.h_increasing = detail::tri_no_negatives(hp, hn);
  c.h_decreasing = detail::tri_no_negatives(hn, hp);

  auto [cp, cn] = detail::second_diff_signs(hs, tol);
  c.h_convex = detail::tri_no_negatives(cp, cn);
  c.h_concave = detail::tri_no_negatives(cn, cp);
  return c;
}

// Power and polynomial kinds classify analytically; tables go through the
// grid. For Phi(t) = t^alpha: h(s) = s^(2 alpha - 2), so h is convex iff
// alpha <= 1 or alpha >= 3/2 and concave iff alpha lies in [1, 3/2].
inline PhiClassification classify(const Phi& phi, double q, int grid_size = 256) {
  if (q < 1.0) throw std::invalid_argument("classify: q must be >= 1");
  if (grid_size < 3) throw std::invalid_argument("classify: grid_size must be >= 3");
  PhiClassification c;
  c.grid_size = grid_size;
  switch (phi.kind()) {
    case Phi::Kind::Power: {
      const double a = phi.alpha();
      c.phi_increasing = a >= 0.0 ? Tri::Yes : Tri::No;
      c.phi_decreasing = a <= 0.0 ? Tri::Yes : Tri::No;
      c.h_increasing = a >= 1.0 ? Tri::Yes : Tri::No;
      c.h_decreasing = a <= 1.0 ? Tri::Yes : Tri::No;
      c.h_convex = (a <= 1.0 || a >= 1.5) ? Tri::Yes : Tri::No;
      c.h_concave = (a >= 1.0 && a <= 1.5) ? Tri::Yes : Tri::No;
      return c;
    }
    case Phi::Kind::Poly: {
      const auto& cf = phi.poly_coeffs();
      auto nonzero = [&](std::size_t j) { return j < cf.size() && cf[j] > 0.0; };
      bool any_high = false;
      for (std::size_t j = 2; j < cf.size(); ++j) any_high = any_high || cf[j] > 0.0;
      bool any_positive_degree = any_high || nonzero(1);
      c.phi_increasing = Tri::Yes;
      c.phi_decreasing = any_positive_degree ? Tri::No : Tri::Yes;
      // h(s) = sum c_j s^(2j-2): the j = 0 term decays, the j >= 2 terms grow.
      c.h_increasing = nonzero(0) ? Tri::No : Tri::Yes;
      c.h_decreasing = any_high ? Tri::No : Tri::Yes;
      c.h_convex = Tri::Yes;
      c.h_concave = (nonzero(0) || any_high) ? Tri::No : Tri::Yes;
      return c;
    }
    case Phi::Kind::Table:
    default:
      return classify_grid(phi, q, grid_size);
  }
}

}  // namespace carleson
