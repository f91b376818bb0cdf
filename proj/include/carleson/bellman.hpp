#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "carleson/phi.hpp"
#include "carleson/quadrature.hpp"

namespace carleson {

// Branch guards around the removable parameter singularities of the
// power-kind closed forms.
inline constexpr double kAlphaBranchTolerance = 1e-9;

namespace detail {

inline void require_s_at_least_one(double s) {
  if (s < 1.0 - 1e-12) throw std::domain_error("candidate: s must be >= 1");
}

inline double a_f_closed_power(double alpha, double s) {
  if (std::abs(alpha) < kAlphaBranchTolerance) return 16.0 * std::log(s);
  return 8.0 / alpha * (std::pow(s, 2.0 * alpha) - 1.0);
}

inline double alf_closed_power(double alpha, double L, double s) {
  if (std::abs(alpha) < kAlphaBranchTolerance) return 16.0 * std::log(s);
  if (std::abs(alpha - 0.5) < kAlphaBranchTolerance)
    return 32.0 * (s - 1.0) - 16.0 * std::log(L) + 16.0 * s * std::log(L / s);
  const double d = 2.0 * alpha - 1.0;
  return 8.0 / (alpha * d) * (1.0 - std::pow(s, 2.0 * alpha)) +
         32.0 * alpha / d * std::pow(L, d) * (s - 1.0);
}

}  // namespace detail

// 16 * integral of f(z)/z over [1,s], by adaptive quadrature on any kind.
inline double a_f_quad(const Phi& phi, double s, double* err_out = nullptr) {
  detail::require_s_at_least_one(s);
  s = std::max(s, 1.0);
  if (s * s > phi.domain_hint() * (1.0 + 1e-12))
    throw std::domain_error("a_f: s^2 beyond the evaluable domain of phi");
  const auto res = integrate([&](double z) { return phi.f(z) / z; }, 1.0, s, 1e-11,
                             phi.knots_s(1.0, s));
  if (err_out) *err_out = 16.0 * res.error;
  return 16.0 * res.value;
}

// Candidate a_f(s); power kind uses the closed form, everything else the
// quadrature path (kept above as an independent oracle).
inline double a_f_eval(const Phi& phi, double s) {
  detail::require_s_at_least_one(s);
  s = std::max(s, 1.0);
  if (s * s > phi.domain_hint() * (1.0 + 1e-12))
    throw std::domain_error("a_f: s^2 beyond the evaluable domain of phi");
  if (phi.kind() == Phi::Kind::Power) return detail::a_f_closed_power(phi.alpha(), s);
  return a_f_quad(phi, s);
}

// 16 [ f(L)/L + int_1^L f(z)/z^2 dz ] (s-1) - 16 int_1^s f(z)/z^2 (s-z) dz.
inline double A_Lf_quad(const Phi& phi, double L, double s, double* err_out = nullptr) {
  detail::require_s_at_least_one(s);
  if (L < 1.0 - 1e-12) throw std::domain_error("A_Lf: L must be >= 1");
  if (s > L * (1.0 + 1e-12)) throw std::domain_error("A_Lf: s must not exceed L");
  s = std::max(s, 1.0);
  L = std::max(L, 1.0);
  s = std::min(s, L);
  if (L * L > phi.domain_hint() * (1.0 + 1e-12))
    throw std::domain_error("A_Lf: L^2 beyond the evaluable domain of phi");
  if (L == 1.0) {
    if (err_out) *err_out = 0.0;
    return 0.0;
  }
  const auto slope = integrate([&](double z) { return phi.f(z) / (z * z); }, 1.0, L, 1e-11,
                               phi.knots_s(1.0, L));
  const auto bend = integrate([&](double z) { return phi.f(z) * (s - z) / (z * z); }, 1.0, s,
                              1e-11, phi.knots_s(1.0, s));
  if (err_out) *err_out = 16.0 * (slope.error * (s - 1.0) + bend.error);
  return 16.0 * (phi.f(L) / L + slope.value) * (s - 1.0) - 16.0 * bend.value;
}

inline double A_Lf_eval(const Phi& phi, double L, double s) {
  detail::require_s_at_least_one(s);
  if (L < 1.0 - 1e-12) throw std::domain_error("A_Lf: L must be >= 1");
  if (s > L * (1.0 + 1e-12)) throw std::domain_error("A_Lf: s must not exceed L");
  s = std::max(s, 1.0);
  L = std::max(L, 1.0);
  s = std::min(s, L);
  if (L == 1.0) return 0.0;
  if (phi.kind() == Phi::Kind::Power) return detail::alf_closed_power(phi.alpha(), L, s);
  return A_Lf_quad(phi, L, s);
}

// Tangency abscissa for the concave-h upper estimate:
// s0(s) = (9 L^2 - s^2 - s - 1) / (3 (4L - s - 1)); lies in (1, L].
inline double s0_of(double L, double s) {
  if (L <= 1.0) throw std::domain_error("s0_of: requires L > 1");
  detail::require_s_at_least_one(s);
  if (s > L * (1.0 + 1e-12)) throw std::domain_error("s0_of: s must not exceed L");
  return (9.0 * L * L - s * s - s - 1.0) / (3.0 * (4.0 * L - s - 1.0));
}

// Upper estimate for concave h: 8 (s-1) (4L - s - 1) h(s0(s)). This is a
// bound, not the extremal value; callers flag it as such.
inline double concave_upper_bound(const Phi& phi, double L, double s) {
  detail::require_s_at_least_one(s);
  if (s > L * (1.0 + 1e-12)) throw std::domain_error("concave bound: s must not exceed L");
  s = std::max(s, 1.0);
  if (L <= 1.0 || s == 1.0) return 0.0;
  return 8.0 * (s - 1.0) * (4.0 * L - s - 1.0) * phi.h(s0_of(L, s));
}

// Case-dispatched sharp constant (or bound). `tag` names the hypothesis
// branch that fired; `bound_only` marks the concave-h estimate.
struct ConstantCase {
  double value = 0.0;
  std::string tag;
  bool bound_only = false;
  double quad_err = 0.0;
};

// Largest Carleson norm over weights with characteristic exactly q.
// Branches: decreasing Phi integrates Phi(y)/y; increasing Phi with convex
// h evaluates the corner value of the full candidate; increasing Phi with
// concave h yields only the tangent bound.
inline ConstantCase K_of(const Phi& phi, double q, int grid_size = 256) {
  if (q < 1.0) throw std::domain_error("K: q must be >= 1");
  if (q > phi.domain_hint() * (1.0 + 1e-12))
    throw std::domain_error("K: q beyond the evaluable domain of phi");
  if (q <= 1.0 + 1e-15) return {0.0, "q=1", false, 0.0};

  const PhiClassification cls = classify(phi, q, grid_size);
  if (cls.phi_decreasing == Tri::Yes) {
    const auto res = integrate([&](double y) { return phi(y) / y; }, 1.0, q, 1e-11,
                               phi.knots_t(1.0, q));
    return {8.0 * res.value, "phi-decreasing", false, 8.0 * res.error};
  }
  if (cls.phi_increasing == Tri::Yes && cls.h_convex == Tri::Yes) {
    const double sq = std::sqrt(q);
    const auto res = integrate([&](double y) { return phi(y) / y * (1.0 - 1.0 / std::sqrt(y)); },
                               1.0, q, 1e-11, phi.knots_t(1.0, q));
    return {16.0 * phi(q) * (1.0 - 1.0 / sq) + 8.0 * res.value, "phi-increasing-h-convex",
            false, 8.0 * res.error};
  }
  if (cls.phi_increasing == Tri::Yes && cls.h_concave == Tri::Yes) {
    const double sq = std::sqrt(q);
    return {concave_upper_bound(phi, sq, sq), "phi-increasing-h-concave-bound", true, 0.0};
  }
  throw std::domain_error("K: classification matches no case (" + cls.describe() + ")");
}

// Smallest Carleson norm over weights with characteristic exactly q.
inline ConstantCase k_of(const Phi& phi, double q, int grid_size = 256) {
  if (q < 1.0) throw std::domain_error("k: q must be >= 1");
  if (q > phi.domain_hint() * (1.0 + 1e-12))
    throw std::domain_error("k: q beyond the evaluable domain of phi");
  if (q <= 1.0 + 1e-15) return {0.0, "q=1", false, 0.0};

  const PhiClassification cls = classify(phi, q, grid_size);
  if (cls.h_increasing == Tri::Yes) {
    const auto res = integrate([&](double y) { return phi(y) / y; }, 1.0, q, 1e-11,
                               phi.knots_t(1.0, q));
    return {8.0 * res.value, "h-increasing", false, 8.0 * res.error};
  }
  if (cls.h_decreasing == Tri::Yes) {
    return {8.0 * phi(q) * (1.0 - 1.0 / q), "h-decreasing", false, 0.0};
  }
  throw std::domain_error("k: h is not monotone (" + cls.describe() + ")");
}

// True only on the open interval where the power-kind upper constant is an
// interpolated bound rather than an exact value.
inline bool K_alpha_is_bound(double alpha) {
  return alpha > 1.0 + kAlphaBranchTolerance && alpha < 1.5 - kAlphaBranchTolerance;
}

// Closed forms of the upper constant for Phi(t) = t^alpha.
inline double K_alpha(double alpha, double q) {
  if (q < 1.0) throw std::domain_error("K_alpha: q must be >= 1");
  if (K_alpha_is_bound(alpha)) {
    const double k1 = K_alpha(1.0, q);
    const double k32 = K_alpha(1.5, q);
    return std::pow(k1, 3.0 - 2.0 * alpha) * std::pow(k32, 2.0 * alpha - 2.0);
  }
  if (std::abs(alpha) < kAlphaBranchTolerance) return 8.0 * std::log(q);
  if (std::abs(alpha - 0.5) < kAlphaBranchTolerance)
    return 32.0 * std::sqrt(q) - 8.0 * std::log(q) - 32.0;
  if (alpha < 0.0) return 8.0 / alpha * (std::pow(q, alpha) - 1.0);
  const double d = 2.0 * alpha - 1.0;
  return 8.0 * (2.0 * alpha + 1.0) / alpha * std::pow(q, alpha) -
         32.0 * alpha / d * std::pow(q, alpha - 0.5) + 8.0 / (alpha * d);
}

// Closed forms of the lower constant for Phi(t) = t^alpha.
inline double k_alpha(double alpha, double q) {
  if (q < 1.0) throw std::domain_error("k_alpha: q must be >= 1");
  if (alpha >= 1.0) return 8.0 / alpha * (std::pow(q, alpha) - 1.0);
  return 8.0 * (std::pow(q, alpha) - std::pow(q, alpha - 1.0));
}

// u(Q) = (8/Q) int_1^Q Phi(t) dt, the norm threshold whose inverse bounds
// the characteristic of any weight with a Carleson sequence.
inline double u_of(const Phi& phi, double q) {
  if (q < 1.0) throw std::domain_error("u: q must be >= 1");
  if (q > phi.domain_hint() * (1.0 + 1e-12))
    throw std::domain_error("u: q beyond the evaluable domain of phi");
  const auto res = integrate([&](double t) { return phi(t); }, 1.0, q, 1e-11,
                             phi.knots_t(1.0, q));
  return 8.0 / q * res.value;
}

// Bracketed bisection for the Q >= 1 with u(Q) = norm; norms at or below
// u(1) = 0 clamp to 1.
inline double u_inverse(const Phi& phi, double norm) {
  if (!(std::isfinite(norm))) throw std::domain_error("u_inverse: norm must be finite");
  if (norm <= 0.0) return 1.0;
  double lo = 1.0, hi = 2.0;
  double prev = 0.0;
  while (true) {
    const double val = u_of(phi, hi);
    if (val >= norm) break;
    if (val <= prev * (1.0 + 1e-14))
      throw std::runtime_error("u_inverse: u is not increasing on the search bracket");
    prev = val;
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("u_inverse: bracket exhausted; u stays below norm");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (u_of(phi, mid) < norm ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Evaluation record for one candidate at one point.
struct BellmanReport {
  double q = 1.0;
  double s = 1.0;
  std::string candidate;  // "af", "alf", or "concave_bound"
  double value = 0.0;
  std::string case_used;
  bool bound_only = false;
  double quad_err = 0.0;
};

// Paired constants at one q.
struct ConstantsReport {
  double q = 1.0;
  double upper_K = 0.0;
  bool upper_is_bound = false;
  std::string upper_case;
  double lower_k = 0.0;
  std::string lower_case;
};

inline ConstantsReport constants_for(const Phi& phi, double q, int grid_size = 256) {
  const ConstantCase up = K_of(phi, q, grid_size);
  const ConstantCase lo = k_of(phi, q, grid_size);
  return {q, up.value, up.bound_only, up.tag, lo.value, lo.tag};
}

}  // namespace carleson
