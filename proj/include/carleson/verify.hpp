#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "carleson/bellman.hpp"
#include "carleson/dyadic.hpp"
#include "carleson/optimizers.hpp"
#include "carleson/phi.hpp"
#include "carleson/rng.hpp"

namespace carleson {

// Split configuration (s^-, s^+, s). The admissible set requires
// s >= (s^- + s^+)/2; the bounded variant additionally caps all three
// coordinates at L.
struct OmegaLPoint {
  double s_minus = 1.0;
  double s_plus = 1.0;
  double s = 1.0;

  bool admissible(double cap = std::numeric_limits<double>::infinity()) const {
    return s_minus >= 1.0 && s_plus >= 1.0 && s >= 0.5 * (s_minus + s_plus) - 1e-14 &&
           s_minus <= cap && s_plus <= cap && s <= cap;
  }
};

// U = A(s) - A(s^-)/2 - A(s^+)/2 - 8 f(s) [1 - s^- s^+ / s^2], A = A_{L,f}.
// Non-negative on the bounded domain when f is increasing and h convex.
inline double eval_U(const Phi& phi, double L, const OmegaLPoint& p) {
  if (!p.admissible(L * (1.0 + 1e-12))) throw std::domain_error("U: point outside the domain");
  const double a_s = A_Lf_eval(phi, L, p.s);
  const double a_m = A_Lf_eval(phi, L, p.s_minus);
  const double a_p = A_Lf_eval(phi, L, p.s_plus);
  return a_s - 0.5 * (a_m + a_p) - 8.0 * phi.f(p.s) * (1.0 - p.s_minus * p.s_plus / (p.s * p.s));
}

// Same combination built on a_f; non-negative on the unbounded domain for
// decreasing Phi.
inline double eval_V(const Phi& phi, const OmegaLPoint& p) {
  if (!p.admissible()) throw std::domain_error("V: point outside the domain");
  const double a_s = a_f_eval(phi, p.s);
  const double a_m = a_f_eval(phi, p.s_minus);
  const double a_p = a_f_eval(phi, p.s_plus);
  return a_s - 0.5 * (a_m + a_p) - 8.0 * phi.f(p.s) * (1.0 - p.s_minus * p.s_plus / (p.s * p.s));
}

// W = a(s) - a(s^-)/2 - a(s^+)/2 - 4 f(s) [2 - ((s^-)^2 + (s^+)^2)/s^2].
// Non-positive on the unbounded domain for increasing h.
inline double eval_W(const Phi& phi, const OmegaLPoint& p) {
  if (!p.admissible()) throw std::domain_error("W: point outside the domain");
  const double a_s = a_f_eval(phi, p.s);
  const double a_m = a_f_eval(phi, p.s_minus);
  const double a_p = a_f_eval(phi, p.s_plus);
  const double sm2 = p.s_minus * p.s_minus;
  const double sp2 = p.s_plus * p.s_plus;
  return a_s - 0.5 * (a_m + a_p) - 4.0 * phi.f(p.s) * (2.0 - (sm2 + sp2) / (p.s * p.s));
}

enum class CandidateKind { AF, ALF };

// The exact two-point remainder with the full quadratic bracket:
// P = cal(s) - cal(s^-)/2 - cal(s^+)/2
//     - f(s) [8 - 4((s^-)^2+(s^+)^2)/s^2 + ((s^-)^2-(s^+)^2)^2/s^4].
// Dominates U from above and W from below on their shared domains.
inline double eval_P(CandidateKind cand, const Phi& phi, double L, const OmegaLPoint& p) {
  const double cap = cand == CandidateKind::ALF ? L * (1.0 + 1e-12)
                                                : std::numeric_limits<double>::infinity();
  if (!p.admissible(cap)) throw std::domain_error("P: point outside the domain");
  auto cal = [&](double s) {
    return cand == CandidateKind::ALF ? A_Lf_eval(phi, L, s) : a_f_eval(phi, s);
  };
  const double a_s = cal(p.s);
  const double a_m = cal(p.s_minus);
  const double a_p = cal(p.s_plus);
  const double s2 = p.s * p.s;
  const double sm2 = p.s_minus * p.s_minus;
  const double sp2 = p.s_plus * p.s_plus;
  const double diff2 = (sm2 - sp2) * (sm2 - sp2);
  return a_s - 0.5 * (a_m + a_p) -
         phi.f(p.s) * (8.0 - 4.0 * (sm2 + sp2) / s2 + diff2 / (s2 * s2));
}

enum class SweepFunctional { U, V, W, PUpper, PLower };

inline const char* to_string(SweepFunctional f) {
  switch (f) {
    case SweepFunctional::U: return "U";
    case SweepFunctional::V: return "V";
    case SweepFunctional::W: return "W";
    case SweepFunctional::PUpper: return "P_upper";
    default: return "P_lower";
  }
}

struct SweepOptions {
  int grid = 50;               // lattice points per axis
  long long random_samples = 0;
  std::uint64_t seed = 1;
  double tolerance = 1e-12;
  double omega_inf_mult = 3.0;  // axis cap for the unbounded domain, in units of L
};

struct VerificationReport {
  std::string functional;
  double extremal = 0.0;  // min for >=0 claims, max for <=0 claims
  OmegaLPoint witness{};
  bool passed = false;
  long long samples = 0;
  double tolerance = 0.0;
  std::string grid_desc;
};

// Lattice plus seeded random sweep of a sign claim. Inadmissible lattice
// nodes are skipped, not clamped; random points are drawn admissible by
// construction from (seed, index) so the scan order never matters. The
// extremal witness is the first attaining node in scan order.
inline VerificationReport sweep(SweepFunctional fn, const Phi& phi, double L,
                                const SweepOptions& opt) {
  if (opt.grid < 2) throw std::invalid_argument("sweep: need at least 2 lattice points per axis");
  const bool bounded = fn == SweepFunctional::U || fn == SweepFunctional::PUpper;
  const bool wants_min = fn == SweepFunctional::U || fn == SweepFunctional::V ||
                         fn == SweepFunctional::PUpper;
  const double hi = bounded ? L : opt.omega_inf_mult * L;
  if (hi <= 1.0) throw std::invalid_argument("sweep: degenerate axis range");

  std::vector<double> axis(static_cast<std::size_t>(opt.grid));
  for (int i = 0; i < opt.grid; ++i)
    axis[static_cast<std::size_t>(i)] = 1.0 + (hi - 1.0) * static_cast<double>(i) / (opt.grid - 1);

  const bool uses_alf = bounded;
  std::vector<double> cand(axis.size()), fvals(axis.size());
  for (std::size_t i = 0; i < axis.size(); ++i) {
    cand[i] = uses_alf ? A_Lf_eval(phi, L, axis[i]) : a_f_eval(phi, axis[i]);
    fvals[i] = phi.f(axis[i]);
  }

  auto value_at = [&](double sm, double sp, double s, double c_m, double c_p, double c_s,
                      double f_s) {
    switch (fn) {
      case SweepFunctional::U:
      case SweepFunctional::V:
        return c_s - 0.5 * (c_m + c_p) - 8.0 * f_s * (1.0 - sm * sp / (s * s));
      case SweepFunctional::W:
        return c_s - 0.5 * (c_m + c_p) - 4.0 * f_s * (2.0 - (sm * sm + sp * sp) / (s * s));
      case SweepFunctional::PUpper:
      case SweepFunctional::PLower:
      default: {
        const double s2 = s * s;
        const double sm2 = sm * sm, sp2 = sp * sp;
        const double d2 = (sm2 - sp2) * (sm2 - sp2);
        return c_s - 0.5 * (c_m + c_p) - f_s * (8.0 - 4.0 * (sm2 + sp2) / s2 + d2 / (s2 * s2));
      }
    }
  };

  VerificationReport rep;
  rep.functional = to_string(fn);
  rep.tolerance = opt.tolerance;
  rep.extremal = wants_min ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();

  auto consider = [&](double v, double sm, double sp, double s) {
    ++rep.samples;
    const bool better = wants_min ? v < rep.extremal : v > rep.extremal;
    if (better) {
      rep.extremal = v;
      rep.witness = {sm, sp, s};
    }
  };

  for (std::size_t i = 0; i < axis.size(); ++i) {
    for (std::size_t j = 0; j < axis.size(); ++j) {
      const double mid = 0.5 * (axis[i] + axis[j]);
      for (std::size_t k = 0; k < axis.size(); ++k) {
        if (axis[k] < mid - 1e-14) continue;
        consider(value_at(axis[i], axis[j], axis[k], cand[i], cand[j], cand[k], fvals[k]),
                 axis[i], axis[j], axis[k]);
      }
    }
  }

  auto cand_at = [&](double s) { return uses_alf ? A_Lf_eval(phi, L, s) : a_f_eval(phi, s); };
  for (long long t = 0; t < opt.random_samples; ++t) {
    const std::uint64_t base = 3 * static_cast<std::uint64_t>(t);
    const double sm = 1.0 + (hi - 1.0) * uniform01(opt.seed, base);
    const double sp = 1.0 + (hi - 1.0) * uniform01(opt.seed, base + 1);
    const double mid = 0.5 * (sm + sp);
    const double s = mid + (hi - mid) * uniform01(opt.seed, base + 2);
    consider(value_at(sm, sp, s, cand_at(sm), cand_at(sp), cand_at(s), phi.f(s)), sm, sp, s);
  }

  if (rep.samples == 0) throw std::runtime_error("sweep: admissible set is empty");
  rep.passed = wants_min ? rep.extremal >= -opt.tolerance : rep.extremal <= opt.tolerance;
  rep.grid_desc = std::to_string(opt.grid) + "^3 lattice on [1," +
                  std::to_string(hi) + "] + " + std::to_string(opt.random_samples) +
                  " random points";
  return rep;
}

enum class InductionSide { Upper, Lower };

// Per-node two-point inequality for the chosen candidate, plus the
// telescoped consequence for the whole Carleson sum.
struct InductionReport {
  std::string functional;
  bool passed = false;
  double worst_residual = 0.0;  // most violating node residual
  DyadicInterval worst_node{};
  double sum = 0.0;             // Carleson sum of the weight
  double candidate_at_root = 0.0;
  double node_tolerance = 0.0;
  double sum_tolerance = 0.0;
};

inline InductionReport check_induction(const DyadicWeight& w, const Phi& phi, double L,
                                       InductionSide side, double node_tol = 1e-10,
                                       double sum_tol = 1e-9) {
  const double cap = L * L * (1.0 + 1e-12);
  if (a2_characteristic(w) > cap)
    throw std::invalid_argument("check_induction: characteristic exceeds L^2");

  const bool upper = side == InductionSide::Upper;
  auto candidate = [&](double prod) {
    const double s = std::sqrt(std::max(prod, 1.0));
    return upper ? A_Lf_eval(phi, L, std::min(s, L)) : a_f_eval(phi, s);
  };

  InductionReport rep;
  rep.functional = upper ? "induction_upper" : "induction_lower";
  rep.node_tolerance = node_tol;
  rep.sum_tolerance = sum_tol;
  rep.worst_residual = upper ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();

  struct Node {
    double mw, mi, csub, bell;
  };
  auto rec = [&](auto&& self, int d, std::uint64_t i) -> Node {
    if (d == w.depth()) {
      const double v = w.values()[i];
      return {v, 1.0 / v, 0.0, candidate(v * (1.0 / v))};
    }
    const Node l = self(self, d + 1, 2 * i);
    const Node r = self(self, d + 1, 2 * i + 1);
    Node n;
    n.mw = 0.5 * (l.mw + r.mw);
    n.mi = 0.5 * (l.mi + r.mi);
    const double dw = l.mw - r.mw;
    const double di = l.mi - r.mi;
    const double rj = (dw / n.mw) * (dw / n.mw) + (di / n.mi) * (di / n.mi);
    const double prod = n.mw * n.mi;
    n.bell = candidate(prod);
    n.csub = l.csub + r.csub + std::ldexp(1.0, -d) * phi(std::max(prod, 1.0)) * rj;
    const double residual = n.bell - 0.5 * (l.bell + r.bell) - phi(std::max(prod, 1.0)) * rj;
    const bool worse = upper ? residual < rep.worst_residual : residual > rep.worst_residual;
    if (worse) {
      rep.worst_residual = residual;
      rep.worst_node = {d, i};
    }
    return n;
  };

  if (w.depth() == 0) {
    rep.worst_residual = 0.0;
    rep.sum = 0.0;
    rep.candidate_at_root = candidate(1.0);
    rep.passed = true;
    return rep;
  }

  const Node root = rec(rec, 0, 0);
  rep.sum = root.csub;
  rep.candidate_at_root = root.bell;
  const bool nodes_ok = upper ? rep.worst_residual >= -node_tol : rep.worst_residual <= node_tol;
  const bool sum_ok = upper ? rep.sum <= rep.candidate_at_root + sum_tol
                            : rep.sum >= rep.candidate_at_root - sum_tol;
  rep.passed = nodes_ok && sum_ok;
  return rep;
}

// Non-negative step function at a weight's resolution; the admissible test
// data for the embedding inequality.
struct StepFunction {
  int depth = 0;
  std::vector<double> values;

  void validate() const {
    if (depth < 0 || depth > kMaxDepth) throw std::invalid_argument("step function: bad depth");
    if (values.size() != (std::size_t{1} << depth))
      throw std::invalid_argument("step function: value count does not match depth");
    for (double v : values) {
      if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument("step function: values must be non-negative");
    }
  }
};

struct SlackReport {
  std::string functional;
  bool passed = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

// sum_J c_J inf_J F <= ||{c_J}|| * integral of F, for the finite dyadic family.
inline SlackReport check_embedding(const DyadicWeight& w, const Phi& phi,
                                   const StepFunction& f) {
  f.validate();
  if (f.depth != w.depth())
    throw std::invalid_argument("check_embedding: F must live at the weight's depth");

  struct Node {
    double mw, mi, min_f, lhs;
  };
  auto rec = [&](auto&& self, int d, std::uint64_t i) -> Node {
    if (d == w.depth()) {
      const double v = w.values()[i];
      return {v, 1.0 / v, f.values[i], 0.0};
    }
    const Node l = self(self, d + 1, 2 * i);
    const Node r = self(self, d + 1, 2 * i + 1);
    Node n;
    n.mw = 0.5 * (l.mw + r.mw);
    n.mi = 0.5 * (l.mi + r.mi);
    n.min_f = std::min(l.min_f, r.min_f);
    const double dw = l.mw - r.mw;
    const double di = l.mi - r.mi;
    const double rj = (dw / n.mw) * (dw / n.mw) + (di / n.mi) * (di / n.mi);
    const double c = std::ldexp(1.0, -d) * phi(std::max(n.mw * n.mi, 1.0)) * rj;
    n.lhs = l.lhs + r.lhs + c * n.min_f;
    return n;
  };

  double mean_f = 0.0;
  for (double v : f.values) mean_f += v;
  mean_f /= static_cast<double>(f.values.size());

  SlackReport rep;
  rep.functional = "embedding";
  rep.lhs = w.depth() == 0 ? 0.0 : rec(rec, 0, 0).lhs;
  rep.rhs = carleson_norm_local(w, phi) * mean_f;
  rep.slack = rep.rhs - rep.lhs;
  rep.passed = rep.slack >= -1e-12 * std::max(1.0, std::abs(rep.rhs));
  return rep;
}

// sum_J c_J <w^-1>_J^(-gamma) <= e * ||{c_J}|| * <w^gamma> over (0,1).
inline SlackReport check_leb(const DyadicWeight& w, const Phi& phi, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("check_leb: gamma must be >= 0");

  struct Node {
    double mw, mi, lhs;
  };
  auto rec = [&](auto&& self, int d, std::uint64_t i) -> Node {
    if (d == w.depth()) {
      const double v = w.values()[i];
      return {v, 1.0 / v, 0.0};
    }
    const Node l = self(self, d + 1, 2 * i);
    const Node r = self(self, d + 1, 2 * i + 1);
    Node n;
    n.mw = 0.5 * (l.mw + r.mw);
    n.mi = 0.5 * (l.mi + r.mi);
    const double dw = l.mw - r.mw;
    const double di = l.mi - r.mi;
    const double rj = (dw / n.mw) * (dw / n.mw) + (di / n.mi) * (di / n.mi);
    const double c = std::ldexp(1.0, -d) * phi(std::max(n.mw * n.mi, 1.0)) * rj;
    n.lhs = l.lhs + r.lhs + c * std::pow(n.mi, -gamma);
    return n;
  };

  double mean_pow = 0.0;
  for (double v : w.values()) mean_pow += std::pow(v, gamma);
  mean_pow /= static_cast<double>(w.leaf_count());

  SlackReport rep;
  rep.functional = "leb";
  rep.lhs = w.depth() == 0 ? 0.0 : rec(rec, 0, 0).lhs;
  rep.rhs = std::exp(1.0) * carleson_norm_local(w, phi) * mean_pow;
  rep.slack = rep.rhs - rep.lhs;
  rep.passed = rep.slack >= -1e-12 * std::max(1.0, std::abs(rep.rhs));
  return rep;
}

// sum_J |J| <w>^alpha <w^-1>^beta R_J <= e * K_alpha([w]) * <w^(alpha-beta)>.
inline SlackReport check_corr3(const DyadicWeight& w, double alpha, double beta) {
  if (!(alpha > beta)) throw std::invalid_argument("check_corr3: requires alpha > beta");

  struct Node {
    double mw, mi, lhs;
  };
  auto rec = [&](auto&& self, int d, std::uint64_t i) -> Node {
    if (d == w.depth()) {
      const double v = w.values()[i];
      return {v, 1.0 / v, 0.0};
    }
    const Node l = self(self, d + 1, 2 * i);
    const Node r = self(self, d + 1, 2 * i + 1);
    Node n;
    n.mw = 0.5 * (l.mw + r.mw);
    n.mi = 0.5 * (l.mi + r.mi);
    const double dw = l.mw - r.mw;
    const double di = l.mi - r.mi;
    const double rj = (dw / n.mw) * (dw / n.mw) + (di / n.mi) * (di / n.mi);
    n.lhs = l.lhs + r.lhs +
            std::ldexp(1.0, -d) * std::pow(n.mw, alpha) * std::pow(n.mi, beta) * rj;
    return n;
  };

  double mean_pow = 0.0;
  for (double v : w.values()) mean_pow += std::pow(v, alpha - beta);
  mean_pow /= static_cast<double>(w.leaf_count());

  SlackReport rep;
  rep.functional = "corr3";
  rep.lhs = w.depth() == 0 ? 0.0 : rec(rec, 0, 0).lhs;
  rep.rhs = std::exp(1.0) * K_alpha(alpha, a2_characteristic(w)) * mean_pow;
  rep.slack = rep.rhs - rep.lhs;
  rep.passed = rep.slack >= -1e-12 * std::max(1.0, std::abs(rep.rhs));
  return rep;
}

struct ConvergenceRow {
  long long n = 0;
  double sum = 0.0;
  double target = 0.0;
  double abs_err = 0.0;
};

inline std::vector<ConvergenceRow> convergence_af(const Phi& phi, double s,
                                                  const std::vector<long long>& ns) {
  const double target = a_f_eval(phi, s);
  std::vector<ConvergenceRow> rows;
  rows.reserve(ns.size());
  for (long long n : ns) {
    AfOptimizerParams p{s, static_cast<int>(n)};
    const double sum = af_sum_analytic(p, phi);
    rows.push_back({n, sum, target, std::abs(sum - target)});
  }
  return rows;
}

// Rows are labelled by ladder size 2^(N+n); each requested size must be a
// power of two at least 2^(N+1).
inline std::vector<ConvergenceRow> convergence_alf(const Phi& phi, double L, int N, int m,
                                                   const std::vector<long long>& ladder_sizes) {
  std::vector<ConvergenceRow> rows;
  rows.reserve(ladder_sizes.size());
  for (long long size : ladder_sizes) {
    int exponent = 0;
    while ((std::int64_t{1} << exponent) < size) ++exponent;
    if ((std::int64_t{1} << exponent) != size || exponent <= N)
      throw std::invalid_argument("convergence_alf: ladder size must be a power of two > 2^N");
    AlfOptimizerParams p{L, N, m, exponent - N};
    const double target = A_Lf_eval(phi, L, p.s());
    const auto sigma = alf_sigma_solve(p, phi);
    const double sum = sigma[static_cast<std::size_t>(p.k_star())];
    rows.push_back({size, sum, target, std::abs(sum - target)});
  }
  return rows;
}

// Log-log regression slope of abs_err against n; rows whose error already
// sits at the floor (exact constructions) are excluded. NaN when fewer
// than two usable rows remain.
inline double empirical_order(const std::vector<ConvergenceRow>& rows) {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    if (r.abs_err > 1e-14 * std::max(1.0, std::abs(r.target))) {
      xs.push_back(std::log(static_cast<double>(r.n)));
      ys.push_back(std::log(r.abs_err));
    }
  }
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return -num / den;
}

}  // namespace carleson
