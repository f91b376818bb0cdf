#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "carleson/dyadic.hpp"
#include "carleson/phi.hpp"

namespace carleson {

// Two-value weight with averages (x1, q/x1) and characteristic exactly q;
// both leaves sit on the boundary x1*x2 = 1, so the whole Carleson sum is
// the single root term 8 Phi(q) (1 - 1/q).
inline DyadicWeight two_step(double x1, double q) {
  if (!(x1 > 0.0) || !std::isfinite(x1)) throw std::invalid_argument("two_step: x1 must be positive");
  if (q < 1.0) throw std::invalid_argument("two_step: q must be >= 1");
  const double u = q > 1.0 ? std::sqrt(1.0 - 1.0 / q) : 0.0;
  return DyadicWeight(1, {x1 * (1.0 - u), x1 * (1.0 + u)});
}

// Tangential-split construction targeting root averages (s, s). Stage k
// lives at the point (s_k, s_k) with s_k^2 = s^2 (1 - k/n) + k/n, so the
// squares descend in equal steps delta^2 = (s^2 - 1)/n down to 1.
struct AfOptimizerParams {
  double s = 1.0;
  int n = 1;

  void validate() const {
    if (s < 1.0) throw std::domain_error("af optimizer: s must be >= 1");
    if (n < 1) throw std::invalid_argument("af optimizer: n must be >= 1");
  }
  double delta() const { return std::sqrt((s * s - 1.0) / n); }
  double s_k(int k) const {
    const double t = static_cast<double>(k) / n;
    return std::sqrt(s * s * (1.0 - t) + t);
  }
};

// Materializes the depth-n weight: stage n is the constant 1, and stage k
// concatenates two rescaled copies of stage k+1 with factors
// s_{k+1}/(s_k + delta) on the left and s_{k+1}/(s_k - delta) on the right,
// which keeps both averages equal to s_k at every stage.
inline DyadicWeight af_optimizer(const AfOptimizerParams& p) {
  p.validate();
  if (p.n > kMaxDepth) throw std::invalid_argument("af optimizer: n exceeds the depth cap");
  const double d = p.delta();
  std::vector<double> v{1.0};
  for (int k = p.n - 1; k >= 0; --k) {
    const double sk = p.s_k(k);
    const double sk1 = p.s_k(k + 1);
    const double cl = sk1 / (sk + d);
    const double cr = sk1 / (sk - d);
    std::vector<double> next(2 * v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      next[i] = cl * v[i];
      next[v.size() + i] = cr * v[i];
    }
    v = std::move(next);
  }
  return DyadicWeight(p.n, std::move(v));
}

// Stage-sum identity: the full Carleson sum of the construction equals
// 8 sum_{k<n} Phi(s_k^2) delta^2 / s_k^2, a Riemann sum of a_f(s).
inline double af_sum_analytic(const AfOptimizerParams& p, const Phi& phi) {
  p.validate();
  const double d2 = (p.s * p.s - 1.0) / p.n;
  double acc = 0.0;
  for (int k = 0; k < p.n; ++k) {
    const double sk2 = p.s * p.s * (1.0 - static_cast<double>(k) / p.n) +
                       static_cast<double>(k) / p.n;
    acc += phi(std::max(sk2, 1.0)) * d2 / sk2;
  }
  return 8.0 * acc;
}

// Normal-split ladder for the full candidate: s_k = L - k*delta with
// delta = 2^(-N-n) (L-1), so the ladder has 2^(N+n) steps from L down to 1
// and the target index k* = m 2^n sits at s = L - m 2^(-N) (L-1).
struct AlfOptimizerParams {
  double L = 2.0;
  int N = 0;
  int m = 1;
  int n = 1;

  void validate() const {
    if (L <= 1.0) throw std::domain_error("alf optimizer: L must exceed 1");
    if (N < 0 || n < 1) throw std::invalid_argument("alf optimizer: need N >= 0 and n >= 1");
    if (N + n > 30) throw std::invalid_argument("alf optimizer: ladder size cap exceeded");
    if (m < 0 || static_cast<std::int64_t>(m) > (std::int64_t{1} << N))
      throw std::invalid_argument("alf optimizer: m must lie in [0, 2^N]");
  }
  std::int64_t ladder_size() const { return std::int64_t{1} << (N + n); }
  double delta() const { return (L - 1.0) / static_cast<double>(ladder_size()); }
  double s_at(std::int64_t k) const { return L - static_cast<double>(k) * delta(); }
  std::int64_t k_star() const { return static_cast<std::int64_t>(m) << n; }
  double s() const { return s_at(k_star()); }
  // Magnitude of the boundary tangential split: delta*^2 = L^2 - s_1^2.
  double delta_star() const {
    const double s1 = s_at(1);
    return std::sqrt(L * L - s1 * s1);
  }
};

// Exact solve of the stage-sum system
//   Sigma_k = 1/2 Sigma_{k-1} + 1/2 Sigma_{k+1} + 8 h(s_k) delta^2,
//   Sigma_M = 0,  Sigma_0 = Sigma_1 + 8 (L^2 - s_1^2) h(L),
// by forward elimination on the increments D_k = Sigma_k - Sigma_{k+1}.
inline std::vector<double> alf_sigma_solve(const AlfOptimizerParams& p, const Phi& phi) {
  p.validate();
  const std::int64_t M = p.ladder_size();
  const double d = p.delta();
  const double g0 = 8.0 * (p.L * p.L - p.s_at(1) * p.s_at(1)) * phi.h(p.L);

  std::vector<double> incr(static_cast<std::size_t>(M));
  double running = g0;
  incr[0] = running;
  for (std::int64_t k = 1; k < M; ++k) {
    running += 16.0 * phi.h(p.s_at(k)) * d * d;
    incr[static_cast<std::size_t>(k)] = running;
  }
  std::vector<double> sigma(static_cast<std::size_t>(M) + 1);
  sigma[static_cast<std::size_t>(M)] = 0.0;
  for (std::int64_t k = M - 1; k >= 0; --k) {
    sigma[static_cast<std::size_t>(k)] =
        sigma[static_cast<std::size_t>(k) + 1] + incr[static_cast<std::size_t>(k)];
  }
  return sigma;
}

// Closed form of the same solution:
// Sigma_k = 8 (s_k - 1)(2L - delta) h(L)
//           + 16 [ sum_{j<M} (s_j - 1) h(s_j) delta - sum_{j<=k} (s_j - s_k) h(s_j) delta ],
// with the second sum empty at k = 0.
inline double alf_sigma_closed(const AlfOptimizerParams& p, const Phi& phi, std::int64_t k) {
  p.validate();
  const std::int64_t M = p.ladder_size();
  if (k < 0 || k > M) throw std::out_of_range("alf sigma: index outside the ladder");
  const double d = p.delta();
  const double sk = p.s_at(k);
  double tail = 0.0, local = 0.0;
  for (std::int64_t j = 1; j < M; ++j) {
    const double sj = p.s_at(j);
    const double hj = phi.h(sj);
    tail += (sj - 1.0) * hj * d;
    if (j <= k) local += (sj - sk) * hj * d;
  }
  return 8.0 * (sk - 1.0) * (2.0 * p.L - d) * phi.h(p.L) + 16.0 * (tail - local);
}

namespace detail {

using LeafVector = std::shared_ptr<const std::vector<double>>;

struct AlfBuilder {
  const AlfOptimizerParams& p;
  std::int64_t M;
  std::map<std::pair<std::int64_t, int>, LeafVector> memo;

  LeafVector build(std::int64_t k, int depth) {
    const auto key = std::make_pair(k, depth);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    LeafVector out;
    if (k == M) {
      out = std::make_shared<std::vector<double>>(std::size_t{1} << depth, 1.0);
    } else if (depth == 0) {
      out = std::make_shared<std::vector<double>>(1, p.s_at(k));
    } else if (k == 0) {
      const LeafVector child = build(1, depth - 1);
      const double s1 = p.s_at(1);
      const double ds = p.delta_star();
      const double cl = s1 / (p.L + ds);
      const double cr = s1 / (p.L - ds);
      auto v = std::make_shared<std::vector<double>>(std::size_t{1} << depth);
      for (std::size_t i = 0; i < child->size(); ++i) {
        (*v)[i] = cl * (*child)[i];
        (*v)[child->size() + i] = cr * (*child)[i];
      }
      out = v;
    } else {
      const LeafVector left = build(k - 1, depth - 1);
      const LeafVector right = build(k + 1, depth - 1);
      auto v = std::make_shared<std::vector<double>>(std::size_t{1} << depth);
      std::copy(left->begin(), left->end(), v->begin());
      std::copy(right->begin(), right->end(), v->begin() + left->size());
      out = v;
    }
    memo.emplace(key, out);
    return out;
  }
};

}  // namespace detail

// Finite-depth truncation of the stage-k weight. Truncated subtrees are
// replaced by their constant average s_k, so the root average of w is
// exact at every depth while the average of w^-1 converges from below as
// the depth grows.
inline DyadicWeight alf_materialize(const AlfOptimizerParams& p, std::int64_t k, int depth) {
  p.validate();
  if (depth < 0 || depth > kMaxDepth)
    throw std::invalid_argument("alf optimizer: depth cap out of range");
  if (k < 0 || k > p.ladder_size())
    throw std::out_of_range("alf optimizer: stage index outside the ladder");
  detail::AlfBuilder builder{p, p.ladder_size(), {}};
  return DyadicWeight(depth, *builder.build(k, depth));
}

inline DyadicWeight alf_optimizer(const AlfOptimizerParams& p, int depth_cap) {
  return alf_materialize(p, p.k_star(), depth_cap);
}

namespace detail {

struct AlfSumNode {
  double mean_w;
  double mean_winv;
  double csub;  // Carleson sum of the subtree, normalized to a unit root
};

struct AlfSumBuilder {
  const AlfOptimizerParams& p;
  const Phi& phi;
  std::int64_t M;
  std::map<std::pair<std::int64_t, int>, AlfSumNode> memo;

  static AlfSumNode combine(const Phi& phi, const AlfSumNode& l, const AlfSumNode& r) {
    AlfSumNode n;
    n.mean_w = 0.5 * (l.mean_w + r.mean_w);
    n.mean_winv = 0.5 * (l.mean_winv + r.mean_winv);
    const double dw = l.mean_w - r.mean_w;
    const double di = l.mean_winv - r.mean_winv;
    const double rj = (dw / n.mean_w) * (dw / n.mean_w) + (di / n.mean_winv) * (di / n.mean_winv);
    n.csub = 0.5 * l.csub + 0.5 * r.csub + phi(std::max(n.mean_w * n.mean_winv, 1.0)) * rj;
    return n;
  }

  AlfSumNode run(std::int64_t k, int depth) {
    const auto key = std::make_pair(k, depth);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    AlfSumNode out;
    if (k == M) {
      out = {1.0, 1.0, 0.0};
    } else if (depth == 0) {
      const double s = p.s_at(k);
      out = {s, 1.0 / s, 0.0};
    } else if (k == 0) {
      const AlfSumNode child = run(1, depth - 1);
      const double s1 = p.s_at(1);
      const double ds = p.delta_star();
      const double cl = s1 / (p.L + ds);
      const double cr = s1 / (p.L - ds);
      // scaled copies: averages scale, normalized subtree sums do not
      const AlfSumNode l{cl * child.mean_w, child.mean_winv / cl, child.csub};
      const AlfSumNode r{cr * child.mean_w, child.mean_winv / cr, child.csub};
      out = combine(phi, l, r);
    } else {
      out = combine(phi, run(k - 1, depth - 1), run(k + 1, depth - 1));
    }
    memo.emplace(key, out);
    return out;
  }
};

}  // namespace detail

// Carleson sum of the depth-truncated stage-k weight, computed over the
// (stage, depth) recursion without materializing leaves. Matches
// carleson_sum(alf_materialize(p, k, depth)) up to rounding while staying
// cheap at depths where the dense array would not fit.
inline double alf_truncated_sum(const AlfOptimizerParams& p, const Phi& phi, std::int64_t k,
                                int depth) {
  p.validate();
  if (depth < 0) throw std::invalid_argument("alf truncated sum: negative depth");
  if (k < 0 || k > p.ladder_size())
    throw std::out_of_range("alf truncated sum: stage index outside the ladder");
  detail::AlfSumBuilder builder{p, phi, p.ladder_size(), {}};
  return builder.run(k, depth).csub;
}

// Weight growing like 2^k / k^2 on the blocks (2^-k, 2^-k+1): it lies
// outside the Muckenhoupt class, yet its normalized-difference sequence
// {|J| R_J} keeps a finite Carleson norm (at most 16). The tail interval
// (0, 2^-k_max) is filled with the exact mean of the removed blocks so the
// averages over every left spine interval match the untruncated series.
inline DyadicWeight counterexample_weight(int k_max) {
  if (k_max < 1 || k_max > kMaxDepth)
    throw std::invalid_argument("counterexample: k_max out of range");
  const double pi = 3.14159265358979323846;
  double partial = 0.0;
  for (int k = k_max; k >= 1; --k) partial += 1.0 / (static_cast<double>(k) * k);
  const double tail_mean = std::ldexp(pi * pi / 6.0 - partial, k_max);

  std::vector<double> v(std::size_t{1} << k_max);
  v[0] = tail_mean;
  for (int k = k_max; k >= 1; --k) {
    const double value = std::ldexp(1.0, k) / (static_cast<double>(k) * k);
    const std::uint64_t lo = std::uint64_t{1} << (k_max - k);
    for (std::uint64_t i = lo; i < 2 * lo; ++i) v[i] = value;
  }
  return DyadicWeight(k_max, std::move(v));
}

}  // namespace carleson
