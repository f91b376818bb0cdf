#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "carleson/phi.hpp"
#include "carleson/rng.hpp"

namespace carleson {

// Depth cap for dense storage: every operation is an array pass over at
// most 2^24 leaves.
inline constexpr int kMaxDepth = 24;

// Tolerance on membership in 1 <= x1*x2 <= Q.
inline constexpr double kOmegaTolerance = 1e-9;

// Dyadic subinterval of (0,1): generation `depth`, position `index`
// counted left to right, so length = 2^-depth.
struct DyadicInterval {
  int depth = 0;
  std::uint64_t index = 0;

  double length() const { return std::ldexp(1.0, -depth); }
  double left() const { return static_cast<double>(index) * length(); }
  double right() const { return static_cast<double>(index + 1) * length(); }
  DyadicInterval left_half() const { return {depth + 1, 2 * index}; }
  DyadicInterval right_half() const { return {depth + 1, 2 * index + 1}; }
  DyadicInterval parent() const { return {depth - 1, index / 2}; }

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

inline void validate(const DyadicInterval& j) {
  if (j.depth < 0 || j.depth > kMaxDepth)
    throw std::invalid_argument("dyadic interval: depth out of range");
  if (j.index >= (std::uint64_t{1} << j.depth))
    throw std::invalid_argument("dyadic interval: index out of range");
}

// Positive step function on (0,1), constant on each generation-n interval.
class DyadicWeight {
 public:
  DyadicWeight(int depth, std::vector<double> values)
      : depth_(depth), values_(std::move(values)) {
    if (depth_ < 0 || depth_ > kMaxDepth)
      throw std::invalid_argument("weight: depth out of range");
    if (values_.size() != (std::size_t{1} << depth_))
      throw std::invalid_argument("weight: value count does not match depth");
    for (double v : values_) {
      if (!std::isfinite(v) || !(v > 0.0))
        throw std::invalid_argument("weight: values must be positive and finite");
    }
  }

  static DyadicWeight constant(int depth, double value) {
    return DyadicWeight(depth, std::vector<double>(std::size_t{1} << depth, value));
  }

  int depth() const { return depth_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t leaf_count() const { return values_.size(); }

 private:
  int depth_;
  std::vector<double> values_;
};

struct IntervalStats {
  double avg_w = 0.0;     // <w>_J
  double avg_winv = 0.0;  // <w^-1>_J
  double delta_w = 0.0;   // <w>_{J-} - <w>_{J+}
  double delta_winv = 0.0;
  double s = 0.0;  // sqrt(<w>_J <w^-1>_J)
  double r = 0.0;  // (delta_w/avg_w)^2 + (delta_winv/avg_winv)^2
};

namespace detail {

inline std::pair<double, double> range_means(const DyadicWeight& w, std::uint64_t lo,
                                             std::uint64_t hi) {
  double sw = 0.0, si = 0.0;
  for (std::uint64_t i = lo; i < hi; ++i) {
    const double v = w.values()[i];
    sw += v;
    si += 1.0 / v;
  }
  const double n = static_cast<double>(hi - lo);
  return {sw / n, si / n};
}

}  // namespace detail

inline IntervalStats interval_stats(const DyadicWeight& w, const DyadicInterval& j) {
  validate(j);
  if (j.depth >= w.depth())
    throw std::invalid_argument("interval_stats: interval must be strictly coarser than the weight");
  const int shift = w.depth() - j.depth;
  const std::uint64_t lo = j.index << shift;
  const std::uint64_t hi = (j.index + 1) << shift;
  const std::uint64_t mid = lo + (std::uint64_t{1} << (shift - 1));
  const auto [aw, ai] = detail::range_means(w, lo, hi);
  const auto [awl, ail] = detail::range_means(w, lo, mid);
  const auto [awr, air] = detail::range_means(w, mid, hi);
  IntervalStats st;
  st.avg_w = aw;
  st.avg_winv = ai;
  st.delta_w = awl - awr;
  st.delta_winv = ail - air;
  st.s = std::sqrt(aw * ai);
  st.r = (st.delta_w / aw) * (st.delta_w / aw) + (st.delta_winv / ai) * (st.delta_winv / ai);
  return st;
}

namespace detail {

struct A2Node {
  double mean_w;
  double mean_winv;
  double max_prod;
};

inline A2Node a2_fold(const DyadicWeight& w, int d, std::uint64_t i) {
  if (d == w.depth()) {
    const double v = w.values()[i];
    const double vi = 1.0 / v;
    return {v, vi, v * vi};
  }
  const A2Node l = a2_fold(w, d + 1, 2 * i);
  const A2Node r = a2_fold(w, d + 1, 2 * i + 1);
  const double mw = 0.5 * (l.mean_w + r.mean_w);
  const double mi = 0.5 * (l.mean_winv + r.mean_winv);
  return {mw, mi, std::max({mw * mi, l.max_prod, r.max_prod})};
}

}  // namespace detail

// sup over dyadic J of <w>_J <w^-1>_J, the dyadic Muckenhoupt characteristic
// restricted to subintervals of (0,1).
inline double a2_characteristic(const DyadicWeight& w) {
  return detail::a2_fold(w, 0, 0).max_prod;
}

// One-pass analysis of the sequence c_J = |J| Phi(<w>_J <w^-1>_J) R_J(w):
//   sum        -- (1/|I|) sum of c_J over all J in D((0,1)), |I| = 1;
//   local_norm -- sup over dyadic R of (1/|R|) sum_{J in D(R)} c_J;
//   a2         -- max node product, as in a2_characteristic.
struct CarlesonAnalysis {
  double a2 = 1.0;
  double sum = 0.0;
  double local_norm = 0.0;
  double max_r = 0.0;  // largest R_J over resolvable nodes (always <= 8)
};

namespace detail {

struct CarlesonNode {
  double mean_w;
  double mean_winv;
  double subtree_c;  // sum of c_J over the subtree, |J| factors included
  double max_norm;
  double max_prod;
  double max_r;
};

inline CarlesonNode carleson_fold(const DyadicWeight& w, const Phi& phi, int d, std::uint64_t i) {
  if (d == w.depth()) {
    const double v = w.values()[i];
    const double vi = 1.0 / v;
    return {v, vi, 0.0, 0.0, v * vi, 0.0};
  }
  const CarlesonNode l = carleson_fold(w, phi, d + 1, 2 * i);
  const CarlesonNode r = carleson_fold(w, phi, d + 1, 2 * i + 1);
  CarlesonNode n;
  n.mean_w = 0.5 * (l.mean_w + r.mean_w);
  n.mean_winv = 0.5 * (l.mean_winv + r.mean_winv);
  const double dw = l.mean_w - r.mean_w;
  const double di = l.mean_winv - r.mean_winv;
  const double rj = (dw / n.mean_w) * (dw / n.mean_w) + (di / n.mean_winv) * (di / n.mean_winv);
  const double prod = n.mean_w * n.mean_winv;
  const double len = std::ldexp(1.0, -d);
  n.subtree_c = l.subtree_c + r.subtree_c + len * phi(std::max(prod, 1.0)) * rj;
  n.max_norm = std::max({n.subtree_c / len, l.max_norm, r.max_norm});
  n.max_prod = std::max({prod, l.max_prod, r.max_prod});
  n.max_r = std::max({rj, l.max_r, r.max_r});
  return n;
}

}  // namespace detail

inline CarlesonAnalysis analyze_carleson(const DyadicWeight& w, const Phi& phi) {
  if (w.depth() == 0) return {1.0, 0.0, 0.0, 0.0};
  const detail::CarlesonNode root = detail::carleson_fold(w, phi, 0, 0);
  return {root.max_prod, root.subtree_c, root.max_norm, root.max_r};
}

// (1/|I|) sum over J in D((0,1)) of c_J; terms with J at or below the
// weight's resolution vanish because w is constant there.
inline double carleson_sum(const DyadicWeight& w, const Phi& phi) {
  return analyze_carleson(w, phi).sum;
}

// Local Carleson norm: the supremum runs over dyadic R inside (0,1) only.
inline double carleson_norm_local(const DyadicWeight& w, const Phi& phi) {
  return analyze_carleson(w, phi).local_norm;
}

inline DyadicWeight scale(const DyadicWeight& w, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("scale: factor must be positive and finite");
  std::vector<double> v = w.values();
  for (double& x : v) x *= tau;
  return DyadicWeight(w.depth(), std::move(v));
}

// Left half from w_left compressed to (0,1/2), right half from w_right.
inline DyadicWeight concat(const DyadicWeight& wl, const DyadicWeight& wr) {
  if (wl.depth() != wr.depth())
    throw std::invalid_argument("concat: operands must have equal depth");
  if (wl.depth() + 1 > kMaxDepth) throw std::invalid_argument("concat: depth cap exceeded");
  std::vector<double> v;
  v.reserve(2 * wl.leaf_count());
  v.insert(v.end(), wl.values().begin(), wl.values().end());
  v.insert(v.end(), wr.values().begin(), wr.values().end());
  return DyadicWeight(wl.depth() + 1, std::move(v));
}

// max of <g>_R over dyadic R containing J (J itself included, R inside (0,1)).
inline double dyadic_maximal(const DyadicWeight& g, const DyadicInterval& j) {
  validate(j);
  if (j.depth > g.depth())
    throw std::invalid_argument("dyadic_maximal: interval finer than the weight");
  double best = 0.0;
  for (int d = j.depth; d >= 0; --d) {
    const std::uint64_t idx = j.index >> (j.depth - d);
    const int shift = g.depth() - d;
    const auto [aw, ai] = detail::range_means(g, idx << shift, (idx + 1) << shift);
    (void)ai;
    best = std::max(best, aw);
  }
  return best;
}

// Point of the Bellman domain: averages (x1, x2) with 1 <= x1*x2 <= q.
struct OmegaPoint {
  double x1 = 1.0;
  double x2 = 1.0;
  double q = 1.0;

  bool admissible() const {
    const double p = x1 * x2;
    return x1 > 0.0 && x2 > 0.0 && q >= 1.0 && p >= 1.0 - kOmegaTolerance &&
           p <= q + kOmegaTolerance;
  }
};

// Random weight with prescribed root averages and characteristic cap:
// interior generations split the node's average pair at random while both
// children stay inside the domain, and the last generation applies the
// two-value boundary split, which pins every leaf on x1*x2 = 1 and makes
// all node averages exact.
inline DyadicWeight random_a2_weight(const OmegaPoint& x, int depth, std::uint64_t seed) {
  if (!x.admissible()) throw std::invalid_argument("random_a2_weight: point outside the domain");
  if (depth < 1 || depth > kMaxDepth)
    throw std::invalid_argument("random_a2_weight: depth out of range");

  std::vector<double> leaves(std::size_t{1} << depth);
  Rng rng(seed);

  auto emit = [&](auto&& self, double x1, double x2, int d, std::uint64_t i) -> void {
    if (d == depth - 1) {
      const double p = x1 * x2;
      const double u = p > 1.0 ? std::sqrt(1.0 - 1.0 / p) : 0.0;
      leaves[2 * i] = x1 * (1.0 - u);
      leaves[2 * i + 1] = x1 * (1.0 + u);
      return;
    }
    double rho = 0.6;
    double u1 = 0.0, u2 = 0.0;
    for (int attempt = 0; attempt < 40; ++attempt) {
      const double c1 = rng.uniform(-rho, rho);
      const double c2 = rng.uniform(-rho, rho);
      const double pm = x1 * (1.0 - c1) * x2 * (1.0 - c2);
      const double pp = x1 * (1.0 + c1) * x2 * (1.0 + c2);
      if (pm >= 1.0 && pm <= x.q && pp >= 1.0 && pp <= x.q) {
        u1 = c1;
        u2 = c2;
        break;
      }
      if ((attempt + 1) % 5 == 0) rho *= 0.7;  // boundary points force small or zero splits
    }
    self(self, x1 * (1.0 - u1), x2 * (1.0 - u2), d + 1, 2 * i);
    self(self, x1 * (1.0 + u1), x2 * (1.0 + u2), d + 1, 2 * i + 1);
  };
  emit(emit, x.x1, x.x2, 0, 0);
  return DyadicWeight(depth, std::move(leaves));
}

}  // namespace carleson
