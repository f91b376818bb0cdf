#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "carleson/bellman.hpp"
#include "carleson/dyadic.hpp"
#include "carleson/optimizers.hpp"
#include "test_util.hpp"

using namespace carleson;

TEST_CASE("two-step boundary weight") {
  SECTION("q = 1 degenerates to a constant") {
    const DyadicWeight w = two_step(2.5, 1.0);
    REQUIRE(w.values()[0] == 2.5);
    REQUIRE(w.values()[1] == 2.5);
  }
  SECTION("averages and characteristic at q = 4") {
    const DyadicWeight w = two_step(1.0, 4.0);
    const double u = std::sqrt(3.0) / 2.0;
    REQUIRE(close_rel(w.values()[0], 1.0 - u, 1e-15));
    REQUIRE(close_rel(w.values()[1], 1.0 + u, 1e-15));
    const auto st = interval_stats(w, DyadicInterval{0, 0});
    REQUIRE(close_rel(st.avg_winv, 4.0, 1e-13));
    REQUIRE(close_rel(a2_characteristic(w), 4.0, 1e-13));
  }
  SECTION("the sum is the single root term for any phi") {
    REQUIRE(close_rel(carleson_sum(two_step(3.0, 9.0), Phi::power(1.0)), 64.0, 1e-13));
    REQUIRE(close_rel(carleson_sum(two_step(0.5, 2.0), Phi::power(0.0)), 4.0, 1e-13));
    REQUIRE(close_rel(carleson_sum(two_step(1.0, 4.0), Phi::power(0.5)), 12.0, 1e-13));
  }
}

TEST_CASE("tangential-split construction") {
  SECTION("s = 1 collapses to the constant weight") {
    const DyadicWeight w = af_optimizer({1.0, 4});
    for (double v : w.values()) REQUIRE(v == 1.0);
    REQUIRE(carleson_sum(w, Phi::power(1.0)) == 0.0);
  }
  SECTION("single split at s = sqrt(2)") {
    const DyadicWeight w = af_optimizer({std::sqrt(2.0), 1});
    REQUIRE(close_rel(w.values()[0], std::sqrt(2.0) - 1.0, 1e-14));
    REQUIRE(close_rel(w.values()[1], std::sqrt(2.0) + 1.0, 1e-14));
    REQUIRE(close_rel(carleson_sum(w, Phi::power(1.0)), 8.0, 1e-13));
  }
  SECTION("root averages, characteristic, and local norm") {
    for (double s : {1.3, 1.8, 2.0}) {
      for (int n : {1, 4, 9}) {
        const DyadicWeight w = af_optimizer({s, n});
        const auto st = interval_stats(w, DyadicInterval{0, 0});
        REQUIRE(close_rel(st.avg_w, s, 1e-10));
        REQUIRE(close_rel(st.avg_winv, s, 1e-10));
        REQUIRE(close_rel(a2_characteristic(w), s * s, 1e-11));
        const Phi p = Phi::power(1.5);
        REQUIRE(close_rel(carleson_norm_local(w, p), carleson_sum(w, p), 1e-12));
      }
    }
  }
  SECTION("tree sum equals the stage formula") {
    for (double a : {0.0, 0.5, 1.0, 2.0}) {
      const Phi phi = Phi::power(a);
      for (int n : {1, 3, 7, 12}) {
        const AfOptimizerParams p{1.9, n};
        REQUIRE(close_rel(carleson_sum(af_optimizer(p), phi), af_sum_analytic(p, phi), 1e-12));
      }
    }
  }
  SECTION("telescoping for the identity functional") {
    const Phi p1 = Phi::power(1.0);
    for (double s : {1.0, 1.1, std::sqrt(2.0), 1.9, 2.0}) {
      for (int n = 1; n <= 12; ++n) {
        const AfOptimizerParams p{s, n};
        REQUIRE(close_rel(af_sum_analytic(p, p1), 8.0 * (s * s - 1.0), 1e-12));
      }
    }
  }
  SECTION("stage sums approach the candidate") {
    REQUIRE(af_sum_analytic({1.0, 16}, Phi::power(0.0)) == 0.0);
    REQUIRE(close_rel(af_sum_analytic({2.0, 10}, Phi::power(1.0)), 24.0, 1e-13));
    const double err =
        std::abs(af_sum_analytic({2.0, 4096}, Phi::power(0.0)) - 16.0 * std::log(2.0));
    REQUIRE(err < 5e-3);
  }
  SECTION("domain errors") {
    REQUIRE_THROWS(af_optimizer({0.9, 4}));
    REQUIRE_THROWS(af_optimizer({1.5, 0}));
  }
}

TEST_CASE("normal-split ladder parameters") {
  const AlfOptimizerParams p{2.0, 1, 1, 3};
  REQUIRE(p.ladder_size() == 16);
  REQUIRE(p.s_at(0) == 2.0);
  REQUIRE(close_rel(p.s_at(p.ladder_size()), 1.0, 1e-15));
  REQUIRE(p.k_star() == 8);
  REQUIRE(close_rel(p.s(), 1.5, 1e-15));
  const double ds = p.delta_star();
  REQUIRE(close_rel(ds * ds, p.delta() * (2.0 * p.L - p.delta()), 1e-13));
  REQUIRE_THROWS(AlfOptimizerParams{1.0, 1, 1, 3}.validate());
  REQUIRE_THROWS(AlfOptimizerParams{2.0, 1, 3, 3}.validate());  // m > 2^N
}

TEST_CASE("stage-sum system") {
  const Phi p32 = Phi::power(1.5);
  const AlfOptimizerParams p{2.0, 1, 1, 3};
  const auto sigma = alf_sigma_solve(p, p32);
  const std::int64_t M = p.ladder_size();

  SECTION("boundary conditions") {
    REQUIRE(sigma[static_cast<std::size_t>(M)] == 0.0);
    const double g0 = 8.0 * (p.L * p.L - p.s_at(1) * p.s_at(1)) * p32.h(p.L);
    REQUIRE(close_rel(sigma[0] - sigma[1], g0, 1e-12));
  }
  SECTION("interior recursion residuals vanish") {
    const double d = p.delta();
    for (std::int64_t k = 1; k < M; ++k) {
      const double res = sigma[static_cast<std::size_t>(k)] -
                         0.5 * sigma[static_cast<std::size_t>(k - 1)] -
                         0.5 * sigma[static_cast<std::size_t>(k + 1)] -
                         8.0 * p32.h(p.s_at(k)) * d * d;
      REQUIRE(std::abs(res) <= 1e-12 * std::max(1.0, sigma[0]));
    }
  }
  SECTION("closed form matches the solve at every index") {
    for (std::int64_t k = 0; k <= M; ++k) {
      REQUIRE(close_rel(alf_sigma_closed(p, p32, k), sigma[static_cast<std::size_t>(k)], 1e-12));
    }
    REQUIRE(alf_sigma_closed(p, p32, M) == 0.0);
    REQUIRE_THROWS(alf_sigma_closed(p, p32, M + 1));
  }
  SECTION("constant h closed form at the boundary index") {
    const Phi p1 = Phi::power(1.0);
    const auto s1 = alf_sigma_solve(p, p1);
    const double d = p.delta();
    double tail = 0.0;
    for (std::int64_t j = 1; j < M; ++j) tail += (p.s_at(j) - 1.0) * d;
    REQUIRE(close_rel(s1[0], 8.0 * (p.L - 1.0) * (2.0 * p.L - d) + 16.0 * tail, 1e-12));
  }
}

TEST_CASE("stage sums converge to the full candidate") {
  const Phi p1 = Phi::power(1.0);
  // target value A(1.5) with L = 2 equals 22
  REQUIRE(close_rel(A_Lf_eval(p1, 2.0, 1.5), 22.0, 1e-14));
  const AlfOptimizerParams p{2.0, 1, 1, 9};
  const auto sigma = alf_sigma_solve(p, p1);
  REQUIRE(close_rel(sigma[static_cast<std::size_t>(p.k_star())], 22.0, 2e-3));
}

TEST_CASE("materialized stage weights") {
  const AlfOptimizerParams p{2.0, 0, 1, 1};  // ladder (2, 1.5, 1)

  SECTION("one-level unroll of the interior stage") {
    const DyadicWeight w = alf_materialize(p, 1, 1);
    REQUIRE(w.values() == std::vector<double>{2.0, 1.0});
    const auto st = interval_stats(w, DyadicInterval{0, 0});
    REQUIRE(close_rel(st.avg_w, 1.5, 1e-15));
    REQUIRE(close_rel(st.avg_winv, 0.75, 1e-15));
  }
  SECTION("the final stage is identically one at any depth") {
    const DyadicWeight w = alf_materialize(p, p.ladder_size(), 5);
    for (double v : w.values()) REQUIRE(v == 1.0);
  }
  SECTION("root average of w is exact at every depth; w^-1 approaches") {
    double prev_winv = 0.0;
    for (int depth : {2, 6, 10, 14}) {
      const DyadicWeight w = alf_materialize(p, 1, depth);
      const auto st = interval_stats(w, DyadicInterval{0, 0});
      REQUIRE(close_rel(st.avg_w, 1.5, 1e-12));
      REQUIRE(st.avg_winv >= prev_winv - 1e-13);
      prev_winv = st.avg_winv;
    }
    REQUIRE(std::abs(prev_winv - 1.5) < 0.05);
  }
  SECTION("tree sums rise monotonically toward the stage sum") {
    const Phi p1 = Phi::power(1.0);
    const double sigma1 = alf_sigma_solve(p, p1)[1];
    double prev = -1.0;
    for (int depth : {4, 8, 12, 16, 20}) {
      const double sum = carleson_sum(alf_materialize(p, 1, depth), p1);
      REQUIRE(sum > prev);
      REQUIRE(sum <= sigma1 * (1.0 + 1e-12));
      prev = sum;
    }
    REQUIRE(close_rel(prev, sigma1, 0.05));
  }
  SECTION("depth cap and index range") {
    REQUIRE_THROWS(alf_materialize(p, 1, kMaxDepth + 1));
    REQUIRE_THROWS(alf_materialize(p, p.ladder_size() + 1, 4));
  }
  SECTION("local norm is attained at the root for the boundary stage") {
    // Stage 0 is the norm-attaining construction: every subtree hosts a
    // stage with a smaller sum, so the supremum sits at the root. Interior
    // stages contain stage-0 descendants and do not share this property.
    const Phi p32 = Phi::power(1.5);
    const AlfOptimizerParams q{2.0, 1, 1, 2};
    const DyadicWeight w0 = alf_materialize(q, 0, 12);
    REQUIRE(close_rel(carleson_norm_local(w0, p32), carleson_sum(w0, p32), 1e-12));
  }
  SECTION("leaf-free sum recursion matches the materialized tree") {
    for (const AlfOptimizerParams& q :
         {AlfOptimizerParams{2.0, 0, 1, 1}, AlfOptimizerParams{2.0, 1, 1, 2},
          AlfOptimizerParams{3.0, 1, 1, 1}}) {
      for (const Phi& phi : {Phi::power(1.0), Phi::power(1.5)}) {
        for (int depth : {1, 5, 12}) {
          const std::int64_t k = q.k_star() == q.ladder_size() ? 1 : q.k_star();
          REQUIRE(close_rel(alf_truncated_sum(q, phi, k, depth),
                            carleson_sum(alf_materialize(q, k, depth), phi), 1e-12));
        }
      }
    }
  }
}

TEST_CASE("block counterexample weight") {
  const DyadicWeight w = counterexample_weight(20);

  SECTION("block values") {
    // value on (1/2, 1) is 2/1^2
    REQUIRE(w.values().back() == 2.0);
    // value on (1/4, 1/2) is 4/4 = 1
    REQUIRE(w.values()[w.leaf_count() / 2 - 1] == 1.0);
  }
  SECTION("root averages approach the series limits") {
    const auto st = interval_stats(w, DyadicInterval{0, 0});
    const double pi = 3.14159265358979323846;
    REQUIRE(close_rel(st.avg_w, pi * pi / 6.0, 1e-12));
    REQUIRE(close_rel(st.avg_winv, 20.0 / 27.0, 1e-8));
  }
  SECTION("left-spine products grow without bound") {
    const auto st10 = interval_stats(w, DyadicInterval{10, 0});
    REQUIRE(st10.avg_w * st10.avg_winv >= 10.0 / 3.0);
    const auto st3 = interval_stats(w, DyadicInterval{3, 0});
    const auto st12 = interval_stats(w, DyadicInterval{12, 0});
    REQUIRE(st12.avg_w * st12.avg_winv > st3.avg_w * st3.avg_winv);
  }
  SECTION("difference sequence keeps a bounded local norm") {
    const auto an = analyze_carleson(w, Phi::power(0.0));
    REQUIRE(an.local_norm <= 16.0 + 1e-9);
    REQUIRE(an.max_r <= 8.0 + 1e-12);
  }
  SECTION("range check") {
    REQUIRE_THROWS(counterexample_weight(0));
    REQUIRE_THROWS(counterexample_weight(kMaxDepth + 1));
  }
}
