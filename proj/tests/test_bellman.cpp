#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "carleson/bellman.hpp"
#include "test_util.hpp"

using namespace carleson;

TEST_CASE("a_f at reference points, both evaluation routes") {
  for (const Phi& phi : {Phi::power(1.0), Phi::power(-0.5), Phi::poly({1.0, 2.0})}) {
    REQUIRE(a_f_eval(phi, 1.0) == 0.0);
  }
  REQUIRE(close_rel(a_f_eval(Phi::power(1.0), 2.0), 24.0, 1e-14));
  REQUIRE(close_rel(a_f_quad(Phi::power(1.0), 2.0), 24.0, 1e-12));
  REQUIRE(close_rel(a_f_eval(Phi::power(0.0), 2.0), 16.0 * std::log(2.0), 1e-14));
  REQUIRE(close_rel(a_f_quad(Phi::power(0.0), 2.0), 16.0 * std::log(2.0), 1e-12));
  REQUIRE_THROWS(a_f_eval(Phi::power(1.0), 0.5));
  REQUIRE_THROWS(a_f_eval(Phi::table({{1.0, 1.0}, {4.0, 2.0}}), 3.0));  // s^2 = 9 > 4
}

TEST_CASE("A_Lf at reference points, both evaluation routes") {
  for (const Phi& phi : {Phi::power(1.0), Phi::power(0.5), Phi::poly({0.0, 1.0})}) {
    REQUIRE(A_Lf_eval(phi, 2.0, 1.0) == 0.0);
  }
  REQUIRE(close_rel(A_Lf_eval(Phi::power(1.0), 2.0, 2.0), 40.0, 1e-14));
  REQUIRE(close_rel(A_Lf_quad(Phi::power(1.0), 2.0, 2.0), 40.0, 1e-12));
  const double half_ref = 32.0 - 16.0 * std::log(2.0);
  REQUIRE(close_rel(A_Lf_eval(Phi::power(0.5), 2.0, 2.0), half_ref, 1e-14));
  REQUIRE(close_rel(A_Lf_quad(Phi::power(0.5), 2.0, 2.0), half_ref, 1e-12));
  REQUIRE_THROWS(A_Lf_eval(Phi::power(1.0), 2.0, 2.5));  // s > L
  REQUIRE(A_Lf_eval(Phi::power(1.0), 1.0, 1.0) == 0.0);  // degenerate L
}

TEST_CASE("closed forms and quadrature agree across the power range") {
  for (double a : {-1.0, -0.5, 0.25, 0.75, 1.0, 1.5, 2.0, 3.0}) {
    const Phi phi = Phi::power(a);
    for (double L : {2.0, 10.0}) {
      for (double s : {1.0, 1.3, 1.9, L}) {
        INFO("alpha=" << a << " L=" << L << " s=" << s);
        REQUIRE(close_rel(a_f_quad(phi, s), a_f_eval(phi, s), 1e-8));
        REQUIRE(close_rel(A_Lf_quad(phi, L, s), A_Lf_eval(phi, L, s), 1e-8));
      }
    }
  }
  // log branches
  for (double a : {0.0, 0.5}) {
    const Phi phi = Phi::power(a);
    REQUIRE(close_rel(a_f_quad(phi, 1.7), a_f_eval(phi, 1.7), 1e-10));
    REQUIRE(close_rel(A_Lf_quad(phi, 2.0, 1.7), A_Lf_eval(phi, 2.0, 1.7), 1e-10));
  }
}

TEST_CASE("tangency abscissa") {
  REQUIRE(close_rel(s0_of(2.0, 2.0), 29.0 / 15.0, 1e-15));
  REQUIRE(close_rel(s0_of(2.0, 1.0), 33.0 / 18.0, 1e-15));
  for (double L : {1.5, 2.0, 10.0}) {
    const double q = L * L;
    const double corner = (8.0 * q - std::sqrt(q) - 1.0) / (3.0 * (3.0 * std::sqrt(q) - 1.0));
    REQUIRE(std::abs(s0_of(L, L) - corner) <= 1e-14 * corner);
    for (double s = 1.0; s <= L + 1e-9; s += (L - 1.0) / 7.0) {
      const double s0 = s0_of(L, std::min(s, L));
      REQUIRE(s0 > 1.0);
      REQUIRE(s0 <= L + 1e-12);
    }
  }
  REQUIRE_THROWS(s0_of(1.0, 1.0));
}

TEST_CASE("concave-h upper estimate") {
  REQUIRE(concave_upper_bound(Phi::power(1.25), 2.0, 1.0) == 0.0);
  const double ref = 40.0 * std::sqrt(29.0 / 15.0);
  REQUIRE(close_rel(concave_upper_bound(Phi::power(1.25), 2.0, 2.0), ref, 1e-13));
  // h constant makes the tangent estimate exact.
  REQUIRE(close_rel(concave_upper_bound(Phi::power(1.0), 2.0, 2.0),
                    A_Lf_eval(Phi::power(1.0), 2.0, 2.0), 1e-13));
}

TEST_CASE("upper constant dispatch") {
  REQUIRE(K_of(Phi::power(1.0), 1.0).value == 0.0);
  const auto k1 = K_of(Phi::power(1.0), 4.0);
  REQUIRE(close_rel(k1.value, 40.0, 1e-12));
  REQUIRE(k1.tag == "phi-increasing-h-convex");
  REQUIRE_FALSE(k1.bound_only);

  const auto km1 = K_of(Phi::power(-1.0), 4.0);
  REQUIRE(close_rel(km1.value, 6.0, 1e-12));
  REQUIRE(km1.tag == "phi-decreasing");

  const auto kc = K_of(Phi::power(1.25), 4.0);
  REQUIRE(kc.bound_only);

  // corner identities: the constant equals the candidate at s = sqrt(q)
  for (double a : {0.25, 0.75, 1.0, 1.5, 2.0, 3.0}) {
    for (double q : {2.0, 4.0}) {
      REQUIRE(close_rel(K_of(Phi::power(a), q).value,
                        A_Lf_eval(Phi::power(a), std::sqrt(q), std::sqrt(q)), 1e-10));
    }
  }
  for (double a : {-1.0, -0.5}) {
    for (double q : {2.0, 4.0}) {
      REQUIRE(close_rel(K_of(Phi::power(a), q).value, a_f_eval(Phi::power(a), std::sqrt(q)),
                        1e-10));
    }
  }
}

TEST_CASE("lower constant dispatch") {
  REQUIRE(k_of(Phi::power(1.0), 1.0).value == 0.0);
  const auto l1 = k_of(Phi::power(1.0), 4.0);
  REQUIRE(close_rel(l1.value, 24.0, 1e-12));
  const auto lh = k_of(Phi::power(0.5), 4.0);
  REQUIRE(close_rel(lh.value, 12.0, 1e-13));
  REQUIRE(lh.tag == "h-decreasing");
  REQUIRE(close_rel(k_of(Phi::power(2.0), 4.0).value, a_f_eval(Phi::power(2.0), 2.0), 1e-10));
}

TEST_CASE("dispatch errors carry the classification") {
  // Phi falling then rising: neither monotone, h neither convex nor concave
  // certifiably, so both dispatches refuse.
  const Phi wedge = Phi::table({{1.0, 1.0}, {2.0, 0.5}, {4.0, 2.0}});
  REQUIRE_THROWS_WITH(K_of(wedge, 4.0), Catch::Matchers::ContainsSubstring("indeterminate"));
  // h = s^-2 + s^2 is non-monotone even though phi is increasing and h convex.
  const Phi valley = Phi::poly({1.0, 0.0, 1.0});
  REQUIRE_THROWS(k_of(valley, 4.0));
  REQUIRE_FALSE(K_of(valley, 4.0).bound_only);  // upper dispatch still fine
}

TEST_CASE("paired constants report") {
  const auto rep = constants_for(Phi::power(1.0), 4.0);
  REQUIRE(close_rel(rep.upper_K, 40.0, 1e-12));
  REQUIRE(close_rel(rep.lower_k, 24.0, 1e-12));
  REQUIRE(rep.lower_k <= rep.upper_K);
  REQUIRE_FALSE(rep.upper_is_bound);
  const auto triv = constants_for(Phi::power(2.0), 1.0);
  REQUIRE(triv.upper_K == 0.0);
  REQUIRE(triv.lower_k == 0.0);
}

TEST_CASE("closed-form constants") {
  REQUIRE(close_rel(K_alpha(0.0, std::exp(1.0)), 8.0, 1e-13));
  REQUIRE(close_rel(K_alpha(0.5, 4.0), 64.0 - 8.0 * std::log(4.0) - 32.0, 1e-13));
  REQUIRE(close_rel(K_alpha(1.0, 4.0), 40.0, 1e-14));
  REQUIRE(close_rel(k_alpha(1.0, 4.0), 24.0, 1e-14));
  REQUIRE(k_alpha(1.0, 4.0) <= K_alpha(1.0, 4.0));
  REQUIRE(close_rel(k_alpha(0.0, std::exp(1.0)), 8.0 * (1.0 - std::exp(-1.0)), 1e-13));

  // interpolated bound branch
  REQUIRE(K_alpha_is_bound(1.25));
  REQUIRE_FALSE(K_alpha_is_bound(1.0));
  REQUIRE_FALSE(K_alpha_is_bound(1.5));
  const double interp = std::sqrt(K_alpha(1.0, 4.0)) * std::sqrt(K_alpha(1.5, 4.0));
  REQUIRE(close_rel(K_alpha(1.25, 4.0), interp, 1e-13));

  // k ordering under K wherever both are exact
  for (double a : {-1.0, 0.0, 0.5, 1.0, 2.0, 3.0}) {
    for (double q : {1.5, 4.0, 100.0}) {
      REQUIRE(k_alpha(a, q) <= K_alpha(a, q) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("closed forms track the quadrature dispatch") {
  for (double a : {-1.0, -0.5, 0.25, 0.75, 1.0, 1.5, 2.0, 3.0}) {
    for (double q : {2.0, 4.0, 100.0}) {
      INFO("alpha=" << a << " q=" << q);
      REQUIRE(close_rel(K_alpha(a, q), K_of(Phi::power(a), q).value, 1e-8));
    }
  }
  for (double a : {1.0, 0.5, 0.0, -0.5}) {
    for (double q : {2.0, 4.0}) {
      REQUIRE(close_rel(k_alpha(a, q), k_of(Phi::power(a), q).value, 1e-10));
    }
  }
}

TEST_CASE("closed forms remain stable arbitrarily close to the branch points") {
  // Near alpha = 0 and 1/2 the general branch cancels catastrophically in
  // exact arithmetic; the quadrature route is the independent truth.
  for (double a : {1e-8, -1e-8, 0.5 + 1e-8, 0.5 - 1e-8}) {
    REQUIRE(close_rel(K_alpha(a, 4.0), K_of(Phi::power(a), 4.0).value, 1e-6));
  }
  // True limit continuity, probed at an offset small enough for the slope
  // term to sit far below the tolerance.
  REQUIRE(std::abs(K_alpha(1e-8, 4.0) - K_alpha(0.0, 4.0)) < 1e-6);
  REQUIRE(std::abs(K_alpha(0.5 + 1e-8, 4.0) - K_alpha(0.5, 4.0)) < 1e-6);
}

TEST_CASE("inverse of the norm threshold") {
  REQUIRE(u_inverse(Phi::power(1.0), 0.0) == 1.0);
  REQUIRE(close_rel(u_inverse(Phi::power(0.0), 4.0), 2.0, 1e-9));
  REQUIRE(close_rel(u_inverse(Phi::power(1.0), 6.0), 2.0, 1e-9));
  // u is bounded by 8 for constant Phi, so large norms exhaust the bracket.
  REQUIRE_THROWS(u_inverse(Phi::power(0.0), 9.0));
  // round trip
  for (double q : {1.5, 3.0, 20.0}) {
    REQUIRE(close_rel(u_inverse(Phi::power(2.0), u_of(Phi::power(2.0), q)), q, 1e-9));
  }
}

TEST_CASE("candidates are increasing in s; the full candidate is concave") {
  const Phi p2 = Phi::power(2.0);
  const double L = 2.0;
  double prev = -1.0, prev_diff = 1e300;
  const int n = 1000;
  for (int i = 0; i <= n; ++i) {
    const double s = 1.0 + (L - 1.0) * i / n;
    const double v = A_Lf_eval(p2, L, s);
    if (i > 0) {
      REQUIRE(v >= prev - 1e-12);        // increasing
      const double diff = v - prev;
      REQUIRE(diff <= prev_diff + 1e-9);  // concave: increments shrink
      prev_diff = diff;
    }
    prev = v;
  }
  double prev_a = -1.0;
  for (int i = 0; i <= n; ++i) {
    const double s = 1.0 + 2.0 * i / n;
    const double v = a_f_eval(p2, s);
    REQUIRE(v >= prev_a);
    prev_a = v;
  }
}

TEST_CASE("derivative bound for the full candidate") {
  // A'(s) >= 16 f(s)/s when f is increasing.
  const Phi p2 = Phi::power(2.0);
  const double L = 2.0, h = 1e-6;
  for (double s : {1.1, 1.4, 1.7, 1.95}) {
    const double deriv = (A_Lf_eval(p2, L, s + h) - A_Lf_eval(p2, L, s - h)) / (2.0 * h);
    REQUIRE(deriv >= 16.0 * p2.f(s) / s - 1e-5);
  }
}

TEST_CASE("linearity in phi") {
  const double L = 2.0;
  const Phi f1 = Phi::power(1.0);
  const Phi f2 = Phi::power(2.0);
  const Phi sum = Phi::poly({0.0, 1.0, 1.0});
  for (double s : {1.2, 1.7, 2.0}) {
    const double lhs = A_Lf_quad(sum, L, s);
    const double rhs = A_Lf_eval(f1, L, s) + A_Lf_eval(f2, L, s);
    REQUIRE(close_rel(lhs, rhs, 1e-10));
    REQUIRE(close_rel(a_f_quad(sum, s), a_f_eval(f1, s) + a_f_eval(f2, s), 1e-10));
  }
}
