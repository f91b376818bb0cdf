// Command-line front end: candidate evaluation, sharp-constant tables,
// optimizer construction, inequality sweeps, and weight utilities.
//
// Exit codes: 0 success / claim verified, 1 verified claim violated,
// 2 usage or domain error.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "carleson/bellman.hpp"
#include "carleson/dyadic.hpp"
#include "carleson/io.hpp"
#include "carleson/optimizers.hpp"
#include "carleson/verify.hpp"

namespace {

using carleson::json;

constexpr int kGridCap = 256;
constexpr long long kSampleCap = 2'000'000;

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw std::invalid_argument("expected a comma-separated list of numbers");
  return out;
}

void emit(const json& j, const std::string& out_path) {
  if (!out_path.empty()) carleson::write_json(out_path, j);
  std::cout << j.dump(2) << "\n";
}

struct BellmanArgs {
  std::string phi;
  std::string q, s, L;
  std::string candidate = "auto";
  std::string out;
};

int run_bellman(const BellmanArgs& a) {
  const carleson::Phi phi = carleson::parse_phi_selector(a.phi);
  const double q = carleson::NumericFlag{a.q}.resolve();
  if (q < 1.0) throw std::domain_error("q must be >= 1");
  const double L = a.L.empty() ? std::sqrt(q) : carleson::NumericFlag{a.L}.resolve();
  const double s = carleson::NumericFlag{a.s}.resolve_with_L(L);

  std::string candidate = a.candidate;
  const carleson::PhiClassification cls = carleson::classify(phi, std::max(q, s * s));
  if (candidate == "auto") {
    using carleson::Tri;
    if (cls.phi_increasing == Tri::Yes && cls.h_convex == Tri::Yes) candidate = "alf";
    else if (cls.phi_decreasing == Tri::Yes || cls.h_increasing == Tri::Yes) candidate = "af";
    else if (cls.phi_increasing == Tri::Yes && cls.h_concave == Tri::Yes) candidate = "concave";
    else throw std::domain_error("no candidate applies (" + cls.describe() + ")");
  }

  carleson::BellmanReport rep;
  rep.q = q;
  rep.s = s;
  rep.candidate = candidate;
  double err = 0.0;
  if (candidate == "af") {
    rep.value = phi.kind() == carleson::Phi::Kind::Power ? carleson::a_f_eval(phi, s)
                                                         : carleson::a_f_quad(phi, s, &err);
    rep.case_used = cls.h_increasing == carleson::Tri::Yes ? "lower:h-increasing"
                    : cls.phi_decreasing == carleson::Tri::Yes ? "upper:phi-decreasing"
                                                               : "candidate:a_f";
  } else if (candidate == "alf") {
    rep.value = phi.kind() == carleson::Phi::Kind::Power
                    ? carleson::A_Lf_eval(phi, L, s)
                    : carleson::A_Lf_quad(phi, L, s, &err);
    rep.case_used = cls.phi_increasing == carleson::Tri::Yes &&
                            cls.h_convex == carleson::Tri::Yes
                        ? "upper:phi-increasing-h-convex"
                        : "candidate:A_Lf";
  } else if (candidate == "concave") {
    rep.value = carleson::concave_upper_bound(phi, L, s);
    rep.case_used = "upper:phi-increasing-h-concave-bound";
    rep.bound_only = true;
  } else {
    throw std::invalid_argument("candidate must be af, alf, or concave");
  }
  rep.quad_err = err;
  emit(carleson::to_json(rep), a.out);
  return 0;
}

struct ConstantsArgs {
  std::string alphas, qs, out;
};

int run_constants(const ConstantsArgs& a) {
  const auto alphas = parse_list(a.alphas);
  const auto qs = parse_list(a.qs);
  std::ostringstream csv;
  csv << "alpha,q,K,k,K_is_bound\n";
  csv.precision(17);
  for (double alpha : alphas) {
    for (double q : qs) {
      csv << alpha << "," << q << "," << carleson::K_alpha(alpha, q) << ","
          << carleson::k_alpha(alpha, q) << ","
          << (carleson::K_alpha_is_bound(alpha) ? "true" : "false") << "\n";
    }
  }
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    if (!f) throw std::runtime_error("cannot open for writing: " + a.out);
    f << csv.str();
  }
  std::cout << csv.str();
  return 0;
}

struct OptAfArgs {
  std::string phi, s;
  int n = 8;
  std::string out, conv;
};

int run_opt_af(const OptAfArgs& a) {
  const carleson::Phi phi = carleson::parse_phi_selector(a.phi);
  const double s = carleson::NumericFlag{a.s}.resolve();
  carleson::AfOptimizerParams p{s, a.n};
  const carleson::DyadicWeight w = carleson::af_optimizer(p);
  if (!a.out.empty()) carleson::write_weight(a.out, w);

  std::vector<long long> ns;
  for (long long k = 1; k <= a.n; k *= 2) ns.push_back(k);
  if (ns.empty() || ns.back() != a.n) ns.push_back(a.n);
  const auto rows = carleson::convergence_af(phi, s, ns);
  if (!a.conv.empty()) carleson::write_convergence_csv(a.conv, rows);

  json j{{"kind", "af"},
         {"s", s},
         {"n", a.n},
         {"carleson_sum", carleson::carleson_sum(w, phi)},
         {"analytic_sum", carleson::af_sum_analytic(p, phi)},
         {"target", carleson::a_f_eval(phi, s)},
         {"a2", carleson::a2_characteristic(w)}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct OptAlfArgs {
  std::string phi, L, s;
  int N = -1, m = -1, n = 8;
  int depth_cap = 16;
  std::string out, sigma, conv;
};

int run_opt_alf(const OptAlfArgs& a) {
  const carleson::Phi phi = carleson::parse_phi_selector(a.phi);
  const double L = carleson::NumericFlag{a.L}.resolve();
  int N = a.N, m = a.m;
  if (N < 0 || m < 0) {
    if (a.s.empty())
      throw std::invalid_argument("alf: pass --N and --m, or --s dyadic:<N>,<m>");
    const carleson::NumericFlag sflag{a.s};
    if (sflag.is_dyadic()) {
      const std::string body = a.s.substr(7);
      const auto comma = body.find(',');
      N = std::stoi(body.substr(0, comma));
      m = std::stoi(body.substr(comma + 1));
    } else {
      // Accept a plain s only when it is exactly dyadically rational in [1, L].
      const double s = sflag.resolve();
      const double x = (L - s) / (L - 1.0);
      bool found = false;
      for (int nn = 0; nn <= 20 && !found; ++nn) {
        const double scaled = x * std::ldexp(1.0, nn);
        const double rounded = std::round(scaled);
        if (std::abs(scaled - rounded) < 1e-12 && rounded >= 0.0 &&
            rounded <= std::ldexp(1.0, nn)) {
          N = nn;
          m = static_cast<int>(rounded);
          found = true;
        }
      }
      if (!found)
        throw std::domain_error("alf: s is not dyadically rational in [1, L]; "
                                "use --s dyadic:<N>,<m>");
    }
  }
  carleson::AlfOptimizerParams p{L, N, m, a.n};
  p.validate();

  const auto sigma = carleson::alf_sigma_solve(p, phi);
  if (!a.sigma.empty()) carleson::write_sigma_csv(a.sigma, p, sigma);
  const carleson::DyadicWeight w = carleson::alf_optimizer(p, a.depth_cap);
  if (!a.out.empty()) carleson::write_weight(a.out, w);

  std::vector<long long> ladders;
  for (int e = N + 1; e <= N + a.n; ++e) ladders.push_back(1ll << e);
  const auto rows = carleson::convergence_alf(phi, L, N, m, ladders);
  if (!a.conv.empty()) carleson::write_convergence_csv(a.conv, rows);

  json j{{"kind", "alf"},
         {"L", L},
         {"N", N},
         {"m", m},
         {"n", a.n},
         {"s", p.s()},
         {"k_star", p.k_star()},
         {"sigma_at_k_star", sigma[static_cast<std::size_t>(p.k_star())]},
         {"target", carleson::A_Lf_eval(phi, L, p.s())},
         {"depth_cap", a.depth_cap}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct VerifyArgs {
  std::string functional;
  std::string phi;
  std::string L = "2";
  int grid = 50;
  long long samples = 0;
  std::uint64_t seed = 1;
  double tol = 1e-12;
  double omega_mult = 3.0;
  std::string in;        // weight path for the weight-based checks
  std::string f_path;    // step function for embedding
  double gamma = 1.0;
  double alpha = 1.0, beta = 0.0;
  std::string side_q = "4";
  std::string out;
};

int run_verify(const VerifyArgs& a) {
  const std::string fn = a.functional;
  if (a.grid > kGridCap) throw std::invalid_argument("grid exceeds the configured cap");
  if (a.samples > kSampleCap) throw std::invalid_argument("samples exceed the configured cap");

  if (fn == "U" || fn == "V" || fn == "W" || fn == "P_upper" || fn == "P_lower") {
    const carleson::Phi phi = carleson::parse_phi_selector(a.phi);
    const double L = carleson::NumericFlag{a.L}.resolve();
    carleson::SweepFunctional f;
    if (fn == "U") f = carleson::SweepFunctional::U;
    else if (fn == "V") f = carleson::SweepFunctional::V;
    else if (fn == "W") f = carleson::SweepFunctional::W;
    else if (fn == "P_upper") f = carleson::SweepFunctional::PUpper;
    else f = carleson::SweepFunctional::PLower;
    carleson::SweepOptions opt;
    opt.grid = a.grid;
    opt.random_samples = a.samples;
    opt.seed = a.seed;
    opt.tolerance = a.tol;
    opt.omega_inf_mult = a.omega_mult;
    const auto rep = carleson::sweep(f, phi, L, opt);
    emit(carleson::to_json(rep), a.out);
    return rep.passed ? 0 : 1;
  }

  if (fn == "induction_upper" || fn == "induction_lower") {
    const carleson::Phi phi = carleson::parse_phi_selector(a.phi);
    const double L = carleson::NumericFlag{a.L}.resolve();
    const carleson::DyadicWeight w = carleson::read_weight(a.in);
    const auto rep = carleson::check_induction(
        w, phi, L,
        fn == "induction_upper" ? carleson::InductionSide::Upper
                                : carleson::InductionSide::Lower);
    emit(carleson::to_json(rep), a.out);
    return rep.passed ? 0 : 1;
  }

  if (fn == "embedding" || fn == "leb" || fn == "corr3") {
    const carleson::DyadicWeight w = carleson::read_weight(a.in);
    carleson::SlackReport rep;
    if (fn == "embedding") {
      const carleson::Phi phi = carleson::parse_phi_selector(a.phi);
      rep = carleson::check_embedding(w, phi, carleson::read_step_function(a.f_path));
    } else if (fn == "leb") {
      const carleson::Phi phi = carleson::parse_phi_selector(a.phi);
      rep = carleson::check_leb(w, phi, a.gamma);
    } else {
      rep = carleson::check_corr3(w, a.alpha, a.beta);
    }
    emit(carleson::to_json(rep), a.out);
    return rep.passed ? 0 : 1;
  }

  throw std::invalid_argument("unknown functional: " + fn);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carleson-norm constants for dyadic Muckenhoupt weights"};
  app.require_subcommand(1);

  BellmanArgs bargs;
  auto* bellman = app.add_subcommand("bellman", "evaluate a candidate at (q, s)");
  bellman->add_option("--phi", bargs.phi, "power:<alpha> | table:<path> | poly:<coeffs>")
      ->required();
  bellman->add_option("--q", bargs.q)->required();
  bellman->add_option("--s", bargs.s)->required();
  bellman->add_option("--L", bargs.L, "defaults to sqrt(q)");
  bellman->add_option("--candidate", bargs.candidate, "af | alf | concave | auto");
  bellman->add_option("--out", bargs.out);

  ConstantsArgs cargs;
  auto* constants = app.add_subcommand("constants", "tabulate K and k over (alpha, q) grids");
  constants->add_option("--alphas", cargs.alphas, "comma-separated list")->required();
  constants->add_option("--qs", cargs.qs, "comma-separated list")->required();
  constants->add_option("--out", cargs.out, "CSV path");

  auto* optimizer = app.add_subcommand("optimizer", "construct extremal weights");
  optimizer->require_subcommand(1);
  OptAfArgs oaf;
  auto* opt_af = optimizer->add_subcommand("af", "tangential-split construction");
  opt_af->add_option("--phi", oaf.phi)->required();
  opt_af->add_option("--s", oaf.s)->required();
  opt_af->add_option("--n", oaf.n)->required();
  opt_af->add_option("--out", oaf.out, "weight JSON path");
  opt_af->add_option("--conv", oaf.conv, "convergence CSV path");
  OptAlfArgs oalf;
  auto* opt_alf = optimizer->add_subcommand("alf", "normal-split construction");
  opt_alf->add_option("--phi", oalf.phi)->required();
  opt_alf->add_option("--L", oalf.L)->required();
  opt_alf->add_option("--N", oalf.N);
  opt_alf->add_option("--m", oalf.m);
  opt_alf->add_option("--s", oalf.s, "dyadic:<N>,<m> or an exactly dyadic decimal");
  opt_alf->add_option("--n", oalf.n, "ladder refinement exponent");
  opt_alf->add_option("--depth-cap", oalf.depth_cap);
  opt_alf->add_option("--out", oalf.out, "weight JSON path");
  opt_alf->add_option("--sigma", oalf.sigma, "stage-sum CSV path");
  opt_alf->add_option("--conv", oalf.conv, "convergence CSV path");

  VerifyArgs vargs;
  auto* verify = app.add_subcommand("verify", "check a proved inequality");
  verify->add_option("functional", vargs.functional,
                     "U | V | W | P_upper | P_lower | induction_upper | induction_lower | "
                     "embedding | leb | corr3")
      ->required();
  verify->add_option("--phi", vargs.phi);
  verify->add_option("--L", vargs.L);
  verify->add_option("--grid", vargs.grid);
  verify->add_option("--samples", vargs.samples);
  verify->add_option("--seed", vargs.seed);
  verify->add_option("--tol", vargs.tol);
  verify->add_option("--smax-mult", vargs.omega_mult, "axis cap multiple of L for V/W/P_lower");
  verify->add_option("--in", vargs.in, "weight JSON for the weight-based checks");
  verify->add_option("--F", vargs.f_path, "step-function JSON for embedding");
  verify->add_option("--gamma", vargs.gamma);
  verify->add_option("--alpha", vargs.alpha);
  verify->add_option("--beta", vargs.beta);
  verify->add_option("--out", vargs.out);

  auto* weight = app.add_subcommand("weight", "weight utilities");
  weight->require_subcommand(1);
  std::string w_in, w_phi, w_out;
  auto* w_a2 = weight->add_subcommand("a2", "characteristic of a weight file");
  w_a2->add_option("--in", w_in)->required();
  auto* w_norm = weight->add_subcommand("norm", "local Carleson norm of a weight file");
  w_norm->add_option("--in", w_in)->required();
  w_norm->add_option("--phi", w_phi)->required();
  int ce_kmax = 24;
  bool ce_report = false;
  auto* w_ce = weight->add_subcommand("counterexample", "block weight outside the class");
  w_ce->add_option("--kmax", ce_kmax);
  w_ce->add_flag("--report", ce_report);
  w_ce->add_option("--out", w_out);
  double r_x1 = 1.0, r_x2 = 1.0, r_q = 1.0;
  int r_depth = 8;
  std::uint64_t r_seed = 1;
  auto* w_rand = weight->add_subcommand("random", "random weight in the class");
  w_rand->add_option("--x1", r_x1)->required();
  w_rand->add_option("--x2", r_x2)->required();
  w_rand->add_option("--q", r_q)->required();
  w_rand->add_option("--depth", r_depth);
  w_rand->add_option("--seed", r_seed);
  w_rand->add_option("--out", w_out);

  try {
    app.parse(argc, argv);

    if (*bellman) return run_bellman(bargs);
    if (*constants) return run_constants(cargs);
    if (*opt_af) return run_opt_af(oaf);
    if (*opt_alf) return run_opt_alf(oalf);
    if (*verify) return run_verify(vargs);

    if (*w_a2) {
      const auto w = carleson::read_weight(w_in);
      emit(json{{"a2", carleson::a2_characteristic(w)}}, "");
      return 0;
    }
    if (*w_norm) {
      const auto w = carleson::read_weight(w_in);
      const auto phi = carleson::parse_phi_selector(w_phi);
      emit(json{{"norm", carleson::carleson_norm_local(w, phi)}}, "");
      return 0;
    }
    if (*w_ce) {
      const auto w = carleson::counterexample_weight(ce_kmax);
      if (!w_out.empty()) carleson::write_weight(w_out, w);
      json j{{"kmax", ce_kmax}, {"depth", w.depth()}};
      if (ce_report) {
        const auto analysis = carleson::analyze_carleson(w, carleson::Phi::power(0.0));
        json products = json::array();
        for (int n = 1; n <= std::min(20, ce_kmax - 1); ++n) {
          const auto st = carleson::interval_stats(w, carleson::DyadicInterval{n, 0});
          products.push_back(st.avg_w * st.avg_winv);
        }
        j["a2_products_left_spine"] = products;
        j["r_norm"] = analysis.local_norm;
        j["max_R"] = analysis.max_r;
      }
      emit(j, "");
      return 0;
    }
    if (*w_rand) {
      const auto w = carleson::random_a2_weight({r_x1, r_x2, r_q}, r_depth, r_seed);
      if (!w_out.empty()) carleson::write_weight(w_out, w);
      emit(json{{"depth", w.depth()},
                {"a2", carleson::a2_characteristic(w)},
                {"written", !w_out.empty()}},
           "");
      return 0;
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
