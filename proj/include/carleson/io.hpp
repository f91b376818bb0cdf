#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "carleson/bellman.hpp"
#include "carleson/dyadic.hpp"
#include "carleson/phi.hpp"
#include "carleson/verify.hpp"

namespace carleson {

using json = nlohmann::json;

// Weight file schema: {"depth": n, "values": [v_0, ..., v_{2^n - 1}]}.
inline json to_json(const DyadicWeight& w) {
  return json{{"depth", w.depth()}, {"values", w.values()}};
}

inline DyadicWeight weight_from_json(const json& j) {
  if (!j.is_object() || !j.contains("depth") || !j.contains("values"))
    throw std::invalid_argument("weight json: expected {\"depth\", \"values\"}");
  const int depth = j.at("depth").get<int>();
  const auto values = j.at("values").get<std::vector<double>>();
  return DyadicWeight(depth, values);  // rejects wrong-length arrays and bad values
}

inline void write_weight(const std::string& path, const DyadicWeight& w) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << to_json(w).dump(2) << "\n";
}

inline DyadicWeight read_weight(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weight file: " + path);
  json j;
  in >> j;
  return weight_from_json(j);
}

inline json to_json(const StepFunction& f) {
  return json{{"depth", f.depth}, {"values", f.values}};
}

inline StepFunction step_function_from_json(const json& j) {
  StepFunction f;
  f.depth = j.at("depth").get<int>();
  f.values = j.at("values").get<std::vector<double>>();
  f.validate();
  return f;
}

inline StepFunction read_step_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open step-function file: " + path);
  json j;
  in >> j;
  return step_function_from_json(j);
}

// Phi table file: CSV with header "t,phi" and strictly increasing t.
inline Phi read_phi_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open phi table: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("phi table: empty file");
  auto strip = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    const auto b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
  };
  if (strip(line) != "t,phi") throw std::invalid_argument("phi table: expected header 't,phi'");
  std::vector<PhiTablePoint> pts;
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("phi table: malformed row");
    pts.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return Phi::table(std::move(pts));
}

inline void write_phi_table_csv(const std::string& path, const Phi& phi) {
  if (phi.kind() != Phi::Kind::Table)
    throw std::invalid_argument("phi table export: not a table");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "t,phi\n";
  out.precision(17);
  for (const auto& p : phi.table_points()) out << p.t << "," << p.phi << "\n";
}

// Selector grammar: "power:<alpha>", "table:<path>", "poly:<c0>,<c1>,...".
inline Phi parse_phi_selector(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("phi selector: expected power:<alpha>, table:<path>, or poly:<coeffs>");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "power") return Phi::power(std::stod(rest));
  if (kind == "table") return read_phi_table_csv(rest);
  if (kind == "poly") {
    std::vector<double> coeffs;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) coeffs.push_back(std::stod(item));
    return Phi::poly(std::move(coeffs));
  }
  throw std::invalid_argument("phi selector: unknown kind '" + kind + "'");
}

// Numeric flag grammar: plain decimal, "sqrt:<v>", or "dyadic:<N>,<m>"
// (the latter resolves against L as L - m 2^-N (L-1)).
struct NumericFlag {
  std::string raw;

  bool is_dyadic() const { return raw.rfind("dyadic:", 0) == 0; }

  double resolve() const {
    if (raw.rfind("sqrt:", 0) == 0) return std::sqrt(std::stod(raw.substr(5)));
    if (is_dyadic()) throw std::invalid_argument("dyadic:<N>,<m> needs an L to resolve against");
    return std::stod(raw);
  }

  double resolve_with_L(double L) const {
    if (!is_dyadic()) return resolve();
    const std::string body = raw.substr(7);
    const auto comma = body.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("dyadic flag: expected dyadic:<N>,<m>");
    const int n = std::stoi(body.substr(0, comma));
    const int m = std::stoi(body.substr(comma + 1));
    if (n < 0 || n > 30 || m < 0 || m > (1 << n))
      throw std::invalid_argument("dyadic flag: need 0 <= m <= 2^N");
    return L - static_cast<double>(m) * std::ldexp(1.0, -n) * (L - 1.0);
  }
};

inline json to_json(const VerificationReport& r) {
  return json{{"functional", r.functional},
              {"passed", r.passed},
              {"extremal", r.extremal},
              {"witness", {r.witness.s_minus, r.witness.s_plus, r.witness.s}},
              {"samples", r.samples},
              {"tolerance", r.tolerance},
              {"grid", r.grid_desc}};
}

inline json to_json(const BellmanReport& r) {
  return json{{"q", r.q},          {"s", r.s},
              {"candidate", r.candidate}, {"value", r.value},
              {"case", r.case_used},     {"bound_only", r.bound_only},
              {"quad_err", r.quad_err}};
}

inline json to_json(const InductionReport& r) {
  return json{{"functional", r.functional},
              {"passed", r.passed},
              {"worst_residual", r.worst_residual},
              {"worst_node", {{"depth", r.worst_node.depth}, {"index", r.worst_node.index}}},
              {"carleson_sum", r.sum},
              {"candidate_at_root", r.candidate_at_root},
              {"node_tolerance", r.node_tolerance},
              {"sum_tolerance", r.sum_tolerance}};
}

inline json to_json(const SlackReport& r) {
  return json{{"functional", r.functional},
              {"passed", r.passed},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"slack", r.slack}};
}

inline void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

inline void write_convergence_csv(const std::string& path,
                                  const std::vector<ConvergenceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "n,sum,target,abs_err\n";
  out.precision(17);
  for (const auto& r : rows) out << r.n << "," << r.sum << "," << r.target << "," << r.abs_err << "\n";
}

inline void write_sigma_csv(const std::string& path, const AlfOptimizerParams& p,
                            const std::vector<double>& sigma) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "k,s_k,sigma_k\n";
  out.precision(17);
  for (std::size_t k = 0; k < sigma.size(); ++k)
    out << k << "," << p.s_at(static_cast<std::int64_t>(k)) << "," << sigma[k] << "\n";
}

}  // namespace carleson
