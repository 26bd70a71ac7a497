#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eisenstein.hpp"

namespace siegel::io {

using json = nlohmann::ordered_json;

inline std::string rat(const Rat& x) {
  Rat y = x;
  y.canonicalize();
  return y.get_str();
}

inline json to_json(const ExactScalar& s) {
  json f = json::object();
  for (auto& [sym, k] : s.factors()) f[sym.key()] = k;
  return {{"coeff", rat(s.coeff())}, {"pi", s.pi_exp()}, {"factors", f}};
}

inline json to_json(const HalfIntMat& T) { return T.B(); }

inline json to_json(const EGKDatum& H) { return {{"a", H.a}, {"eps", H.eps}, {"str", H.str()}}; }

inline json to_json(const SiegelPoly& P) {
  json c = json::array();
  for (auto& s : P.coeffs) c.push_back({rat(s.x), rat(s.y)});
  return {{"q", P.q}, {"g", P.g}, {"e", P.e}, {"coeffs", c}};
}

inline json to_json(const LocalInvariants& L) {
  return {{"p", L.p},   {"D", L.D.get_str()}, {"ord_D", L.ord_D},     {"cond_ord", L.cond_ord},
          {"e", L.e},   {"xi", L.xi},         {"eta", L.eta},         {"chi_trivial", L.chi_trivial},
          {"fund_disc", L.fund_disc.get_str()}};
}

inline json to_json(const LocalFactor& L) {
  return {{"q", L.q}, {"method", L.method}, {"datum", L.datum}, {"F", to_json(L.F)}, {"value", rat(L.value)}};
}

inline json to_json(const ProductReport& R) {
  json fs = json::array();
  for (auto& f : R.factors) fs.push_back(to_json(f));
  return {{"d_inf", to_json(R.d_inf)},          {"power_of_two", rat(R.power_of_two)}, {"ramified", rat(R.ramified)},
          {"unramified", to_json(R.unramified)}, {"factors", fs},                       {"value", rat(R.value)}};
}

inline json to_json(const DensityReport& R) {
  json c = json::array(), n = json::array();
  for (auto& [i, A] : R.counts) c.push_back({i, A.get_str()});
  for (auto& x : R.normalized) n.push_back(rat(x));
  return {{"S", to_json(R.S)}, {"T", to_json(R.T)}, {"p", R.p}, {"counts", c}, {"normalized", n}, {"stable", R.stable}};
}

inline json to_json(const Thm41Report& R) {
  json j = {{"value_identity", R.value_identity}, {"lhs_value", rat(R.lhs_value)}, {"rhs_value", rat(R.rhs_value)}};
  if (R.derivative_checked) {
    j["derivative_identity"] = R.derivative_identity;
    j["lhs_deriv"] = rat(R.lhs_deriv);
    j["rhs_deriv"] = rat(R.rhs_deriv);
  }
  return j;
}

inline json to_json(const CoefficientReport& R) {
  json fs = json::array();
  for (auto& f : R.factors) fs.push_back({{"name", f.name}, {"value", to_json(f.value)}});
  json j = {{"T", to_json(R.T)}, {"case", case_name(R.kind)}, {"diff", R.diff}, {"C4", to_json(R.C4)}, {"factors", fs}};
  if (R.p) j["p"] = R.p;
  if (!R.companion.empty()) {
    j["companion"] = R.companion;
    j["lhs"] = to_json(R.lhs);
    j["degZ"] = to_json(R.degZ);
    j["correction"] = to_json(R.correction);
    j["identity"] = R.identity;
  }
  return j;
}

inline json to_json(const Cor52Report& R) {
  return {{"datum", R.H.str()},
          {"p", R.p},
          {"sigma", R.sigma},
          {"lhs", rat(R.lhs)},
          {"fine_rhs", {{"rational", rat(R.fine_x)}, {"sqrt_p", rat(R.fine_y)}}},
          {"crude_rhs", {{"rational", "0"}, {"sqrt_p", rat(R.crude_y)}}},
          {"crude_pass", R.crude_pass},
          {"fine_pass", R.fine_pass},
          {"fine_below_crude", R.fine_below_crude},
          {"proof_inequality", R.proof_inequality},
          {"lhs_numeric", R.lhs_numeric},
          {"fine_numeric", R.fine_numeric},
          {"crude_numeric", R.crude_numeric}};
}

inline json to_json(const TripleReport& R) {
  json t = json::array();
  for (auto& r : R.table) t.push_back({{"B", to_json(r.B)}, {"diff", r.diff}, {"p", r.p}, {"degZ", to_json(r.degZ)}, {"status", r.status}});
  json tot = json::object();
  for (auto& [p, v] : R.total) tot[std::to_string(p)] = to_json(v);
  return {{"table", t}, {"total", tot}, {"unsupported", R.unsupported}};
}

// --- CSV ----------------------------------------------------------------------

inline std::string csv_matrix(const HalfIntMat& T) {
  std::string s;
  for (int i = 0; i < T.size(); ++i)
    for (int j = 0; j < T.size(); ++j) s += (s.empty() ? "" : " ") + std::to_string(T.b(i, j));
  return s;
}

inline std::string csv(const TripleReport& R) {
  std::ostringstream os;
  os << "B2,diff,p,degZ_coeff,status\n";
  for (auto& r : R.table) {
    std::string d;
    for (long q : r.diff) d += (d.empty() ? "" : " ") + std::to_string(q);
    os << csv_matrix(r.B) << "," << d << "," << r.p << "," << rat(r.degZ.coeff()) << "," << r.status << "\n";
  }
  return os.str();
}

inline std::string csv(const std::vector<Cor52Report>& rows) {
  std::ostringstream os;
  os << "datum,p,sigma,lhs,fine_x,fine_y,crude_y,crude_pass,fine_pass,proof_inequality\n";
  for (auto& r : rows)
    os << '"' << r.H.str() << '"' << "," << r.p << "," << r.sigma << "," << rat(r.lhs) << "," << rat(r.fine_x) << ","
       << rat(r.fine_y) << "," << rat(r.crude_y) << "," << r.crude_pass << "," << r.fine_pass << "," << r.proof_inequality << "\n";
  return os.str();
}

// flat key,value rows for any JSON object
inline void csv_flatten(const json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    for (auto& [k, v] : j.items()) csv_flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
    for (size_t i = 0; i < j.size(); ++i) csv_flatten(j[i], prefix + "." + std::to_string(i), os);
  } else {
    std::string v = j.is_string() ? j.get<std::string>() : j.dump();
    if (v.find(',') != std::string::npos || v.find('"') != std::string::npos) {
      std::string q;
      for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      v = '"' + q + '"';
    }
    os << prefix << "," << v << "\n";
  }
}

inline std::string csv(const json& j) {
  std::ostringstream os;
  os << "key,value\n";
  csv_flatten(j, "", os);
  return os.str();
}

// --- parsing ------------------------------------------------------------------

// JSON integer matrix for 2T
inline HalfIntMat parse_matrix(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw usage_error(std::string("matrix: not valid JSON: ") + ex.what());
  }
  if (!j.is_array() || j.empty()) throw usage_error("matrix: expected a nonempty array of rows");
  size_t n = j.size();
  std::vector<std::vector<long long>> B(n);
  for (size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw usage_error("matrix: rows must have length " + std::to_string(n));
    for (auto& x : j[i]) {
      if (!x.is_number_integer()) throw usage_error("matrix: entries of 2T must be integers");
      B[i].push_back(x.get<long long>());
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (B[i][i] % 2) throw usage_error("matrix: diagonal entries of 2T must be even");
    for (size_t k = 0; k < i; ++k)
      if (B[i][k] != B[k][i]) throw usage_error("matrix: 2T must be symmetric");
  }
  return HalfIntMat(B);
}

// "a1,...,ag:e2,...,eg" (eps1 = 1 implied) or "a1,...,ag:e1,...,eg"
inline EGKDatum parse_egk(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw usage_error("egk: expected 'a1,a2,...:e2,...'");
  auto ints = [](const std::string& s) {
    std::vector<int> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        size_t used = 0;
        v.push_back(std::stoi(tok, &used));
        if (tok.find_first_not_of(' ', used) != std::string::npos) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw usage_error("egk: malformed integer '" + tok + "'");
      }
    }
    return v;
  };
  EGKDatum H;
  H.a = ints(text.substr(0, colon));
  H.eps = ints(text.substr(colon + 1));
  if (H.eps.size() + 1 == H.a.size()) H.eps.insert(H.eps.begin(), 1);
  validate_egk(H);
  return H;
}

}  // namespace siegel::io
