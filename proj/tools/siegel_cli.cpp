// siegel_cli: command-line front end to the siegel library.
// Exit codes: 0 success, 1 identity failure, 2 usage error, 3 unsupported input.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "siegel/siegel.hpp"

using namespace siegel;
using io::json;

namespace {

struct Options {
  std::string format = "json";
  double max_ops = 1e9;
  int jobs = 1;
  std::string reading = "corrected";
  unsigned seed = 20240501;
  std::string config;
  std::string matrix;
  std::string egk;
  long p = 0;
};

Budget budget(const Options& o) { return Budget{o.max_ops, o.jobs}; }
Reading reading(const Options& o) { return o.reading == "as-printed" ? Reading::AsPrinted : Reading::Corrected; }

void emit(const Options& o, const json& j, const std::string& csv_text = "") {
  if (o.format == "csv")
    std::cout << (csv_text.empty() ? io::csv(j) : csv_text);
  else
    std::cout << j.dump(2) << "\n";
}

HalfIntMat need_matrix(const Options& o) {
  if (o.matrix.empty()) throw usage_error("--matrix is required");
  return io::parse_matrix(o.matrix);
}

long need_p(const Options& o) {
  if (o.p < 2 || !is_prime(o.p)) throw usage_error("--p must be a prime");
  return o.p;
}

// config file values fill in only the options not given on the command line
void apply_config(CLI::App& app, Options& o) {
  if (o.config.empty()) return;
  std::ifstream in(o.config);
  if (!in) throw usage_error("cannot read config file " + o.config);
  json c;
  try {
    c = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw usage_error(std::string("config: ") + ex.what());
  }
  auto unset = [&](const char* flag) { return app.get_option(flag)->count() == 0; };
  try {
    if (c.contains("max_ops") && unset("--max-ops")) o.max_ops = c["max_ops"].get<double>();
    if (c.contains("jobs") && unset("--jobs")) o.jobs = c["jobs"].get<int>();
    if (c.contains("format") && unset("--format")) o.format = c["format"].get<std::string>();
    if (c.contains("reading") && unset("--reading")) o.reading = c["reading"].get<std::string>();
    if (c.contains("seed") && unset("--seed")) o.seed = c["seed"].get<unsigned>();
  } catch (const json::exception& ex) {
    throw usage_error(std::string("config: ") + ex.what());
  }
  if (o.max_ops <= 0) throw usage_error("config: max_ops must be positive");
  if (o.jobs < 1) throw usage_error("config: jobs must be at least 1");
  if (o.format != "json" && o.format != "csv") throw usage_error("config: format must be json or csv");
  if (o.reading != "corrected" && o.reading != "as-printed") throw usage_error("config: reading must be corrected or as-printed");
}

json invariants_json(const HalfIntMat& T, long only_p) {
  json j = {{"T", io::to_json(T)}, {"det2T", T.det2T().get_str()}};
  if (T.size() % 2 == 0) j["D"] = T.disc().get_str();
  std::vector<long> ps;
  if (only_p)
    ps = {only_p};
  else {
    ps = prime_divisors(2 * T.det2T());
  }
  json loc = json::array();
  for (long q : ps) loc.push_back(io::to_json(local_invariants(T, q)));
  j["local"] = loc;
  if (T.size() % 2 == 0 && T.positive_definite()) {
    try {
      j["diff"] = diff_set(T);
    } catch (const usage_error&) {
    }
  }
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"Siegel series, local densities and Eisenstein coefficients in exact arithmetic"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--max-ops", o.max_ops, "operation budget for brute-force oracles")->check(CLI::PositiveNumber);
  app.add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1, 256));
  app.add_option("--reading", o.reading, "ternary double-sum reading")->check(CLI::IsMember({"corrected", "as-printed"}));
  app.add_option("--seed", o.seed, "seed for randomized suites");
  app.add_option("--config", o.config, "JSON config file; flags override");
  auto add_matrix = [&](CLI::App* s) { return s->add_option("--matrix", o.matrix, "JSON integer matrix for 2T"); };
  auto add_egk = [&](CLI::App* s) { return s->add_option("--egk", o.egk, "EGK datum a1,...,an:e2,...,en"); };
  auto add_p = [&](CLI::App* s) { return s->add_option("--p", o.p, "prime"); };

  auto* inv = app.add_subcommand("invariants", "local invariants of T at p, or at every prime of 2 det(2T)");
  add_matrix(inv)->required();
  add_p(inv);

  bool brute = false;
  auto* gk = app.add_subcommand("gk", "Gross-Keating invariant of T at p");
  add_matrix(gk)->required();
  add_p(gk)->required();
  gk->add_flag("--brute", brute, "lexicographic search over GL_g(Z/p^k) (g <= 3)");

  bool truncate = false;
  auto* egk = app.add_subcommand("egk", "extended GK datum of T at an odd prime");
  add_matrix(egk)->required();
  add_p(egk)->required();
  egk->add_flag("--truncate", truncate, "drop the last entry");

  std::string method = "closed";
  auto* fp = app.add_subcommand("fpoly", "the polynomial F_p^T");
  add_matrix(fp);
  add_egk(fp);
  add_p(fp)->required();
  fp->add_option("--method", method, "closed | interp | series | reduction")->check(CLI::IsMember({"closed", "interp", "series", "reduction"}));

  auto* c4 = app.add_subcommand("c4", "Fourier coefficient of the central derivative at a quaternary T");
  add_matrix(c4)->required();

  auto* t51 = app.add_subcommand("thm51", "C4 via the ternary bracket and R(T)");
  add_matrix(t51)->required();

  auto* dz = app.add_subcommand("degz", "degree of the special cycle of a ternary form or datum");
  add_matrix(dz);
  add_egk(dz);
  add_p(dz);

  auto* t12 = app.add_subcommand("thm12", "C4 = -2304 (deg Z(T') + correction)");
  add_matrix(t12)->required();

  int amax = 5;
  std::vector<long> primes{3, 5, 7, 11};
  auto* c52 = app.add_subcommand("cor52", "ratio bounds for a form, a datum, or a sweep");
  add_matrix(c52);
  add_egk(c52);
  add_p(c52);
  auto* sweep = c52->add_flag("--sweep", "all anisotropic data with a4 <= --amax over --primes");
  c52->add_option("--amax", amax, "largest a4 in the sweep")->check(CLI::Range(0, 12));
  c52->add_option("--primes", primes, "odd primes for the sweep");

  std::vector<long> ms;
  auto* tri = app.add_subcommand("triple", "sum of deg Z over ternary forms with diagonal m1 m2 m3");
  tri->add_option("m", ms, "M1 M2 M3")->required()->expected(3);

  auto* ms_cmd = app.add_subcommand("mass", "mass and automorphisms of the maximal order ramified at p");
  add_p(ms_cmd)->required();

  std::string suite = "all";
  auto* ver = app.add_subcommand("verify", "run an acceptance suite; exit 1 if any check fails");
  ver->add_option("--suite", suite, "all | " + [] {
    std::string s;
    for (auto& n : verify::suite_names()) s += (s.empty() ? "" : " | ") + n;
    return s;
  }());

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  apply_config(app, o);
  Budget B = budget(o);
  Reading rd = reading(o);

  if (*inv) {
    if (o.p) need_p(o);
    emit(o, invariants_json(need_matrix(o), o.p));
  } else if (*gk) {
    auto T = need_matrix(o);
    long p = need_p(o);
    GKDatum G;
    std::string how;
    if (brute) {
      G = gk_bruteforce(T, p, o.max_ops);
      how = "bruteforce";
    } else {
      if (p == 2) throw unsupported_error("gk: the diagonalization route needs an odd prime; use --brute");
      G = gk_odd(T, p);
      how = "diagonalization";
    }
    emit(o, {{"T", io::to_json(T)}, {"p", p}, {"method", how}, {"gk", G.a}});
  } else if (*egk) {
    auto T = need_matrix(o);
    long p = need_p(o);
    if (p == 2) throw unsupported_error("egk: only odd primes are supported");
    auto H = egk_odd(T, p);
    if (truncate) H = egk_truncate(H);
    emit(o, {{"T", io::to_json(T)}, {"p", p}, {"egk", io::to_json(H)}});
  } else if (*fp) {
    long p = need_p(o);
    if (o.matrix.empty() == o.egk.empty()) throw usage_error("fpoly: give exactly one of --matrix and --egk");
    json j = {{"p", p}, {"method", method}};
    SiegelPoly F;
    if (!o.egk.empty()) {
      if (method != "closed") throw usage_error("fpoly: --egk input only supports --method closed");
      auto H = io::parse_egk(o.egk);
      j["egk"] = io::to_json(H);
      F = H.size() == 3 ? ternary_F(H, p, rd, true) : F_from_egk(H, p, rd);
    } else {
      auto T = need_matrix(o);
      j["T"] = io::to_json(T);
      if (method == "closed") {
        if (p == 2) throw unsupported_error("fpoly: the closed formula needs an odd prime; use --method reduction");
        auto H = egk_odd(T, p);
        j["egk"] = io::to_json(H);
        F = H.size() == 3 ? ternary_F(H, p, rd, true) : F_from_egk(H, p, rd);
      } else if (method == "interp") {
        F = interpolate_F(T, p, B);
      } else if (method == "reduction") {
        F = reduction_F(T, p, B);
      } else {
        F = series_F(T, p, B);
      }
    }
    j["F"] = io::to_json(F);
    if (F.rational()) {
      j["F(1/p)"] = io::rat(F_eval(F, Rat(1, p)));
      j["F(1/p^2)"] = io::rat(F_eval(F, Rat(1, p * p)));
      j["F'(1/p^2)"] = io::rat(F_deriv_eval(F, Rat(1, p * p)));
    }
    emit(o, j);
  } else if (*c4) {
    emit(o, io::to_json(C4(need_matrix(o), B)));
  } else if (*t51) {
    auto T = need_matrix(o);
    auto R = C4(T, B);
    if (R.kind != C4Case::ChiTrivialSingleton) throw usage_error("thm51: chi_T trivial and a singleton Diff required");
    auto v = thm51_value(T, R.p, B, rd);
    bool eq = v == R.C4;
    emit(o, {{"T", io::to_json(T)}, {"p", R.p}, {"thm51", io::to_json(v)}, {"C4", io::to_json(R.C4)}, {"equal", eq}});
    if (!eq) return 1;
  } else if (*dz) {
    if (o.matrix.empty() == o.egk.empty()) throw usage_error("degz: give exactly one of --matrix and --egk");
    if (!o.egk.empty()) {
      long p = need_p(o);
      auto H = io::parse_egk(o.egk);
      if (H.size() != 3) throw usage_error("degz: ternary datum expected");
      emit(o, {{"egk", io::to_json(H)}, {"p", p}, {"degZ", io::to_json(deg_Z(H, p, rd))}});
    } else {
      auto T = need_matrix(o);
      auto R = deg_Z(T, B);
      json j = {{"B", io::to_json(T)}, {"diff", R.diff}, {"degZ", io::to_json(R.value)}};
      if (R.p) {
        j["p"] = R.p;
        j["method"] = R.method;
      }
      emit(o, j);
    }
  } else if (*t12) {
    auto R = thm12_decompose(need_matrix(o), B, rd);
    emit(o, io::to_json(R));
    if (!R.identity) return 1;
  } else if (*c52) {
    if (sweep->count()) {
      std::vector<Cor52Report> rows;
      json arr = json::array();
      bool all = true;
      for (long p : primes) {
        if (p < 3 || !is_prime(p)) throw usage_error("cor52: --primes must be odd primes");
        for (auto& H : anisotropic_data(amax)) {
          rows.push_back(cor52_local(H, p, rd));
          arr.push_back(io::to_json(rows.back()));
          all = all && rows.back().crude_pass && rows.back().fine_pass && rows.back().proof_inequality;
        }
      }
      emit(o, arr, io::csv(rows));
      if (!all) return 1;
    } else if (!o.egk.empty()) {
      auto R = cor52_local(io::parse_egk(o.egk), need_p(o), rd);
      emit(o, io::to_json(R), io::csv(std::vector<Cor52Report>{R}));
      if (!(R.crude_pass && R.fine_pass && R.proof_inequality)) return 1;
    } else {
      auto R = cor52_bounds(need_matrix(o), B, rd);
      emit(o, io::to_json(R), io::csv(std::vector<Cor52Report>{R}));
      if (!(R.crude_pass && R.fine_pass && R.proof_inequality)) return 1;
    }
  } else if (*tri) {
    auto R = triple_intersection(ms[0], ms[1], ms[2], B);
    emit(o, io::to_json(R), io::csv(R));
  } else if (*ms_cmd) {
    long p = need_p(o);
    auto G = build_maximal_order(p);
    emit(o, {{"p", p},
             {"gram", io::to_json(G.gram)},
             {"diff", G.diff},
             {"automorphisms", automorphism_count(G.gram)},
             {"mass_prime", io::rat(mass_maximal_order(p))},
             {"mass", io::rat(mass_full(p))}});
  } else if (*ver) {
    std::cerr << "seed " << o.seed << "\n";
    auto results = verify::run(suite, B, o.seed, [](const verify::SuiteResult& r) { std::cerr << verify::line(r) << std::endl; });
    json arr = json::array();
    bool all = true;
    for (auto& r : results) {
      arr.push_back(verify::to_json(r));
      all = all && r.pass;
    }
    emit(o, arr);
    if (!all) return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const unsupported_error& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 3;
  } catch (const identity_failure& e) {
    std::cerr << "identity failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
