#include <CLI11.hpp>

#include <iostream>

#include "sl2pc/reports.hpp"

using namespace sl2pc;

namespace {

constexpr int kExitOk = 0, kExitFailed = 1, kExitInvalid = 2;

std::vector<double> parse_times(const std::string& s) {
  std::vector<double> ts;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      ts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(Errc::parse, "bad time '" + tok + "'");
    }
  }
  if (ts.empty()) throw Error(Errc::parse, "empty time list");
  return ts;
}

std::string fmt_cx(cx z) {
  char b[64];
  std::snprintf(b, sizeof b, "%.10g%+.10gi", z.real(), z.imag());
  return b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification tools for the Poisson structures of sl2(C)"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  bool json = false;
  std::uint64_t seed = 0;
  double tol_scale = 0;
  int max_degree = -1, threads = 0;
  app.add_option("--config", config_path, "JSON config file");
  app.add_flag("--json", json, "one JSON object per line");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--tol-scale", tol_scale, "multiply every tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-degree", max_degree, "largest polynomial degree for cohomology")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite = "all";
  verify->add_option("suite", suite, "core | exterior | flow | skeleton | homotopy | all")
      ->check(CLI::IsMember({"core", "exterior", "flow", "skeleton", "homotopy", "all"}));

  auto* cohom = app.add_subcommand("cohomology", "formal Poisson cohomology Betti table");
  std::vector<int> degrees;
  cohom->add_option("-k,--degrees", degrees, "cochain degrees to compute (default 0..6)")
      ->delimiter(',')
      ->check(CLI::Range(0, 6));

  auto* flow = app.add_subcommand("flow", "tabulate the gradient flow at one point");
  std::string point = "random:1", times = "0,0.5,1,2,5";
  flow->add_option("--point", point, "diag | nilpotent | random:SEED | six comma-separated reals");
  flow->add_option("--t", times, "comma-separated flow times");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  Config cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--tol-scale")) cfg.tol_scale = tol_scale;
    if (app.count("--threads")) cfg.threads = threads;
    if (app.count("--max-degree")) cfg.max_degree = max_degree;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (*verify) {
      auto rep = verify_suite(suite, cfg);
      std::cout << (json ? report_json_lines(rep, cfg.report_runtime) : report_text(rep, cfg.report_runtime));
      return rep.ok() ? kExitOk : kExitFailed;
    }
    if (*cohom) {
      if (cfg.max_degree > cfg.degree_cap) throw Error(Errc::degree_cap, "max degree above cap");
      if (degrees.empty())
        for (int k = 0; k <= 6; ++k) degrees.push_back(k);
      std::sort(degrees.begin(), degrees.end());
      degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
      auto s = derive_structure_constants();
      auto cmp = compare_betti(s, cfg.max_degree, degrees, cfg.degree_cap, cfg.threads);
      std::cout << (json ? betti_comparison_json(cmp) : betti_comparison_text(cmp));
      if (!json) std::cout << (cmp.equal ? "tables agree\n" : "CHECK_FAILED: tables differ\n");
      return cmp.equal ? kExitOk : kExitFailed;
    }
    if (*flow) {
      Sl2Point p = parse_point(point);
      auto rows = flow_table(p, parse_times(times));
      for (auto& r : rows) {
        const Mat2& m = r.A_t.matrix();
        if (json) {
          nlohmann::json j;
          j["t"] = r.t;
          j["coords"] = r.A_t.coords();
          j["R2_t"] = r.R2_t;
          j["gap"] = r.gap;
          j["dist_to_retract"] = r.to_retract;
          std::cout << j.dump() << "\n";
        } else {
          std::printf("t=%-8g A_t=[[%s, %s], [%s, %s]]  R_t^2=%.12g  gap=%.3g  |A_t - r(A)|=%.3g\n", r.t,
                      fmt_cx(m.a).c_str(), fmt_cx(m.b).c_str(), fmt_cx(m.c).c_str(), fmt_cx(m.d).c_str(), r.R2_t,
                      r.gap, r.to_retract);
        }
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return (e.code() == Errc::parse || e.code() == Errc::config_invalid || e.code() == Errc::degree_cap)
               ? kExitInvalid
               : kExitFailed;
  }
  return kExitInvalid;
}
