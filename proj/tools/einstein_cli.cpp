#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "einstein/report.hpp"

using namespace einstein;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCheckFailure = 3;
constexpr int kExitInternal = 4;

struct CommonArgs {
  std::string space = "group";
  int l = 1, m = 1, n = 1;
  bool json = false;
  std::string out;
  std::string csv;
  double tol = 1e-6;
};

SpaceKind space_of(const std::string& s) {
  if (s == "group") return SpaceKind::Group;
  if (s == "stiefel") return SpaceKind::Stiefel;
  throw CLI::ValidationError("--space must be group or stiefel");
}

void write_out(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream f(path);
    f << text << "\n";
  }
}

std::vector<double> parse_list(const std::string& s, size_t count, const char* what) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  if (vals.size() != count)
    throw CLI::ValidationError(std::string(what) + ": expected " + std::to_string(count) +
                               " comma-separated values");
  return vals;
}

void print_solutions_human(const SolveResult& r) {
  std::printf("%s l=%d m=%d n=%d: %zu solution(s), %zu rejected candidate(s)\n",
              space_name(r.space), r.spec.l, r.spec.m, r.spec.n, r.solutions.size(),
              r.rejected.size());
  for (const auto& s : r.solutions) {
    std::printf("  (u1,u2,u3,v4,v5,x6,x7,x8) = (%.9g, %.9g, %.9g, %.9g, %.9g, %.9g, %.9g, %.9g)"
                "  c=%.9g\n",
                s.metric.u1, s.metric.u2, s.metric.u3, s.metric.v4, s.metric.v5, s.metric.x6,
                s.metric.x7, s.metric.x8, s.metric.gauge.c);
    std::printf("    lambda = %.15g, residual = %.3g", s.lambda, s.residual);
    if (s.exact_form) std::printf(", %s", s.exact_form->c_str());
    if (s.space == SpaceKind::Group)
      std::printf(", naturally reductive: %s%s",
                  s.classification.naturally_reductive ? "yes" : "no",
                  s.classification.nr_case ? (" (" + *s.classification.nr_case + ")").c_str()
                                           : "");
    else
      std::printf(", Jensen type: %s",
                  s.classification.jensen_type.value_or(false) ? "yes" : "no");
    std::printf("  [%s]\n", s.origin.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant Einstein metric solver for SU(l+m+n) and SU(l+m+n)/SU(n)"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string pipeline = "auto";
  uint64_t seed = 0;
  int starts = 512;
  std::string gauge_str, metric_str, file_path;
  bool brute = false;

  auto add_common = [&](CLI::App* sub, bool with_spec = true) {
    if (with_spec) {
      sub->add_option("--space", args.space, "group or stiefel")
          ->check(CLI::IsMember({"group", "stiefel"}));
      sub->add_option("--l", args.l, "first block size")->check(CLI::PositiveNumber);
      sub->add_option("--m", args.m, "second block size")->check(CLI::PositiveNumber);
      sub->add_option("--n", args.n, "third block size")->check(CLI::PositiveNumber);
    }
    sub->add_flag("--json", args.json, "emit JSON");
    sub->add_option("--out", args.out, "write output to a file");
    sub->add_option("--tol", args.tol, "tolerance for checks/classification");
  };

  auto* solve = app.add_subcommand("solve", "solve the Einstein system for one space");
  add_common(solve);
  solve->add_option("--pipeline", pipeline, "auto|newton");
  solve->add_option("--seed", seed, "random seed for the Newton fallback");
  solve->add_option("--starts", starts, "number of Newton starts");
  solve->add_option("--csv", args.csv, "also write solutions as CSV to this file");

  auto* constants = app.add_subcommand("constants", "structure-constant tables");
  add_common(constants);
  constants->add_flag("--brute", brute, "use the brute-force triple sums");
  constants->add_option("--gauge", gauge_str, "a,b,c,d center gauge");

  auto* ricci = app.add_subcommand("ricci", "Ricci components of one metric");
  add_common(ricci);
  ricci->add_flag("--brute", brute, "also emit the full brute-force matrix data");
  ricci->add_option("--metric", metric_str, "u1,u2,u3,v4,v5,x6,x7,x8")->required();
  ricci->add_option("--gauge", gauge_str, "a,b,c,d center gauge");

  auto* classify = app.add_subcommand("classify", "classify solutions from a JSON file");
  classify->add_option("--solution,file", file_path, "JSON file from solve")->required();
  add_common(classify, false);

  auto* verify = app.add_subcommand("verify", "re-certify solutions from a JSON file");
  verify->add_option("file", file_path, "JSON file from solve")->required();
  add_common(verify, false);

  auto* reproduce = app.add_subcommand("reproduce", "run every acceptance-criteria case");
  add_common(reproduce, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) {
      FlagSpec spec(args.l, args.m, args.n);
      SolveOptions opts;
      opts.pipeline = pipeline;
      opts.newton.seed = seed;
      opts.newton.starts = starts;
      SolveResult r = solve_auto(spec, space_of(args.space), opts);
      if (!args.csv.empty()) write_out(solutions_csv(r), args.csv);
      if (args.json) write_out(solve_result_json(r, seed), args.out);
      else print_solutions_human(r);
      return kExitOk;
    }
    if (constants->parsed()) {
      FlagSpec spec(args.l, args.m, args.n);
      SpaceKind space = space_of(args.space);
      nlohmann::json j;
      j["space"] = space_name(space);
      j["l"] = spec.l;
      j["m"] = spec.m;
      j["n"] = spec.n;
      GaugeQ g;
      if (!gauge_str.empty()) {
        auto v = parse_list(gauge_str, 4, "--gauge");
        g.a = rat_of_double(v[0]);
        g.b = rat_of_double(v[1]);
        g.c = rat_of_double(v[2]);
        g.d = rat_of_double(v[3]);
      }
      auto emit = [&](const Triple& k, double v, const std::string& exact) {
        nlohmann::json e;
        e["k"] = k[0];
        e["i"] = k[1];
        e["j"] = k[2];
        e["value"] = v;
        if (!exact.empty()) e["exact"] = exact;
        return e;
      };
      j["B"] = nlohmann::json::array();
      j["Q"] = nlohmann::json::array();
      if (brute) {
        auto st = build_structure_tensor(spec);
        for (const auto& [k, v] : b_constants_brute(st, space).entries)
          j["B"].push_back(emit(k, to_double(v), v.get_str()));
        for (const auto& [k, v] : q_constants_brute(st, g.approx(), space).entries)
          j["Q"].push_back(emit(k, v, ""));
      } else {
        for (const auto& [k, v] : b_constants_closed(spec, space).entries)
          j["B"].push_back(emit(k, to_double(v), v.get_str()));
        for (const auto& [k, v] : q_constants_closed(spec, g, space).entries)
          j["Q"].push_back(emit(k, v.value(), v.str()));
      }
      write_out(j.dump(2), args.out);
      return kExitOk;
    }
    if (ricci->parsed()) {
      FlagSpec spec(args.l, args.m, args.n);
      MetricParams m;
      m.space = space_of(args.space);
      auto mv = parse_list(metric_str, 8, "--metric");
      m.u1 = mv[0]; m.u2 = mv[1]; m.u3 = mv[2]; m.v4 = mv[3]; m.v5 = mv[4];
      m.x6 = mv[5]; m.x7 = mv[6]; m.x8 = mv[7];
      if (!gauge_str.empty()) {
        auto gv = parse_list(gauge_str, 4, "--gauge");
        m.gauge = Gauge{gv[0], gv[1], gv[2], gv[3]};
      }
      auto rc = ricci_closed(spec, m);
      nlohmann::json j;
      j["space"] = space_name(m.space);
      j["r0"] = rc.r0;
      for (int k = 1; k <= 8; ++k)
        if (rc.present[size_t(k)]) j["r" + std::to_string(k)] = rc.r[size_t(k)];
      if (rc.lambda_candidate) j["lambda_candidate"] = *rc.lambda_candidate;
      if (brute) {
        RicciBrute engine(spec, m.space);
        Eigen::MatrixXd R = engine.ricci_matrix(m);
        double offmax = 0;
        for (int a = 0; a < engine.dim(); ++a)
          for (int b = a + 1; b < engine.dim(); ++b)
            if (engine.block_of(a) != engine.block_of(b) &&
                !(engine.block_of(a) == 4 && engine.block_of(b) == 5))
              offmax = std::max(offmax, std::abs(R(a, b)));
        j["brute"] = {{"dim", engine.dim()}, {"max_off_block", offmax}};
        nlohmann::json diag = nlohmann::json::array();
        for (int a = 0; a < engine.dim(); ++a) diag.push_back(R(a, a));
        j["brute"]["diagonal"] = diag;
      }
      write_out(j.dump(2), args.out);
      return kExitOk;
    }
    if (classify->parsed() || verify->parsed()) {
      std::ifstream f(file_path);
      if (!f) {
        std::cerr << "cannot open " << file_path << "\n";
        return kExitUsage;
      }
      std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
      double vt = (verify->parsed() && verify->count("--tol") == 0) ? 1e-9 : args.tol;
      RunReport rep = verify_solutions_json(text, vt);
      rep.command = verify->parsed() ? "verify" : "classify";
      write_out(run_report_json(rep), args.out);
      return rep.all_pass() ? kExitOk : kExitCheckFailure;
    }
    if (reproduce->parsed()) {
      RunReport rep = run_reproduce(/*verbose=*/!args.json);
      if (args.json) write_out(run_report_json(rep), args.out);
      else if (!args.out.empty()) write_out(run_report_json(rep), args.out);
      int passed = 0;
      for (const auto& c : rep.checks) passed += c.pass;
      std::printf("%d/%zu checks passed in %.1f s\n", passed, rep.checks.size(),
                  rep.wall_time_seconds);
      return rep.all_pass() ? kExitOk : kExitCheckFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
