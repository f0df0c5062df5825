#pragma once


#include "einstein/solver.hpp"

#include <string>

namespace einstein {

struct Check {
  std::string name;
  std::string expected;
  std::string observed;
  bool pass = false;
  // a check that cannot pass against the source data (documented print
  // defect); reported as XFAIL and excluded from the exit status
  bool known_defect = false;
};

struct RunReport {
  std::string command;
  std::optional<FlagSpec> spec;
  std::optional<SpaceKind> space;
  double wall_time_seconds = 0;
  std::vector<EinsteinSolution> solutions;
  std::vector<RejectedCandidate> rejected;
  std::vector<Check> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass && !c.known_defect) return false;
    return true;
  }
};

std::string solve_result_json(const SolveResult& result, uint64_t seed);
std::string run_report_json(const RunReport& report);
std::string solutions_csv(const SolveResult& result);

/// Re-certify candidate solutions from a JSON document produced by
/// solve_result_json; recomputes the brute-force residual and the
/// classification for each entry.
RunReport verify_solutions_json(const std::string& json_text, double tol = 1e-9);

/// Run every acceptance-criteria case and return one consolidated report.
RunReport run_reproduce(bool verbose = false);

}  // namespace einstein
