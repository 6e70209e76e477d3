#pragma once

#include <string>
#include <utility>
#include <vector>

namespace isolab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::vector<std::pair<std::string, double>> metrics;
  std::string detail;
};

struct AcceptanceOptions {
  int threads = 1;
  // default resolutions; the criteria pin their own tolerances
  int full_theta = 48;
  int full_phi = 96;
  int full_lmax = 20;
  int spectrum_lmax = 16;
  int axi_nodes = 256;
  int axi_lmax = 48;
};

/// Runs one acceptance criterion (1-based id).
CriterionResult run_criterion(int id, const AcceptanceOptions& opt);

/// Runs the full suite in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

/// one line per criterion: "PASS  3 bray-chart-expansions (2.1 s) ..."
std::string format_result_line(const CriterionResult& r);

}  // namespace isolab
