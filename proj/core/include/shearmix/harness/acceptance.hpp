#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace shearmix::harness {

struct AcceptanceOptions {
  std::uint64_t master_seed = 20240601;
  std::size_t threads = 0;
};

struct CriterionResult {
  std::string id;
  std::string title;
  bool pass = false;
  std::vector<std::string> details;
  double seconds = 0.0;
};

// "AC01" .. "AC12".
std::vector<std::string> criterion_ids();
CriterionResult run_criterion(const std::string& id, const AcceptanceOptions& opt = {});
// "PASS AC01 <title> (12.3 s)" followed by indented detail lines.
void print_result(std::ostream& os, const CriterionResult& r);

}  // namespace shearmix::harness
