// Runs the named criteria (all when none are given); one PASS/FAIL line each.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "shearmix/harness/acceptance.hpp"

int main(int argc, char** argv) {
  using namespace shearmix::harness;
  std::vector<std::string> ids(argv + 1, argv + argc);
  if (ids.empty()) ids = criterion_ids();
  AcceptanceOptions opt;
  if (const char* s = std::getenv("SHEARMIX_SEED")) opt.master_seed = std::strtoull(s, nullptr, 10);
  bool ok = true;
  for (const auto& id : ids) {
    try {
      const auto r = run_criterion(id, opt);
      print_result(std::cout, r);
      ok = ok && r.pass;
    } catch (const std::exception& e) {
      std::cout << "FAIL " << id << " " << e.what() << "\n";
      ok = false;
    }
  }
  return ok ? 0 : 1;
}
