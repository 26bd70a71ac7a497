// One PASS/FAIL line per acceptance criterion 1..9; exit status is the number of failures.
#include <iostream>

#include "siegel/verify.hpp"

int main() {
  using namespace siegel;
  std::cout << "acceptance suite (exact arithmetic, default budget 1e9 ops)" << std::endl;
  int failures = 0;
  auto results = verify::run("all", Budget{}, 20240501, [&](const verify::SuiteResult& r) {
    std::cout << verify::line(r) << std::endl;
    failures += !r.pass;
  });
  std::cout << (static_cast<int>(results.size()) - failures) << "/" << results.size() << " criteria pass" << std::endl;
  return failures;
}
