// One PASS/FAIL line per acceptance criterion, followed by the individual
// measurements and the bounds they were held to.  Exit status is 0 only when
// every criterion passes.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "jaynes/suite.hpp"

namespace {

std::string bound(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  jaynes::suite::SuiteOptions opt;
  for (int i = 1; i < argc; ++i) opt.only.emplace_back(argv[i]);
  try {
    const auto rep = jaynes::suite::run_suite(opt);
    int failed = 0;
    for (const auto& c : rep.criteria) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "%s  %-20s %10.1f ms (budget %.0f ms)  %s", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.runtime_ms, c.budget_ms, c.description.c_str());
      std::cout << buf << "\n";
      if (!c.error.empty()) std::cout << "        error: " << c.error << "\n";
      if (!c.within_budget) std::cout << "        over runtime budget\n";
      for (const auto& k : c.checks) {
        std::snprintf(buf, sizeof buf, "        [%s] %.6g in [%s, %s]  ", k.pass ? "ok" : "!!", k.measured,
                      bound(k.lower).c_str(), bound(k.upper).c_str());
        std::cout << buf << k.label << "\n";
      }
      if (!c.pass) ++failed;
    }
    std::printf("%zu criteria, %d failed, %.1f s total\n", rep.criteria.size(), failed, rep.total_ms / 1000.0);
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << "\n";
    return 2;
  }
}
