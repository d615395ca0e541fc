#include <cstdio>
#include <cstring>
#include <string>

#include "jrs/suite.hpp"

// Usage: jrs_acceptance [--quick] [ID]
int main(int argc, char** argv) {
  jrs::SuiteConfig cfg;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0)
      cfg.quick = true;
    else
      cfg.criterion = argv[i];
  }
  try {
    const auto rep = jrs::run_suite(cfg);
    for (const auto& r : rep.results)
      std::printf("%s %s: %s (%.2f s)\n", r.passed ? "PASS" : "FAIL", r.id.c_str(), r.summary.c_str(), r.seconds);
    return rep.all_passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
