// Acceptance gate: runs every criterion at its pinned tolerance and exits
// nonzero if any fails.

#include <iostream>

#include "wicklab/acceptance.hpp"

int main() {
  wicklab::ExperimentConfig cfg = wicklab::default_config();
  auto results = wicklab::run_acceptance(cfg, std::cout);
  int failed = 0;
  for (auto& r : results)
    if (!r.pass) ++failed;
  std::cout << (failed == 0 ? "ACCEPTANCE: all criteria passed"
                            : "ACCEPTANCE: criteria failed")
            << " (" << results.size() - failed << "/" << results.size() << ")\n";
  return failed == 0 ? 0 : 1;
}
