#ifndef WICKLAB_ACCEPTANCE_HPP
#define WICKLAB_ACCEPTANCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "wicklab/config.hpp"

namespace wicklab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// Runs every acceptance criterion at its pinned tolerance, printing one
// pass/fail line per criterion to `log`.
std::vector<CriterionResult> run_acceptance(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace wicklab

#endif  // WICKLAB_ACCEPTANCE_HPP
