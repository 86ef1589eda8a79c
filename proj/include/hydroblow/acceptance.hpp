#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hydroblow {

struct criterion_result {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

// Run the thirteen release criteria in order, streaming one line per
// criterion plus a final summary line to log. Tolerances are pinned in the
// implementation; criteria that measure known model limitations report FAIL
// with the measured numbers rather than a loosened bar.
std::vector<criterion_result> run_acceptance(std::ostream& log);

std::string acceptance_summary(const std::vector<criterion_result>& rs);

// 0 when everything passed, 4 otherwise.
int acceptance_exit_code(const std::vector<criterion_result>& rs);

}  // namespace hydroblow
