#pragma once

#include <iosfwd>
#include <string>

#include "wildgrid/milp/problem.hpp"

namespace wildgrid::milp {

/// CPLEX LP text. Names are sanitized to the format's character set and made
/// unique; ranged rows are written as two rows (suffixes _lo and _hi).
void write_lp(std::ostream& out, const MilpProblem& problem, const std::string& title = {});
void write_lp_file(const std::string& path, const MilpProblem& problem, const std::string& title = {});

}  // namespace wildgrid::milp
