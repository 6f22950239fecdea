// acceptance.hpp — built-in verification suite: analytic point checks, oracle
// equivalences, and the qualitative phase-structure assertions, one result per
// criterion.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jch::accept {

struct CriterionResult {
    int id{0};
    std::string name;
    bool pass{false};
    std::string detail;
    double seconds{0.0};
};

std::vector<CriterionResult> run_all(int threads = 0);

bool all_passed(const std::vector<CriterionResult>& results);

// one pass/fail line per criterion plus a summary line
void print_table(std::ostream& out, const std::vector<CriterionResult>& results);

}  // namespace jch::accept
