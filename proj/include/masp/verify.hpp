#pragma once

#include <string>
#include <vector>

namespace masp {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;  // observed numbers vs limits
};

bool all_pass(const std::vector<Check>& checks);

// Fixed-seed verification batteries.  Each returns one Check per property;
// the groups match the CLI `verify` suites and the acceptance gate.
std::vector<Check> verify_gradients();       // finite-difference agreement
std::vector<Check> verify_oracles();         // quadrature / rejection / langevin
std::vector<Check> verify_bound_regression();    // risk below the bound, auto tuning
std::vector<Check> verify_bound_density();       // ISE below the bound
std::vector<Check> verify_bound_classification();// margin and hinge bounds
std::vector<Check> verify_tails();           // prior tail mass dominated
std::vector<Check> verify_scale();           // dictionary scale equivariance
std::vector<Check> verify_calibration();     // Euler chain moments
std::vector<Check> verify_determinism();     // byte-identical reruns
std::vector<Check> verify_rate();            // risk decreases with n

// named groups: gradients | oracles | bounds | tails | scale
//               | calibration | determinism | rate | all
std::vector<Check> verify_suite(const std::string& suite);

}  // namespace masp
