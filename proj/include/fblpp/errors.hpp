#pragma once

#include <stdexcept>
#include <string>

namespace fblpp {

// Quadrature (or root finding) did not reach the requested tolerance within
// its evaluation budget.  Carries the best estimate produced so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_value,
                   double best_error, long evaluations)
      : std::runtime_error(what),
        best_value(best_value),
        best_error(best_error),
        evaluations(evaluations) {}

  double best_value;
  double best_error;
  long evaluations;
};

// A closed-form outage evaluator was called outside its scenario domain
// (e.g. the interference-limited form with xi != 0).
class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace fblpp
