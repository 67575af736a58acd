#pragma once

#include <stdexcept>
#include <string>

namespace ffm {

/// Thrown when a requested computation exceeds its enumeration budget.
/// Carries the cost estimate so callers can print it and exit distinctly.
class BudgetError : public std::runtime_error {
  public:
    BudgetError(const std::string& what, double estimate)
        : std::runtime_error(what), estimate_(estimate) {}
    double estimate() const { return estimate_; }

  private:
    double estimate_;
};

}  // namespace ffm
