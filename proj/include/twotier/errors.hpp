#pragma once

#include <stdexcept>

namespace twotier {

/// A computation would exceed its configured resource budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace twotier
