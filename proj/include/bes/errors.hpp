#pragma once

#include <stdexcept>
#include <string>

namespace bes {

// Thrown when an exhaustive search would exceed the configured node budget.
class budget_error : public std::runtime_error {
public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bes
