#pragma once

#include <stdexcept>
#include <string>

namespace rzono {

/// Thrown when an argument violates an operation's precondition.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Thrown when an exact enumeration would exceed its term budget.
class CapacityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace detail
}  // namespace rzono
