#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wreathlab {

// Caller violated an operation's precondition (mismatched groups, bad endpoint, ...).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The operation is not defined for this group family.
class UnsupportedError : public UsageError {
 public:
  using UsageError::UsageError;
};

// Malformed textual input (words, element literals, fixtures).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied data: probabilities, configs, windows.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A computation would exceed its configured memory/atom budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal consistency failure, e.g. a reconstruction that does not chain.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace checked {

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in addition");
  return r;
}

inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("int64 overflow in subtraction");
  return r;
}

inline std::int64_t neg(std::int64_t a) { return sub(0, a); }

}  // namespace checked
}  // namespace wreathlab
