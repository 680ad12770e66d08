#ifndef SECBC_ERRORS_HPP
#define SECBC_ERRORS_HPP

#include <stdexcept>

namespace secbc {

// Error classes correspond 1:1 to the CLI exit-code classes
// (see tools/secbc.cpp): parse 2, validation 1, budget 3, numeric 4.

// Malformed input document: bad syntax, wrong nesting, missing fields.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally well-formed input whose values violate a contract
// (row sums, dimension mismatches, out-of-range parameters).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested computation exceeds a configured resource cap.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal numerical inconsistency: a quantity left the range that the
// mathematics guarantees, beyond what float noise can explain.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace secbc

#endif
