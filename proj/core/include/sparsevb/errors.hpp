#pragma once

#include <stdexcept>
#include <string>

namespace sparsevb {

// Malformed caller input: bad dimensions, non-finite data, out-of-domain
// parameters. The CLI maps this to exit code 2.
class InvalidInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numeric failure inside an algorithm: non-finite objective values, failed
// factorizations. The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sparsevb
