#ifndef METAEX_ERRORS_H_
#define METAEX_ERRORS_H_

#include <stdexcept>
#include <string>

namespace metaex {

// Malformed input, contract violations and inconsistent files. The CLI maps
// this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// NaN losses and failed gradient checks. The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace metaex

#endif  // METAEX_ERRORS_H_
