#pragma once

#include <stdexcept>
#include <string>

namespace kcomb {

// Base of every validation failure raised by the toolkit. The CLI maps these
// to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define KCOMB_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

KCOMB_DEFINE_ERROR(EmptyConfig);
KCOMB_DEFINE_ERROR(DuplicateLevel);
KCOMB_DEFINE_ERROR(InvalidProbability);
KCOMB_DEFINE_ERROR(TooLargeForExact);
KCOMB_DEFINE_ERROR(ShapeMismatch);
KCOMB_DEFINE_ERROR(InsufficientGrid);
KCOMB_DEFINE_ERROR(InvalidPath);
KCOMB_DEFINE_ERROR(EmptyTable);
KCOMB_DEFINE_ERROR(InvalidScale);
KCOMB_DEFINE_ERROR(NotComparable);
KCOMB_DEFINE_ERROR(ConfigParseError);
KCOMB_DEFINE_ERROR(InvalidArgument);

#undef KCOMB_DEFINE_ERROR

}  // namespace kcomb
