#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace z2amp {

// Failure categories shared by the C++ core and the C API status codes.
enum class ErrorCategory {
  InvalidArgument,
  DimensionMismatch,
  DegenerateInput,
  OutOfMemory,
  Io,
  NoCrossing,
  Internal,
};

std::string_view category_name(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace z2amp
