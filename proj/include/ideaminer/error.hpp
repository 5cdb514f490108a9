#pragma once

#include <stdexcept>
#include <string>

namespace ideaminer {

// Fatal error raised by any pipeline operation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ideaminer
