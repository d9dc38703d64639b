#pragma once

#include <stdexcept>
#include <string>

namespace pseudodp {

// Error taxonomy mirrors the CLI exit codes: config/usage -> 2,
// data ingestion -> 3, numeric failure -> 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pseudodp
