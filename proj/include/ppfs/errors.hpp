#pragma once

#include <stdexcept>
#include <string>

namespace ppfs {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input data (CSV parsing, schema problems). CLI exit code 2.
struct IngestError : Error {
  using Error::Error;
};

// Invalid configuration or parameters (bad flags, bad partition shapes,
// out-of-range attribute indices). CLI exit code 3.
struct ConfigError : Error {
  using Error::Error;
};

// A protocol run could not complete: deadlock, unexpected message kind,
// schema mismatch between parties, or an engine abort. CLI exit code 4.
struct ProtocolError : Error {
  using Error::Error;
};

}  // namespace ppfs
