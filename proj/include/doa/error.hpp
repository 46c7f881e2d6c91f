#pragma once

#include <stdexcept>
#include <string>

namespace doa {

// Base of every error the engine raises on bad input. The CLI maps the
// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or missing input files (PGM, .flo, proposal JSONL, config).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Unknown key or out-of-range value in a pipeline config file.
class ConfigError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Two rasters that must share a frame have different dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// No first-frame proposal overlaps the motion mask enough to seed a pseudo
// ground truth.
class NoForegroundFound : public Error {
 public:
  explicit NoForegroundFound(int frame_index)
      : Error("no foreground found in frame " + std::to_string(frame_index) +
              ": no proposal passes the motion-overlap threshold"),
        frame_index_(frame_index) {}

  int frame_index() const noexcept { return frame_index_; }

 private:
  int frame_index_;
};

}  // namespace doa
