// SPDX-License-Identifier: Apache-2.0
#ifndef FIBERGAN_ERRORS_HPP
#define FIBERGAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fibergan {

// Input data has the wrong length, width or alignment.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A configuration value is out of its documented range.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input is formally valid but degenerate (e.g. all-zero signal).
struct DegenerateInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// File read/write failure.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A loss became non-finite during training; carries the epoch index.
struct TrainingDivergedError : std::runtime_error {
  int epoch;
  TrainingDivergedError(const std::string& what, int epoch_index)
      : std::runtime_error(what), epoch(epoch_index) {}
};

}  // namespace fibergan

#endif
