#pragma once

#include <stdexcept>

namespace uab {

// Bad flags, invalid hyperparameters, non-permutation orders.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Missing or malformed input files, misaligned subject ids.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A training run that cannot proceed or failed (empty set, zero weights).
struct TrainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace uab
