#pragma once

#include <stdexcept>

namespace hyperwalk {

/// Runtime failure of a numerical procedure (blowup, no oscillation found,
/// walk escaping its domain). Distinct from precondition violations, which
/// surface as std::invalid_argument / std::domain_error.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hyperwalk
