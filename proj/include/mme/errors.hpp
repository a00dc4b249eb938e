#pragma once

#include <stdexcept>
#include <string>

namespace mme {

// Error families map onto the CLI exit-code registry:
// 0 ok, 2 config, 3 io, 4 missing-dependency artifact, 5 shape/kind
// mismatch, 6 total pipeline failure.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingArtifactError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PipelineFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mme
