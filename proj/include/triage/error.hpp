#pragma once

#include <stdexcept>
#include <string>

namespace triage {

// Error families. The CLI maps each family to its own exit code.

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented contract (malformed record, bad config, unknown id).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Artifacts that do not belong together (model vs. encoding, checkpoint kind, schema).
class CompatibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace triage
