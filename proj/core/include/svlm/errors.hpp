#pragma once

#include <stdexcept>
#include <string>

namespace svlm {

// Error taxonomy shared by the library and the CLI exit-code mapping:
//   InputError / DimensionError  -> usage or config problem (CLI exit 2)
//   DataError                    -> file, dataset or checkpoint problem (CLI exit 3)
//   invariant violations found by verification are reported, not thrown (CLI exit 4)

// Shape disagreement between operands (matmul, masks, model inputs).
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Mathematical domain violation (empty softmax input, invalid simplex, non-finite values).
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Operation called in the wrong object state (stale tape, adapter already attached).
struct StateError : std::logic_error {
    explicit StateError(const std::string& what) : std::logic_error(what) {}
};

// Invalid user-supplied value (bad config key, out-of-range ratio, unknown layer).
struct InputError : std::invalid_argument {
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Unreadable, corrupt or mismatched file content.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace svlm
