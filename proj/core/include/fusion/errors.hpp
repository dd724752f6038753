#pragma once

#include <stdexcept>
#include <string>

namespace fusion {

// Bad user input (malformed rationals, cutoffs below the documented floor, ...).
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// A truncated computation whose answer did not repeat between two consecutive
// cutoffs.  Callers must either raise the cutoff or treat the run as failed;
// a non-stabilized result is never reported as an answer.
struct NotStabilizedError : std::runtime_error {
    explicit NotStabilizedError(const std::string& what) : std::runtime_error(what) {}
};

// A coproduct or dual action produced a term beyond the truncation level.
struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// An internal consistency check failed (candidate set not spanning, pipelines
// disagreeing, ...).  Indicates a bug or an unusable configuration, not bad input.
struct InternalCheckError : std::logic_error {
    explicit InternalCheckError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace fusion
