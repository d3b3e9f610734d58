// Error taxonomy shared across the library. All errors are exceptions so the
// CLI layer can map them onto exit codes and per-line error records.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mixr {

// Every sample in the group fails verification; the penalty bound has a zero
// denominator and the group carries no usable contrast.
class AllViolatingError : public std::runtime_error {
public:
    explicit AllViolatingError(const std::string& what = "group has no compliant samples")
        : std::runtime_error(what) {}
};

// No sample violates, so the penalty is undefined; callers skip adjustment.
class NoViolatorsError : public std::runtime_error {
public:
    explicit NoViolatorsError(const std::string& what = "group has no violating samples")
        : std::runtime_error(what) {}
};

// Zero reward variance: advantages would be 0/0 and the group yields no
// gradient signal.
class DegenerateGroupError : public std::runtime_error {
public:
    explicit DegenerateGroupError(const std::string& what = "group rewards have zero variance")
        : std::runtime_error(what) {}
};

// Feature vectors disagree in dimension (or are empty).
class DimensionMismatchError : public std::runtime_error {
public:
    explicit DimensionMismatchError(const std::string& what = "feature dimension mismatch")
        : std::runtime_error(what) {}
};

// Batch filling ran out of resample rounds without a single keepable group.
// `step` is filled by the training loop when the failure happens mid-run.
class ExhaustedError : public std::runtime_error {
public:
    explicit ExhaustedError(const std::string& what = "resample budget exhausted", std::size_t step = 0)
        : std::runtime_error(what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_ = 0;
};

// Malformed configuration or input file (maps to CLI usage exit code).
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mixr
