#pragma once

#include <stdexcept>
#include <string>

namespace hdisk {

// Bad input: violated precondition, malformed configuration, size limits.
// The CLI maps it to exit status 2.
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what, std::string field = {})
        : std::invalid_argument(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class SizeLimitError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// A numerical procedure could not deliver its result (exit status 3).
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergence : public NumericFailure {
public:
    NonConvergence(const std::string& what, double residual)
        : NumericFailure(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class RankDeficiency : public NumericFailure {
public:
    using NumericFailure::NumericFailure;
};

}  // namespace hdisk
