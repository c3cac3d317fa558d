#pragma once

#include <stdexcept>
#include <string>

namespace fxtails {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file (CSV, config, Newick). Message carries the line number
// where available.
class ParseError : public Error {
public:
    using Error::Error;
};

// Input violates a structural invariant (non-positive price, unordered dates,
// asymmetric distance matrix, mismatched histogram edges, splice gap).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Bad parameter value in a config or spec (gamma <= 1, |phi| >= 1, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Value outside the mathematical domain of an operation (non-positive sample
// for a log, alpha4 <= 1, zero-support KL divergence, divergent exponent).
class DomainError : public Error {
public:
    using Error::Error;
};

// Series too short, or a lag/window outside the admissible range.
class LengthError : public Error {
public:
    using Error::Error;
};

// Degenerate input: zero variance, zero pooled range, exactly linear profile,
// all-zero exports, singular regression design.
class DegenerateError : public Error {
public:
    using Error::Error;
};

// Too few tail samples to fit.
class SparsityError : public Error {
public:
    using Error::Error;
};

// Filesystem failure; message names the path.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace fxtails
