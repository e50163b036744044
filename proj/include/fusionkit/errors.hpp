#pragma once

#include <stdexcept>
#include <string>

namespace fusionkit {

/// Non-SPD covariance, weight outside its admissible interval, and similar.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// No finite full assignment exists for a cost matrix.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Marginal existence mass exceeds one; upstream hypotheses were not exclusive.
class InconsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed serialized input. The message carries the offending field path.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration value (unknown method id, non-positive trial count, ...).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fusionkit
