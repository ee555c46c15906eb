#ifndef BIFI_ERRORS_HPP
#define BIFI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bifi {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A query point lies outside the hypercube it was declared on.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A configuration value is out of its admissible range.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A sample or design size violates a precondition (e.g. n_h > n_l).
class SizeError : public Error {
public:
    using Error::Error;
};

/// Input data contains non-finite values or has inconsistent shapes.
class DataError : public Error {
public:
    using Error::Error;
};

/// Training data is degenerate (duplicate points, zero spread, ...).
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// A correlation is undefined because one of the inputs has zero variance.
class UndefinedCorrelationError : public Error {
public:
    using Error::Error;
};

/// Tabular inputs disagree on feature ids, column order or versions.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// No admissible candidate exists for a selection step.
class SelectionError : public Error {
public:
    using Error::Error;
};

/// A statistical test was requested with too few valid observations.
class LowPowerError : public Error {
public:
    using Error::Error;
};

}  // namespace bifi

#endif
