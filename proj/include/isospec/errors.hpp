#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace isospec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature ran out of its evaluation budget.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double best_estimate, double error_estimate)
        : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}
    double best_estimate() const { return best_estimate_; }
    double error_estimate() const { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

class DivergenceError : public Error {
public:
    using Error::Error;
};

class ConfigurationError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// A coefficient or denominator is singular at one or more points.
class SingularityError : public Error {
public:
    SingularityError(const std::string& what, std::vector<double> points)
        : Error(what), points_(std::move(points)) {}
    const std::vector<double>& points() const { return points_; }

private:
    std::vector<double> points_;
};

/// The deformation parameter produces a singular family on the domain.
class ValidityError : public SingularityError {
public:
    using SingularityError::SingularityError;
};

}  // namespace isospec
