// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace matconvex {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation outside the domain of an expression (log of a nonpositive
/// number, reciprocal of zero, point outside the interval, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what, double at = 0.0)
        : Error(what), point_(at) {}
    double point() const noexcept { return point_; }

private:
    double point_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class OrderCapError : public Error {
public:
    using Error::Error;
};

/// A caller violated an operation's documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class InvalidPerturber : public Error {
public:
    using Error::Error;
};

class NoPositiveWindow : public Error {
public:
    using Error::Error;
};

class HypothesisError : public Error {
public:
    using Error::Error;
};

/// f' (or f'') is not strictly positive, so the representation function
/// does not exist at `point()`.
class PositivityError : public Error {
public:
    PositivityError(const std::string& what, double at) : Error(what), point_(at) {}
    double point() const noexcept { return point_; }

private:
    double point_;
};

class NotMonotone : public Error {
public:
    using Error::Error;
};

class UnboundedInterval : public Error {
public:
    using Error::Error;
};

class SpectrumOutOfDomain : public Error {
public:
    SpectrumOutOfDomain(const std::string& what, double eigenvalue)
        : Error(what), eigenvalue_(eigenvalue) {}
    double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

class NotComparable : public Error {
public:
    using Error::Error;
};

class SearchExhausted : public Error {
public:
    using Error::Error;
};

}  // namespace matconvex
