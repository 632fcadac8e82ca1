#pragma once

#include <stdexcept>
#include <string>

namespace ssqp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (mu <= 0, q outside (0,1], NaN input).
class DomainError : public Error
{
public:
  using Error::Error;
};

/// Vector/matrix sizes that do not agree.
class DimensionError : public Error
{
public:
  using Error::Error;
};

/// Violated precondition of an operation (point outside X, config out of range, ...).
class PreconditionError : public Error
{
public:
  using Error::Error;
};

/// Feasible region is empty.
class InfeasibleError : public Error
{
public:
  using Error::Error;
};

/// Iterative kernel failed to converge (QP pivot budget, singular systems).
class NumericalFailure : public Error
{
public:
  using Error::Error;
};

/// Combinatorial routine called beyond its supported size.
class UnsupportedScale : public Error
{
public:
  using Error::Error;
};

/// Feature not available for this problem or mode.
class Unsupported : public Error
{
public:
  using Error::Error;
};

/// Solver exceeded its QP-solve cap. In known-L mode this means the worst-case bound was broken.
class BoundViolation : public Error
{
public:
  using Error::Error;
};

namespace detail {

inline void require_same(long a, long b, const char * what)
{
  if (a != b) {
    throw DimensionError(std::string(what) + ": size " + std::to_string(a) + " != " + std::to_string(b));
  }
}

}  // namespace detail

}  // namespace ssqp
