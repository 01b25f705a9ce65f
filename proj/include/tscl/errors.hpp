#pragma once

#include <stdexcept>
#include <string>

namespace tscl {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed dataset file (ragged rows, empty file, bad header).
class FormatError : public Error
{
public:
  using Error::Error;
};

/// A token that should have been a number was not.
class ParseError : public Error
{
public:
  using Error::Error;
};

class LengthMismatchError : public Error
{
public:
  using Error::Error;
};

/// Out-of-range distance, averaging or clustering parameter.
class ParameterError : public Error
{
public:
  using Error::Error;
};

/// Input is valid in shape but the operation is undefined on it
/// (zero-norm series for k-SC, empty cluster for averaging).
class DegenerateInputError : public Error
{
public:
  using Error::Error;
};

class NumericError : public Error
{
public:
  using Error::Error;
};

/// Wilcoxon test with fewer than three non-zero differences.
class UndefinedTestError : public Error
{
public:
  using Error::Error;
};

class TimeoutError : public Error
{
public:
  using Error::Error;
};

} // namespace tscl
