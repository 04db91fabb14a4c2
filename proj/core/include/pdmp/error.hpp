#pragma once

#include <stdexcept>
#include <string>

namespace pdmp {

//! Base class of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! An input violates an operation's precondition (negative state, unreachable
//! target, out-of-support query, invalid model parameter).
class DomainError : public Error
{
public:
  using Error::Error;
};

//! A numerical procedure could not produce a result: sampler state cap
//! exceeded, empty model collection, sample too short for the threshold.
class NumericalError : public Error
{
public:
  using Error::Error;
};

//! Malformed serialized data (chain files, fit records).
class FormatError : public Error
{
public:
  using Error::Error;
};

//! A file could not be opened, read or written.
class IoError : public Error
{
public:
  using Error::Error;
};

} // namespace pdmp
