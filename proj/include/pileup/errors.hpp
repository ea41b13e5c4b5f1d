#pragma once

#include <stdexcept>
#include <string>

namespace pileup {

//! Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

//! Iterative or floating-point procedure failed to produce a usable value.
class NumericError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Invalid tuning parameter or malformed configuration.
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

//! Unreadable or malformed user input (files, CSV lines).
class InputError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace pileup
