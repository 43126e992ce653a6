#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hcdc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Payload = std::vector<std::uint8_t>;

// Every error carries the module that raised it so the CLI can report provenance.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// Rejected configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config", what) {}
};

// A shuffle operand was never produced in the Map phase.
class MissingIv : public Error {
 public:
  using Error::Error;
};

// Reconstructed bytes differ from the reference value.
class DecodeMismatch : public Error {
 public:
  using Error::Error;
};

// A coded group stayed singular after the retry budget.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

// A (node, key) pair was delivered twice, or to a node that does not reduce it.
class DeliveryError : public Error {
 public:
  using Error::Error;
};

// Reduce called without all N inputs.
class IncompleteInputs : public Error {
 public:
  using Error::Error;
};

// Renders a rational with 6 significant digits.
std::string to_decimal(const Rational& q);

// "p/q", or "p" when the denominator is 1.
std::string to_fraction(const Rational& q);

}  // namespace hcdc
