#pragma once

#include <stdexcept>
#include <string>

namespace fqt {

class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Bad input values: non-normalized qubits, zero-norm states, broken preconditions.
class ValidationError : public Error {
   public:
    using Error::Error;
};

/// Element port bindings that do not describe a valid flow.
class WiringError : public Error {
   public:
    using Error::Error;
};

/// WDM received a frequency it has no route for.
class RoutingError : public Error {
   public:
    using Error::Error;
};

/// Noise model or experiment configuration does not resolve.
class ConfigError : public Error {
   public:
    using Error::Error;
};

/// Basis handed to a matrix builder is not closed under the element.
class DimensionError : public Error {
   public:
    using Error::Error;
};

}  // namespace fqt
