#pragma once

#include <stdexcept>
#include <string>

namespace sarml {

// Point outside a chart, path or formula domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The flight path meets the surface (|R| below the range guard).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or scenario configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An output file or directory could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sarml
