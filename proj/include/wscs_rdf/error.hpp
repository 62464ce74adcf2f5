#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wscs_rdf {

// Invalid parameters or malformed configuration input.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Parse failure in a textual expression; carries the offending column.
class ParseError : public ConfigError {
  public:
    ParseError(const std::string& what, std::size_t position)
        : ConfigError(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

// A numerical routine received arguments outside its domain.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// A numerical routine failed to meet its own postcondition.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Statistical estimator was handed too little data.
class DiagnosticError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace wscs_rdf
