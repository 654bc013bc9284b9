#pragma once

#include <stdexcept>
#include <string>

namespace crawlnet {

// Invalid configuration or violated precondition on an argument.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value outside the domain of a normalization map.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed model or CSV text. Messages carry the offending line number.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace crawlnet
