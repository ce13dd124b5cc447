#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nlqw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotNormalized : public Error {
 public:
  using Error::Error;
};

/// A coin whose rows fail |a|^2 + |b|^2 = 1.
class InvalidCoin : public Error {
 public:
  using Error::Error;
};

/// A coin with |a| in {0, 1}; the velocity density collapses there.
class DegenerateCoin : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Carries every violation found while validating a configuration.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += "; ";
      out += item;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

}  // namespace nlqw
