#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace shadercanny {

/// Malformed arguments or input data (zero-sized images, bad channel counts,
/// unreadable files). Maps to CLI exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value that cannot be represented in the requested precision,
/// e.g. NaN stored to a lowp texture.
class InvalidValue : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// PNM parse failure; carries the byte offset where parsing stopped.
class PnmError : public InvalidInput {
 public:
  PnmError(const std::string& what, std::size_t offset)
      : InvalidInput(what + " (at byte offset " + std::to_string(offset) + ")"),
        detail_(what),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }
  /// Message without the offset suffix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t offset_;
};

/// Wraps an error raised inside a render pass with the pass name.
class PassError : public std::runtime_error {
 public:
  PassError(std::string pass, const std::string& what)
      : std::runtime_error("pass '" + pass + "': " + what), pass_(std::move(pass)) {}

  const std::string& pass() const noexcept { return pass_; }

 private:
  std::string pass_;
};

}  // namespace shadercanny
