#pragma once

#include <stdexcept>
#include <string>

namespace polyswitch {

/// Malformed input document. `position` is a byte offset when known.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t position = npos)
      : std::runtime_error(position == npos ? message
                                            : message + " (at byte " + std::to_string(position) + ")"),
        position_(position) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

/// The input is well-formed but the requested computation has no answer:
/// unrealizable specification, unreachable weighted goal, zero evidence.
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace polyswitch
