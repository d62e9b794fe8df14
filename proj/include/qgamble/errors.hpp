#pragma once

#include <stdexcept>
#include <string>

namespace qgamble {

/// Raised when an input violates a documented precondition (non-normalized
/// state, probability outside [0,1], malformed strategy spec, ...).
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class Party { Alice, Bob };

inline const char *to_string(Party p) { return p == Party::Alice ? "alice" : "bob"; }

/// A player broke the round protocol. The round is void and the fault is
/// attributed to `violator`.
class ProtocolFault : public std::runtime_error {
  public:
    ProtocolFault(Party violator, const std::string &what)
        : std::runtime_error(std::string(to_string(violator)) + ": " + what),
          violator_(violator) {}

    [[nodiscard]] Party violator() const noexcept { return violator_; }

  private:
    Party violator_;
};

/// Zero standard error together with a mean that differs from the target.
class DeterministicDivergence : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace qgamble
