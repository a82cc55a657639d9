#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pmt {

/// A content document (world, catalog, word bank, plan) breaks a structural rule.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A participant or operator command that cannot be applied in the current session state.
class CommandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-sequence wire frame.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Event log that cannot be read or replayed. Carries the last sequence number that parsed cleanly.
class LogError : public std::runtime_error {
 public:
  LogError(const std::string& what, std::uint64_t last_good_seq)
      : std::runtime_error(what), last_good_seq_(last_good_seq) {}

  std::uint64_t last_good_seq() const noexcept { return last_good_seq_; }

 private:
  std::uint64_t last_good_seq_;
};

}  // namespace pmt
