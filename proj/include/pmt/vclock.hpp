#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pmt {

/// Virtual time of day, in whole minutes from midnight.
using VirtualMinutes = int;
/// Virtual time of day, in seconds from midnight. Used only for remember-to-execute durations.
using VirtualSeconds = std::int64_t;
/// Real elapsed time of a session in milliseconds (pauses excluded).
using RealMillis = std::int64_t;

struct ClockConfig {
  double compression_factor = 20.0;  // one virtual hour per three real minutes
  VirtualMinutes day_start = 390;    // 06:30
  VirtualMinutes day_end = 1350;     // 22:30

  /// Throws ValidationError unless day_end > day_start and compression_factor > 0.
  void validate() const;

  bool operator==(const ClockConfig&) const = default;
};

struct ClockEvent {
  enum class Kind { MinuteTick, DayEnd };

  Kind kind;
  VirtualMinutes vtime;
  RealMillis real_ms;  // elapsed real time at which the boundary is crossed

  bool operator==(const ClockEvent&) const = default;
};

/// Value-type clock. Virtual time is day_start + floor(elapsed * factor / 60000), saturating at day_end.
struct VirtualClock {
  ClockConfig config;
  RealMillis elapsed_real_ms = 0;
  bool paused = false;

  VirtualClock() = default;
  explicit VirtualClock(ClockConfig cfg);

  VirtualMinutes now() const;
  VirtualSeconds now_seconds() const;
  RealMillis day_length_ms() const;
  bool day_ended() const { return elapsed_real_ms >= day_length_ms(); }

  bool operator==(const VirtualClock&) const = default;
};

VirtualMinutes to_virtual(const VirtualClock& clock, RealMillis real_ms);
VirtualSeconds to_virtual_seconds(const VirtualClock& clock, RealMillis real_ms);

/// Smallest elapsed real time whose virtual minute is `vtime`. Exact inverse of to_virtual.
RealMillis to_real(const VirtualClock& clock, VirtualMinutes vtime);

/// Real milliseconds needed to cover `minutes` virtual minutes of travel or waiting.
RealMillis real_span(const ClockConfig& config, int minutes);

struct AdvanceResult {
  VirtualClock clock;
  std::vector<ClockEvent> events;
};

/// One MinuteTick per virtual minute crossed, then a single DayEnd when day_end is reached.
/// A paused or finished clock does not move.
AdvanceResult advance(VirtualClock clock, RealMillis delta_real_ms);

std::string format_hhmm(VirtualMinutes vtime);
VirtualMinutes parse_hhmm(std::string_view text);
std::string format_mmss(VirtualSeconds seconds);
VirtualSeconds parse_mmss(std::string_view text);

}  // namespace pmt
