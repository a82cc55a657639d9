#include "pmt/vclock.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "pmt/error.hpp"

namespace pmt {

namespace {

constexpr double kMsPerMinute = 60000.0;

int parse_two_fields(std::string_view text, char sep, int& first, int& second) {
  const auto colon = text.find(sep);
  if (colon == std::string_view::npos) return -1;
  const auto lhs = text.substr(0, colon);
  const auto rhs = text.substr(colon + 1);
  if (lhs.empty() || rhs.size() != 2) return -1;
  auto r1 = std::from_chars(lhs.data(), lhs.data() + lhs.size(), first);
  auto r2 = std::from_chars(rhs.data(), rhs.data() + rhs.size(), second);
  if (r1.ec != std::errc{} || r1.ptr != lhs.data() + lhs.size()) return -1;
  if (r2.ec != std::errc{} || r2.ptr != rhs.data() + rhs.size()) return -1;
  return 0;
}

}  // namespace

void ClockConfig::validate() const {
  if (!(compression_factor > 0.0) || !std::isfinite(compression_factor))
    throw ValidationError("clock: compression_factor must be positive");
  if (day_end <= day_start) throw ValidationError("clock: day_end must be after day_start");
  if (day_start < 0 || day_end > 24 * 60) throw ValidationError("clock: day span must lie within one day");
}

VirtualClock::VirtualClock(ClockConfig cfg) : config(cfg) { config.validate(); }

VirtualMinutes to_virtual(const VirtualClock& clock, RealMillis real_ms) {
  if (real_ms < 0) throw std::invalid_argument("to_virtual: negative real time");
  const double minutes = std::floor(static_cast<double>(real_ms) * clock.config.compression_factor / kMsPerMinute);
  const double span = clock.config.day_end - clock.config.day_start;
  return clock.config.day_start + static_cast<VirtualMinutes>(std::min(minutes, span));
}

VirtualSeconds to_virtual_seconds(const VirtualClock& clock, RealMillis real_ms) {
  if (real_ms < 0) throw std::invalid_argument("to_virtual_seconds: negative real time");
  const double seconds = std::floor(static_cast<double>(real_ms) * clock.config.compression_factor / 1000.0);
  const double span = 60.0 * (clock.config.day_end - clock.config.day_start);
  return static_cast<VirtualSeconds>(clock.config.day_start) * 60 + static_cast<VirtualSeconds>(std::min(seconds, span));
}

RealMillis to_real(const VirtualClock& clock, VirtualMinutes vtime) {
  const auto& cfg = clock.config;
  if (vtime < cfg.day_start || vtime > cfg.day_end) throw std::out_of_range("to_real: virtual time outside the day span");
  auto real = static_cast<RealMillis>(std::ceil((vtime - cfg.day_start) * kMsPerMinute / cfg.compression_factor));
  // Correct any floating-point slack so the result is the exact minimal preimage.
  while (to_virtual(clock, real) < vtime) ++real;
  while (real > 0 && to_virtual(clock, real - 1) >= vtime) --real;
  return real;
}

RealMillis real_span(const ClockConfig& config, int minutes) {
  return static_cast<RealMillis>(std::ceil(minutes * kMsPerMinute / config.compression_factor));
}

VirtualMinutes VirtualClock::now() const { return to_virtual(*this, elapsed_real_ms); }

VirtualSeconds VirtualClock::now_seconds() const { return to_virtual_seconds(*this, elapsed_real_ms); }

RealMillis VirtualClock::day_length_ms() const { return to_real(*this, config.day_end); }

AdvanceResult advance(VirtualClock clock, RealMillis delta_real_ms) {
  if (delta_real_ms < 0) throw std::invalid_argument("advance: negative delta");
  AdvanceResult result{clock, {}};
  if (clock.paused || clock.day_ended() || delta_real_ms == 0) return result;

  const RealMillis day_length = clock.day_length_ms();
  const VirtualMinutes before = clock.now();
  clock.elapsed_real_ms = std::min(day_length, clock.elapsed_real_ms + delta_real_ms);
  const VirtualMinutes after = clock.now();

  for (VirtualMinutes m = before + 1; m <= after; ++m)
    result.events.push_back({ClockEvent::Kind::MinuteTick, m, to_real(clock, m)});
  if (clock.elapsed_real_ms == day_length)
    result.events.push_back({ClockEvent::Kind::DayEnd, clock.config.day_end, day_length});

  result.clock = clock;
  return result;
}

std::string format_hhmm(VirtualMinutes vtime) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", vtime / 60, vtime % 60);
  return buf;
}

VirtualMinutes parse_hhmm(std::string_view text) {
  int h = 0, m = 0;
  if (parse_two_fields(text, ':', h, m) != 0 || h < 0 || h > 24 || m < 0 || m > 59 || (h == 24 && m != 0))
    throw ValidationError("invalid time of day '" + std::string(text) + "' (expected HH:MM)");
  return h * 60 + m;
}

std::string format_mmss(VirtualSeconds seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld", static_cast<long long>(seconds / 60),
                static_cast<long long>(seconds % 60));
  return buf;
}

VirtualSeconds parse_mmss(std::string_view text) {
  int m = 0, s = 0;
  if (parse_two_fields(text, ':', m, s) != 0 || m < 0 || s < 0 || s > 59)
    throw ValidationError("invalid duration '" + std::string(text) + "' (expected MM:SS)");
  return static_cast<VirtualSeconds>(m) * 60 + s;
}

}  // namespace pmt
