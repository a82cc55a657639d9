#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

#include "pmt/engine.hpp"

namespace pmt {

struct ServeOptions {
  std::uint16_t port = 8787;  // 0 picks a free port
  double time_scale = 1.0;    // engine milliseconds per wall-clock millisecond
  std::filesystem::path out_dir = ".";
  /// Called with the bound port once the socket listens.
  std::function<void(std::uint16_t)> on_listen;
};

/// Serves one session over a localhost TCP socket with newline-delimited frames. Returns when the
/// session ends or the client disconnects (which aborts the session). Writes sessionN.pmtlog and
/// sessionN.record.json under out_dir.
SessionRecord serve_session(const SessionPlan& plan, const ServeOptions& options, std::ostream& status);

}  // namespace pmt
