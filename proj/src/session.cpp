#include "pmt/session.hpp"

#include <algorithm>
#include <stdexcept>

#include "pmt/error.hpp"

namespace pmt {

SessionRunner::SessionRunner(SessionPlan plan, LogSink sink) : engine_(std::move(plan)), sink_(std::move(sink)) {}

std::vector<ProtocolMessage> SessionRunner::publish(const std::vector<Event>& events) {
  std::vector<ProtocolMessage> out;
  out.reserve(events.size());
  for (const auto& ev : events) {
    ++seq_;
    if (sink_) sink_(EventLogEntry{seq_, ev.real_ms, ev.vtime, ev.kind, ev.payload});
    out.push_back(to_message(ev, seq_));
  }
  return out;
}

std::vector<ProtocolMessage> SessionRunner::start() {
  auto events = engine_.start();
  started_ = true;
  return publish(events);
}

std::vector<ProtocolMessage> SessionRunner::submit(const Command& cmd) {
  const auto& clock = engine_.state().clock;
  const auto in = to_message(cmd, 0);
  ++seq_;
  if (sink_) sink_(EventLogEntry{seq_, clock.elapsed_real_ms, clock.now(), in.kind, in.payload});
  std::vector<Event> events;
  try {
    events = engine_.handle(cmd);
  } catch (const CommandError& e) {
    events = {Event{MessageKind::Rejected,
                    {{"command", std::string(to_string(in.kind))}, {"reason", e.what()}},
                    clock.elapsed_real_ms,
                    clock.now()}};
  }
  return publish(events);
}

std::vector<ProtocolMessage> SessionRunner::advance(RealMillis delta) { return publish(engine_.tick(delta)); }

std::vector<ProtocolMessage> SessionRunner::advance_to(RealMillis elapsed) {
  const RealMillis now = engine_.state().clock.elapsed_real_ms;
  if (elapsed < now)
    throw std::invalid_argument("cannot move the clock back from " + std::to_string(now) + " to " + std::to_string(elapsed) + " ms");
  return advance(elapsed - now);
}

std::vector<ProtocolMessage> SessionRunner::reject_frame(const std::string& reason) {
  const auto& clock = engine_.state().clock;
  return publish({Event{MessageKind::Rejected, {{"reason", reason}}, clock.elapsed_real_ms, clock.now()}});
}

std::vector<ProtocolMessage> SessionRunner::abort() {
  if (!started_ || engine_.ended()) return {};
  return publish(engine_.abort());
}

ReplayResult replay(std::istream& in) {
  const EventLog log = read_log(in);
  const auto& logged = log.entries;
  const auto end_it = std::find_if(logged.begin(), logged.end(),
                                   [](const EventLogEntry& e) { return e.kind == MessageKind::SessionEnd; });
  if (end_it == logged.end())
    throw LogError("log has no session end", logged.empty() ? 0 : logged.back().seq);

  ReplayResult result{SessionPlan::from_json(log.header.at("plan")), {}, {}};
  SessionRunner runner(result.plan, [&](const EventLogEntry& e) { result.entries.push_back(e); });
  runner.start();
  try {
    for (const auto& e : logged) {
      if (e.direction() == Direction::ClientToEngine) {
        runner.advance_to(e.real_ms);
        runner.submit(to_command(ProtocolMessage{e.kind, e.seq, e.payload}));
      } else if (e.kind == MessageKind::Rejected && !e.payload.contains("command")) {
        runner.advance_to(e.real_ms);
        runner.reject_frame(e.payload.value("reason", std::string()));
      } else if (e.kind == MessageKind::SessionEnd && !runner.ended()) {
        runner.advance_to(e.real_ms);
        if (!runner.ended() && e.payload.value("reason", std::string()) == "abort") runner.abort();
      }
    }
  } catch (const std::invalid_argument& ex) {
    throw LogError(std::string("replay diverged: ") + ex.what(), result.entries.empty() ? 0 : result.entries.back().seq);
  } catch (const ProtocolError& ex) {
    throw LogError(std::string("replay diverged: ") + ex.what(), result.entries.empty() ? 0 : result.entries.back().seq);
  }

  const std::size_t n = std::min(logged.size(), result.entries.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!(logged[i] == result.entries[i]))
      throw LogError("replay diverged at seq " + std::to_string(logged[i].seq), i == 0 ? 0 : logged[i - 1].seq);
  if (logged.size() != result.entries.size())
    throw LogError("replay produced " + std::to_string(result.entries.size()) + " entries, log has " +
                       std::to_string(logged.size()),
                   n == 0 ? 0 : logged[n - 1].seq);
  result.record = runner.engine().finish();
  return result;
}

}  // namespace pmt
