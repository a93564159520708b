#include <algorithm>

#include "flowcheck/semantics.hpp"

namespace flowcheck::semantics {

Trace project(const std::vector<Label>& labels, const std::string& channel) {
  Trace t;
  for (const auto& l : labels)
    if (l.output && l.output->channel == channel) t.push_back(l.output->value);
  return t;
}

PointedTrace project_pointed(const std::vector<Label>& labels, const std::string& channel) {
  PointedTrace t;
  for (const auto& l : labels)
    if (l.output && l.output->channel == channel) t.push_back({l.output->value, l.output->point});
  return t;
}

bool is_prefix(const Trace& prefix, const Trace& of) {
  return prefix.size() <= of.size() && std::equal(prefix.begin(), prefix.end(), of.begin());
}

std::set<ReachableTrace> reachable_traces(const lang::CommandPtr& c, const Store& store, const std::string& channel,
                                          std::size_t fuel, const PolicyState& policy) {
  // Deterministic: the reachable prefixes are exactly the prefixes of the one run.
  auto result = run(initial_config(c, store, policy), fuel);
  Trace full = project(result.labels, channel);
  std::set<ReachableTrace> out;
  for (std::size_t n = 0; n <= full.size(); ++n) {
    bool longest = n == full.size();
    out.insert({Trace(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(n)), longest && result.exhausted});
  }
  return out;
}

bool Execution::complete_on(const std::string& channel) const {
  if (outcome == RunOutcome::Terminated) return true;
  return outcome == RunOutcome::Cycles && !cycle_channels.contains(channel);
}

std::vector<OutputEvent> Execution::events_on(const std::string& channel) const {
  std::vector<OutputEvent> out;
  for (const auto& e : events)
    if (e.output.channel == channel) out.push_back(e);
  return out;
}

Execution execute(const Config& start, std::size_t fuel) {
  Execution ex;
  Config cur = start;
  // Brent's cycle detection: compare against a checkpoint refreshed at powers of two.
  Config checkpoint = start;
  std::size_t power = 1;
  std::size_t lambda = 0;
  std::vector<std::pair<std::size_t, std::string>> recent_outputs;  // (step, channel) since checkpoint
  bool cycle_found = false;

  for (std::size_t n = 0; n < fuel; ++n) {
    auto next = step(cur);
    if (!next) {
      ex.outcome = RunOutcome::Terminated;
      ex.steps = n;
      return ex;
    }
    auto& [cfg, label] = *next;
    if (label.output) {
      ex.events.push_back({*label.output, n, cur.policy});
      if (!cycle_found) recent_outputs.emplace_back(n, label.output->channel);
    }
    cur = std::move(cfg);
    if (cycle_found) continue;

    ++lambda;
    if (cur.same_state(checkpoint)) {
      // The last `lambda` steps form one period of the cycle.
      cycle_found = true;
      ex.outcome = RunOutcome::Cycles;
      ex.cycle_start = n + 1 - lambda;
      ex.cycle_steps = lambda;
      for (const auto& [s, chan] : recent_outputs) ex.cycle_channels.insert(chan);
      if (ex.cycle_channels.empty()) {
        ex.steps = n + 1;
        return ex;
      }
      continue;
    }
    if (lambda == power) {
      checkpoint = cur;
      power *= 2;
      lambda = 0;
      recent_outputs.clear();
    }
  }
  ex.steps = fuel;
  if (!cycle_found) ex.outcome = RunOutcome::Truncated;
  return ex;
}

}  // namespace flowcheck::semantics
