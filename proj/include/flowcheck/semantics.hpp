#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flowcheck/lang.hpp"
#include "flowcheck/policy_state.hpp"

namespace flowcheck::semantics {

using lang::Value;

/// Total mapping from a fixed set of program variables to values.
class Store {
 public:
  Store() = default;
  explicit Store(std::map<std::string, Value> values) : values_(std::move(values)) {}

  /// Builds a store for `program`, failing if any program variable is unbound.
  static Store for_program(const lang::Command& program, std::map<std::string, Value> values);

  Value at(const std::string& name) const;
  bool contains(const std::string& name) const { return values_.contains(name); }
  Store with(const std::string& name, Value v) const;

  const std::map<std::string, Value>& values() const { return values_; }
  std::string to_string() const;

  auto operator<=>(const Store&) const = default;

 private:
  std::map<std::string, Value> values_;
};

/// Total, wrapping evaluation; comparisons and logic yield 0 or 1.
Value eval(const lang::Expr& e, const Store& s);

/// Finite set of stores: the Cartesian product of per-variable value lists.
/// Stores are enumerated in lexicographic order (variables by name, values
/// ascending).
class StoreUniverse {
 public:
  StoreUniverse() = default;
  explicit StoreUniverse(std::map<std::string, std::vector<Value>> domains);

  /// Every program variable ranges over `defaults` unless `overrides` names it.
  static StoreUniverse for_program(const lang::Command& program,
                                   const std::map<std::string, std::vector<Value>>& overrides = {},
                                   std::vector<Value> defaults = {0, 1});

  std::size_t size() const { return stores_.size(); }
  const Store& operator[](std::size_t i) const { return stores_[i]; }
  const std::vector<Store>& stores() const { return stores_; }
  const std::map<std::string, std::vector<Value>>& domains() const { return domains_; }
  std::optional<std::size_t> index_of(const Store& s) const;

 private:
  std::map<std::string, std::vector<Value>> domains_;
  std::vector<Store> stores_;
};

struct Output {
  std::string channel;
  Value value;
  std::string point;

  auto operator<=>(const Output&) const = default;
};

/// Either silent (no output) or an output on a channel.
struct Label {
  std::optional<Output> output;

  bool silent() const { return !output.has_value(); }
  bool operator==(const Label&) const = default;
};

struct Config {
  lang::CommandPtr command;
  Store store;
  PolicyStatePtr policy;

  bool terminal() const { return lang::is_skip(*command); }
  /// Structural equality of command, store and policy state.
  bool same_state(const Config& other) const;
};

Config initial_config(lang::CommandPtr program, Store store, PolicyState policy = {});

/// One small step; nullopt iff the command is `skip`.
std::optional<std::pair<Config, Label>> step(const Config& cfg);

struct RunResult {
  std::vector<Label> labels;
  Config final;
  bool exhausted = false;
};

/// Steps at most `fuel` times; `exhausted` iff fuel ran out before termination.
RunResult run(const Config& cfg, std::size_t fuel);

using Trace = std::vector<Value>;

struct PointedValue {
  Value value;
  std::string point;
  bool operator==(const PointedValue&) const = default;
};
using PointedTrace = std::vector<PointedValue>;

Trace project(const std::vector<Label>& labels, const std::string& channel);
PointedTrace project_pointed(const std::vector<Label>& labels, const std::string& channel);

bool is_prefix(const Trace& prefix, const Trace& of);

struct ReachableTrace {
  Trace trace;
  /// True on the longest prefix when the run did not terminate within fuel.
  bool exhausted = false;
  auto operator<=>(const ReachableTrace&) const = default;
};

/// All channel-`channel` prefixes reachable from (c, σ) within `fuel` steps.
std::set<ReachableTrace> reachable_traces(const lang::CommandPtr& c, const Store& store,
                                          const std::string& channel, std::size_t fuel,
                                          const PolicyState& policy = {});

/// An output event in an explored run.
struct OutputEvent {
  Output output;
  /// Number of steps taken before the output step (the execution point n).
  std::size_t step_index;
  /// Policy state of the configuration at that execution point.
  PolicyStatePtr policy;
};

enum class RunOutcome {
  Terminated,
  /// A configuration repeated; `cycle_channels` lists channels written on the cycle.
  Cycles,
  Truncated,
};

/// A fuel-bounded run with cycle detection.
struct Execution {
  std::vector<OutputEvent> events;
  RunOutcome outcome = RunOutcome::Truncated;
  std::set<std::string> cycle_channels;
  /// On a cycle: the configuration after `cycle_start` steps recurs every
  /// `cycle_steps` steps.
  std::size_t cycle_start = 0;
  std::size_t cycle_steps = 0;
  std::size_t steps = 0;

  /// True when the channel's trace is known in full: the run terminated, or it
  /// entered a cycle that never writes to the channel.
  bool complete_on(const std::string& channel) const;
  std::vector<OutputEvent> events_on(const std::string& channel) const;
};

/// Runs until termination, a silent cycle, or `fuel` steps. A cycle that still
/// produces output keeps running until fuel is spent.
Execution execute(const Config& start, std::size_t fuel);

}  // namespace flowcheck::semantics
