#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowcheck/lang.hpp"
#include "flowcheck/policy.hpp"
#include "flowcheck/semantics.hpp"
#include "flowcheck/typing.hpp"

namespace flowcheck::oracle {

using lang::Value;
using semantics::Store;
using semantics::StoreUniverse;
using semantics::Trace;

using StateId = std::int64_t;

/// Something that observes a channel and summarises the trace seen so far
/// as a state. Ids are only comparable within one model.
class AttackerModel {
 public:
  virtual ~AttackerModel() = default;

  virtual std::string name() const = 0;
  /// State after each prefix of t: element i is the state after t[..i].
  virtual std::vector<StateId> states_along(const Trace& t) const = 0;
  /// True when equal states imply equal trace lengths. For such models,
  /// states are compared only at equal positions.
  virtual bool counting() const = 0;
  /// Number of states, when finite.
  virtual std::optional<std::size_t> state_count() const { return std::nullopt; }
};

/// Deterministic finite attacker (S_A, s0, δ_A). Values without an explicit
/// edge follow the state's default edge, or stay put when there is none.
class Attacker : public AttackerModel {
 public:
  Attacker(std::vector<std::string> states, std::size_t start,
           std::vector<std::map<Value, std::size_t>> delta, std::vector<std::optional<std::size_t>> defaults = {});

  /// Complete automaton over a value alphabet, given as table[state][symbol index].
  static Attacker from_table(const std::vector<std::vector<std::size_t>>& table, const std::vector<Value>& alphabet);

  std::string name() const override { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  std::vector<StateId> states_along(const Trace& t) const override;
  bool counting() const override { return false; }
  std::optional<std::size_t> state_count() const override { return states_.size(); }

  std::size_t start() const { return start_; }
  std::size_t size() const { return states_.size(); }
  const std::string& state_name(std::size_t s) const { return states_.at(s); }
  std::size_t next(std::size_t s, Value v) const;
  /// A(t): δ folded over t from s0.
  std::size_t run(const Trace& t) const;

  nlohmann::json to_json() const;

 private:
  std::string name_ = "attacker";
  std::vector<std::string> states_;
  std::size_t start_;
  std::vector<std::map<Value, std::size_t>> delta_;
  std::vector<std::optional<std::size_t>> defaults_;
};

/// A(t) as a state name.
std::string attacker_state(const Attacker& a, const Trace& t);

Attacker parse_attacker_json(const nlohmann::json& j);
Attacker load_attacker_file(const std::filesystem::path& path);

/// The counting lift A^ω: states (A(t), |t|).
class CountingLift : public AttackerModel {
 public:
  explicit CountingLift(std::shared_ptr<const AttackerModel> base) : base_(std::move(base)) {}

  std::string name() const override { return base_->name() + "^w"; }
  std::vector<StateId> states_along(const Trace& t) const override { return base_->states_along(t); }
  bool counting() const override { return true; }

 private:
  std::shared_ptr<const AttackerModel> base_;
};

/// Remembers the whole trace.
class PerfectRecall : public AttackerModel {
 public:
  std::string name() const override { return "perfect-recall"; }
  std::vector<StateId> states_along(const Trace& t) const override;
  bool counting() const override { return true; }

 private:
  mutable std::mutex mu_;
  mutable std::map<std::pair<StateId, Value>, StateId> trie_;
};

/// A_#: remembers only how many outputs it has seen.
class LengthOnly : public AttackerModel {
 public:
  std::string name() const override { return "length-only"; }
  std::vector<StateId> states_along(const Trace& t) const override { return std::vector<StateId>(t.size() + 1, 0); }
  bool counting() const override { return true; }
};

/// Every attacker over `alphabet` with 1..max_states states, one per
/// isomorphism class (only reachable states, numbered in BFS order).
std::vector<std::shared_ptr<const Attacker>> enumerate_attackers(std::size_t max_states,
                                                                 const std::vector<Value>& alphabet);

/// Fuel-bounded runs from every store of a universe, projected to one channel.
class TraceTable {
 public:
  TraceTable(const lang::CommandPtr& c, const std::string& channel, const StoreUniverse& universe, std::size_t fuel,
             const PolicyState& initial = {});
  TraceTable(const std::vector<semantics::Execution>& runs, const std::string& channel,
             const StoreUniverse& universe);

  const std::string& channel() const { return channel_; }
  const StoreUniverse& universe() const { return universe_; }
  std::size_t size() const { return traces_.size(); }
  const Trace& trace(std::size_t i) const { return traces_[i]; }
  const std::vector<semantics::OutputEvent>& events(std::size_t i) const { return events_[i]; }
  /// The whole channel trace is known: no more outputs are possible.
  bool complete(std::size_t i) const { return complete_[i]; }
  bool all_complete() const;

  /// An infinite trace that repeats: trace[..prefix] followed by
  /// trace[prefix..prefix+period] forever.
  struct Lasso {
    std::size_t prefix;
    std::size_t period;
  };
  const std::optional<Lasso>& lasso(std::size_t i) const { return lassos_[i]; }
  /// Finite and complete, or infinite with a known period.
  bool known(std::size_t i) const { return complete_[i] || lassos_[i].has_value(); }
  /// Output number pos (0-based) of run i, if it is known to exist.
  std::optional<Value> value_at(std::size_t i, std::size_t pos) const;
  /// The recorded trace, extended along its lasso to at least `length` outputs.
  Trace unrolled(std::size_t i, std::size_t length) const;
  std::size_t longest() const;

 private:
  std::string channel_;
  StoreUniverse universe_;
  std::vector<Trace> traces_;
  std::vector<std::vector<semantics::OutputEvent>> events_;
  std::vector<bool> complete_;
  std::vector<std::optional<Lasso>> lassos_;
};

std::vector<semantics::Execution> explore(const lang::CommandPtr& c, const StoreUniverse& universe,
                                          std::size_t fuel, const PolicyState& initial = {});

/// Subset of a store universe. When `lower_bound` is set, some truncated run
/// could still add members with more fuel.
struct KnowledgeSet {
  std::vector<bool> members;
  bool lower_bound = false;

  bool contains(std::size_t i) const { return members.at(i); }
  std::size_t count() const;
  /// Member indices in universe order.
  std::vector<std::size_t> indices() const;
  /// ek = complement.
  KnowledgeSet exclusion() const;
};

/// k(A,c,a,t): stores with a reachable prefix t' where A(t') = A(t).
KnowledgeSet knowledge(const AttackerModel& a, const TraceTable& table, const Trace& t);
/// k⁺(A,c,a,t): stores with a reachable t'·v where A(t') = A(t).
KnowledgeSet progress_knowledge_ac(const AttackerModel& a, const TraceTable& table, const Trace& t);
/// k#(A,c,a,t): k⁺ computed with the counting lift A^ω.
KnowledgeSet progress_knowledge_full(const AttackerModel& a, const TraceTable& table, const Trace& t);

struct Counterexample {
  std::string channel;
  Store sigma;
  std::optional<Store> rho;
  Trace t;
  Value v = 0;
  std::optional<Value> v_rho;
  std::string point;
  std::size_t n = 0;
  Trace sigma_trace;
  Trace rho_trace;
  std::string detail;
};

/// secure: checked exhaustively. bounded: some truncated run left the question open.
struct Verdict {
  enum class Outcome { Secure, Insecure, Bounded };

  Outcome outcome = Outcome::Secure;
  std::optional<Counterexample> counterexample;
  std::string note;

  bool secure() const { return outcome == Outcome::Secure; }
  bool insecure() const { return outcome == Outcome::Insecure; }
  bool bounded() const { return outcome == Outcome::Bounded; }

  static Verdict make_secure() { return {}; }
  static Verdict make_bounded(std::string note) { return {Outcome::Bounded, std::nullopt, std::move(note)}; }
  static Verdict make_insecure(Counterexample cex) { return {Outcome::Insecure, std::move(cex), ""}; }
};

std::string to_string(Verdict::Outcome o);
nlohmann::json to_json(const Verdict& v, std::size_t fuel);

/// Per-store checks; `store_index` indexes the table's universe.
Verdict kb_security_check(const AttackerModel& a, const TraceTable& table, std::size_t store_index);
Verdict acpi_check(const AttackerModel& a, const TraceTable& table, std::size_t store_index);
Verdict pi_check(const AttackerModel& a, const TraceTable& table, std::size_t store_index);

enum class SecurityNotion { KB, ACPI, PI };

/// The check for every store, in universe order; the first counterexample wins.
Verdict security_check_all(SecurityNotion notion, const AttackerModel& a, const TraceTable& table);

Verdict two_run_pi_check(const TraceTable& table);
Verdict two_run_pi_check(const lang::CommandPtr& c, const policy::DynamicPolicySpec& spec, const std::string& channel,
                         const StoreUniverse& universe, std::size_t fuel);
/// Two-run PI security on every channel of the program.
Verdict two_run_pi_check_all(const lang::CommandPtr& c, const policy::DynamicPolicySpec& spec,
                             const StoreUniverse& universe, std::size_t fuel);

/// Soundness of a typing on every channel of the program.
Verdict typing_soundness_check(const lang::CommandPtr& c, const typing::DepEnv& g, const StoreUniverse& universe,
                               std::size_t fuel);

/// Every trace of the table is a prefix of the longest one.
bool quasi_constant(const TraceTable& table);

struct Theorem1Report {
  Verdict two_run;
  /// Secure if every attacker is PI secure for every store, else the first failure.
  Verdict pi_all;
  std::string violating_attacker;
  std::size_t attackers_checked = 0;
  /// Both sides decisive and equal. Unset when a bounded verdict makes the comparison moot.
  std::optional<bool> agree;
};

Theorem1Report theorem1_crosscheck(const TraceTable& table,
                                   const std::vector<std::shared_ptr<const AttackerModel>>& family);
/// All attackers with at most `max_states` states over the alphabet, plus A_#.
std::vector<std::shared_ptr<const AttackerModel>> theorem1_family(std::size_t max_states,
                                                                  const std::vector<Value>& alphabet);

nlohmann::json to_json(const Theorem1Report& r, std::size_t fuel);

/// Checks on bounded runs that every fired output's approximation is coarser
/// than the policy active at that point.
Verdict validate_approximation(const lang::CommandPtr& c, const policy::DynamicPolicySpec& spec,
                               const policy::PolicyApprox& approx, const StoreUniverse& universe, std::size_t fuel);

}  // namespace flowcheck::oracle
