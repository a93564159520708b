#include <algorithm>

#include "flowcheck/oracle.hpp"
#include "oracle/internal.hpp"

namespace flowcheck::oracle {

std::vector<semantics::Execution> explore(const lang::CommandPtr& c, const StoreUniverse& universe,
                                          std::size_t fuel, const PolicyState& initial) {
  std::vector<semantics::Execution> runs;
  runs.reserve(universe.size());
  for (const auto& s : universe.stores()) runs.push_back(semantics::execute(semantics::initial_config(c, s, initial), fuel));
  return runs;
}

TraceTable::TraceTable(const lang::CommandPtr& c, const std::string& channel, const StoreUniverse& universe,
                       std::size_t fuel, const PolicyState& initial)
    : TraceTable(explore(c, universe, fuel, initial), channel, universe) {}

TraceTable::TraceTable(const std::vector<semantics::Execution>& runs, const std::string& channel,
                       const StoreUniverse& universe)
    : channel_(channel), universe_(universe) {
  if (runs.size() != universe.size()) throw std::invalid_argument("one run per store is required");
  for (const auto& run : runs) {
    auto events = run.events_on(channel);
    Trace t;
    for (const auto& e : events) t.push_back(e.output.value);
    std::optional<Lasso> lasso;
    if (run.outcome == semantics::RunOutcome::Cycles && run.cycle_channels.contains(channel)) {
      Lasso l{0, 0};
      for (const auto& e : events) {
        if (e.step_index < run.cycle_start)
          ++l.prefix;
        else if (e.step_index < run.cycle_start + run.cycle_steps)
          ++l.period;
      }
      if (l.period > 0 && l.prefix + l.period <= t.size()) lasso = l;
    }
    traces_.push_back(std::move(t));
    events_.push_back(std::move(events));
    complete_.push_back(run.complete_on(channel));
    lassos_.push_back(lasso);
  }
}

bool TraceTable::all_complete() const { return std::all_of(complete_.begin(), complete_.end(), [](bool b) { return b; }); }

std::optional<Value> TraceTable::value_at(std::size_t i, std::size_t pos) const {
  const Trace& t = traces_[i];
  if (pos < t.size()) return t[pos];
  if (const auto& l = lassos_[i]) return t[l->prefix + (pos - l->prefix) % l->period];
  return std::nullopt;
}

Trace TraceTable::unrolled(std::size_t i, std::size_t length) const {
  Trace t = traces_[i];
  if (!lassos_[i]) return t;
  for (std::size_t pos = t.size(); pos < length; ++pos) t.push_back(*value_at(i, pos));
  return t;
}

std::size_t TraceTable::longest() const {
  std::size_t n = 0;
  for (const auto& t : traces_) n = std::max(n, t.size());
  return n;
}

std::size_t KnowledgeSet::count() const { return static_cast<std::size_t>(std::count(members.begin(), members.end(), true)); }

std::vector<std::size_t> KnowledgeSet::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < members.size(); ++i)
    if (members[i]) out.push_back(i);
  return out;
}

KnowledgeSet KnowledgeSet::exclusion() const {
  KnowledgeSet out = *this;
  out.members.flip();
  return out;
}

namespace detail {

Observations::Observations(const AttackerModel& a, const TraceTable& table) : counting(a.counting()) {
  std::size_t n = table.size();
  ids.reserve(n);
  infinite.assign(n, false);
  decided.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& lasso = table.lasso(i);
    if (!lasso) {
      ids.push_back(a.states_along(table.trace(i)));
      decided[i] = table.complete(i);
      continue;
    }
    // Unroll far enough that every state the infinite trace can reach has
    // appeared: positions up to the longest trace for counting models, and a
    // full cycle of (state, phase) pairs for finite ones.
    std::size_t length = table.longest() + 1;
    if (!counting) {
      if (auto states = a.state_count()) {
        length = std::max(length, lasso->prefix + lasso->period * (*states + 1));
        decided[i] = true;
      }
    } else {
      decided[i] = true;
    }
    infinite[i] = decided[i];
    ids.push_back(a.states_along(table.unrolled(i, length)));
  }
}

bool Observations::in_k(std::size_t rho, StateId target, std::size_t pos) const {
  const auto& seq = ids[rho];
  if (counting) return pos < seq.size() && seq[pos] == target;
  return std::find(seq.begin(), seq.end(), target) != seq.end();
}

bool Observations::in_k_ac(std::size_t rho, StateId target, std::size_t pos) const {
  const auto& seq = ids[rho];
  if (infinite[rho]) return in_k(rho, target, pos);
  // seq has |T_ρ| + 1 entries; prefixes followed by an output are all but the last.
  if (counting) return pos + 1 < seq.size() && seq[pos] == target;
  return std::find(seq.begin(), seq.end() - 1, target) != seq.end() - 1;
}

bool Observations::in_k_full(std::size_t rho, StateId target, std::size_t pos) const {
  const auto& seq = ids[rho];
  std::size_t needed = infinite[rho] ? pos + 1 : pos + 2;
  return needed <= seq.size() && seq[pos] == target;
}

}  // namespace detail

namespace {

template <class Member>
KnowledgeSet collect(const AttackerModel& a, const TraceTable& table, const Trace& t, Member member) {
  detail::Observations obs(a, table);
  StateId target = a.states_along(t).back();
  KnowledgeSet k;
  k.members.resize(table.size());
  for (std::size_t rho = 0; rho < table.size(); ++rho) {
    k.members[rho] = (obs.*member)(rho, target, t.size());
    if (!k.members[rho] && !obs.decided[rho]) k.lower_bound = true;
  }
  return k;
}

}  // namespace

KnowledgeSet knowledge(const AttackerModel& a, const TraceTable& table, const Trace& t) {
  return collect(a, table, t, &detail::Observations::in_k);
}

KnowledgeSet progress_knowledge_ac(const AttackerModel& a, const TraceTable& table, const Trace& t) {
  return collect(a, table, t, &detail::Observations::in_k_ac);
}

KnowledgeSet progress_knowledge_full(const AttackerModel& a, const TraceTable& table, const Trace& t) {
  return collect(a, table, t, &detail::Observations::in_k_full);
}

}  // namespace flowcheck::oracle
