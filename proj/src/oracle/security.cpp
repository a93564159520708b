#include <algorithm>

#include "flowcheck/oracle.hpp"
#include "oracle/internal.hpp"

namespace flowcheck::oracle {

namespace detail {

std::vector<std::size_t> policy_class(const TraceTable& table, std::size_t s, std::size_t i) {
  const auto& event = table.events(s)[i];
  policy::EquivSpec spec(event.policy->allowed(table.channel()));
  return spec.class_of(table.universe()[s], table.universe());
}

Counterexample base_counterexample(const TraceTable& table, std::size_t s, std::size_t i) {
  const Trace& trace = table.trace(s);
  const auto& event = table.events(s)[i];
  Counterexample cex;
  cex.channel = table.channel();
  cex.sigma = table.universe()[s];
  cex.t = Trace(trace.begin(), trace.begin() + static_cast<std::ptrdiff_t>(i));
  cex.v = trace[i];
  cex.point = event.output.point;
  cex.n = event.step_index;
  cex.sigma_trace = trace;
  return cex;
}

}  // namespace detail

namespace {

using Member = bool (detail::Observations::*)(std::size_t, StateId, std::size_t) const;

Member subtracted_term(SecurityNotion notion) {
  switch (notion) {
    case SecurityNotion::KB:
      return &detail::Observations::in_k;
    case SecurityNotion::ACPI:
      return &detail::Observations::in_k_ac;
    case SecurityNotion::PI:
      return &detail::Observations::in_k_full;
  }
  return &detail::Observations::in_k;
}

const char* term_name(SecurityNotion notion) {
  switch (notion) {
    case SecurityNotion::KB:
      return "k(t)";
    case SecurityNotion::ACPI:
      return "k+(t)";
    case SecurityNotion::PI:
      return "k#(t)";
  }
  return "";
}

// For each output (t, v) of σ's run and each ρ ≡ σ under the active policy:
// ρ must not be excluded by t·v while still considered possible by the
// subtracted knowledge term at t.
Verdict check_store(SecurityNotion notion, const AttackerModel& a, const detail::Observations& obs,
                    const TraceTable& table, std::size_t s) {
  Member previous = subtracted_term(notion);
  const Trace& trace = table.trace(s);
  const auto& ids = obs.ids[s];
  bool undecided = false;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    StateId at_t = ids[i];
    StateId at_tv = ids[i + 1];
    for (std::size_t rho : detail::policy_class(table, s, i)) {
      if (obs.in_k(rho, at_tv, i + 1)) continue;
      bool possible_before = (obs.*previous)(rho, at_t, i);
      if (!obs.decided[rho]) {
        undecided = true;
        continue;
      }
      if (!possible_before) continue;
      Counterexample cex = detail::base_counterexample(table, s, i);
      cex.rho = table.universe()[rho];
      cex.rho_trace = table.trace(rho);
      cex.detail = "attacker " + a.name() + ": rho is in " + term_name(notion) + " but excluded by k(t.v)";
      return Verdict::make_insecure(std::move(cex));
    }
  }
  if (undecided) return Verdict::make_bounded("a truncated run equivalent to the initial store left the check open");
  if (!table.complete(s)) return Verdict::make_bounded("the run from the initial store was truncated");
  return Verdict::make_secure();
}

Verdict check_one(SecurityNotion notion, const AttackerModel& a, const TraceTable& table, std::size_t s) {
  if (s >= table.size()) throw std::out_of_range("store index outside the universe");
  detail::Observations obs(a, table);
  return check_store(notion, a, obs, table, s);
}

}  // namespace

Verdict kb_security_check(const AttackerModel& a, const TraceTable& table, std::size_t store_index) {
  return check_one(SecurityNotion::KB, a, table, store_index);
}

Verdict acpi_check(const AttackerModel& a, const TraceTable& table, std::size_t store_index) {
  return check_one(SecurityNotion::ACPI, a, table, store_index);
}

Verdict pi_check(const AttackerModel& a, const TraceTable& table, std::size_t store_index) {
  return check_one(SecurityNotion::PI, a, table, store_index);
}

Verdict security_check_all(SecurityNotion notion, const AttackerModel& a, const TraceTable& table) {
  detail::Observations obs(a, table);
  std::optional<Verdict> bounded;
  for (std::size_t s = 0; s < table.size(); ++s) {
    Verdict v = check_store(notion, a, obs, table, s);
    if (v.insecure()) return v;
    if (v.bounded() && !bounded) bounded = std::move(v);
  }
  return bounded ? *bounded : Verdict::make_secure();
}

bool quasi_constant(const TraceTable& table) {
  if (table.size() == 0) return true;
  std::size_t longest = 0;
  for (std::size_t i = 1; i < table.size(); ++i)
    if (table.trace(i).size() > table.trace(longest).size()) longest = i;
  for (std::size_t i = 0; i < table.size(); ++i)
    if (!semantics::is_prefix(table.trace(i), table.trace(longest))) return false;
  return true;
}

}  // namespace flowcheck::oracle
