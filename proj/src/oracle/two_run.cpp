#include "flowcheck/oracle.hpp"
#include "oracle/internal.hpp"

namespace flowcheck::oracle {

namespace {

// Every store in `related(s, i)` that produces an (i+1)-th output must agree
// with σ on it.
template <class Related>
Verdict agree_on_next_output(const TraceTable& table, Related related) {
  std::optional<Verdict> bounded;
  for (std::size_t s = 0; s < table.size(); ++s) {
    const Trace& trace = table.trace(s);
    bool undecided = false;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      for (std::size_t rho : related(s, i)) {
        if (auto other = table.value_at(rho, i)) {
          if (*other == trace[i]) continue;
          Counterexample cex = detail::base_counterexample(table, s, i);
          cex.rho = table.universe()[rho];
          cex.v_rho = *other;
          cex.rho_trace = table.trace(rho);
          cex.detail = "output " + std::to_string(i + 1) + " differs between related stores";
          return Verdict::make_insecure(std::move(cex));
        }
        if (!table.complete(rho)) undecided = true;
      }
    }
    if (!bounded && undecided)
      bounded = Verdict::make_bounded("a related run was truncated before producing the compared output");
    if (!bounded && !table.complete(s)) bounded = Verdict::make_bounded("a run was truncated by the fuel limit");
  }
  return bounded ? *bounded : Verdict::make_secure();
}

Verdict first_decisive(std::vector<Verdict> verdicts) {
  std::optional<Verdict> bounded;
  for (auto& v : verdicts) {
    if (v.insecure()) return v;
    if (v.bounded() && !bounded) bounded = std::move(v);
  }
  return bounded ? *bounded : Verdict::make_secure();
}

}  // namespace

Verdict two_run_pi_check(const TraceTable& table) {
  return agree_on_next_output(table, [&](std::size_t s, std::size_t i) { return detail::policy_class(table, s, i); });
}

Verdict two_run_pi_check(const lang::CommandPtr& c, const policy::DynamicPolicySpec& spec, const std::string& channel,
                         const StoreUniverse& universe, std::size_t fuel) {
  return two_run_pi_check(TraceTable(c, channel, universe, fuel, spec.initial));
}

Verdict two_run_pi_check_all(const lang::CommandPtr& c, const policy::DynamicPolicySpec& spec,
                             const StoreUniverse& universe, std::size_t fuel) {
  auto runs = explore(c, universe, fuel, spec.initial);
  std::vector<Verdict> verdicts;
  for (const auto& channel : lang::channels(*c)) {
    verdicts.push_back(two_run_pi_check(TraceTable(runs, channel, universe)));
    if (verdicts.back().insecure()) break;
  }
  return first_decisive(std::move(verdicts));
}

Verdict typing_soundness_check(const lang::CommandPtr& c, const typing::DepEnv& g, const StoreUniverse& universe,
                               std::size_t fuel) {
  auto runs = explore(c, universe, fuel);
  auto restricted = typing::restrict_to_pvars(g);
  std::vector<Verdict> verdicts;
  for (const auto& channel : lang::channels(*c)) {
    TraceTable table(runs, channel, universe);
    // The compared variables depend only on the output point.
    std::map<std::string, policy::EquivSpec> specs;
    auto related = [&](std::size_t s, std::size_t i) {
      const std::string& point = table.events(s)[i].output.point;
      auto it = specs.find(point);
      if (it == specs.end())
        it = specs
                 .emplace(point, policy::EquivSpec::of_variables(
                                     restricted.at(typing::TypingVar::channel_point(channel, point))))
                 .first;
      return it->second.class_of(universe[s], universe);
    };
    verdicts.push_back(agree_on_next_output(table, related));
    if (verdicts.back().insecure()) break;
  }
  return first_decisive(std::move(verdicts));
}

Verdict validate_approximation(const lang::CommandPtr& c, const policy::DynamicPolicySpec& spec,
                               const policy::PolicyApprox& approx, const StoreUniverse& universe, std::size_t fuel) {
  auto runs = explore(c, universe, fuel, spec.initial);
  bool truncated = false;
  for (std::size_t s = 0; s < universe.size(); ++s) {
    const auto& run = runs[s];
    for (std::size_t i = 0; i < run.events.size(); ++i) {
      const auto& e = run.events[i];
      lang::ProgramPoint pp{e.output.channel, e.output.point};
      auto it = approx.find(pp);
      if (it == approx.end()) throw std::invalid_argument("approximation has no entry for " + pp.to_string());
      policy::EquivSpec active(e.policy->allowed(pp.channel));
      auto witness = policy::coarseness_witness(it->second, active, universe);
      if (!witness) continue;
      Counterexample cex;
      cex.channel = pp.channel;
      cex.sigma = universe[s];
      cex.v = e.output.value;
      cex.point = e.output.point;
      cex.n = e.step_index;
      cex.detail = "approximation at " + pp.to_string() + " is finer than the active policy: " +
                   witness->first.to_string() + " and " + witness->second.to_string() +
                   " agree on the active policy but not on the approximation";
      return Verdict::make_insecure(std::move(cex));
    }
    if (run.outcome == semantics::RunOutcome::Truncated) truncated = true;
  }
  if (truncated) return Verdict::make_bounded("a run was truncated by the fuel limit");
  return Verdict::make_secure();
}

}  // namespace flowcheck::oracle
