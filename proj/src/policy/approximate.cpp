#include "flowcheck/policy.hpp"

namespace flowcheck::policy {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

using StateSet = std::set<PolicyState>;

class MayAnalysis {
 public:
  std::map<lang::ProgramPoint, StateSet> at_points;

  StateSet flow(const lang::Command& c, const StateSet& in) {
    return std::visit(overloaded{
                          [&](const lang::Seq& s) { return flow(*s.second, flow(*s.first, in)); },
                          [&](const lang::If& i) {
                            StateSet out = flow(*i.then_branch, in);
                            out.merge(flow(*i.else_branch, in));
                            return out;
                          },
                          [&](const lang::While& w) {
                            // States at the loop head: the least solution of X = in ∪ body(X).
                            StateSet head = in;
                            while (true) {
                              StateSet next = in;
                              next.merge(flow(*w.body, head));
                              if (next == head) return head;
                              head = std::move(next);
                            }
                          },
                          [&](const lang::Out& o) {
                            at_points[{o.channel, o.point}].insert(in.begin(), in.end());
                            return in;
                          },
                          [&](const lang::Directive& d) {
                            StateSet out;
                            for (auto s : in) {
                              s.apply(d);
                              out.insert(std::move(s));
                            }
                            return out;
                          },
                          [&](const auto&) { return in; },
                      },
                      c.node);
  }
};

}  // namespace

std::map<lang::ProgramPoint, std::set<PolicyState>> may_active_states(const lang::Command& c,
                                                                      const DynamicPolicySpec& spec) {
  MayAnalysis analysis;
  analysis.flow(c, {spec.initial});
  return std::move(analysis.at_points);
}

PolicyApprox approximate_policy(const lang::Command& c, const DynamicPolicySpec& spec) {
  PolicyApprox approx;
  for (const auto& [pp, states] : may_active_states(c, spec)) {
    std::optional<EquivSpec> acc;
    for (const auto& s : states) {
      EquivSpec allowed(s.allowed(pp.channel));
      acc = acc ? acc->intersect(allowed) : allowed;
    }
    approx.emplace(pp, acc.value_or(EquivSpec{}));
  }
  return approx;
}

}  // namespace flowcheck::policy
