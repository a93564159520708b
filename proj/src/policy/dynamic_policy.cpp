#include "flowcheck/policy.hpp"

namespace flowcheck::policy {

StaticPolicy policy_at(const DynamicPolicySpec& spec, const lang::CommandPtr& c, const Store& store, std::size_t n) {
  auto result = semantics::run(semantics::initial_config(c, store, spec.initial), n);
  if (result.labels.size() < n)
    throw ExecutionPointError("execution point " + std::to_string(n) + " is not defined: the run from " +
                              store.to_string() + " terminates after " + std::to_string(result.labels.size()) +
                              " steps");
  return static_policy(*result.final.policy);
}

}  // namespace flowcheck::policy
