#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "flowcheck/lang.hpp"
#include "flowcheck/policy_state.hpp"
#include "flowcheck/semantics.hpp"

namespace flowcheck::policy {

using semantics::Store;
using semantics::StoreUniverse;

/// A finite set of expressions E; stores are equivalent iff they agree on
/// every member of E. The empty set gives the total relation.
class EquivSpec {
 public:
  EquivSpec() = default;
  explicit EquivSpec(const std::vector<lang::ExprPtr>& exprs);
  static EquivSpec of_variables(const std::set<std::string>& vars);
  /// Parses each entry as an expression.
  static EquivSpec parse(const std::vector<std::string>& texts);

  bool equivalent(const Store& a, const Store& b) const;
  /// Indices of the universe stores equivalent to `s`.
  std::vector<std::size_t> class_of(const Store& s, const StoreUniverse& universe) const;

  std::vector<lang::ExprPtr> expressions() const;
  std::vector<std::string> texts() const;
  std::size_t size() const { return exprs_.size(); }
  bool empty() const { return exprs_.empty(); }
  bool contains(const lang::Expr& e) const;

  /// Variables occurring in E as bare-variable expressions.
  std::set<std::string> bare_variables() const;
  bool all_bare_variables() const;

  /// Expressions common to both specs; the result is coarser than either.
  EquivSpec intersect(const EquivSpec& other) const;
  EquivSpec unite(const EquivSpec& other) const;

  bool operator==(const EquivSpec& other) const;

 private:
  std::map<std::string, lang::ExprPtr> exprs_;
};

/// Channel-indexed equivalence specs; unlisted channels get the empty spec.
struct StaticPolicy {
  std::map<std::string, EquivSpec> channels;

  const EquivSpec& at(const std::string& channel) const;
};

StaticPolicy static_policy(const PolicyState& state);

/// Directive-driven dynamic policy: the initial permissions, updated by the
/// program's allow/revoke directives as it runs.
struct DynamicPolicySpec {
  PolicyState initial;
};

class ExecutionPointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The policy in force after n steps from (c, σ).
StaticPolicy policy_at(const DynamicPolicySpec& spec, const lang::CommandPtr& c, const Store& store, std::size_t n);

/// Sound sufficient condition: every variable of `winner` appears bare in `spec`.
bool coarser_syntactic(const std::set<std::string>& winner, const EquivSpec& spec);

/// Stores equivalent under `finer` but not under `coarser`, if any.
std::optional<std::pair<Store, Store>> coarseness_witness(const EquivSpec& coarser, const EquivSpec& finer,
                                                          const StoreUniverse& universe);
/// True iff σ ≡_{r2} ρ implies σ ≡_{r1} ρ for all stores in the universe.
bool coarser_exact(const EquivSpec& r1, const EquivSpec& r2, const StoreUniverse& universe);

using PolicyApprox = std::map<lang::ProgramPoint, EquivSpec>;

/// Per-point approximation: the intersection of the permissions of every
/// policy state that may be active when the output is reached.
PolicyApprox approximate_policy(const lang::Command& c, const DynamicPolicySpec& spec);

/// The set of policy states that may be active at each output point.
std::map<lang::ProgramPoint, std::set<PolicyState>> may_active_states(const lang::Command& c,
                                                                      const DynamicPolicySpec& spec);

lang::ProgramPoint parse_program_point(const std::string& text);

/// Contents of a policy file.
struct PolicyFile {
  DynamicPolicySpec spec;
  std::map<std::string, std::vector<lang::Value>> universe;
  PolicyApprox approx_override;

  /// The computed approximation with any overrides applied.
  PolicyApprox approximation(const lang::Command& c) const;
};

PolicyFile parse_policy_json(const nlohmann::json& j);
PolicyFile load_policy_file(const std::filesystem::path& path);

nlohmann::json to_json(const EquivSpec& spec);

/// Variables mentioned by the initial permissions and by the approximation.
std::set<std::string> policy_variables(const DynamicPolicySpec& spec, const PolicyApprox& approx = {});

/// Store universe over the program's variables plus any the policy mentions.
/// Variables range over `defaults` unless `overrides` names them.
StoreUniverse universe_for(const lang::Command& c, const DynamicPolicySpec& spec, const PolicyApprox& approx = {},
                           const std::map<std::string, std::vector<lang::Value>>& overrides = {},
                           const std::vector<lang::Value>& defaults = {0, 1});

}  // namespace flowcheck::policy
