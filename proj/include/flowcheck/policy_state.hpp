#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "flowcheck/lang.hpp"

namespace flowcheck {

/// The set of (expression, channel) flow permissions currently in force.
/// Expressions are keyed by their canonical source text, so `allow x + 1 -> a`
/// and `revoke x + 1 -> a` cancel while `revoke x -> a` leaves `x + 1` alone.
class PolicyState {
 public:
  PolicyState() = default;

  void allow(const std::string& channel, lang::ExprPtr subject);
  void revoke(const std::string& channel, const lang::Expr& subject);
  void apply(const lang::Directive& d);

  /// Expressions allowed to flow to the channel, in canonical-text order.
  std::vector<lang::ExprPtr> allowed(const std::string& channel) const;
  bool allows(const std::string& channel, const lang::Expr& subject) const;
  std::vector<std::string> channels() const;

  bool operator==(const PolicyState& other) const;
  bool operator<(const PolicyState& other) const;

 private:
  // channel -> canonical text -> expression; empty inner maps are erased.
  std::map<std::string, std::map<std::string, lang::ExprPtr>> allowed_;
};

using PolicyStatePtr = std::shared_ptr<const PolicyState>;

}  // namespace flowcheck
