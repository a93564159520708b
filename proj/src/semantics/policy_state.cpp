#include "flowcheck/policy_state.hpp"

namespace flowcheck {

void PolicyState::allow(const std::string& channel, lang::ExprPtr subject) {
  allowed_[channel].emplace(lang::to_source(*subject), std::move(subject));
}

void PolicyState::revoke(const std::string& channel, const lang::Expr& subject) {
  auto it = allowed_.find(channel);
  if (it == allowed_.end()) return;
  it->second.erase(lang::to_source(subject));
  if (it->second.empty()) allowed_.erase(it);
}

void PolicyState::apply(const lang::Directive& d) {
  if (d.action == lang::DirectiveAction::Allow) {
    allow(d.channel, d.subject);
  } else {
    revoke(d.channel, *d.subject);
  }
}

std::vector<lang::ExprPtr> PolicyState::allowed(const std::string& channel) const {
  std::vector<lang::ExprPtr> out;
  if (auto it = allowed_.find(channel); it != allowed_.end()) {
    for (const auto& [text, e] : it->second) out.push_back(e);
  }
  return out;
}

bool PolicyState::allows(const std::string& channel, const lang::Expr& subject) const {
  auto it = allowed_.find(channel);
  return it != allowed_.end() && it->second.contains(lang::to_source(subject));
}

std::vector<std::string> PolicyState::channels() const {
  std::vector<std::string> out;
  for (const auto& [chan, exprs] : allowed_) out.push_back(chan);
  return out;
}

namespace {
// Compare on keys only; the expressions are determined by their canonical text.
auto keys(const std::map<std::string, std::map<std::string, lang::ExprPtr>>& m) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [chan, exprs] : m)
    for (const auto& [text, e] : exprs) out.emplace_back(chan, text);
  return out;
}
}  // namespace

bool PolicyState::operator==(const PolicyState& other) const { return keys(allowed_) == keys(other.allowed_); }

bool PolicyState::operator<(const PolicyState& other) const { return keys(allowed_) < keys(other.allowed_); }

}  // namespace flowcheck
