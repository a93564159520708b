#include <sstream>

#include "flowcheck/checker.hpp"

namespace flowcheck::checker {

namespace {

void flatten(const lang::CommandPtr& c, std::vector<lang::CommandPtr>& out) {
  if (const auto* s = std::get_if<lang::Seq>(&c->node)) {
    flatten(s->first, out);
    flatten(s->second, out);
  } else {
    out.push_back(c);
  }
}

}  // namespace

Explanation explain(const lang::Command& c, const typing::TypingVar& target) {
  auto universe = typing::VarUniverse::for_program(c);
  if (!universe->index_of(target)) throw std::invalid_argument("'" + target.to_string() + "' does not occur in the program");

  std::vector<lang::CommandPtr> stmts;
  flatten(std::make_shared<const lang::Command>(c), stmts);

  // prefix[j] types the first j top-level statements.
  std::vector<typing::DepEnv> step_env, prefix{typing::gamma_id(universe)};
  for (const auto& s : stmts) {
    step_env.push_back(typing::infer(*s, universe));
    prefix.push_back(typing::compose(step_env.back(), prefix.back()));
  }

  Explanation out{target, {}};
  for (const auto& y : prefix.back().at(target)) {
    std::vector<ProvenanceStep> chain;
    typing::TypingVar cur = target;
    for (std::size_t j = stmts.size(); j-- > 0;) {
      auto candidates = step_env[j].at(cur);
      typing::TypingVar chosen = cur;
      if (!(candidates.contains(cur) && prefix[j].depends(cur, y))) {
        for (const auto& x : candidates) {
          if (prefix[j].depends(x, y)) {
            chosen = x;
            break;
          }
        }
      }
      if (chosen != cur) chain.push_back({lang::summary(*stmts[j]), stmts[j]->loc, cur, chosen});
      cur = chosen;
    }
    out.members.emplace_back(y, std::move(chain));
  }
  return out;
}

std::string Explanation::to_text() const {
  std::ostringstream os;
  for (const auto& [y, chain] : members) {
    os << target.to_string() << " depends on " << y.to_string();
    if (chain.empty()) os << " (initially)";
    os << "\n";
    for (const auto& step : chain)
      os << "  line " << step.loc.line << ": " << step.statement << "  [" << step.from.to_string() << " <- "
         << step.to.to_string() << "]\n";
  }
  return os.str();
}

nlohmann::json Explanation::to_json() const {
  nlohmann::json deps = nlohmann::json::array();
  for (const auto& [y, chain] : members) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& step : chain)
      steps.push_back({{"statement", step.statement},
                       {"line", step.loc.line},
                       {"from", step.from.to_string()},
                       {"to", step.to.to_string()}});
    deps.push_back({{"dependency", y.to_string()}, {"chain", steps}});
  }
  return {{"target", target.to_string()}, {"dependencies", deps}};
}

}  // namespace flowcheck::checker
