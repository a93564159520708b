#include <fstream>

#include "flowcheck/policy.hpp"

namespace flowcheck::policy {

lang::ProgramPoint parse_program_point(const std::string& text) {
  auto at = text.find('@');
  if (at == std::string::npos || at == 0 || at + 1 == text.size())
    throw std::invalid_argument("program point '" + text + "' is not of the form channel@point");
  return {text.substr(0, at), text.substr(at + 1)};
}

PolicyApprox PolicyFile::approximation(const lang::Command& c) const {
  PolicyApprox approx = approximate_policy(c, spec);
  for (const auto& [pp, s] : approx_override) approx[pp] = s;
  return approx;
}

PolicyFile parse_policy_json(const nlohmann::json& j) {
  PolicyFile file;
  if (j.contains("initial")) {
    for (const auto& [chan, exprs] : j.at("initial").items())
      for (const auto& text : exprs) file.spec.initial.allow(chan, lang::parse_expression(text.get<std::string>()));
  }
  if (j.contains("universe")) {
    for (const auto& [name, vals] : j.at("universe").items())
      file.universe[name] = vals.get<std::vector<lang::Value>>();
  }
  if (j.contains("approx_override")) {
    for (const auto& [point, exprs] : j.at("approx_override").items())
      file.approx_override[parse_program_point(point)] = EquivSpec::parse(exprs.get<std::vector<std::string>>());
  }
  return file;
}

PolicyFile load_policy_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open policy file " + path.string());
  return parse_policy_json(nlohmann::json::parse(in));
}

}  // namespace flowcheck::policy

namespace flowcheck::policy {

std::set<std::string> policy_variables(const DynamicPolicySpec& spec, const PolicyApprox& approx) {
  std::set<std::string> vars;
  for (const auto& chan : spec.initial.channels())
    for (const auto& e : spec.initial.allowed(chan)) vars.merge(lang::fv(*e));
  for (const auto& [pp, s] : approx)
    for (const auto& e : s.expressions()) vars.merge(lang::fv(*e));
  return vars;
}

StoreUniverse universe_for(const lang::Command& c, const DynamicPolicySpec& spec, const PolicyApprox& approx,
                           const std::map<std::string, std::vector<lang::Value>>& overrides,
                           const std::vector<lang::Value>& defaults) {
  std::set<std::string> vars = lang::program_variables(c);
  vars.merge(policy_variables(spec, approx));
  for (const auto& [name, values] : overrides) vars.insert(name);
  std::map<std::string, std::vector<lang::Value>> domains;
  for (const auto& v : vars) {
    auto it = overrides.find(v);
    domains[v] = it == overrides.end() ? defaults : it->second;
  }
  return StoreUniverse(std::move(domains));
}

}  // namespace flowcheck::policy
