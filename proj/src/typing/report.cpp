#include "flowcheck/typing_report.hpp"

namespace flowcheck::typing {

using nlohmann::json;

json typing_report(const DepEnv& g, bool restricted) {
  json out = {{"variables", json::object()}, {"channels", json::object()}, {"points", json::object()}};
  for (const auto& x : g.universe()->vars()) {
    json deps = json::array();
    for (const auto& y : g.at(x)) {
      if (restricted && !y.is_variable()) continue;
      deps.push_back(y.to_string());
    }
    switch (x.kind) {
      case TypingVar::Kind::Pc:
        if (!restricted) out["pc"] = deps;
        break;
      case TypingVar::Kind::Variable: out["variables"][x.name] = deps; break;
      case TypingVar::Kind::Channel: out["channels"][x.name] = deps; break;
      case TypingVar::Kind::Point: out["points"][x.to_string()] = deps; break;
    }
  }
  return out;
}

json typing_to_json(const DepEnv& g) {
  json universe = json::array();
  json rows = json::object();
  for (const auto& x : g.universe()->vars()) {
    universe.push_back(x.to_string());
    json deps = json::array();
    for (const auto& y : g.at(x)) deps.push_back(y.to_string());
    rows[x.to_string()] = deps;
  }
  return {{"universe", universe}, {"rows", rows}};
}

DepEnv typing_from_json(const json& j) {
  std::set<TypingVar> vars;
  for (const auto& v : j.at("universe")) vars.insert(TypingVar::parse(v.get<std::string>()));
  DepEnv g(std::make_shared<const VarUniverse>(std::move(vars)));
  for (const auto& [key, deps] : j.at("rows").items()) {
    DepSet s;
    for (const auto& d : deps) s.insert(TypingVar::parse(d.get<std::string>()));
    g.set(TypingVar::parse(key), s);
  }
  return g;
}

}  // namespace flowcheck::typing
