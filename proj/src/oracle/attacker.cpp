#include <deque>
#include <fstream>
#include <stdexcept>

#include "flowcheck/oracle.hpp"

namespace flowcheck::oracle {

Attacker::Attacker(std::vector<std::string> states, std::size_t start,
                   std::vector<std::map<Value, std::size_t>> delta, std::vector<std::optional<std::size_t>> defaults)
    : states_(std::move(states)), start_(start), delta_(std::move(delta)), defaults_(std::move(defaults)) {
  if (states_.empty()) throw std::invalid_argument("attacker needs at least one state");
  if (start_ >= states_.size()) throw std::invalid_argument("attacker start state out of range");
  delta_.resize(states_.size());
  defaults_.resize(states_.size());
  for (std::size_t s = 0; s < states_.size(); ++s) {
    for (const auto& [v, to] : delta_[s])
      if (to >= states_.size()) throw std::invalid_argument("attacker transition target out of range");
    if (defaults_[s] && *defaults_[s] >= states_.size())
      throw std::invalid_argument("attacker default target out of range");
  }
}

Attacker Attacker::from_table(const std::vector<std::vector<std::size_t>>& table, const std::vector<Value>& alphabet) {
  std::vector<std::string> names;
  std::vector<std::map<Value, std::size_t>> delta(table.size());
  for (std::size_t s = 0; s < table.size(); ++s) {
    names.push_back("q" + std::to_string(s));
    for (std::size_t k = 0; k < alphabet.size(); ++k) delta[s][alphabet[k]] = table[s].at(k);
  }
  return Attacker(std::move(names), 0, std::move(delta));
}

std::size_t Attacker::next(std::size_t s, Value v) const {
  auto it = delta_[s].find(v);
  if (it != delta_[s].end()) return it->second;
  return defaults_[s].value_or(s);
}

std::size_t Attacker::run(const Trace& t) const {
  std::size_t s = start_;
  for (Value v : t) s = next(s, v);
  return s;
}

std::vector<StateId> Attacker::states_along(const Trace& t) const {
  std::vector<StateId> out;
  out.reserve(t.size() + 1);
  std::size_t s = start_;
  out.push_back(static_cast<StateId>(s));
  for (Value v : t) {
    s = next(s, v);
    out.push_back(static_cast<StateId>(s));
  }
  return out;
}

nlohmann::json Attacker::to_json() const {
  nlohmann::json delta = nlohmann::json::object();
  for (std::size_t s = 0; s < states_.size(); ++s) {
    nlohmann::json edges = nlohmann::json::object();
    for (const auto& [v, to] : delta_[s]) edges[std::to_string(v)] = states_[to];
    if (defaults_[s]) edges["default"] = states_[*defaults_[s]];
    delta[states_[s]] = edges;
  }
  return {{"states", states_}, {"start", states_[start_]}, {"delta", delta}};
}

std::string attacker_state(const Attacker& a, const Trace& t) { return a.state_name(a.run(t)); }

Attacker parse_attacker_json(const nlohmann::json& j) {
  auto states = j.at("states").get<std::vector<std::string>>();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < states.size(); ++i)
    if (!index.emplace(states[i], i).second) throw std::invalid_argument("duplicate attacker state " + states[i]);
  auto lookup = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw std::invalid_argument("unknown attacker state " + name);
    return it->second;
  };
  std::vector<std::map<Value, std::size_t>> delta(states.size());
  std::vector<std::optional<std::size_t>> defaults(states.size());
  if (j.contains("delta")) {
    for (const auto& [from, edges] : j.at("delta").items()) {
      std::size_t s = lookup(from);
      for (const auto& [label, to] : edges.items()) {
        std::size_t target = lookup(to.get<std::string>());
        if (label == "default") {
          defaults[s] = target;
          continue;
        }
        std::size_t used = 0;
        Value v = std::stoll(label, &used);
        if (used != label.size()) throw std::invalid_argument("bad attacker edge label " + label);
        delta[s][v] = target;
      }
    }
  }
  Attacker a(states, lookup(j.at("start").get<std::string>()), std::move(delta), std::move(defaults));
  if (j.contains("name")) a.set_name(j.at("name").get<std::string>());
  return a;
}

Attacker load_attacker_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open attacker file " + path.string());
  Attacker a = parse_attacker_json(nlohmann::json::parse(in));
  if (a.name() == "attacker") a.set_name(path.stem().string());
  return a;
}

std::vector<StateId> PerfectRecall::states_along(const Trace& t) const {
  std::lock_guard lock(mu_);
  std::vector<StateId> out{0};
  StateId node = 0;
  for (Value v : t) {
    auto [it, fresh] = trie_.emplace(std::pair{node, v}, static_cast<StateId>(trie_.size() + 1));
    node = it->second;
    out.push_back(node);
  }
  return out;
}

namespace {

// True when numbering states in BFS discovery order from 0 (edges in symbol
// order) reproduces the table and reaches every state.
bool bfs_canonical(const std::vector<std::vector<std::size_t>>& table) {
  std::size_t n = table.size();
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  std::size_t next_label = 1;
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    for (std::size_t to : table[s]) {
      if (seen[to]) continue;
      if (to != next_label) return false;
      seen[to] = true;
      ++next_label;
      queue.push_back(to);
    }
  }
  return next_label == n;
}

}  // namespace

std::vector<std::shared_ptr<const Attacker>> enumerate_attackers(std::size_t max_states,
                                                                 const std::vector<Value>& alphabet) {
  std::vector<std::shared_ptr<const Attacker>> out;
  std::size_t k = alphabet.size();
  for (std::size_t n = 1; n <= max_states; ++n) {
    std::size_t cells = n * k;
    std::vector<std::size_t> digits(cells, 0);
    while (true) {
      std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(k));
      for (std::size_t c = 0; c < cells; ++c) table[c / k][c % k] = digits[c];
      if (bfs_canonical(table)) {
        auto a = std::make_shared<Attacker>(Attacker::from_table(table, alphabet));
        a->set_name("dfa" + std::to_string(n) + "#" + std::to_string(out.size()));
        out.push_back(std::move(a));
      }
      std::size_t c = 0;
      while (c < cells && ++digits[c] == n) digits[c++] = 0;
      if (c == cells) break;
    }
  }
  return out;
}

}  // namespace flowcheck::oracle
