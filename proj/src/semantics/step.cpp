#include "flowcheck/semantics.hpp"

namespace flowcheck::semantics {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

bool Config::same_state(const Config& other) const {
  return store == other.store && *policy == *other.policy && *command == *other.command;
}

Config initial_config(lang::CommandPtr program, Store store, PolicyState policy) {
  return Config{std::move(program), std::move(store), std::make_shared<const PolicyState>(std::move(policy))};
}

std::optional<std::pair<Config, Label>> step(const Config& cfg) {
  using Result = std::optional<std::pair<Config, Label>>;
  const lang::Command& c = *cfg.command;
  return std::visit(
      overloaded{
          [](const lang::Skip&) -> Result { return std::nullopt; },
          [&](const lang::Seq& s) -> Result {
            if (lang::is_skip(*s.first)) return std::pair{Config{s.second, cfg.store, cfg.policy}, Label{}};
            auto inner = step(Config{s.first, cfg.store, cfg.policy});
            auto& [next, label] = *inner;
            next.command = lang::seq(next.command, s.second, c.loc);
            return inner;
          },
          [&](const lang::Assign& a) -> Result {
            return std::pair{Config{lang::skip(c.loc), cfg.store.with(a.target, eval(*a.rhs, cfg.store)), cfg.policy},
                             Label{}};
          },
          [&](const lang::If& i) -> Result {
            const auto& branch = eval(*i.cond, cfg.store) != 0 ? i.then_branch : i.else_branch;
            return std::pair{Config{branch, cfg.store, cfg.policy}, Label{}};
          },
          [&](const lang::While& w) -> Result {
            auto unfolded = lang::if_(w.cond, lang::seq(w.body, cfg.command, c.loc), lang::skip(c.loc), c.loc);
            return std::pair{Config{std::move(unfolded), cfg.store, cfg.policy}, Label{}};
          },
          [&](const lang::Out& o) -> Result {
            Output out{o.channel, eval(*o.rhs, cfg.store), o.point};
            return std::pair{Config{lang::skip(c.loc), cfg.store, cfg.policy}, Label{std::move(out)}};
          },
          [&](const lang::Directive& d) -> Result {
            auto next_policy = std::make_shared<PolicyState>(*cfg.policy);
            next_policy->apply(d);
            return std::pair{Config{lang::skip(c.loc), cfg.store, std::move(next_policy)}, Label{}};
          },
      },
      c.node);
}

RunResult run(const Config& cfg, std::size_t fuel) {
  RunResult result{{}, cfg, false};
  for (std::size_t i = 0; i < fuel; ++i) {
    auto next = step(result.final);
    if (!next) return result;
    result.final = std::move(next->first);
    result.labels.push_back(std::move(next->second));
  }
  result.exhausted = !result.final.terminal();
  return result;
}

}  // namespace flowcheck::semantics
