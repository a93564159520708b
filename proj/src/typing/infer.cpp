#include "flowcheck/typing.hpp"

namespace flowcheck::typing {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

DepSet with_pc(const lang::Expr& e) {
  DepSet s{TypingVar::pc()};
  for (const auto& x : lang::fv(e)) s.insert(TypingVar::variable(x));
  return s;
}

class Inference {
 public:
  explicit Inference(std::shared_ptr<const VarUniverse> universe) : universe_(std::move(universe)) {}

  DepEnv type(const lang::Command& c) const {
    return std::visit(
        overloaded{
            [&](const lang::Skip&) { return id(); },
            [&](const lang::Directive&) { return id(); },
            [&](const lang::Assign& a) { return id().with(TypingVar::variable(a.target), with_pc(*a.rhs)); },
            [&](const lang::Seq& s) { return compose(type(*s.second), type(*s.first)); },
            [&](const lang::If& i) {
              DepEnv guard = id().with(TypingVar::pc(), with_pc(*i.cond));
              DepEnv then_env = compose(type(*i.then_branch), guard);
              DepEnv else_env = compose(type(*i.else_branch), guard);
              return env_union(then_env, else_env).with(TypingVar::pc(), {TypingVar::pc()});
            },
            [&](const lang::While& w) {
              DepEnv guard = id().with(TypingVar::pc(), with_pc(*w.cond));
              return fixpoint(compose(type(*w.body), guard)).with(TypingVar::pc(), {TypingVar::pc()});
            },
            [&](const lang::Out& o) {
              auto pc = TypingVar::pc();
              auto chan = TypingVar::channel(o.channel);
              auto point = TypingVar::channel_point(o.channel, o.point);
              DepSet point_deps = with_pc(*o.rhs);
              point_deps.insert(chan);
              point_deps.insert(point);
              return id().with(point, point_deps).with(chan, {pc, chan});
            },
        },
        c.node);
  }

 private:
  DepEnv id() const { return gamma_id(universe_); }

  std::shared_ptr<const VarUniverse> universe_;
};

}  // namespace

DepEnv infer(const lang::Command& c) { return infer(c, VarUniverse::for_program(c)); }

DepEnv infer(const lang::Command& c, const std::shared_ptr<const VarUniverse>& universe) {
  return Inference(universe).type(c);
}

}  // namespace flowcheck::typing
