#include <doctest.h>

#include "flowcheck/semantics.hpp"
#include "random_program.hpp"

using namespace flowcheck;
using namespace flowcheck::lang;
using namespace flowcheck::semantics;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Big-step reference interpreter, independent of the small-step machine.
struct Reference {
  std::map<std::string, Value> store;
  std::vector<Output> outputs;
  int budget = 2000;  // loop iterations before giving up

  static Value wrap(std::uint64_t v) { return static_cast<Value>(v); }

  Value eval(const Expr& e) const {
    return std::visit(overloaded{
                          [](const Literal& l) { return l.value; },
                          [&](const Variable& v) { return store.at(v.name); },
                          [&](const Unary& u) {
                            Value x = eval(*u.operand);
                            return u.op == UnaryOp::Neg ? wrap(0 - static_cast<std::uint64_t>(x)) : Value(x == 0);
                          },
                          [&](const Binary& b) {
                            Value l = eval(*b.lhs), r = eval(*b.rhs);
                            auto ul = static_cast<std::uint64_t>(l), ur = static_cast<std::uint64_t>(r);
                            switch (b.op) {
                              case BinaryOp::Add: return wrap(ul + ur);
                              case BinaryOp::Sub: return wrap(ul - ur);
                              case BinaryOp::Mul: return wrap(ul * ur);
                              case BinaryOp::Eq: return Value(l == r);
                              case BinaryOp::Ne: return Value(l != r);
                              case BinaryOp::Lt: return Value(l < r);
                              case BinaryOp::Le: return Value(l <= r);
                              case BinaryOp::Gt: return Value(l > r);
                              case BinaryOp::Ge: return Value(l >= r);
                              case BinaryOp::And: return Value(l != 0 && r != 0);
                              case BinaryOp::Or: return Value(l != 0 || r != 0);
                            }
                            return Value(0);
                          },
                      },
                      e.node);
  }

  bool exec(const Command& c) {
    return std::visit(overloaded{
                          [](const Skip&) { return true; },
                          [](const Directive&) { return true; },
                          [&](const Seq& s) { return exec(*s.first) && exec(*s.second); },
                          [&](const Assign& a) {
                            store[a.target] = eval(*a.rhs);
                            return true;
                          },
                          [&](const If& i) { return exec(eval(*i.cond) != 0 ? *i.then_branch : *i.else_branch); },
                          [&](const While& w) {
                            while (eval(*w.cond) != 0) {
                              if (--budget < 0 || !exec(*w.body)) return false;
                            }
                            return true;
                          },
                          [&](const Out& o) {
                            outputs.push_back({o.channel, eval(*o.rhs), o.point});
                            return true;
                          },
                      },
                      c.node);
  }
};

CommandPtr erase_directives(const CommandPtr& c) {
  return std::visit(overloaded{
                        [&](const Directive&) { return skip(); },
                        [&](const Seq& s) { return seq(erase_directives(s.first), erase_directives(s.second)); },
                        [&](const If& i) {
                          return if_(i.cond, erase_directives(i.then_branch), erase_directives(i.else_branch));
                        },
                        [&](const While& w) { return while_(w.cond, erase_directives(w.body)); },
                        [&](const auto&) { return c; },
                    },
                    c->node);
}

Store store_of(std::map<std::string, Value> m) { return Store(std::move(m)); }

}  // namespace

TEST_SUITE("semantics") {
  TEST_CASE("step: skip; c reduces to c silently") {
    auto c = assign("x", literal(1));
    auto cfg = initial_config(seq(skip(), c), store_of({{"x", 0}}));
    auto next = step(cfg);
    REQUIRE(next);
    CHECK(*next->first.command == *c);
    CHECK(next->second.silent());
    CHECK(next->first.store == cfg.store);
  }

  TEST_CASE("step: output of a literal") {
    auto cfg = initial_config(out(literal(2), "a", "p"), store_of({}));
    auto next = step(cfg);
    REQUIRE(next);
    CHECK(is_skip(*next->first.command));
    REQUIRE(next->second.output);
    CHECK(*next->second.output == Output{"a", 2, "p"});
  }

  TEST_CASE("step: while unfolds into a conditional") {
    auto loop = while_(var("x"), skip());
    auto next = step(initial_config(loop, store_of({{"x", 1}})));
    REQUIRE(next);
    auto expected = if_(var("x"), seq(skip(), loop), skip());
    CHECK(*next->first.command == *expected);
    CHECK(next->second.silent());
  }

  TEST_CASE("step: branch rule takes then on any nonzero value") {
    auto c = if_(var("x"), assign("y", literal(1)), assign("y", literal(2)));
    for (Value v : {Value(-3), Value(0), Value(7)}) {
      auto next = step(initial_config(c, store_of({{"x", v}, {"y", 0}})));
      REQUIRE(next);
      CHECK(*next->first.command == *(v != 0 ? assign("y", literal(1)) : assign("y", literal(2))));
    }
  }

  TEST_CASE("step: terminal only on bare skip") {
    CHECK_FALSE(step(initial_config(skip(), store_of({}))));
    CHECK(step(initial_config(seq(skip(), skip()), store_of({}))));
  }

  TEST_CASE("run: skip, straight-line code and divergence") {
    auto r0 = run(initial_config(skip(), store_of({})), 5);
    CHECK(r0.labels.empty());
    CHECK_FALSE(r0.exhausted);

    auto reassign = parse_program("x := z + 1; z := x; if (z > 0) { y := 1 }; x := 0");
    auto r = run(initial_config(reassign, store_of({{"x", 0}, {"y", 0}, {"z", 5}})), 20);
    CHECK_FALSE(r.exhausted);
    CHECK(project(r.labels, "a").empty());
    Reference ref;
    ref.store = {{"x", 0}, {"y", 0}, {"z", 5}};
    REQUIRE(ref.exec(*reassign));
    CHECK(r.final.store.values() == ref.store);
    CHECK(r.final.store == store_of({{"x", 0}, {"y", 1}, {"z", 6}}));

    auto spin = run(initial_config(parse_program("while (1) { skip }"), store_of({})), 10);
    CHECK(spin.labels.size() == 10);
    CHECK(spin.exhausted);
    for (const auto& l : spin.labels) CHECK(l.silent());
  }

  TEST_CASE("project keeps only the channel's values") {
    std::vector<Label> labels{{Output{"a", 1, "p"}}, {}, {Output{"b", 9, "q"}}, {Output{"a", 2, "r"}}};
    CHECK(project(labels, "a") == Trace{1, 2});
    CHECK(project({}, "a").empty());
  }

  TEST_CASE("intro program A from x=7, y=1") {
    auto c = parse_program(
        "allow x -> a; allow y -> a; out x on a; if (y > 0) { out 1 on a; revoke x -> a }; out 2 on a; out 3 on a");
    auto r = run(initial_config(c, store_of({{"x", 7}, {"y", 1}})), 100);
    CHECK(project(r.labels, "a") == Trace{7, 1, 2, 3});
  }

  TEST_CASE("reachable traces") {
    auto t0 = reachable_traces(skip(), store_of({}), "a", 10);
    CHECK(t0 == std::set<ReachableTrace>{{{}, false}});

    auto t1 = reachable_traces(parse_program("out 1 on a; out 2 on a"), store_of({}), "a", 10);
    CHECK(t1 == std::set<ReachableTrace>{{{}, false}, {{1}, false}, {{1, 2}, false}});

    auto ex3a = parse_program("out 1 on a; while (x == 8) { skip }; out 2 on a");
    auto t2 = reachable_traces(ex3a, store_of({{"x", 8}}), "a", 50);
    CHECK(t2 == std::set<ReachableTrace>{{{}, false}, {{1}, true}});
  }

  TEST_CASE("execute detects silent and productive cycles") {
    auto ex4 = parse_program("out 1 on a; out 1 on a; while (x) { skip }; out 1 on a; out 2 on a");
    auto stuck = execute(initial_config(ex4, store_of({{"x", 1}})), 10000);
    CHECK(stuck.outcome == RunOutcome::Cycles);
    CHECK(stuck.cycle_channels.empty());
    CHECK(stuck.complete_on("a"));
    CHECK(stuck.events.size() == 2);
    CHECK(stuck.steps < 100);

    auto done = execute(initial_config(ex4, store_of({{"x", 0}})), 10000);
    CHECK(done.outcome == RunOutcome::Terminated);
    CHECK(done.events.size() == 4);

    auto chatty = execute(initial_config(parse_program("while (1) { out x on a }"), store_of({{"x", 3}})), 200);
    CHECK(chatty.outcome == RunOutcome::Cycles);
    CHECK(chatty.cycle_channels == std::set<std::string>{"a"});
    CHECK_FALSE(chatty.complete_on("a"));
    CHECK(chatty.cycle_steps > 0);

    auto counter = execute(initial_config(parse_program("while (1) { x := x + 1 }"), store_of({{"x", 0}})), 300);
    CHECK(counter.outcome == RunOutcome::Truncated);
  }

  TEST_CASE("output events record the execution point and active policy") {
    auto c = parse_program("allow x -> a; out x on a; revoke x -> a; out 2 on a");
    auto ex = execute(initial_config(c, store_of({{"x", 1}})), 100);
    REQUIRE(ex.events.size() == 2);
    CHECK(ex.events[0].policy->allows("a", *var("x")));
    CHECK_FALSE(ex.events[1].policy->allows("a", *var("x")));
    auto before = run(initial_config(c, store_of({{"x", 1}})), ex.events[1].step_index);
    CHECK(before.labels.size() == ex.events[1].step_index);
    auto fire = step(before.final);
    REQUIRE(fire);
    CHECK(fire->second.output->value == 2);
  }

  TEST_CASE("store universes enumerate lexicographically") {
    StoreUniverse u({{"x", {1, 0}}, {"y", {0, 2, 2}}});
    REQUIRE(u.size() == 4);
    CHECK(u[0] == store_of({{"x", 0}, {"y", 0}}));
    CHECK(u[1] == store_of({{"x", 0}, {"y", 2}}));
    CHECK(u[3] == store_of({{"x", 1}, {"y", 2}}));
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(u.index_of(u[i]) == i);
    CHECK_FALSE(u.index_of(store_of({{"x", 5}, {"y", 0}})));
    CHECK_THROWS(Store::for_program(*parse_program("x := y"), {{"x", 0}}));
    CHECK_THROWS(store_of({}).at("x"));
  }

  TEST_CASE("generated programs: small steps agree with the reference interpreter") {
    testsupport::ProgramGenerator gen(21);
    int compared = 0;
    for (int i = 0; i < 300; ++i) {
      auto c = gen.program();
      auto universe = StoreUniverse::for_program(*c);
      for (const auto& s : universe.stores()) {
        Reference ref;
        ref.store = s.values();
        bool finished = ref.exec(*c);
        auto r = run(initial_config(c, s), 5000);
        if (!finished || r.exhausted) continue;
        ++compared;
        CHECK(r.final.store.values() == ref.store);
        std::vector<Output> outs;
        for (const auto& l : r.labels)
          if (l.output) outs.push_back(*l.output);
        CHECK(outs == ref.outputs);
      }
    }
    CHECK(compared > 1000);
  }

  TEST_CASE("generated programs: determinism, silent directives, prefix closure, store kept on output") {
    testsupport::ProgramGenerator gen(22);
    for (int i = 0; i < 150; ++i) {
      auto c = gen.program();
      auto plain = erase_directives(c);
      auto universe = StoreUniverse::for_program(*c);
      for (const auto& s : universe.stores()) {
        auto cfg = initial_config(c, s);
        for (int k = 0; k < 200; ++k) {
          auto a = step(cfg);
          auto b = step(cfg);
          REQUIRE(a.has_value() == b.has_value());
          if (!a) break;
          CHECK(a->first.same_state(b->first));
          CHECK(a->second == b->second);
          if (a->second.output) CHECK(a->first.store == cfg.store);
          cfg = a->first;
        }

        auto with = run(initial_config(c, s), 400);
        auto without = run(initial_config(plain, s), 400);
        // Erasing a directive leaves a skip, which costs a step; compare outputs only.
        auto outs = [](const RunResult& r) {
          std::vector<Output> o;
          for (const auto& l : r.labels)
            if (l.output) o.push_back(*l.output);
          return o;
        };
        if (!with.exhausted && !without.exhausted) CHECK(outs(with) == outs(without));

        for (const auto& chan : {"a", "b"}) {
          auto traces = reachable_traces(c, s, chan, 300);
          for (const auto& t : traces) {
            for (std::size_t len = 0; len <= t.trace.size(); ++len) {
              Trace prefix(t.trace.begin(), t.trace.begin() + static_cast<std::ptrdiff_t>(len));
              bool found = traces.contains({prefix, false}) || traces.contains({prefix, true});
              CHECK(found);
            }
          }
        }
      }
    }
  }
}
