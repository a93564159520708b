#include <doctest.h>

#include <random>

#include "flowcheck/lang.hpp"
#include "random_program.hpp"

using namespace flowcheck;
using namespace flowcheck::lang;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::vector<CommandPtr> top_level(const CommandPtr& c) {
  std::vector<CommandPtr> out;
  CommandPtr cur = c;
  while (const auto* s = std::get_if<Seq>(&cur->node)) {
    out.push_back(s->first);
    cur = s->second;
  }
  out.push_back(cur);
  return out;
}

// Reference free-variable function, written independently of the library.
std::set<std::string> reference_fv(const Expr& e) {
  return std::visit(overloaded{
                        [](const Literal&) { return std::set<std::string>{}; },
                        [](const Variable& v) { return std::set<std::string>{v.name}; },
                        [](const Unary& u) { return reference_fv(*u.operand); },
                        [](const Binary& b) {
                          auto l = reference_fv(*b.lhs);
                          auto r = reference_fv(*b.rhs);
                          l.insert(r.begin(), r.end());
                          return l;
                        },
                    },
                    e.node);
}

// Expressions with every operator, negative literals and deep nesting.
ExprPtr wild_expr(std::mt19937_64& rng, int depth) {
  auto roll = std::uniform_int_distribution<int>(0, 9)(rng);
  if (depth == 0 || roll < 3) {
    if (roll % 2) return var(std::string(1, "xyzw"[rng() % 4]));
    return literal(static_cast<Value>(rng() % 21) - 10);
  }
  if (roll < 5) return unary(rng() % 2 ? UnaryOp::Neg : UnaryOp::Not, wild_expr(rng, depth - 1));
  auto op = static_cast<BinaryOp>(rng() % 11);
  return binary(op, wild_expr(rng, depth - 1), wild_expr(rng, depth - 1));
}

}  // namespace

TEST_SUITE("lang") {
  TEST_CASE("parse skip") {
    auto c = parse_program("skip");
    CHECK(is_skip(*c));
  }

  TEST_CASE("parse two outputs with explicit points") {
    auto c = parse_program("out x on a @ p1; out 2 on a @ p2");
    auto expected = seq(out(var("x"), "a", "p1"), out(literal(2), "a", "p2"));
    CHECK(*c == *expected);
  }

  TEST_CASE("a reassignment program has four top-level statements") {
    auto c = parse_program("x := z + 1; z := x; if (z > 0) { y := 1 }; x := 0");
    auto stmts = top_level(c);
    REQUIRE(stmts.size() == 4);
    CHECK(*stmts[0] == *assign("x", binary(BinaryOp::Add, var("z"), literal(1))));
    CHECK(*stmts[1] == *assign("z", var("x")));
    CHECK(*stmts[2] == *if_(binary(BinaryOp::Gt, var("z"), literal(0)), assign("y", literal(1)), skip()));
    CHECK(*stmts[3] == *assign("x", literal(0)));
  }

  TEST_CASE("free variables") {
    CHECK(fv(*literal(5)).empty());
    CHECK(fv(*var("x")) == std::set<std::string>{"x"});
    CHECK(fv(*parse_expression("z + 1")) == std::set<std::string>{"z"});
    CHECK(fv(*parse_expression("x * (y - -3) == !z")) == std::set<std::string>{"x", "y", "z"});
  }

  TEST_CASE("fv agrees with a structural reference and is monotone under subexpressions") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
      auto e = wild_expr(rng, 4);
      auto vars = fv(*e);
      CHECK(vars == reference_fv(*e));
      if (const auto* b = std::get_if<Binary>(&e->node)) {
        auto l = fv(*b->lhs);
        CHECK(std::includes(vars.begin(), vars.end(), l.begin(), l.end()));
      }
    }
  }

  TEST_CASE("auto points are fresh, distinct and skip explicit names") {
    auto c = parse_program("out 1 on a; out 2 on b @ p2; out 3 on a; out 4 on b");
    auto pts = output_points(*c);
    REQUIRE(pts.size() == 4);
    CHECK(pts[0] == ProgramPoint{"a", "p1"});
    CHECK(pts[1] == ProgramPoint{"b", "p2"});
    CHECK(pts[2] == ProgramPoint{"a", "p3"});
    CHECK(pts[3] == ProgramPoint{"b", "p4"});
    CHECK(*parse_program("out 1 on a; out 2 on b @ p2; out 3 on a; out 4 on b") == *c);
  }

  TEST_CASE("a shared point on one channel is allowed") {
    auto c = parse_program("out 1 on a @ q; out 2 on a @ q");
    CHECK(output_points(*c).size() == 1);
  }

  TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_program("out 1 on a @ q; out 2 on b @ q"), ParseError);
    CHECK_THROWS_AS(parse_program("x := "), ParseError);
    CHECK_THROWS_AS(parse_program("pc := 1"), ParseError);
    CHECK_THROWS_AS(parse_program("x := 1 y := 2"), ParseError);
    CHECK_THROWS_AS(parse_program("x := 99999999999999999999"), ParseError);
    try {
      parse_program("skip;\n  x := $");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 8);
    }
  }

  TEST_CASE("comments, optional else, directives and booleans") {
    auto c = parse_program(
        "// leading comment\n"
        "allow x + 1 -> a; // trailing\n"
        "if (true) { out x on a } \n"
        "while (x < 3) { x := x + 1 }\n"
        "revoke x + 1 -> a");
    auto stmts = top_level(c);
    REQUIRE(stmts.size() == 4);
    CHECK(std::holds_alternative<Directive>(stmts[0]->node));
    const auto& i = std::get<If>(stmts[1]->node);
    CHECK(*i.cond == *literal(1));
    CHECK(is_skip(*i.else_branch));
    CHECK(std::get<Directive>(stmts[3]->node).action == DirectiveAction::Revoke);
  }

  TEST_CASE("extreme literals") {
    auto e = parse_expression("-9223372036854775808");
    CHECK(*e == *literal(std::numeric_limits<Value>::min()));
    CHECK_THROWS_AS(parse_expression("9223372036854775808"), ParseError);
    CHECK(*parse_expression(to_source(*e)) == *e);
  }

  TEST_CASE("expression round trip") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
      auto e = wild_expr(rng, 5);
      auto text = to_source(*e);
      INFO(text);
      CHECK(*parse_expression(text) == *e);
    }
  }

  TEST_CASE("program round trip on generated programs") {
    testsupport::ProgramGenerator gen(3);
    for (int i = 0; i < 500; ++i) {
      auto c = gen.program();
      auto text = to_source(*c);
      INFO(text);
      auto back = parse_program(text);
      CHECK(*back == *c);
      CHECK(to_source(*back) == text);
    }
  }

  TEST_CASE("statement count and summaries") {
    auto c = parse_program("x := 1; if (x) { y := 2; out y on a } else { skip }; while (x) { x := 0 }");
    CHECK(statement_count(*c) == 7);
    CHECK(summary(*top_level(c)[1]) == "if (x) { ... }");
    CHECK(channels(*c) == std::set<std::string>{"a"});
    CHECK(program_variables(*c) == std::set<std::string>{"x", "y"});
  }
}
