#include "flowcheck/lang.hpp"

#include <algorithm>

namespace flowcheck::lang {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void collect_fv(const Expr& e, std::set<std::string>& out) {
  std::visit(overloaded{
                 [](const Literal&) {},
                 [&](const Variable& v) { out.insert(v.name); },
                 [&](const Unary& u) { collect_fv(*u.operand, out); },
                 [&](const Binary& b) {
                   collect_fv(*b.lhs, out);
                   collect_fv(*b.rhs, out);
                 },
             },
             e.node);
}

template <class F>
void walk(const Command& c, F&& visit) {
  visit(c);
  std::visit(overloaded{
                 [&](const Seq& s) {
                   walk(*s.first, visit);
                   walk(*s.second, visit);
                 },
                 [&](const If& i) {
                   walk(*i.then_branch, visit);
                   walk(*i.else_branch, visit);
                 },
                 [&](const While& w) { walk(*w.body, visit); },
                 [](const auto&) {},
             },
             c.node);
}

}  // namespace

ExprPtr literal(Value v) { return std::make_shared<const Expr>(Expr{Literal{v}}); }
ExprPtr var(std::string name) { return std::make_shared<const Expr>(Expr{Variable{std::move(name)}}); }
ExprPtr unary(UnaryOp op, ExprPtr operand) {
  return std::make_shared<const Expr>(Expr{Unary{op, std::move(operand)}});
}
ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Expr>(Expr{Binary{op, std::move(lhs), std::move(rhs)}});
}

bool operator==(const Expr& a, const Expr& b) {
  if (&a == &b) return true;
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Literal& l) { return l.value == std::get<Literal>(b.node).value; },
          [&](const Variable& v) { return v.name == std::get<Variable>(b.node).name; },
          [&](const Unary& u) {
            const auto& o = std::get<Unary>(b.node);
            return u.op == o.op && *u.operand == *o.operand;
          },
          [&](const Binary& x) {
            const auto& o = std::get<Binary>(b.node);
            return x.op == o.op && *x.lhs == *o.lhs && *x.rhs == *o.rhs;
          },
      },
      a.node);
}

std::set<std::string> fv(const Expr& e) {
  std::set<std::string> out;
  collect_fv(e, out);
  return out;
}

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

CommandPtr skip(SourceLoc loc) { return std::make_shared<const Command>(Command{Skip{}, loc}); }
CommandPtr seq(CommandPtr first, CommandPtr second, SourceLoc loc) {
  return std::make_shared<const Command>(Command{Seq{std::move(first), std::move(second)}, loc});
}
CommandPtr seq(const std::vector<CommandPtr>& stmts) {
  if (stmts.empty()) return skip();
  CommandPtr acc = stmts.back();
  for (auto it = stmts.rbegin() + 1; it != stmts.rend(); ++it) acc = seq(*it, acc, (*it)->loc);
  return acc;
}
CommandPtr assign(std::string target, ExprPtr rhs, SourceLoc loc) {
  return std::make_shared<const Command>(Command{Assign{std::move(target), std::move(rhs)}, loc});
}
CommandPtr if_(ExprPtr cond, CommandPtr then_branch, CommandPtr else_branch, SourceLoc loc) {
  return std::make_shared<const Command>(
      Command{If{std::move(cond), std::move(then_branch), std::move(else_branch)}, loc});
}
CommandPtr while_(ExprPtr cond, CommandPtr body, SourceLoc loc) {
  return std::make_shared<const Command>(Command{While{std::move(cond), std::move(body)}, loc});
}
CommandPtr out(ExprPtr rhs, std::string channel, std::string point, SourceLoc loc) {
  return std::make_shared<const Command>(
      Command{Out{std::move(rhs), std::move(channel), std::move(point)}, loc});
}
CommandPtr directive(DirectiveAction action, ExprPtr subject, std::string channel, SourceLoc loc) {
  return std::make_shared<const Command>(
      Command{Directive{action, std::move(subject), std::move(channel)}, loc});
}

bool operator==(const Command& a, const Command& b) {
  if (&a == &b) return true;
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [](const Skip&) { return true; },
          [&](const Seq& s) {
            const auto& o = std::get<Seq>(b.node);
            return *s.first == *o.first && *s.second == *o.second;
          },
          [&](const Assign& x) {
            const auto& o = std::get<Assign>(b.node);
            return x.target == o.target && *x.rhs == *o.rhs;
          },
          [&](const If& i) {
            const auto& o = std::get<If>(b.node);
            return *i.cond == *o.cond && *i.then_branch == *o.then_branch &&
                   *i.else_branch == *o.else_branch;
          },
          [&](const While& w) {
            const auto& o = std::get<While>(b.node);
            return *w.cond == *o.cond && *w.body == *o.body;
          },
          [&](const Out& x) {
            const auto& o = std::get<Out>(b.node);
            return x.channel == o.channel && x.point == o.point && *x.rhs == *o.rhs;
          },
          [&](const Directive& d) {
            const auto& o = std::get<Directive>(b.node);
            return d.action == o.action && d.channel == o.channel && *d.subject == *o.subject;
          },
      },
      a.node);
}

std::set<std::string> program_variables(const Command& c) {
  std::set<std::string> vars;
  walk(c, [&](const Command& n) {
    std::visit(overloaded{
                   [&](const Assign& a) {
                     vars.insert(a.target);
                     collect_fv(*a.rhs, vars);
                   },
                   [&](const If& i) { collect_fv(*i.cond, vars); },
                   [&](const While& w) { collect_fv(*w.cond, vars); },
                   [&](const Out& o) { collect_fv(*o.rhs, vars); },
                   [&](const Directive& d) { collect_fv(*d.subject, vars); },
                   [](const auto&) {},
               },
               n.node);
  });
  return vars;
}

std::set<std::string> channels(const Command& c) {
  std::set<std::string> chans;
  walk(c, [&](const Command& n) {
    if (const auto* o = std::get_if<Out>(&n.node)) chans.insert(o->channel);
    if (const auto* d = std::get_if<Directive>(&n.node)) chans.insert(d->channel);
  });
  return chans;
}

std::vector<ProgramPoint> output_points(const Command& c) {
  std::vector<ProgramPoint> points;
  walk(c, [&](const Command& n) {
    if (const auto* o = std::get_if<Out>(&n.node)) {
      ProgramPoint pp{o->channel, o->point};
      if (std::find(points.begin(), points.end(), pp) == points.end()) points.push_back(pp);
    }
  });
  return points;
}

std::size_t statement_count(const Command& c) {
  std::size_t n = 0;
  walk(c, [&](const Command& node) {
    if (!std::holds_alternative<Seq>(node.node)) ++n;
  });
  return n;
}

}  // namespace flowcheck::lang
