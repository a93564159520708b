#include <sstream>

#include "flowcheck/lang.hpp"

namespace flowcheck::lang {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr int kUnaryPrec = 7;
constexpr int kAtomPrec = 8;

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 3;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    case BinaryOp::Mul: return 6;
  }
  return 0;
}

int precedence(const Expr& e) {
  return std::visit(overloaded{
                        // A negative literal prints with a leading '-', like a unary operator.
                        [](const Literal& l) { return l.value < 0 ? kUnaryPrec : kAtomPrec; },
                        [](const Variable&) { return kAtomPrec; },
                        [](const Unary&) { return kUnaryPrec; },
                        [](const Binary& b) { return precedence(b.op); },
                    },
                    e.node);
}

void print_expr(const Expr& e, std::ostream& os);

void print_operand(const Expr& e, bool parens, std::ostream& os) {
  if (parens) os << '(';
  print_expr(e, os);
  if (parens) os << ')';
}

void print_expr(const Expr& e, std::ostream& os) {
  std::visit(overloaded{
                 [&](const Literal& l) { os << l.value; },
                 [&](const Variable& v) { os << v.name; },
                 [&](const Unary& u) {
                   os << (u.op == UnaryOp::Neg ? "-" : "!");
                   // "-5" would re-parse as a literal, so a negated literal keeps its parens.
                   bool parens = precedence(*u.operand) < kUnaryPrec ||
                                 (u.op == UnaryOp::Neg && std::holds_alternative<Literal>(u.operand->node));
                   print_operand(*u.operand, parens, os);
                 },
                 [&](const Binary& b) {
                   int p = precedence(b.op);
                   print_operand(*b.lhs, precedence(*b.lhs) < p, os);
                   os << ' ' << to_string(b.op) << ' ';
                   print_operand(*b.rhs, precedence(*b.rhs) <= p, os);
                 },
             },
             e.node);
}

void flatten(const CommandPtr& c, std::vector<CommandPtr>& out) {
  if (const auto* s = std::get_if<Seq>(&c->node)) {
    flatten(s->first, out);
    flatten(s->second, out);
  } else {
    out.push_back(c);
  }
}

void print_block(const CommandPtr& c, int indent, std::ostream& os);

void print_stmt(const Command& c, int indent, std::ostream& os) {
  std::string pad(indent * 2, ' ');
  os << pad;
  std::visit(overloaded{
                 [&](const Skip&) { os << "skip"; },
                 [&](const Seq&) {},  // flattened by print_block
                 [&](const Assign& a) {
                   os << a.target << " := ";
                   print_expr(*a.rhs, os);
                 },
                 [&](const If& i) {
                   os << "if (";
                   print_expr(*i.cond, os);
                   os << ") {\n";
                   print_block(i.then_branch, indent + 1, os);
                   os << pad << "}";
                   if (!is_skip(*i.else_branch)) {
                     os << " else {\n";
                     print_block(i.else_branch, indent + 1, os);
                     os << pad << "}";
                   }
                 },
                 [&](const While& w) {
                   os << "while (";
                   print_expr(*w.cond, os);
                   os << ") {\n";
                   print_block(w.body, indent + 1, os);
                   os << pad << "}";
                 },
                 [&](const Out& o) {
                   os << "out ";
                   print_expr(*o.rhs, os);
                   os << " on " << o.channel << " @ " << o.point;
                 },
                 [&](const Directive& d) {
                   os << (d.action == DirectiveAction::Allow ? "allow " : "revoke ");
                   print_expr(*d.subject, os);
                   os << " -> " << d.channel;
                 },
             },
             c.node);
}

void print_block(const CommandPtr& c, int indent, std::ostream& os) {
  std::vector<CommandPtr> stmts;
  flatten(c, stmts);
  for (std::size_t i = 0; i < stmts.size(); ++i) {
    print_stmt(*stmts[i], indent, os);
    os << (i + 1 < stmts.size() ? ";\n" : "\n");
  }
}

}  // namespace

std::string to_source(const Expr& e) {
  std::ostringstream os;
  print_expr(e, os);
  return os.str();
}

std::string to_source(const Command& c) {
  std::ostringstream os;
  print_block(std::make_shared<const Command>(c), 0, os);
  return os.str();
}

std::string summary(const Command& c) {
  return std::visit(overloaded{
                        [&](const If& i) { return "if (" + to_source(*i.cond) + ") { ... }"; },
                        [&](const While& w) { return "while (" + to_source(*w.cond) + ") { ... }"; },
                        [&](const Seq&) { return std::string("..."); },
                        [&](const auto&) {
                          std::ostringstream os;
                          print_stmt(c, 0, os);
                          return os.str();
                        },
                    },
                    c.node);
}

}  // namespace flowcheck::lang
