#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace flowcheck::lang {

using Value = std::int64_t;

enum class BinaryOp { Add, Sub, Mul, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnaryOp { Neg, Not };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Literal {
  Value value;
};
struct Variable {
  std::string name;
};
struct Unary {
  UnaryOp op;
  ExprPtr operand;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Expr {
  std::variant<Literal, Variable, Unary, Binary> node;
};

ExprPtr literal(Value v);
ExprPtr var(std::string name);
ExprPtr unary(UnaryOp op, ExprPtr operand);
ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);

/// Structural equality.
bool operator==(const Expr& a, const Expr& b);

/// Free program variables of an expression.
std::set<std::string> fv(const Expr& e);

std::string_view to_string(BinaryOp op);

struct SourceLoc {
  int line = 0;
  int column = 0;
};

struct Command;
using CommandPtr = std::shared_ptr<const Command>;

enum class DirectiveAction { Allow, Revoke };

struct Skip {};
struct Seq {
  CommandPtr first;
  CommandPtr second;
};
struct Assign {
  std::string target;
  ExprPtr rhs;
};
struct If {
  ExprPtr cond;
  CommandPtr then_branch;
  CommandPtr else_branch;
};
struct While {
  ExprPtr cond;
  CommandPtr body;
};
struct Out {
  ExprPtr rhs;
  std::string channel;
  std::string point;
};
/// Policy directive; silent with respect to the store and the output labels.
struct Directive {
  DirectiveAction action;
  ExprPtr subject;
  std::string channel;
};

struct Command {
  std::variant<Skip, Seq, Assign, If, While, Out, Directive> node;
  SourceLoc loc;
};

CommandPtr skip(SourceLoc loc = {});
CommandPtr seq(CommandPtr first, CommandPtr second, SourceLoc loc = {});
/// Right-nested sequence of the given statements; skip when empty.
CommandPtr seq(const std::vector<CommandPtr>& stmts);
CommandPtr assign(std::string target, ExprPtr rhs, SourceLoc loc = {});
CommandPtr if_(ExprPtr cond, CommandPtr then_branch, CommandPtr else_branch, SourceLoc loc = {});
CommandPtr while_(ExprPtr cond, CommandPtr body, SourceLoc loc = {});
CommandPtr out(ExprPtr rhs, std::string channel, std::string point, SourceLoc loc = {});
CommandPtr directive(DirectiveAction action, ExprPtr subject, std::string channel, SourceLoc loc = {});

/// Structural equality; source locations are ignored.
bool operator==(const Command& a, const Command& b);

inline bool is_skip(const Command& c) { return std::holds_alternative<Skip>(c.node); }

/// A channel paired with an output annotation, written a@p.
struct ProgramPoint {
  std::string channel;
  std::string point;

  std::string to_string() const { return channel + "@" + point; }
  auto operator<=>(const ProgramPoint&) const = default;
};

/// Every program variable mentioned anywhere (assignments, expressions, directives).
std::set<std::string> program_variables(const Command& c);
std::set<std::string> channels(const Command& c);
/// Distinct output points in first-occurrence order.
std::vector<ProgramPoint> output_points(const Command& c);
/// Number of statements, counting nested ones.
std::size_t statement_count(const Command& c);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses a program. Outputs without an explicit `@ p` get fresh points
/// p1, p2, ... in source order, skipping names used explicitly.
CommandPtr parse_program(std::string_view source);
ExprPtr parse_expression(std::string_view source);

/// Canonical concrete syntax; parse_program(to_source(c)) == c for
/// right-nested sequences.
std::string to_source(const Command& c);
std::string to_source(const Expr& e);
/// Single-line rendering of one statement head (blocks elided), for messages.
std::string summary(const Command& c);

}  // namespace flowcheck::lang
