#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <set>

#include "flowcheck/lang.hpp"

namespace flowcheck::lang {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Int, Keyword, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  SourceLoc loc;
};

const std::set<std::string, std::less<>> kKeywords = {
    "skip", "if", "else", "while", "out", "on", "allow", "revoke", "true", "false"};

// Longest match first.
const char* const kSymbols[] = {":=", "==", "!=", "<=", ">=", "&&", "||", "->", "+", "-", "*",
                                "<",  ">",  "!",  "(",  ")",  "{",  "}",  ";",  "@"};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> toks;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char ch = src[i];
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
      advance(1);
      continue;
    }
    if (ch == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourceLoc loc{line, col};
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      std::string text(src.substr(i, j - i));
      Tok kind = kKeywords.contains(text) ? Tok::Keyword : Tok::Ident;
      toks.push_back({kind, std::move(text), loc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      toks.push_back({Tok::Int, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* sym : kSymbols) {
      std::string_view s(sym);
      if (src.substr(i, s.size()) == s) {
        toks.push_back({Tok::Symbol, std::string(s), loc});
        advance(s.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("unexpected character '") + ch + "'", line, col);
  }
  toks.push_back({Tok::End, "", {line, col}});
  return toks;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {
    for (std::size_t k = 0; k + 1 < toks_.size(); ++k) {
      if (toks_[k].kind == Tok::Symbol && toks_[k].text == "@" && toks_[k + 1].kind == Tok::Ident)
        explicit_points_.insert(toks_[k + 1].text);
    }
  }

  CommandPtr program() {
    auto c = block_body(/*in_block=*/false);
    expect_end();
    return c;
  }

  ExprPtr expression_only() {
    auto e = expr();
    expect_end();
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  bool at_symbol(std::string_view s) const { return peek().kind == Tok::Symbol && peek().text == s; }
  bool at_keyword(std::string_view s) const { return peek().kind == Tok::Keyword && peek().text == s; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", found " + found, t.loc.line, t.loc.column);
  }

  void expect_symbol(std::string_view s) {
    if (!at_symbol(s)) fail("expected '" + std::string(s) + "'");
    ++pos_;
  }
  void expect_keyword(std::string_view s) {
    if (!at_keyword(s)) fail("expected '" + std::string(s) + "'");
    ++pos_;
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail("expected end of input");
  }

  std::string identifier(std::string_view what) {
    if (peek().kind != Tok::Ident) fail("expected " + std::string(what));
    return next().text;
  }

  std::string variable_name() {
    const Token& t = peek();
    std::string name = identifier("variable name");
    if (name == "pc") throw ParseError("'pc' is reserved and cannot name a variable", t.loc.line, t.loc.column);
    return name;
  }

  CommandPtr block_body(bool in_block) {
    std::vector<CommandPtr> stmts;
    auto at_close = [&] { return in_block ? at_symbol("}") : peek().kind == Tok::End; };
    while (!at_close()) {
      if (at_symbol(";")) {
        ++pos_;
        continue;
      }
      auto [stmt, ends_with_block] = statement();
      stmts.push_back(std::move(stmt));
      if (at_symbol(";")) {
        ++pos_;
      } else if (!at_close() && !ends_with_block) {
        fail("expected ';'");
      }
    }
    return seq(stmts);
  }

  CommandPtr braced() {
    expect_symbol("{");
    auto body = block_body(/*in_block=*/true);
    expect_symbol("}");
    return body;
  }

  ExprPtr condition() {
    expect_symbol("(");
    auto e = expr();
    expect_symbol(")");
    return e;
  }

  std::pair<CommandPtr, bool> statement() {
    const Token& t = peek();
    SourceLoc loc = t.loc;
    if (t.kind == Tok::Ident) {
      std::string target = variable_name();
      expect_symbol(":=");
      return {assign(std::move(target), expr(), loc), false};
    }
    if (at_keyword("skip")) {
      ++pos_;
      return {skip(loc), false};
    }
    if (at_keyword("if")) {
      ++pos_;
      auto cond = condition();
      auto then_branch = braced();
      CommandPtr else_branch = skip(loc);
      if (at_keyword("else")) {
        ++pos_;
        else_branch = braced();
      }
      return {if_(std::move(cond), std::move(then_branch), std::move(else_branch), loc), true};
    }
    if (at_keyword("while")) {
      ++pos_;
      auto cond = condition();
      return {while_(std::move(cond), braced(), loc), true};
    }
    if (at_keyword("out")) {
      ++pos_;
      auto e = expr();
      expect_keyword("on");
      std::string chan = identifier("channel name");
      std::string point;
      if (at_symbol("@")) {
        ++pos_;
        const Token& pt = peek();
        point = identifier("program point");
        auto [it, fresh] = point_channel_.emplace(point, chan);
        if (!fresh && it->second != chan)
          throw ParseError("program point '" + point + "' already used on channel '" + it->second + "'",
                           pt.loc.line, pt.loc.column);
      } else {
        point = fresh_point();
      }
      return {out(std::move(e), std::move(chan), std::move(point), loc), false};
    }
    if (at_keyword("allow") || at_keyword("revoke")) {
      auto action = next().text == "allow" ? DirectiveAction::Allow : DirectiveAction::Revoke;
      auto subject = expr();
      expect_symbol("->");
      std::string chan = identifier("channel name");
      return {directive(action, std::move(subject), std::move(chan), loc), false};
    }
    fail("expected a statement");
  }

  std::string fresh_point() {
    std::string name;
    do {
      name = "p" + std::to_string(++auto_counter_);
    } while (explicit_points_.contains(name));
    return name;
  }

  // Precedence climbing, loosest first.
  ExprPtr expr() { return binary_level(0); }

  static constexpr int kLevels = 6;

  static std::optional<BinaryOp> op_at_level(int level, const Token& t) {
    if (t.kind != Tok::Symbol) return std::nullopt;
    const std::string& s = t.text;
    switch (level) {
      case 0:
        if (s == "||") return BinaryOp::Or;
        break;
      case 1:
        if (s == "&&") return BinaryOp::And;
        break;
      case 2:
        if (s == "==") return BinaryOp::Eq;
        if (s == "!=") return BinaryOp::Ne;
        break;
      case 3:
        if (s == "<") return BinaryOp::Lt;
        if (s == "<=") return BinaryOp::Le;
        if (s == ">") return BinaryOp::Gt;
        if (s == ">=") return BinaryOp::Ge;
        break;
      case 4:
        if (s == "+") return BinaryOp::Add;
        if (s == "-") return BinaryOp::Sub;
        break;
      case 5:
        if (s == "*") return BinaryOp::Mul;
        break;
    }
    return std::nullopt;
  }

  ExprPtr binary_level(int level) {
    if (level == kLevels) return unary_expr();
    auto lhs = binary_level(level + 1);
    while (auto op = op_at_level(level, peek())) {
      ++pos_;
      auto rhs = binary_level(level + 1);
      lhs = binary(*op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Value integer(bool negative) {
    const Token& t = next();
    std::uint64_t magnitude = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), magnitude);
    std::uint64_t limit = negative ? std::uint64_t{1} << 63 : (std::uint64_t{1} << 63) - 1;
    if (ec != std::errc{} || magnitude > limit)
      throw ParseError("integer literal out of range", t.loc.line, t.loc.column);
    return negative ? static_cast<Value>(std::uint64_t{0} - magnitude) : static_cast<Value>(magnitude);
  }

  ExprPtr unary_expr() {
    if (at_symbol("-")) {
      ++pos_;
      if (peek().kind == Tok::Int) return literal(integer(/*negative=*/true));
      return unary(UnaryOp::Neg, unary_expr());
    }
    if (at_symbol("!")) {
      ++pos_;
      return unary(UnaryOp::Not, unary_expr());
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int:
        return literal(integer(/*negative=*/false));
      case Tok::Ident:
        return var(variable_name());
      case Tok::Keyword:
        if (t.text == "true" || t.text == "false") {
          ++pos_;
          return literal(t.text == "true" ? 1 : 0);
        }
        break;
      case Tok::Symbol:
        if (t.text == "(") {
          ++pos_;
          auto e = expr();
          expect_symbol(")");
          return e;
        }
        break;
      case Tok::End:
        break;
    }
    fail("expected an expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> explicit_points_;
  std::map<std::string, std::string> point_channel_;
  int auto_counter_ = 0;
};

}  // namespace

CommandPtr parse_program(std::string_view source) { return Parser(tokenize(source)).program(); }

ExprPtr parse_expression(std::string_view source) { return Parser(tokenize(source)).expression_only(); }

}  // namespace flowcheck::lang
