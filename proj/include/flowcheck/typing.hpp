#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flowcheck/lang.hpp"

namespace flowcheck::typing {

/// A typing variable: the program counter, a program variable, a channel
/// (its context bound), or a channel-point a_p.
struct TypingVar {
  enum class Kind { Pc, Variable, Channel, Point };

  Kind kind = Kind::Pc;
  std::string name;   // variable or channel name
  std::string point;  // only for Kind::Point

  static TypingVar pc() { return {Kind::Pc, "", ""}; }
  static TypingVar variable(std::string name) { return {Kind::Variable, std::move(name), ""}; }
  static TypingVar channel(std::string name) { return {Kind::Channel, std::move(name), ""}; }
  static TypingVar channel_point(std::string channel, std::string point) {
    return {Kind::Point, std::move(channel), std::move(point)};
  }
  static TypingVar channel_point(const lang::ProgramPoint& pp) { return channel_point(pp.channel, pp.point); }

  bool is_variable() const { return kind == Kind::Variable; }

  /// "x", "pc", "#a" for channels, "a@p" for points.
  std::string to_string() const;
  static TypingVar parse(const std::string& text);

  auto operator<=>(const TypingVar&) const = default;
};

/// Interned, ordered set of typing variables; dependency sets are bitsets over it.
class VarUniverse {
 public:
  explicit VarUniverse(std::set<TypingVar> vars);
  /// pc, every program variable, every channel and every output point of `c`.
  static std::shared_ptr<const VarUniverse> for_program(const lang::Command& c);

  std::size_t size() const { return vars_.size(); }
  const TypingVar& operator[](std::size_t i) const { return vars_[i]; }
  const std::vector<TypingVar>& vars() const { return vars_; }
  std::optional<std::size_t> index_of(const TypingVar& v) const;
  std::size_t require(const TypingVar& v) const;

  bool operator==(const VarUniverse& other) const { return vars_ == other.vars_; }

 private:
  std::vector<TypingVar> vars_;
  std::map<TypingVar, std::size_t> index_;
};

using DepSet = std::set<TypingVar>;

/// Dependency environment Γ over a finite universe. Every row starts as the
/// identity (x ↦ {x}); variables outside the universe also read as identity.
class DepEnv {
 public:
  explicit DepEnv(std::shared_ptr<const VarUniverse> universe);

  static DepEnv identity(std::shared_ptr<const VarUniverse> universe) { return DepEnv(std::move(universe)); }

  const std::shared_ptr<const VarUniverse>& universe() const { return universe_; }

  DepSet at(const TypingVar& x) const;
  DepSet operator()(const TypingVar& x) const { return at(x); }
  bool depends(const TypingVar& x, const TypingVar& y) const;

  /// Γ[x ↦ deps]; every member of deps must belong to the universe.
  DepEnv& set(const TypingVar& x, const DepSet& deps);
  DepEnv with(const TypingVar& x, const DepSet& deps) const;

  /// Pointwise inclusion: this(x) ⊆ other(x) for all x.
  bool subset_of(const DepEnv& other) const;
  bool operator==(const DepEnv& other) const;

  friend DepEnv compose(const DepEnv& g2, const DepEnv& g1);
  friend DepEnv env_union(const DepEnv& g1, const DepEnv& g2);

 private:
  std::uint64_t* row(std::size_t i) { return bits_.data() + i * words_; }
  const std::uint64_t* row(std::size_t i) const { return bits_.data() + i * words_; }
  void check_same_universe(const DepEnv& other) const;

  std::shared_ptr<const VarUniverse> universe_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

DepEnv gamma_id(std::shared_ptr<const VarUniverse> universe);
/// (g2 ; g1)(x) = ⋃_{y ∈ g2(x)} g1(y).
DepEnv compose(const DepEnv& g2, const DepEnv& g1);
/// (g1 ∪ g2)(x) = g1(x) ∪ g2(x).
DepEnv env_union(const DepEnv& g1, const DepEnv& g2);
/// Γ* = ⋃_{n ≥ 0} Γⁿ, iterating Γ^{n+1} = Γⁿ ; Γ until the union stops growing.
DepEnv fixpoint(const DepEnv& g);

/// Principal typing of a program.
DepEnv infer(const lang::Command& c);
/// Principal typing over a caller-supplied universe (must cover the program).
DepEnv infer(const lang::Command& c, const std::shared_ptr<const VarUniverse>& universe);

/// Dependency sets filtered to program variables.
struct RestrictedTyping {
  std::map<TypingVar, std::set<std::string>> deps;

  std::set<std::string> at(const TypingVar& x) const;
};

RestrictedTyping restrict_to_pvars(const DepEnv& g);

}  // namespace flowcheck::typing
