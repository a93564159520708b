#include <bit>
#include <stdexcept>

#include "flowcheck/typing.hpp"

namespace flowcheck::typing {

std::string TypingVar::to_string() const {
  switch (kind) {
    case Kind::Pc: return "pc";
    case Kind::Variable: return name;
    case Kind::Channel: return "#" + name;
    case Kind::Point: return name + "@" + point;
  }
  return "?";
}

TypingVar TypingVar::parse(const std::string& text) {
  if (text == "pc") return pc();
  if (!text.empty() && text[0] == '#') return channel(text.substr(1));
  if (auto at = text.find('@'); at != std::string::npos) return channel_point(text.substr(0, at), text.substr(at + 1));
  if (text.empty()) throw std::invalid_argument("empty typing variable");
  return variable(text);
}

VarUniverse::VarUniverse(std::set<TypingVar> vars) : vars_(vars.begin(), vars.end()) {
  for (std::size_t i = 0; i < vars_.size(); ++i) index_.emplace(vars_[i], i);
}

std::shared_ptr<const VarUniverse> VarUniverse::for_program(const lang::Command& c) {
  std::set<TypingVar> vars{TypingVar::pc()};
  for (const auto& x : lang::program_variables(c)) vars.insert(TypingVar::variable(x));
  for (const auto& a : lang::channels(c)) vars.insert(TypingVar::channel(a));
  for (const auto& pp : lang::output_points(c)) vars.insert(TypingVar::channel_point(pp));
  return std::make_shared<const VarUniverse>(std::move(vars));
}

std::optional<std::size_t> VarUniverse::index_of(const TypingVar& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t VarUniverse::require(const TypingVar& v) const {
  auto i = index_of(v);
  if (!i) throw std::out_of_range("typing variable '" + v.to_string() + "' is not in the universe");
  return *i;
}

DepEnv::DepEnv(std::shared_ptr<const VarUniverse> universe)
    : universe_(std::move(universe)),
      words_((universe_->size() + 63) / 64),
      bits_(universe_->size() * words_, 0) {
  for (std::size_t i = 0; i < universe_->size(); ++i) row(i)[i / 64] |= std::uint64_t{1} << (i % 64);
}

DepSet DepEnv::at(const TypingVar& x) const {
  auto i = universe_->index_of(x);
  if (!i) return {x};
  DepSet out;
  const std::uint64_t* r = row(*i);
  for (std::size_t w = 0; w < words_; ++w) {
    for (std::uint64_t bits = r[w]; bits != 0; bits &= bits - 1)
      out.insert((*universe_)[w * 64 + static_cast<std::size_t>(std::countr_zero(bits))]);
  }
  return out;
}

bool DepEnv::depends(const TypingVar& x, const TypingVar& y) const {
  auto i = universe_->index_of(x);
  if (!i) return x == y;
  auto j = universe_->index_of(y);
  if (!j) return false;
  return (row(*i)[*j / 64] >> (*j % 64)) & 1;
}

DepEnv& DepEnv::set(const TypingVar& x, const DepSet& deps) {
  std::uint64_t* r = row(universe_->require(x));
  std::fill(r, r + words_, 0);
  for (const auto& y : deps) {
    std::size_t j = universe_->require(y);
    r[j / 64] |= std::uint64_t{1} << (j % 64);
  }
  return *this;
}

DepEnv DepEnv::with(const TypingVar& x, const DepSet& deps) const {
  DepEnv g = *this;
  g.set(x, deps);
  return g;
}

void DepEnv::check_same_universe(const DepEnv& other) const {
  if (universe_ != other.universe_ && !(*universe_ == *other.universe_))
    throw std::invalid_argument("dependency environments over different universes");
}

bool DepEnv::subset_of(const DepEnv& other) const {
  check_same_universe(other);
  for (std::size_t k = 0; k < bits_.size(); ++k)
    if (bits_[k] & ~other.bits_[k]) return false;
  return true;
}

bool DepEnv::operator==(const DepEnv& other) const {
  check_same_universe(other);
  return bits_ == other.bits_;
}

DepEnv gamma_id(std::shared_ptr<const VarUniverse> universe) { return DepEnv::identity(std::move(universe)); }

DepEnv compose(const DepEnv& g2, const DepEnv& g1) {
  g2.check_same_universe(g1);
  DepEnv out = g2;
  const std::size_t n = g2.universe_->size();
  const std::size_t words = g2.words_;
  for (std::size_t x = 0; x < n; ++x) {
    std::uint64_t* dst = out.row(x);
    std::fill(dst, dst + words, 0);
    const std::uint64_t* src = g2.row(x);
    for (std::size_t w = 0; w < words; ++w) {
      for (std::uint64_t bits = src[w]; bits != 0; bits &= bits - 1) {
        const std::uint64_t* via = g1.row(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        for (std::size_t k = 0; k < words; ++k) dst[k] |= via[k];
      }
    }
  }
  return out;
}

DepEnv env_union(const DepEnv& g1, const DepEnv& g2) {
  g1.check_same_universe(g2);
  DepEnv out = g1;
  for (std::size_t k = 0; k < out.bits_.size(); ++k) out.bits_[k] |= g2.bits_[k];
  return out;
}

DepEnv fixpoint(const DepEnv& g) {
  DepEnv acc = gamma_id(g.universe());
  DepEnv power = acc;
  while (true) {
    power = compose(power, g);
    DepEnv grown = env_union(acc, power);
    if (grown == acc) return acc;
    acc = std::move(grown);
  }
}

std::set<std::string> RestrictedTyping::at(const TypingVar& x) const {
  auto it = deps.find(x);
  if (it != deps.end()) return it->second;
  if (x.is_variable()) return {x.name};
  return {};
}

RestrictedTyping restrict_to_pvars(const DepEnv& g) {
  RestrictedTyping out;
  for (const auto& x : g.universe()->vars()) {
    auto& row = out.deps[x];
    for (const auto& y : g.at(x))
      if (y.is_variable()) row.insert(y.name);
  }
  return out;
}

}  // namespace flowcheck::typing
