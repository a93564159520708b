#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "flowcheck/semantics.hpp"

namespace flowcheck::semantics {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Value wrap(std::uint64_t v) { return static_cast<Value>(v); }

}  // namespace

Store Store::for_program(const lang::Command& program, std::map<std::string, Value> values) {
  for (const auto& name : lang::program_variables(program)) {
    if (!values.contains(name)) throw std::invalid_argument("store does not bind program variable '" + name + "'");
  }
  return Store(std::move(values));
}

Value Store::at(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw std::logic_error("unbound variable '" + name + "'");
  return it->second;
}

Store Store::with(const std::string& name, Value v) const {
  Store s = *this;
  s.values_[name] = v;
  return s;
}

std::string Store::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [name, v] : values_) {
    os << (first ? "" : ", ") << name << ':' << v;
    first = false;
  }
  os << '}';
  return os.str();
}

Value eval(const lang::Expr& e, const Store& s) {
  using lang::BinaryOp;
  return std::visit(
      overloaded{
          [](const lang::Literal& l) { return l.value; },
          [&](const lang::Variable& v) { return s.at(v.name); },
          [&](const lang::Unary& u) -> Value {
            Value x = eval(*u.operand, s);
            if (u.op == lang::UnaryOp::Neg) return wrap(std::uint64_t{0} - static_cast<std::uint64_t>(x));
            return x == 0 ? 1 : 0;
          },
          [&](const lang::Binary& b) -> Value {
            Value l = eval(*b.lhs, s);
            Value r = eval(*b.rhs, s);
            auto ul = static_cast<std::uint64_t>(l);
            auto ur = static_cast<std::uint64_t>(r);
            switch (b.op) {
              case BinaryOp::Add: return wrap(ul + ur);
              case BinaryOp::Sub: return wrap(ul - ur);
              case BinaryOp::Mul: return wrap(ul * ur);
              case BinaryOp::Eq: return l == r;
              case BinaryOp::Ne: return l != r;
              case BinaryOp::Lt: return l < r;
              case BinaryOp::Le: return l <= r;
              case BinaryOp::Gt: return l > r;
              case BinaryOp::Ge: return l >= r;
              case BinaryOp::And: return l != 0 && r != 0;
              case BinaryOp::Or: return l != 0 || r != 0;
            }
            return 0;
          },
      },
      e.node);
}

StoreUniverse::StoreUniverse(std::map<std::string, std::vector<Value>> domains) : domains_(std::move(domains)) {
  for (auto& [name, vals] : domains_) {
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (vals.empty()) throw std::invalid_argument("empty domain for variable '" + name + "'");
  }
  std::vector<std::pair<std::string, const std::vector<Value>*>> dims;
  for (const auto& [name, vals] : domains_) dims.emplace_back(name, &vals);

  // Odometer enumeration; the last variable varies fastest.
  std::vector<std::size_t> idx(dims.size(), 0);
  while (true) {
    std::map<std::string, Value> values;
    for (std::size_t d = 0; d < dims.size(); ++d) values[dims[d].first] = (*dims[d].second)[idx[d]];
    stores_.emplace_back(std::move(values));
    std::size_t d = dims.size();
    while (d > 0) {
      --d;
      if (++idx[d] < dims[d].second->size()) break;
      idx[d] = 0;
      if (d == 0) return;
    }
    if (dims.empty()) return;
  }
}

StoreUniverse StoreUniverse::for_program(const lang::Command& program,
                                         const std::map<std::string, std::vector<Value>>& overrides,
                                         std::vector<Value> defaults) {
  std::map<std::string, std::vector<Value>> domains;
  for (const auto& name : lang::program_variables(program)) {
    auto it = overrides.find(name);
    domains[name] = it != overrides.end() ? it->second : defaults;
  }
  for (const auto& [name, vals] : overrides) domains.emplace(name, vals);
  return StoreUniverse(std::move(domains));
}

std::optional<std::size_t> StoreUniverse::index_of(const Store& s) const {
  auto it = std::lower_bound(stores_.begin(), stores_.end(), s);
  if (it == stores_.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - stores_.begin());
}

}  // namespace flowcheck::semantics
