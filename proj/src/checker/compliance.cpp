#include <sstream>

#include "flowcheck/checker.hpp"

namespace flowcheck::checker {

std::string to_string(PointVerdict v) {
  switch (v) {
    case PointVerdict::Pass:
      return "pass";
    case PointVerdict::Violation:
      return "violation";
    case PointVerdict::Unknown:
      return "unknown";
  }
  return "";
}

std::string to_string(Overall v) {
  switch (v) {
    case Overall::Compliant:
      return "compliant";
    case Overall::Violation:
      return "violation";
    case Overall::Unknown:
      return "unknown";
  }
  return "";
}

namespace {

std::string mode_name(Mode m) { return m == Mode::Exact ? "exact" : "syntactic"; }

nlohmann::json store_json(const semantics::Store& s) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : s.values()) j[k] = v;
  return j;
}

std::string braces(const std::vector<std::string>& items) {
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out + "}";
}

}  // namespace

ComplianceReport check_compliance(const typing::DepEnv& g, const policy::PolicyApprox& approx, Mode mode,
                                  const semantics::StoreUniverse* universe) {
  if (mode == Mode::Exact && universe == nullptr) throw std::invalid_argument("exact mode requires a store universe");
  ComplianceReport report;
  report.mode = mode;
  auto restricted = typing::restrict_to_pvars(g);
  bool any_violation = false, any_unknown = false;
  for (const auto& x : g.universe()->vars()) {
    if (x.kind != typing::TypingVar::Kind::Point) continue;
    lang::ProgramPoint pp{x.name, x.point};
    auto it = approx.find(pp);
    if (it == approx.end()) throw MissingPointError("policy approximation does not cover output point " + pp.to_string());

    PointEntry entry{pp, restricted.at(x), it->second, Mode::Syntactic, PointVerdict::Pass, std::nullopt};
    if (!policy::coarser_syntactic(entry.deps, entry.approx)) {
      if (mode == Mode::Exact) {
        entry.check = Mode::Exact;
        entry.witness = policy::coarseness_witness(policy::EquivSpec::of_variables(entry.deps), entry.approx, *universe);
        entry.verdict = entry.witness ? PointVerdict::Violation : PointVerdict::Pass;
      } else {
        // Over unbounded integers, agreement on a set of variables pins down
        // exactly those variables, so the syntactic test is decisive here.
        entry.verdict = entry.approx.all_bare_variables() ? PointVerdict::Violation : PointVerdict::Unknown;
      }
    }
    any_violation |= entry.verdict == PointVerdict::Violation;
    any_unknown |= entry.verdict == PointVerdict::Unknown;
    report.points.push_back(std::move(entry));
  }
  report.overall = any_violation ? Overall::Violation : any_unknown ? Overall::Unknown : Overall::Compliant;
  return report;
}

void attach_semantic_witness(ComplianceReport& report, const lang::CommandPtr& c,
                             const policy::DynamicPolicySpec& spec, const semantics::StoreUniverse& universe,
                             std::size_t fuel) {
  if (report.overall == Overall::Compliant) return;
  report.semantic = oracle::two_run_pi_check_all(c, spec, universe, fuel);
  report.semantic_fuel = fuel;
}

int ComplianceReport::exit_code() const {
  switch (overall) {
    case Overall::Compliant:
      return 0;
    case Overall::Violation:
      return 1;
    case Overall::Unknown:
      return 3;
  }
  return 3;
}

nlohmann::json ComplianceReport::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& e : points) {
    nlohmann::json j{{"point", e.point.to_string()},
                     {"deps", e.deps},
                     {"approx", policy::to_json(e.approx)},
                     {"check", mode_name(e.check)},
                     {"verdict", to_string(e.verdict)}};
    if (e.witness) j["witness"] = {{"sigma", store_json(e.witness->first)}, {"rho", store_json(e.witness->second)}};
    pts.push_back(std::move(j));
  }
  nlohmann::json out{{"overall", to_string(overall)}, {"mode", mode_name(mode)}, {"points", pts}};
  if (semantic) out["semantic"] = oracle::to_json(*semantic, semantic_fuel);
  return out;
}

std::string ComplianceReport::to_text() const {
  std::ostringstream os;
  os << "overall: " << to_string(overall) << " (" << mode_name(mode) << " mode)\n";
  for (const auto& e : points) {
    os << "  " << e.point.to_string() << ": " << to_string(e.verdict) << " [" << mode_name(e.check) << "]"
       << " deps " << braces({e.deps.begin(), e.deps.end()}) << " allowed " << braces(e.approx.texts()) << "\n";
    if (e.witness)
      os << "    witness: " << e.witness->first.to_string() << " vs " << e.witness->second.to_string() << "\n";
  }
  if (semantic) {
    os << "two-run oracle (fuel " << semantic_fuel << "): " << oracle::to_string(semantic->outcome) << "\n";
    if (const auto& c = semantic->counterexample) {
      os << "    " << c->sigma.to_string();
      if (c->rho) os << " vs " << c->rho->to_string();
      os << " at " << c->channel << "@" << c->point << " output " << c->t.size() + 1 << ": " << c->v;
      if (c->v_rho) os << " vs " << *c->v_rho;
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace flowcheck::checker
