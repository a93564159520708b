#include "flowcheck/oracle.hpp"

namespace flowcheck::oracle {

std::string to_string(Verdict::Outcome o) {
  switch (o) {
    case Verdict::Outcome::Secure:
      return "secure";
    case Verdict::Outcome::Insecure:
      return "insecure";
    case Verdict::Outcome::Bounded:
      return "bounded";
  }
  return "";
}

namespace {

nlohmann::json store_json(const Store& s) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : s.values()) j[k] = v;
  return j;
}

}  // namespace

nlohmann::json to_json(const Verdict& v, std::size_t fuel) {
  nlohmann::json j{{"verdict", to_string(v.outcome)}, {"fuel", fuel}};
  if (!v.note.empty()) j["note"] = v.note;
  if (v.counterexample) {
    const auto& c = *v.counterexample;
    nlohmann::json cex{{"channel", c.channel}, {"sigma", store_json(c.sigma)},
                       {"t", c.t},             {"v", c.v},
                       {"point", c.point},     {"stepIndex", c.n},
                       {"sigmaTrace", c.sigma_trace}};
    if (c.rho) {
      cex["rho"] = store_json(*c.rho);
      cex["rhoTrace"] = c.rho_trace;
    }
    if (c.v_rho) cex["vRho"] = *c.v_rho;
    if (!c.detail.empty()) cex["detail"] = c.detail;
    j["counterexample"] = cex;
  }
  return j;
}

nlohmann::json to_json(const Theorem1Report& r, std::size_t fuel) {
  nlohmann::json j{{"twoRun", to_json(r.two_run, fuel)},
                   {"piAllAttackers", to_json(r.pi_all, fuel)},
                   {"attackersChecked", r.attackers_checked}};
  if (!r.violating_attacker.empty()) j["violatingAttacker"] = r.violating_attacker;
  j["agree"] = r.agree ? nlohmann::json(*r.agree) : nlohmann::json(nullptr);
  return j;
}

}  // namespace flowcheck::oracle
