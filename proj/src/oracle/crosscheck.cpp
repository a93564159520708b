#include "flowcheck/oracle.hpp"

namespace flowcheck::oracle {

std::vector<std::shared_ptr<const AttackerModel>> theorem1_family(std::size_t max_states,
                                                                  const std::vector<Value>& alphabet) {
  std::vector<std::shared_ptr<const AttackerModel>> family;
  for (auto& a : enumerate_attackers(max_states, alphabet)) family.push_back(std::move(a));
  family.push_back(std::make_shared<LengthOnly>());
  return family;
}

Theorem1Report theorem1_crosscheck(const TraceTable& table,
                                   const std::vector<std::shared_ptr<const AttackerModel>>& family) {
  Theorem1Report report;
  report.two_run = two_run_pi_check(table);
  std::optional<Verdict> bounded;
  for (const auto& a : family) {
    ++report.attackers_checked;
    Verdict v = security_check_all(SecurityNotion::PI, *a, table);
    if (v.insecure()) {
      report.pi_all = std::move(v);
      report.violating_attacker = a->name();
      break;
    }
    if (v.bounded() && !bounded) bounded = std::move(v);
  }
  if (!report.pi_all.insecure()) report.pi_all = bounded ? *bounded : Verdict::make_secure();

  const Verdict& lhs = report.two_run;
  const Verdict& rhs = report.pi_all;
  if ((lhs.secure() && rhs.secure()) || (lhs.insecure() && rhs.insecure()))
    report.agree = true;
  else if ((lhs.secure() && rhs.insecure()) || (lhs.insecure() && rhs.secure()))
    report.agree = false;
  return report;
}

}  // namespace flowcheck::oracle
