#pragma once

#include <vector>

#include "flowcheck/oracle.hpp"

namespace flowcheck::oracle::detail {

// Attacker states along every trace of a table, computed once.
struct Observations {
  Observations(const AttackerModel& a, const TraceTable& table);

  bool in_k(std::size_t rho, StateId target, std::size_t pos) const;
  bool in_k_ac(std::size_t rho, StateId target, std::size_t pos) const;
  bool in_k_full(std::size_t rho, StateId target, std::size_t pos) const;

  bool counting;
  std::vector<std::vector<StateId>> ids;
  // Run i has an infinite, periodic trace and ids[i] covers all of it that matters.
  std::vector<bool> infinite;
  // Membership of run i is final: more fuel cannot change it.
  std::vector<bool> decided;
};

// Universe indices of stores equivalent to store `s` under the policy active
// at event `i` of its run.
std::vector<std::size_t> policy_class(const TraceTable& table, std::size_t s, std::size_t i);

Counterexample base_counterexample(const TraceTable& table, std::size_t s, std::size_t i);

}  // namespace flowcheck::oracle::detail
