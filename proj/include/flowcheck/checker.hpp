#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "flowcheck/lang.hpp"
#include "flowcheck/oracle.hpp"
#include "flowcheck/policy.hpp"
#include "flowcheck/typing.hpp"

namespace flowcheck::checker {

enum class Mode { Syntactic, Exact };

enum class PointVerdict { Pass, Violation, Unknown };
enum class Overall { Compliant, Violation, Unknown };

std::string to_string(PointVerdict v);
std::string to_string(Overall v);

struct PointEntry {
  lang::ProgramPoint point;
  /// Γ(a_p) ∩ PVar.
  std::set<std::string> deps;
  policy::EquivSpec approx;
  Mode check = Mode::Syntactic;
  PointVerdict verdict = PointVerdict::Pass;
  /// Stores that agree on A(a_p) but not on the dependencies (exact mode).
  std::optional<std::pair<semantics::Store, semantics::Store>> witness;
};

struct ComplianceReport {
  Overall overall = Overall::Compliant;
  Mode mode = Mode::Syntactic;
  std::vector<PointEntry> points;
  /// Two-run oracle result attached to violations, when requested.
  std::optional<oracle::Verdict> semantic;
  std::size_t semantic_fuel = 0;

  nlohmann::json to_json() const;
  std::string to_text() const;
  /// 0 compliant, 1 violation, 3 unknown.
  int exit_code() const;
};

class MissingPointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks that ≡Γ(a_p) is coarser than A(a_p) at every output point of the
/// typing. Exact mode decides coarseness over `universe` when the syntactic
/// test fails.
ComplianceReport check_compliance(const typing::DepEnv& g, const policy::PolicyApprox& approx, Mode mode,
                                  const semantics::StoreUniverse* universe = nullptr);

/// Runs the two-run oracle for a report with violations, so that real leaks
/// can be told apart from imprecision of the analysis.
void attach_semantic_witness(ComplianceReport& report, const lang::CommandPtr& c,
                             const policy::DynamicPolicySpec& spec, const semantics::StoreUniverse& universe,
                             std::size_t fuel);

class StaleCacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hex SHA-256 of the canonical printed program.
std::string program_hash(const lang::Command& c);

/// Directory of typings named by program hash. Writes go through a temporary
/// file and a rename, so readers never see partial files.
class TypingCache {
 public:
  explicit TypingCache(std::filesystem::path dir);

  void store(const lang::Command& c, const typing::DepEnv& g) const;
  /// nullopt on a miss; StaleCacheError when the entry belongs to another program.
  std::optional<typing::DepEnv> load(const lang::Command& c) const;
  /// Loads, or infers and stores on a miss.
  typing::DepEnv typing_for(const lang::Command& c, bool* hit = nullptr) const;

  std::filesystem::path path_for(const std::string& hash) const;

 private:
  std::filesystem::path dir_;
};

/// One step in the chain explaining why y ∈ Γ(target).
struct ProvenanceStep {
  std::string statement;
  lang::SourceLoc loc;
  typing::TypingVar from;
  typing::TypingVar to;
};

struct Explanation {
  typing::TypingVar target;
  /// For each member y of Γ(target), the statements through which target came
  /// to depend on y, last statement first.
  std::vector<std::pair<typing::TypingVar, std::vector<ProvenanceStep>>> members;

  std::string to_text() const;
  nlohmann::json to_json() const;
};

Explanation explain(const lang::Command& c, const typing::TypingVar& target);

}  // namespace flowcheck::checker
