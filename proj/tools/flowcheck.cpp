#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "flowcheck/checker.hpp"
#include "flowcheck/oracle.hpp"
#include "flowcheck/policy.hpp"
#include "flowcheck/typing_report.hpp"

namespace fs = std::filesystem;
using namespace flowcheck;

namespace {

constexpr int kUsageError = 2;

struct Options {
  std::string source;
  std::string policy;
  std::string universe_file;
  std::string attacker_file;
  std::string channel;
  std::string store;
  std::string point;
  std::string cache_dir;
  std::string format = "json";
  std::string mode = "syntactic";
  std::string check;
  std::size_t fuel = 10000;
  std::size_t max_states = 3;
  bool full = false;
  bool counting = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

lang::CommandPtr load_program(const std::string& path) { return lang::parse_program(read_file(path)); }

policy::PolicyFile load_policy(const Options& o) {
  if (o.policy.empty()) return {};
  return policy::load_policy_file(o.policy);
}

std::map<std::string, std::vector<lang::Value>> universe_overrides(const Options& o, const policy::PolicyFile& pf) {
  auto domains = pf.universe;
  if (!o.universe_file.empty()) {
    auto j = nlohmann::json::parse(read_file(o.universe_file));
    if (j.contains("universe")) j = j.at("universe");
    for (const auto& [name, vals] : j.items()) domains[name] = vals.get<std::vector<lang::Value>>();
  }
  return domains;
}

semantics::Store parse_store(const std::string& text, const semantics::StoreUniverse& universe) {
  std::map<std::string, lang::Value> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("store must look like x=0,y=1");
    values[item.substr(0, eq)] = std::stoll(item.substr(eq + 1));
  }
  semantics::Store s(values);
  if (!universe.index_of(s)) throw UsageError("store " + s.to_string() + " is not in the universe");
  return s;
}

void emit(const Options& o, const nlohmann::json& j, const std::string& text) {
  if (o.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

std::string verdict_text(const oracle::Verdict& v, std::size_t fuel) {
  std::ostringstream os;
  os << oracle::to_string(v.outcome) << " (fuel " << fuel << ")";
  if (!v.note.empty()) os << ": " << v.note;
  os << "\n";
  if (const auto& c = v.counterexample) {
    os << "  sigma " << c->sigma.to_string() << " trace " << nlohmann::json(c->sigma_trace).dump() << "\n";
    if (c->rho) os << "  rho   " << c->rho->to_string() << " trace " << nlohmann::json(c->rho_trace).dump() << "\n";
    os << "  at " << c->channel << "@" << c->point << " after " << c->n << " steps, t = " << nlohmann::json(c->t).dump()
       << ", v = " << c->v;
    if (c->v_rho) os << ", rho's value " << *c->v_rho;
    os << "\n";
    if (!c->detail.empty()) os << "  " << c->detail << "\n";
  }
  return os.str();
}

int verdict_exit(const oracle::Verdict& v) { return v.secure() ? 0 : v.insecure() ? 1 : 3; }

typing::DepEnv typing_of(const Options& o, const lang::Command& c) {
  if (o.cache_dir.empty()) return typing::infer(c);
  return checker::TypingCache(o.cache_dir).typing_for(c);
}

int cmd_typecheck(const Options& o) {
  auto c = load_program(o.source);
  auto g = typing_of(o, *c);
  auto report = typing::typing_report(g, !o.full);
  std::ostringstream text;
  for (const char* section : {"variables", "channels", "points"}) {
    for (const auto& [name, deps] : report[section].items()) {
      std::string label = std::string(section) == "channels" ? "#" + name : name;
      text << label << ": {";
      bool first = true;
      for (const auto& d : deps) {
        text << (first ? "" : ", ") << d.get<std::string>();
        first = false;
      }
      text << "}\n";
    }
  }
  emit(o, report, text.str());
  return 0;
}

int cmd_check(const Options& o) {
  auto c = load_program(o.source);
  auto pf = load_policy(o);
  auto approx = pf.approximation(*c);
  auto g = typing_of(o, *c);
  auto mode = o.mode == "exact" ? checker::Mode::Exact : checker::Mode::Syntactic;
  auto universe = policy::universe_for(*c, pf.spec, approx, universe_overrides(o, pf));
  auto report = checker::check_compliance(g, approx, mode, &universe);
  if (mode == checker::Mode::Exact) checker::attach_semantic_witness(report, c, pf.spec, universe, o.fuel);
  emit(o, report.to_json(), report.to_text());
  return report.exit_code();
}

std::string pick_channel(const Options& o, const lang::Command& c) {
  if (!o.channel.empty()) return o.channel;
  auto chans = lang::channels(c);
  if (chans.size() == 1) return *chans.begin();
  throw UsageError("the program has " + std::to_string(chans.size()) + " channels; choose one with --channel");
}

std::shared_ptr<const oracle::AttackerModel> pick_attacker(const Options& o) {
  std::shared_ptr<const oracle::AttackerModel> a;
  if (o.attacker_file.empty())
    a = std::make_shared<oracle::PerfectRecall>();
  else
    a = std::make_shared<oracle::Attacker>(oracle::load_attacker_file(o.attacker_file));
  if (o.counting) a = std::make_shared<oracle::CountingLift>(a);
  return a;
}

int cmd_oracle(const Options& o) {
  auto c = load_program(o.source);
  auto pf = load_policy(o);
  auto approx = pf.approximation(*c);
  auto universe = policy::universe_for(*c, pf.spec, approx, universe_overrides(o, pf));

  if (o.check == "soundness") {
    auto v = oracle::typing_soundness_check(c, typing_of(o, *c), universe, o.fuel);
    emit(o, oracle::to_json(v, o.fuel), verdict_text(v, o.fuel));
    return verdict_exit(v);
  }
  if (o.check == "two-run") {
    auto v = o.channel.empty() ? oracle::two_run_pi_check_all(c, pf.spec, universe, o.fuel)
                               : oracle::two_run_pi_check(c, pf.spec, o.channel, universe, o.fuel);
    emit(o, oracle::to_json(v, o.fuel), verdict_text(v, o.fuel));
    return verdict_exit(v);
  }
  if (o.check == "approx") {
    auto v = oracle::validate_approximation(c, pf.spec, approx, universe, o.fuel);
    emit(o, oracle::to_json(v, o.fuel), verdict_text(v, o.fuel));
    return verdict_exit(v);
  }

  oracle::TraceTable table(c, pick_channel(o, *c), universe, o.fuel, pf.spec.initial);
  if (o.check == "theorem1") {
    std::vector<lang::Value> alphabet;
    for (std::size_t i = 0; i < table.size(); ++i)
      for (auto v : table.trace(i)) alphabet.push_back(v);
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
    auto r = oracle::theorem1_crosscheck(table, oracle::theorem1_family(o.max_states, alphabet));
    std::ostringstream text;
    text << "two-run: " << verdict_text(r.two_run, o.fuel) << "PI over " << r.attackers_checked
         << " attackers: " << verdict_text(r.pi_all, o.fuel);
    if (!r.violating_attacker.empty()) text << "violating attacker: " << r.violating_attacker << "\n";
    text << "agree: " << (r.agree ? (*r.agree ? "yes" : "NO") : "undecided") << "\n";
    emit(o, oracle::to_json(r, o.fuel), text.str());
    return r.agree ? (*r.agree ? 0 : 1) : 3;
  }

  oracle::SecurityNotion notion;
  if (o.check == "kb")
    notion = oracle::SecurityNotion::KB;
  else if (o.check == "acpi")
    notion = oracle::SecurityNotion::ACPI;
  else
    notion = oracle::SecurityNotion::PI;
  auto attacker = pick_attacker(o);
  oracle::Verdict v;
  if (o.store.empty()) {
    v = oracle::security_check_all(notion, *attacker, table);
  } else {
    std::size_t s = *universe.index_of(parse_store(o.store, universe));
    switch (notion) {
      case oracle::SecurityNotion::KB: v = oracle::kb_security_check(*attacker, table, s); break;
      case oracle::SecurityNotion::ACPI: v = oracle::acpi_check(*attacker, table, s); break;
      case oracle::SecurityNotion::PI: v = oracle::pi_check(*attacker, table, s); break;
    }
  }
  auto j = oracle::to_json(v, o.fuel);
  j["attacker"] = attacker->name();
  emit(o, j, "attacker " + attacker->name() + ": " + verdict_text(v, o.fuel));
  return verdict_exit(v);
}

int cmd_explain(const Options& o) {
  auto c = load_program(o.source);
  typing::TypingVar target = typing::TypingVar::parse(o.point);
  auto ex = checker::explain(*c, target);
  auto j = ex.to_json();
  std::string text = ex.to_text();
  if (!o.policy.empty() && target.kind == typing::TypingVar::Kind::Point) {
    auto approx = load_policy(o).approximation(*c);
    auto it = approx.find({target.name, target.point});
    if (it != approx.end()) {
      j["allowed"] = policy::to_json(it->second);
      auto bare = it->second.bare_variables();
      text += "allowed at " + target.to_string() + ":";
      for (const auto& e : it->second.texts()) text += " " + e;
      text += "\n";
      for (const auto& [y, chain] : ex.members)
        if (y.is_variable() && !bare.contains(y.name))
          text += "not allowed: " + y.name + "\n";
    }
  }
  emit(o, j, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flowcheck: dependency typing and dynamic-policy compliance for a small while-language"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--cache", o.cache_dir, "Typing cache directory");
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--fuel", o.fuel, "Step budget per run")->check(CLI::PositiveNumber);
    sub->add_option("--universe", o.universe_file, "JSON file of per-variable value lists")->check(CLI::ExistingFile);
  };

  auto* typecheck = app.add_subcommand("typecheck", "Infer the principal typing of a program");
  typecheck->add_option("source", o.source, "Program file")->required()->check(CLI::ExistingFile);
  typecheck->add_flag("--full", o.full, "Keep pc, channel and point dependencies");
  add_common(typecheck);

  auto* check = app.add_subcommand("check", "Check a program against a dynamic policy");
  check->add_option("source", o.source, "Program file")->required()->check(CLI::ExistingFile);
  check->add_option("policy", o.policy, "Policy file")->required()->check(CLI::ExistingFile);
  check->add_option("--mode", o.mode, "Coarseness test")->check(CLI::IsMember({"syntactic", "exact"}));
  add_common(check);
  add_run(check);

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force semantic checks over a finite store universe");
  oracle_cmd->add_option("check", o.check, "Which check")
      ->required()
      ->check(CLI::IsMember({"two-run", "soundness", "kb", "acpi", "pi", "theorem1", "approx"}));
  oracle_cmd->add_option("source", o.source, "Program file")->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("policy", o.policy, "Policy file")->check(CLI::ExistingFile);
  oracle_cmd->add_option("--attacker", o.attacker_file, "Attacker automaton (JSON); default perfect recall")
      ->check(CLI::ExistingFile);
  oracle_cmd->add_flag("--counting", o.counting, "Use the counting lift of the attacker");
  oracle_cmd->add_option("--channel", o.channel, "Observed channel");
  oracle_cmd->add_option("--store", o.store, "Check one initial store, e.g. x=0,y=1");
  oracle_cmd->add_option("--max-states", o.max_states, "Largest attacker enumerated by theorem1")
      ->check(CLI::Range(1, 4));
  add_common(oracle_cmd);
  add_run(oracle_cmd);

  auto* explain = app.add_subcommand("explain", "Show why a typing variable depends on each member of its set");
  explain->add_option("source", o.source, "Program file")->required()->check(CLI::ExistingFile);
  explain->add_option("point", o.point, "Typing variable: a@p, #a, x or pc")->required();
  explain->add_option("--policy", o.policy, "Policy file; reports which dependencies are not allowed")
      ->check(CLI::ExistingFile);
  add_common(explain);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (check->parsed()) {
      if (o.mode == "exact" && o.policy.empty()) throw UsageError("exact mode needs a policy");
      return cmd_check(o);
    }
    if (typecheck->parsed()) return cmd_typecheck(o);
    if (oracle_cmd->parsed()) return cmd_oracle(o);
    if (explain->parsed()) return cmd_explain(o);
  } catch (const lang::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsageError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
