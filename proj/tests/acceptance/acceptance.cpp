// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "flowcheck/checker.hpp"
#include "random_program.hpp"

using namespace flowcheck;
using namespace flowcheck::lang;
using semantics::Store;
using semantics::StoreUniverse;
using semantics::Trace;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned limits.
constexpr double kTypingSeconds = 1.0;
constexpr double kVerdictSeconds = 1.0;
constexpr std::size_t kCorpusSize = 500;
constexpr std::size_t kFuel = 500;
constexpr double kMaxBoundedFraction = 0.20;
constexpr double kSoundnessSeconds = 300.0;
constexpr double kBridgeSeconds = 600.0;
constexpr std::size_t kCrosscheckPrograms = 30;
constexpr std::size_t kCrosscheckStates = 3;
constexpr double kCrosscheckSeconds = 900.0;
constexpr double kLastValueSeconds = 10.0;
constexpr std::size_t kPropertyPrograms = 120;
constexpr double kMaxSlopeVars = 3.3;
constexpr double kMaxSlopeStatements = 1.3;
constexpr double kComplexitySeconds = 120.0;
constexpr std::uint64_t kCorpusSeed = 20240601;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::filesystem::path corpus_file(const std::string& name) {
  return std::filesystem::path(FLOWCHECK_CORPUS_DIR) / name;
}

CommandPtr load_program(const std::string& name) {
  std::ifstream in(corpus_file(name));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

struct CorpusCase {
  CommandPtr program;
  policy::DynamicPolicySpec spec;
};

std::vector<CorpusCase> random_corpus() {
  testsupport::ProgramGenerator gen(kCorpusSeed);
  std::vector<CorpusCase> out;
  for (std::size_t i = 0; i < kCorpusSize; ++i) {
    auto c = gen.program();
    out.push_back({c, {gen.initial_policy()}});
  }
  return out;
}

int failures = 0;

void report(int n, bool pass, const std::string& what, const std::string& detail) {
  std::printf("criterion %d: %s  %s (%s)\n", n, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

void criterion1() {
  auto t0 = Clock::now();
  auto r = typing::restrict_to_pvars(typing::infer(*load_program("fig3.while")));
  double s = seconds_since(t0);
  auto V = typing::TypingVar::variable;
  bool ok = r.at(V("x")).empty() && r.at(V("y")) == std::set<std::string>{"y", "z"} &&
            r.at(V("z")) == std::set<std::string>{"z"};
  report(1, ok && s < kTypingSeconds, "typing of corpus fig3.while x:{} y:{y,z} z:{z}", fmt("%.4fs", s));
}

void criterion2() {
  struct Case {
    std::string program, policy, point;
    checker::Overall expected;
  };
  std::vector<Case> cases{
      {"introA", "introA", "", checker::Overall::Compliant},
      {"introB", "introB", "a@p3", checker::Overall::Violation},
      {"fig1", "fig1", "", checker::Overall::Compliant},
      {"fig2", "fig2", "a@p2", checker::Overall::Violation},
  };
  bool ok = true;
  double worst = 0;
  std::string detail;
  for (const auto& k : cases) {
    auto t0 = Clock::now();
    auto c = load_program(k.program + ".while");
    auto pf = policy::load_policy_file(corpus_file(k.policy + ".policy"));
    auto r = checker::check_compliance(typing::infer(*c), pf.approximation(*c), checker::Mode::Syntactic);
    worst = std::max(worst, seconds_since(t0));
    bool here = r.overall == k.expected;
    if (!k.point.empty()) {
      bool flagged = false;
      for (const auto& e : r.points)
        if (e.point.to_string() == k.point) flagged = e.verdict == checker::PointVerdict::Violation;
      here = here && flagged;
    }
    detail += k.program + "=" + checker::to_string(r.overall) + " ";
    ok = ok && here;
  }
  report(2, ok && worst < kVerdictSeconds, "corpus compliance verdicts", detail + fmt("worst %.4fs", worst));
}

void criterion3(const std::vector<CorpusCase>& corpus) {
  auto t0 = Clock::now();
  std::size_t insecure = 0, bounded = 0;
  for (const auto& k : corpus) {
    auto u = StoreUniverse::for_program(*k.program);
    auto v = oracle::typing_soundness_check(k.program, typing::infer(*k.program), u, kFuel);
    if (v.insecure()) {
      ++insecure;
      std::printf("  soundness counterexample: %s\n", to_source(*k.program).c_str());
    }
    bounded += v.bounded();
  }
  double s = seconds_since(t0);
  double frac = double(bounded) / double(corpus.size());
  std::ostringstream d;
  d << insecure << " insecure, " << bounded << "/" << corpus.size() << " bounded, " << fmt("%.1fs", s);
  report(3, insecure == 0 && frac < kMaxBoundedFraction && s < kSoundnessSeconds, "typing soundness on random programs",
         d.str());
}

void criterion4(const std::vector<CorpusCase>& corpus) {
  auto t0 = Clock::now();
  std::size_t compliant = 0, violations = 0, bounded = 0;
  for (const auto& k : corpus) {
    auto approx = policy::approximate_policy(*k.program, k.spec);
    auto u = policy::universe_for(*k.program, k.spec, approx);
    auto r = checker::check_compliance(typing::infer(*k.program), approx, checker::Mode::Exact, &u);
    if (r.overall != checker::Overall::Compliant) continue;
    ++compliant;
    auto v = oracle::two_run_pi_check_all(k.program, k.spec, u, kFuel);
    if (v.insecure()) {
      ++violations;
      std::printf("  compliant but insecure: %s\n", to_source(*k.program).c_str());
    }
    bounded += v.bounded();
  }
  double s = seconds_since(t0);
  std::ostringstream d;
  d << compliant << " compliant, " << violations << " insecure, " << bounded << " bounded, " << fmt("%.1fs", s);
  report(4, violations == 0 && compliant > 0 && s < kBridgeSeconds, "compliance implies two-run security", d.str());
}

void criterion5(const std::vector<CorpusCase>& corpus) {
  auto t0 = Clock::now();
  auto family = oracle::theorem1_family(kCrosscheckStates, {0, 1, 2});
  std::size_t checks = 0, disagree = 0, undecided = 0, leaks = 0;
  for (std::size_t i = 0; i < kCrosscheckPrograms && i < corpus.size(); ++i) {
    const auto& k = corpus[i];
    auto u = policy::universe_for(*k.program, k.spec);
    for (const auto& chan : channels(*k.program)) {
      oracle::TraceTable table(k.program, chan, u, kFuel, k.spec.initial);
      auto r = oracle::theorem1_crosscheck(table, family);
      ++checks;
      leaks += r.two_run.insecure();
      if (!r.agree) {
        ++undecided;
      } else if (!*r.agree) {
        ++disagree;
        std::printf("  disagreement on %s channel %s\n", to_source(*k.program).c_str(), chan.c_str());
      }
    }
  }
  double s = seconds_since(t0);
  std::ostringstream d;
  d << family.size() << " attackers, " << checks << " program/channel pairs (" << leaks << " two-run insecure), "
    << disagree << " disagreements, "
    << undecided << " undecided, " << fmt("%.1fs", s);
  report(5, disagree == 0 && checks > 0 && s < kCrosscheckSeconds, "two-run agrees with PI for all attackers", d.str());
}

void criterion6() {
  auto t0 = Clock::now();
  auto c = load_program("example4.while");
  auto pf = policy::load_policy_file(corpus_file("example4.policy"));
  auto attacker = oracle::load_attacker_file(corpus_file("example4.attacker.json"));
  auto u = policy::universe_for(*c, pf.spec, {}, pf.universe);
  oracle::TraceTable table(c, "a", u, 10000, pf.spec.initial);
  auto x0 = u.index_of(Store({{"x", 0}}));
  bool acpi_insecure = x0 && oracle::acpi_check(attacker, table, *x0).insecure();
  bool pi_secure = oracle::security_check_all(oracle::SecurityNotion::PI, attacker, table).secure();
  double s = seconds_since(t0);
  std::string detail = std::string("acpi ") + (acpi_insecure ? "insecure" : "not insecure") + ", pi " +
                       (pi_secure ? "secure" : "not secure") + fmt(", %.3fs", s);
  report(6, acpi_insecure && pi_secure && s < kLastValueSeconds, "last-value attacker on corpus example4.while", detail);
}

void criterion7(const std::vector<CorpusCase>& corpus) {
  using typing::TypingVar;
  std::size_t violations = 0, queries = 0, quasi = 0;
  auto fail = [&](const std::string& what, const CommandPtr& c) {
    ++violations;
    std::printf("  %s: %s\n", what.c_str(), to_source(*c).c_str());
  };
  auto family = oracle::enumerate_attackers(2, {0, 1, 2});
  oracle::PerfectRecall recall;
  oracle::LengthOnly length_only;

  for (std::size_t i = 0; i < kPropertyPrograms && i < corpus.size(); ++i) {
    const auto& k = corpus[i];
    const auto& next = corpus[(i + 1) % corpus.size()];

    // typing properties
    auto ext = seq(k.program, next.program);
    auto tu = typing::VarUniverse::for_program(*ext);
    auto g1 = typing::infer(*k.program, tu);
    auto g = typing::infer(*ext, tu);
    if (g1.at(TypingVar::pc()) != typing::DepSet{TypingVar::pc()}) fail("pc row", k.program);
    for (const auto& x : tu->vars()) {
      if (!g1.depends(x, TypingVar::pc()) && g1.at(x) != typing::DepSet{x}) fail("unassigned row", k.program);
      if (x.kind == TypingVar::Kind::Point || x.kind == TypingVar::Kind::Channel) {
        auto before = g1.at(x), after = g.at(x);
        if (!std::includes(after.begin(), after.end(), before.begin(), before.end()))
          fail("sequential extension", k.program);
      }
    }

    // knowledge properties, channel a
    auto u = policy::universe_for(*k.program, k.spec);
    oracle::TraceTable table(k.program, "a", u, kFuel, k.spec.initial);
    for (std::size_t j = 0; j < family.size(); j += 3) {
      const auto& a = family[j];
      oracle::CountingLift lift(a);
      for (std::size_t s = 0; s < table.size(); ++s) {
        const auto& tr = table.trace(s);
        for (std::size_t len = 0; len <= tr.size(); ++len) {
          Trace t(tr.begin(), tr.begin() + static_cast<std::ptrdiff_t>(len));
          auto ka = oracle::knowledge(*a, table, t);
          auto kw = oracle::knowledge(lift, table, t);
          ++queries;
          for (std::size_t r = 0; r < table.size(); ++r)
            if (kw.contains(r) && !ka.contains(r)) fail("counting lift knows more", k.program);
        }
        if (oracle::acpi_check(lift, table, s).outcome != oracle::pi_check(lift, table, s).outcome)
          fail("acpi != pi for a counting lift", k.program);
      }
    }
    for (std::size_t s = 0; s < table.size(); ++s) {
      for (const oracle::AttackerModel* m : {static_cast<const oracle::AttackerModel*>(&recall),
                                             static_cast<const oracle::AttackerModel*>(&length_only)})
        if (oracle::acpi_check(*m, table, s).outcome != oracle::pi_check(*m, table, s).outcome)
          fail("acpi != pi for " + m->name(), k.program);
    }
    if (oracle::quasi_constant(table)) {
      ++quasi;
      for (const auto& a : family)
        if (oracle::security_check_all(oracle::SecurityNotion::PI, *a, table).insecure())
          fail("quasi-constant but PI insecure", k.program);
    }
  }
  std::ostringstream d;
  d << violations << " violations, " << queries << " knowledge queries, " << quasi << " quasi-constant programs";
  report(7, violations == 0 && queries > 0 && quasi > 0, "property suite", d.str());
}

double min_infer_seconds(const CommandPtr& c) {
  double best = 1e9;
  for (int rep = 0; rep < 5; ++rep) {
    auto t0 = Clock::now();
    auto g = typing::infer(*c);
    best = std::min(best, seconds_since(t0));
    if (g.universe()->size() == 0) std::abort();
  }
  return best;
}

// Least-squares slope of log(time) against log(size).
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double n = double(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double x = std::log(xs[i]), y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void criterion8() {
  auto t0 = Clock::now();
  std::vector<double> vs{4, 8, 16, 32}, tv;
  for (double v : vs) tv.push_back(min_infer_seconds(testsupport::straight_line_program(800, std::size_t(v), 8)));
  std::vector<double> ns{100, 200, 400, 800, 1600}, tn;
  for (double n : ns) tn.push_back(min_infer_seconds(testsupport::straight_line_program(std::size_t(n), 8, 9)));
  double sv = loglog_slope(vs, tv), sn = loglog_slope(ns, tn);
  double s = seconds_since(t0);
  std::ostringstream d;
  d << fmt("slope in v %.2f", sv) << fmt(", slope in n %.2f", sn) << fmt(", %.1fs", s);
  report(8, sv <= kMaxSlopeVars && sn <= kMaxSlopeStatements && s < kComplexitySeconds, "inference scaling", d.str());
}

}  // namespace

int main() {
  auto corpus = random_corpus();
  const std::vector<std::pair<int, std::function<void()>>> criteria{
      {1, criterion1},
      {2, criterion2},
      {3, [&] { criterion3(corpus); }},
      {4, [&] { criterion4(corpus); }},
      {5, [&] { criterion5(corpus); }},
      {6, criterion6},
      {7, [&] { criterion7(corpus); }},
      {8, criterion8},
  };
  for (const auto& [n, run] : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      report(n, false, "exception", e.what());
    }
  }
  return failures == 0 ? 0 : 1;
}
