// Acceptance suite: every criterion below runs exactly as stated, with exact
// rational comparisons where exactness is claimed, and prints one PASS/FAIL
// line. The process exits nonzero if any criterion fails.

#include "halting.hpp"
#include "helpers.hpp"
#include "ips.hpp"
#include "ntmsim.hpp"
#include "report.hpp"
#include "transforms.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

using namespace mhfa;
using namespace mhfa::testing;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw Failure(message);
}

Rational q(long num, long den) { return Rational(num, den); }

HeadClassification anbn_heads() {
  HeadClassification c;
  c.safe = {2};
  c.risky = {1};
  return c;
}

// --- criterion 1: fixture fidelity -----------------------------------------

void criterion_fixtures() {
  MultiHeadNFA m = anbn();
  require(same_machine(project_head(m, 1), m1_view()),
          "projection of head 1 must equal the m1 fixture in canonical form");
  require(same_machine(project_head(m, 2), m2_view()),
          "projection of head 2 must equal the m2 fixture in canonical form");
  std::vector<HeadSafety> rows;
  for (int head = 1; head <= 2; ++head) {
    SafetyResult s = head_is_safe(m, head);
    rows.push_back({head, s.safe, s.counterexample});
  }
  require(!rows[0].safe && rows[1].safe, "analysis must report head 1 risky, head 2 safe");
  ReportOptions opts;
  std::string text = report_analysis(m, rows, opts);
  require(text.rfind("head 1: risky", 0) == 0 && text.find("head 2: safe") != std::string::npos,
          "safety report format");
}

// --- criterion 2: completeness ----------------------------------------------

void criterion_completeness() {
  MultiHeadNFA m = anbn();
  VerifierSpec v = build_verifier(m, anbn_heads(), VerifierMode::GB, 5, q(1, 4));
  for (int i = 0; 2 * i <= 12; ++i) {
    Word x;
    for (int j = 0; j < i; ++j) x.push_back(TapeAlphabet::first_input);
    for (int j = 0; j < i; ++j) x.push_back(TapeAlphabet::first_input + 1);
    auto cert = honest_certificate(m, x, v.rounds);
    require(cert.has_value(), "members up to length 12 must have honest certificates");
    OutcomeDistribution d = outcome_distribution(v, x, *cert);
    require(d.accept == 1, "honest acceptance must be exactly 1 at length " +
                               std::to_string(2 * i));
  }
}

// --- criterion 3: soundness and the two error bounds -------------------------

void criterion_soundness() {
  MultiHeadNFA m = anbn();
  for (int rounds : {2, 5}) {
    VerifierSpec v = build_verifier(m, anbn_heads(), VerifierMode::GB, rounds, q(1, 4));
    const Rational accept_bound = rational_pow(q(3, 4), static_cast<unsigned>(rounds));
    for (const Word& x : words_up_to(m, 8)) {
      if (accepts(m, x).member) continue;
      AdversaryResult adv = best_adversarial_certificate(v, x);
      require(adv.distribution.accept <= accept_bound,
              "false-accept probability must stay within (3/4)^C");
      require(adv.distribution.loop <= q(1, 4), "loop probability must stay within w");
    }
    ErrorSweepReport sweep = strong_error_sweep(v, 8);
    if (rounds == 2) {
      require(sweep.strong_error == q(9, 16), "strong error for C=2 must be exactly 9/16");
    } else {
      require(sweep.strong_error == q(1, 4), "strong error for C=5 must be exactly 1/4");
    }
  }
}

// --- criterion 4: arbitrarily small strong error ------------------------------

void criterion_arbitrary_error() {
  MultiHeadNFA m = anbn();
  for (const Rational& eps : {q(1, 4), q(1, 8)}) {
    ParameterChoice p = choose_parameters(anbn_heads(), eps);
    VerifierSpec v =
        build_verifier(m, anbn_heads(), VerifierMode::GB, p.rounds, p.risky_weight);
    ErrorSweepReport sweep = strong_error_sweep(v, 8);
    require(sweep.strong_error <= eps, "measured strong error must stay within epsilon");
    require(sweep.strong_error == eps,
            "looping adversaries attain epsilon exactly on this machine");
  }
}

// --- criterion 5: the SYW gap between weak and strong error --------------------

void criterion_syw_gap() {
  MultiHeadNFA m = anbn();
  const int rounds = 3;
  VerifierSpec v = build_verifier(m, anbn_heads(), VerifierMode::SYW, rounds, 0);
  ErrorSweepReport sweep = strong_error_sweep(v, 8);
  require(sweep.strong_error >= q(1, 2), "a looping certificate must cost at least 1/2");
  require(sweep.weak_error <= rational_pow(q(1, 2), rounds),
          "weak error must stay within (1/2)^C");
  bool loop_attained = false;
  for (const Word& x : words_up_to(m, 4)) {
    if (accepts(m, x).member) continue;
    AdversaryResult adv = best_adversarial_certificate(v, x);
    if (!adv.certificate.cycle.empty() && adv.distribution.loop >= q(1, 2)) loop_attained = true;
  }
  require(loop_attained, "the 1/2 strong error must come from a looping certificate");
}

// --- criterion 6: closed form versus hardwired-coin enumeration -----------------

void criterion_oracle_equivalence() {
  MultiHeadNFA m = anbn();
  std::vector<VerifierSpec> verifiers;
  verifiers.push_back(build_verifier(m, anbn_heads(), VerifierMode::GB, 2, q(1, 4)));
  verifiers.push_back(build_verifier(m, anbn_heads(), VerifierMode::SYW, 3, 0));
  verifiers.push_back(build_verifier(m, anbn_heads(), VerifierMode::SYS, 2, 0));

  auto sym = [&](const char* t) { return *m.alphabet.find(t); };
  StateId q1 = *m.find_state("q1");
  Certificate lying;
  for (int r = 0; r < 3; ++r) {
    lying.prefix.push_back({{sym("^"), sym("^")}, q1, {HeadMove::right, HeadMove::right}});
    lying.prefix.push_back({{sym("0"), sym("0")}, q1, {HeadMove::stay, HeadMove::right}});
    lying.prefix.push_back({{sym("0"), sym("0")}, q1, {HeadMove::stay, HeadMove::right}});
    lying.prefix.push_back({{sym("$"), sym("$")}, m.accept, {HeadMove::stay, HeadMove::stay}});
  }
  Certificate lasso;
  lasso.prefix.push_back({{sym("^"), sym("^")}, q1, {HeadMove::right, HeadMove::right}});
  lasso.cycle.push_back({{sym("0"), sym("0")}, q1, {HeadMove::stay, HeadMove::right}});
  Certificate truncated;
  truncated.prefix.assign(lying.prefix.begin(), lying.prefix.begin() + 4);
  Certificate invalid;
  invalid.prefix.push_back({{sym("0"), sym("0")}, q1, {HeadMove::stay, HeadMove::right}});

  int pairs = 0;
  for (const auto& v : verifiers) {
    for (const std::string& input : {"", "0", "00", "11", "0011"}) {
      Word x = parse_input(m, input);
      std::vector<Certificate> certs{lying, lasso, truncated, invalid, Certificate{}};
      if (auto honest = honest_certificate(m, x, 3)) certs.push_back(std::move(*honest));
      for (const auto& cert : certs) {
        OutcomeDistribution closed = outcome_distribution(v, x, cert);
        OutcomeDistribution brute = enumerate_distribution(v, x, cert);
        require(closed.accept == brute.accept && closed.reject == brute.reject &&
                    closed.loop == brute.loop,
                "closed form must equal the uniform average over hardwired coin strings");
        require(closed.accept + closed.reject + closed.loop == 1, "normalization");
        ++pairs;
      }
    }
  }
  require(pairs >= 50, "the grid must cover at least 50 (input, certificate) pairs, had " +
                           std::to_string(pairs));
}

// --- criterion 7: safety pipeline versus the bounded loop oracle -----------------

struct CorpusAtom {
  int src;
  std::string sym;
  std::string to;
  char move;
};

MultiHeadNFA corpus_machine(const std::vector<CorpusAtom>& atoms, bool binary) {
  std::ostringstream text;
  text << "automaton c\nheads 1\nalphabet 0";
  if (binary) text << " 1";
  text << "\nstates q0 q1 qacc qrej\ninitial q0\naccept qacc\nreject qrej\n";
  for (const auto& a : atoms) {
    text << "trans q" << a.src << ' ' << a.sym << " -> " << a.to << ' ' << a.move << "\n";
  }
  return parse_machine(text.str());
}

void check_corpus_machine(const MultiHeadNFA& m) {
  SafetyResult safety = head_is_safe(m, 1);
  auto witness = find_loop_witness(m, 6);
  if (witness.has_value()) {
    require(!safety.safe, "the pipeline must call a head with a loop witness risky");
  }
  if (!safety.safe) {
    require(safety.counterexample.has_value(), "risky verdicts must carry an input");
    auto [halts, lasso] = always_halts_on(m, *safety.counterexample);
    require(!halts && lasso.has_value(), "the risky input must produce a lasso");
    // Replay the lasso step by step.
    Configuration c = initial_configuration(m);
    const Word& x = *safety.counterexample;
    auto advance = [&](const PathStep& step) {
      require(step.config == c, "lasso replay must follow real configurations");
      for (auto& [next, tid] : successors(m, x, c)) {
        if (tid == step.transition) {
          c = next;
          return;
        }
      }
      throw Failure("lasso step is not offered by the transition relation");
    };
    for (const auto& step : lasso->stem) advance(step);
    require(c == lasso->entry, "lasso stem must reach the cycle entry");
    for (const auto& step : lasso->cycle) advance(step);
    require(c == lasso->entry, "lasso cycle must close");
  }
}

void criterion_halting_corpus() {
  // Exhaustive: every machine over the unary alphabet with two non-terminal
  // states and at most three transitions.
  std::vector<CorpusAtom> atoms;
  for (int src : {0, 1}) {
    for (const std::string& sym : {"^", "$", "0"}) {
      for (const std::string& to : {"q0", "q1", "qacc", "qrej"}) {
        for (char mv : {'L', 'S', 'R'}) atoms.push_back({src, sym, to, mv});
      }
    }
  }
  const int total = static_cast<int>(atoms.size());
  long machines = 0;
  for (int i = 0; i < total; ++i) {
    check_corpus_machine(corpus_machine({atoms[static_cast<std::size_t>(i)]}, false));
    ++machines;
  }
  for (int i = 0; i < total; ++i) {
    for (int j = i + 1; j < total; ++j) {
      check_corpus_machine(corpus_machine(
          {atoms[static_cast<std::size_t>(i)], atoms[static_cast<std::size_t>(j)]}, false));
      ++machines;
    }
  }
  for (int i = 0; i < total; ++i) {
    for (int j = i + 1; j < total; ++j) {
      for (int k = j + 1; k < total; ++k) {
        check_corpus_machine(corpus_machine({atoms[static_cast<std::size_t>(i)],
                                             atoms[static_cast<std::size_t>(j)],
                                             atoms[static_cast<std::size_t>(k)]},
                                            false));
        ++machines;
      }
    }
  }

  // Sampled: one hundred binary-alphabet machines with up to six transitions.
  std::vector<CorpusAtom> binary_atoms;
  for (int src : {0, 1}) {
    for (const std::string& sym : {"^", "$", "0", "1"}) {
      for (const std::string& to : {"q0", "q1", "qacc", "qrej"}) {
        for (char mv : {'L', 'S', 'R'}) binary_atoms.push_back({src, sym, to, mv});
      }
    }
  }
  std::mt19937 rng(20250810u);
  for (int sample = 0; sample < 100; ++sample) {
    std::vector<CorpusAtom> chosen;
    const int count = 3 + static_cast<int>(rng() % 4);
    for (int c = 0; c < count; ++c) {
      chosen.push_back(binary_atoms[rng() % binary_atoms.size()]);
    }
    check_corpus_machine(corpus_machine(chosen, true));
    ++machines;
  }
  require(machines > 60000, "the exhaustive corpus must cover all bounded machines, had " +
                                std::to_string(machines));
}

// --- criterion 8: transform correctness --------------------------------------------

void criterion_transforms() {
  MultiHeadNFA m = anbn();
  MultiHeadNFA timed = add_timer_head(m, 2);
  for (const Word& x : words_up_to(m, 10)) {
    require(accepts(timed, x).member == accepts(m, x).member,
            "timer transform must preserve verdicts up to length 10");
  }
  require(head_is_safe(timed, timed.heads).safe, "the timer head must be certified safe");

  MultiHeadNFA m1 = m1_view();
  MultiHeadNFA counted = add_counter_heads(m1);
  for (const Word& x : words_up_to(m1, 10)) {
    require(accepts(counted, x).member == accepts(m1, x).member,
            "counter transform must preserve verdicts up to length 10");
  }
  for (const Word& x : words_up_to(m1, 8)) {
    require(always_halts_on(counted, x).first,
            "counter-augmented machines must halt on every path up to length 8");
  }
}

// --- criterion 9: the tape simulation ------------------------------------------------

void criterion_tape_simulation() {
  MultiHeadNFA m = anbn();

  auto member_word = [&](int n) {
    Word w;
    for (int i = 0; i < n / 2; ++i) w.push_back(TapeAlphabet::first_input);
    for (int i = n / 2; i < n; ++i) w.push_back(TapeAlphabet::first_input + 1);
    return w;
  };
  auto replay_outcome = [&](const MultiHeadNFA& machine, const Word& x,
                            const std::vector<int>& path) {
    Configuration c = initial_configuration(machine);
    std::size_t next = 0;
    while (true) {
      if (c.state == machine.accept) return SimOutcome::accept;
      if (c.state == machine.reject) return SimOutcome::reject;
      auto succ = successors(machine, x, c);
      int tid = -1;
      if (next < path.size()) {
        tid = path[next++];
      } else if (succ.size() == 1) {
        tid = succ[0].second;
      } else {
        return SimOutcome::stuck;
      }
      bool advanced = false;
      for (auto& [cand, t] : succ) {
        if (t == tid) {
          c = cand;
          advanced = true;
          break;
        }
      }
      if (!advanced) return SimOutcome::stuck;
    }
  };
  auto check_equivalence = [&](const MultiHeadNFA& machine, const Word& x) {
    RunResult r = accepts(machine, x);
    std::vector<int> path;
    if (r.member) {
      for (const auto& step : *r.accepting_path) path.push_back(step.transition);
    }
    SimResult sim = simulate(machine, x, path);
    require(sim.outcome == replay_outcome(machine, x, path),
            "tape simulation must match direct replay");
    if (sim.stats.min_recache_gap > 0) {
      require(sim.stats.min_recache_gap >= static_cast<std::uint64_t>(sim.stats.window / 2),
              "re-caches of one cache must be at least floor(W/2) steps apart");
    }
  };

  for (int n : {2, 4, 8, 16, 32, 64, 128}) check_equivalence(m, member_word(n));
  for (int n : {3, 9, 33, 127}) {
    check_equivalence(m, Word(static_cast<std::size_t>(n), TapeAlphabet::first_input));
  }
  {
    Word mixed = member_word(126);
    mixed.push_back(TapeAlphabet::first_input);  // length 127 nonmember
    check_equivalence(m, mixed);
  }
  MultiHeadNFA m2 = m2_view();
  for (int n : {1, 17, 128}) {
    check_equivalence(m2, Word(static_cast<std::size_t>(n), TapeAlphabet::first_input));
  }
  MultiHeadNFA lockstep = anbn_lockstep();
  for (int n : {2, 16, 128}) check_equivalence(lockstep, member_word(n));
  check_equivalence(lockstep, Word(5, TapeAlphabet::first_input));
  MultiHeadNFA timed_spin = add_timer_head(spin(), 1);
  for (int n : {0, 5, 64}) {
    check_equivalence(timed_spin, Word(static_cast<std::size_t>(n), TapeAlphabet::first_input));
  }

  ScalingReport scaling = scaling_report(m, {16, 32, 64, 128},
                                         [&](int n) { return member_word(n); });
  double lo = scaling.rows[0].ratio, hi = scaling.rows[0].ratio;
  for (const auto& row : scaling.rows) {
    lo = std::min(lo, row.ratio);
    hi = std::max(hi, row.ratio);
  }
  require(hi / lo <= 4.0, "normalized cost must stay within a factor 4 across the sweep");
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<void()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "fixture fidelity (projections and safety analysis)", criterion_fixtures},
      {2, "completeness: honest certificates accepted with probability 1", criterion_completeness},
      {3, "soundness: false-accept and loop bounds, exact strong errors", criterion_soundness},
      {4, "arbitrarily small strong error via parameter choice", criterion_arbitrary_error},
      {5, "weak/strong error gap of the uniform-choice verifier", criterion_syw_gap},
      {6, "closed-form distributions equal hardwired-coin enumeration", criterion_oracle_equivalence},
      {7, "safety pipeline agrees with the bounded loop oracle on the corpus", criterion_halting_corpus},
      {8, "timer and counter transforms preserve verdicts and halt", criterion_transforms},
      {9, "tape simulation: equivalence, re-cache spacing, bounded cost", criterion_tape_simulation},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string verdict = "PASS";
    std::string detail;
    try {
      criterion.run();
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = e.what();
      ++failures;
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    std::cout << "criterion " << criterion.number << ": " << verdict << " (" << elapsed
              << " ms) - " << criterion.name;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << std::endl;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all 9 criteria passed" << std::endl;
  return 0;
}
