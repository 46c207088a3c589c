#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "halting.hpp"
#include "helpers.hpp"
#include "transforms.hpp"

#include <random>

using namespace mhfa;
using namespace mhfa::testing;

namespace {

std::vector<std::vector<int>> letter_words_up_to(int sigma, int max_len) {
  std::vector<std::vector<int>> out;
  for (int len = 0; len <= max_len; ++len) {
    std::vector<int> w(static_cast<std::size_t>(len), 0);
    if (len == 0) {
      out.push_back(w);
      continue;
    }
    if (sigma == 0) break;
    while (true) {
      out.push_back(w);
      int i = len - 1;
      while (i >= 0 && w[static_cast<std::size_t>(i)] == sigma - 1) {
        w[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
      ++w[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

Word to_tape_word(const std::vector<int>& letters) {
  Word w;
  for (int a : letters) w.push_back(TapeAlphabet::first_input + a);
  return w;
}

TwoWayAFA random_afa(std::mt19937& rng, int sigma) {
  TwoWayAFA a;
  for (int i = 0; i < sigma; ++i) a.alphabet.input_tokens.push_back(std::string(1, '0' + static_cast<char>(i)));
  const int n = 2 + static_cast<int>(rng() % 4);  // 2..5 states
  for (int q = 0; q < n; ++q) a.state_names.push_back("s" + std::to_string(q));
  a.universal.resize(static_cast<std::size_t>(n));
  a.accepting.resize(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) {
    a.universal[static_cast<std::size_t>(q)] = rng() % 2 == 0;
    a.accepting[static_cast<std::size_t>(q)] = rng() % 4 == 0;
  }
  a.initial = 0;
  const int gamma = sigma + 2;
  for (StateId q = 0; q < n; ++q) {
    if (a.accepting[static_cast<std::size_t>(q)]) continue;
    for (Symbol s = 0; s < gamma; ++s) {
      const int fanout = static_cast<int>(rng() % 3);  // 0..2 alternatives
      for (int f = 0; f < fanout; ++f) {
        AFATransition t;
        t.from = q;
        t.scan = s;
        t.to = static_cast<StateId>(rng() % static_cast<unsigned>(n));
        t.move = static_cast<HeadMove>(rng() % 3);
        a.transitions.push_back(t);
      }
    }
  }
  a.finalize();
  return a;
}

}  // namespace

TEST_CASE("a single accepting state yields the universal language") {
  TwoWayAFA a;
  a.alphabet.input_tokens = {"0", "1"};
  a.state_names = {"ok"};
  a.universal = {true};
  a.accepting = {true};
  a.initial = 0;
  a.finalize();
  OneWayNFA nfa = afa_to_onfa(a);
  auto result = onfa_universal(nfa);
  CHECK(result.universal);
  for (const auto& letters : letter_words_up_to(2, 5)) {
    CHECK(onfa_accepts(nfa, letters));
  }
}

TEST_CASE("the wrapper of the head-1 view converts to an equivalent one-way NFA") {
  MultiHeadNFA m1 = m1_view();
  TwoWayAFA wrapped = halting_wrapper(m1);
  OneWayNFA nfa = afa_to_onfa(wrapped);
  for (const auto& letters : letter_words_up_to(2, 6)) {
    Word w = to_tape_word(letters);
    CHECK(onfa_accepts(nfa, letters) == afa_accepts(wrapped, w));
    CHECK(onfa_accepts(nfa, letters) == always_halts_on(m1, w).first);
  }
  CHECK_FALSE(onfa_accepts(nfa, {0}));
  CHECK_FALSE(onfa_accepts(nfa, {0, 0}));
  CHECK_FALSE(onfa_accepts(nfa, {0, 1}));
  CHECK(onfa_accepts(nfa, {1}));
}

TEST_CASE("conversion agrees with direct evaluation on random alternating automata") {
  std::mt19937 rng(20250810u);
  int converted = 0;
  for (int trial = 0; trial < 220; ++trial) {
    const int sigma = 1 + static_cast<int>(rng() % 2);
    TwoWayAFA a = random_afa(rng, sigma);
    OneWayNFA nfa = afa_to_onfa(a);
    ++converted;
    for (const auto& letters : letter_words_up_to(sigma, 6)) {
      REQUIRE_MESSAGE(onfa_accepts(nfa, letters) == afa_accepts(a, to_tape_word(letters)),
                      "trial " << trial);
    }
  }
  CHECK(converted == 220);
}

TEST_CASE("a genuinely two-way machine survives the one-way conversion") {
  // Accepts nonempty words whose first and last symbols agree: sweep right,
  // bounce off the right marker, compare. Deterministic and always halting.
  MultiHeadNFA m = parse_machine(
      "automaton firstlast\nheads 1\nalphabet 0 1\n"
      "states q0 qs s0 s1 e0 e1 qacc qrej\n"
      "initial q0\naccept qacc\nreject qrej\n"
      "trans q0 ^ -> qs R\n"
      "trans qs $ -> qrej S\n"
      "trans qs 0 -> s0 R\ntrans qs 1 -> s1 R\n"
      "trans s0 0 -> s0 R\ntrans s0 1 -> s0 R\ntrans s0 $ -> e0 L\n"
      "trans s1 0 -> s1 R\ntrans s1 1 -> s1 R\ntrans s1 $ -> e1 L\n"
      "trans e0 0 -> qacc S\ntrans e0 1 -> qrej S\n"
      "trans e1 1 -> qacc S\ntrans e1 0 -> qrej S\n");
  CHECK(head_is_safe(m, 1).safe);

  // The conversion applied to the machine itself (as an all-existential
  // alternating automaton) yields a one-way NFA for the same language.
  OneWayNFA nfa = afa_to_onfa(afa_from_nfa(m));
  for (const auto& letters : letter_words_up_to(2, 7)) {
    bool expected = letters.size() >= 1 && letters.front() == letters.back();
    CHECK(onfa_accepts(nfa, letters) == expected);
    CHECK(accepts(m, to_tape_word(letters)).member == expected);
  }
}

TEST_CASE("universality search returns shortest lexicographically least witnesses") {
  SUBCASE("words that do not start with 0") {
    OneWayNFA n;
    n.sigma_tokens = {"0", "1"};
    n.num_states = 3;  // 0 = start, 1 = seen-1-first, 2 = dead
    n.initial = {0};
    n.accepting = {true, true, false};
    n.delta = {{2}, {1}, {1}, {1}, {2}, {2}};
    auto result = onfa_universal(n);
    CHECK_FALSE(result.universal);
    REQUIRE(result.counterexample.has_value());
    CHECK(*result.counterexample == std::vector<int>{0});
  }
  SUBCASE("witnesses are genuinely rejected") {
    std::mt19937 rng(5u);
    for (int trial = 0; trial < 80; ++trial) {
      OneWayNFA n;
      n.sigma_tokens = {"0", "1"};
      n.num_states = 1 + static_cast<int>(rng() % 3);
      n.initial = {0};
      for (int q = 0; q < n.num_states; ++q) n.accepting.push_back(rng() % 2 == 0);
      n.delta.resize(static_cast<std::size_t>(n.num_states) * 2);
      for (auto& targets : n.delta) {
        const int fanout = static_cast<int>(rng() % 3);
        for (int f = 0; f < fanout; ++f) targets.push_back(static_cast<int>(rng() % static_cast<unsigned>(n.num_states)));
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      }
      auto result = onfa_universal(n);
      if (result.universal) {
        for (const auto& letters : letter_words_up_to(2, 5)) CHECK(onfa_accepts(n, letters));
      } else {
        REQUIRE(result.counterexample.has_value());
        CHECK_FALSE(onfa_accepts(n, *result.counterexample));
        // No rejected word is shorter.
        for (const auto& letters : letter_words_up_to(2, static_cast<int>(result.counterexample->size()) - 1)) {
          CHECK(onfa_accepts(n, letters));
        }
      }
    }
  }
}

TEST_CASE("head safety on the running example") {
  MultiHeadNFA m = anbn();
  SUBCASE("head 1 is risky with the shortest loop input as evidence") {
    SafetyResult r = head_is_safe(m, 1);
    CHECK_FALSE(r.safe);
    REQUIRE(r.counterexample.has_value());
    CHECK(*r.counterexample == word(m, "0"));
    auto [halts, witness] = always_halts_on(project_head(m, 1), *r.counterexample);
    CHECK_FALSE(halts);
    CHECK(witness.has_value());
  }
  SUBCASE("head 2 is safe") {
    CHECK(head_is_safe(m, 2).safe);
  }
  SUBCASE("a timer head is certified safe by the pipeline") {
    MultiHeadNFA timed = add_timer_head(m, 2);
    CHECK(head_is_safe(timed, 3).safe);
    CHECK_FALSE(head_is_safe(timed, 1).safe);
  }
}

TEST_CASE("the lockstep machine has only safe heads") {
  MultiHeadNFA m = anbn_lockstep();
  CHECK(head_is_safe(m, 1).safe);
  CHECK(head_is_safe(m, 2).safe);
  CHECK_FALSE(find_loop_witness(project_head(m, 1), 6).has_value());
  CHECK_FALSE(find_loop_witness(project_head(m, 2), 6).has_value());
  // It recognizes the same language as the fixture with a risky head.
  for (const Word& w : words_up_to(m, 10)) {
    CHECK(accepts(m, w).member == is_anbn_member(w));
  }
  // Progress on every step keeps every run inside the linear bound.
  for (const Word& w : words_up_to(m, 6)) {
    auto steps = max_run_steps(m, w);
    REQUIRE(steps.has_value());
    CHECK(*steps <= static_cast<std::uint64_t>(m.state_count()) * (w.size() + 2));
  }
}

TEST_CASE("bounded loop search") {
  SUBCASE("finds the shortest loop input for the head-1 view") {
    auto witness = find_loop_witness(m1_view(), 3);
    REQUIRE(witness.has_value());
    CHECK(witness->first == word(m1_view(), "0"));
    CHECK(witness->second.entry.state == *m1_view().find_state("q1"));
  }
  SUBCASE("finds nothing for the always-halting view") {
    CHECK_FALSE(find_loop_witness(m2_view(), 6).has_value());
  }
  SUBCASE("a loop reachable on the empty input needs max_len 0") {
    auto witness = find_loop_witness(spin(), 0);
    REQUIRE(witness.has_value());
    CHECK(witness->first.empty());
  }
}

TEST_CASE("pipeline and bounded oracle never contradict on small unary machines") {
  // All 1-head machines over {0} with one non-terminal state and at most two
  // transitions; the full two-state corpus runs in the acceptance suite.
  std::vector<std::string> states{"q0"};
  struct Atom {
    std::string sym;
    std::string to;
    char move;
  };
  std::vector<Atom> atoms;
  for (const std::string& sym : {"^", "$", "0"}) {
    for (const std::string& to : {"q0", "qacc", "qrej"}) {
      for (char mv : {'L', 'S', 'R'}) atoms.push_back({sym, to, mv});
    }
  }
  int checked = 0;
  auto build = [&](const std::vector<int>& chosen) {
    std::ostringstream text;
    text << "automaton c\nheads 1\nalphabet 0\nstates q0 qacc qrej\n"
         << "initial q0\naccept qacc\nreject qrej\n";
    for (int i : chosen) {
      const Atom& a = atoms[static_cast<std::size_t>(i)];
      text << "trans q0 " << a.sym << " -> " << a.to << ' ' << a.move << "\n";
    }
    return parse_machine(text.str());
  };
  const int total = static_cast<int>(atoms.size());
  for (int i = 0; i < total; ++i) {
    for (int j = i; j < total; ++j) {
      MultiHeadNFA m = build(i == j ? std::vector<int>{i} : std::vector<int>{i, j});
      bool safe = head_is_safe(m, 1).safe;
      auto witness = find_loop_witness(m, 6);
      if (witness) CHECK_FALSE(safe);
      if (safe) CHECK_FALSE(witness.has_value());
      ++checked;
    }
  }
  CHECK(checked == total * (total + 1) / 2);
}

TEST_CASE("budget caps raise explicit errors") {
  HaltingOptions tight;
  tight.afa_state_cap = 2;
  CHECK_THROWS_AS(afa_to_onfa(halting_wrapper(m1_view()), tight), BudgetError);
  HaltingOptions starved;
  starved.nfa_state_cap = 1;
  CHECK_THROWS_AS(head_is_safe(anbn(), 2, starved), BudgetError);
}

TEST_CASE("a machine with a safe head runs at most |Q|(n+2) steps") {
  MultiHeadNFA m = anbn();
  REQUIRE(head_is_safe(m, 2).safe);
  for (const Word& w : words_up_to(m, 6)) {
    auto steps = max_run_steps(m, w);
    REQUIRE(steps.has_value());
    CHECK(*steps <= static_cast<std::uint64_t>(m.state_count()) * (w.size() + 2));
  }
  // The same bound holds for the timer-augmented machine through its timer.
  MultiHeadNFA timed = add_timer_head(m, 2);
  REQUIRE(head_is_safe(timed, 3).safe);
  for (const Word& w : words_up_to(m, 5)) {
    auto steps = max_run_steps(timed, w);
    REQUIRE(steps.has_value());
    CHECK(*steps <= static_cast<std::uint64_t>(timed.state_count()) * (w.size() + 2));
  }
}
