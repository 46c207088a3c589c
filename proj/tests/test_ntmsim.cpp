#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "ntmsim.hpp"
#include "transforms.hpp"

using namespace mhfa;
using namespace mhfa::testing;

namespace {

SimOutcome direct_replay(const MultiHeadNFA& m, const Word& x, const std::vector<int>& path) {
  Configuration c = initial_configuration(m);
  std::size_t next = 0;
  while (true) {
    if (c.state == m.accept) return SimOutcome::accept;
    if (c.state == m.reject) return SimOutcome::reject;
    auto succ = successors(m, x, c);
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
}

std::vector<int> accepting_path(const MultiHeadNFA& m, const Word& x) {
  RunResult r = accepts(m, x);
  std::vector<int> path;
  if (r.member) {
    for (const auto& step : *r.accepting_path) path.push_back(step.transition);
  }
  return path;
}

}  // namespace

TEST_CASE("tape simulation matches direct replay on the running example") {
  MultiHeadNFA m = anbn();
  for (const std::string& text : {"", "01", "0011", "001", "10", "000111", "0101"}) {
    Word x = word(m, text);
    std::vector<int> path = accepting_path(m, x);
    SimResult sim = simulate(m, x, path);
    CHECK(sim.outcome == direct_replay(m, x, path));
    CHECK(sim.stats.simulated_steps <= sim.stats.work_moves);
  }
}

TEST_CASE("members accept with the logged number of steps") {
  MultiHeadNFA m = anbn();
  Word x = word(m, "0011");
  SimResult sim = simulate(m, x, accepting_path(m, x));
  CHECK(sim.outcome == SimOutcome::accept);
  CHECK(sim.stats.simulated_steps == 6);
  CHECK(sim.stats.work_moves ==
        sim.stats.init_moves + sim.stats.read_moves + sim.stats.move_moves +
            sim.stats.recache_moves);
}

TEST_CASE("a timed-out looping machine rejects through the tape machinery") {
  MultiHeadNFA timed = add_timer_head(spin(), 1);
  for (const std::string& text : {"", "0", "00", "111"}) {
    Word x = word(timed, text);
    SimResult sim = simulate(timed, x, {});
    CHECK(sim.outcome == SimOutcome::reject);
    CHECK(sim.stats.simulated_steps == x.size() + 2);
  }
}

TEST_CASE("short inputs are fully cached and never re-cached") {
  MultiHeadNFA m = anbn();
  Word x = word(m, "01");  // window 4 covers the whole marked tape
  SimResult sim = simulate(m, x, accepting_path(m, x));
  CHECK(sim.outcome == SimOutcome::accept);
  CHECK(sim.stats.window >= static_cast<int>(x.size()) + 2);
  for (auto count : sim.stats.recaches_per_head) CHECK(count == 0);
}

TEST_CASE("re-cache accounting obeys the spacing and count bounds") {
  MultiHeadNFA m = anbn();
  for (int n : {16, 32, 64}) {
    Word x;
    for (int i = 0; i < n / 2; ++i) x.push_back(TapeAlphabet::first_input);
    for (int i = 0; i < n / 2; ++i) x.push_back(TapeAlphabet::first_input + 1);
    SimResult sim = simulate(m, x, accepting_path(m, x));
    CHECK(sim.outcome == SimOutcome::accept);
    const int w = sim.stats.window;
    if (sim.stats.min_recache_gap > 0) {
      CHECK(sim.stats.min_recache_gap >= static_cast<std::uint64_t>(w / 2));
    }
    for (auto count : sim.stats.recaches_per_head) {
      CHECK(count <= 2 * sim.stats.simulated_steps / static_cast<std::uint64_t>(w / 2) + 1);
    }
    // Space audit: the work tape stays within the window plus delimiters.
    CHECK(sim.stats.tape_cells <=
          2 * static_cast<std::size_t>(std::max(w, sim.stats.counter_bits)) + 4);
  }
}

TEST_CASE("trace lines carry step, state, heads and re-cache columns") {
  MultiHeadNFA m = anbn();
  Word x = word(m, "0011");
  SimOptions opts;
  opts.want_trace = true;
  SimResult sim = simulate(m, x, accepting_path(m, x), opts);
  REQUIRE(sim.trace.size() == 6);
  CHECK(sim.trace[0] == "step 1 state q1 heads 1 1 recache -");
  CHECK(sim.trace[3] == "step 4 state q2 heads 2 4 recache 2");
}

TEST_CASE("invalid paths are reported") {
  MultiHeadNFA m = anbn();
  Word x = word(m, "0011");
  CHECK_THROWS_AS(simulate(m, x, {5}), std::invalid_argument);
}

TEST_CASE("step budgets raise explicit errors") {
  MultiHeadNFA m = anbn();
  Word x = word(m, "0011");
  SimOptions opts;
  opts.step_budget = 10;
  CHECK_THROWS_AS(simulate(m, x, accepting_path(m, x), opts), BudgetError);
}

TEST_CASE("exhaustive mode decides small inputs like the configuration search") {
  MultiHeadNFA m = anbn();
  for (const Word& w : words_up_to(m, 6)) {
    CHECK(simulate_exhaustive(m, w) == accepts(m, w).member);
  }
  // A machine that loops forever still terminates via the visited set.
  MultiHeadNFA looping = spin();
  CHECK_FALSE(simulate_exhaustive(looping, word(looping, "00")));
  CHECK_THROWS_AS(simulate_exhaustive(m, Word(13, TapeAlphabet::first_input)),
                  std::invalid_argument);
}

TEST_CASE("scaling sweeps report bounded normalized cost") {
  MultiHeadNFA m = anbn();
  auto generator = [](int n) {
    Word w;
    for (int i = 0; i < n / 2; ++i) w.push_back(TapeAlphabet::first_input);
    for (int i = n / 2; i < n; ++i) w.push_back(TapeAlphabet::first_input + 1);
    return w;
  };
  ScalingReport report = scaling_report(m, {16, 32, 64, 128}, generator);
  REQUIRE(report.rows.size() == 4);
  double lo = report.rows[0].ratio, hi = report.rows[0].ratio;
  for (const auto& row : report.rows) {
    CHECK(row.ratio > 0.0);
    lo = std::min(lo, row.ratio);
    hi = std::max(hi, row.ratio);
  }
  CHECK(hi / lo <= 4.0);

  CHECK_THROWS_AS(scaling_report(m, {5}, generator), std::invalid_argument);  // nonmember length
}
