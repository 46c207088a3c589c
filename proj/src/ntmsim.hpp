#ifndef MHFA_NTMSIM_HPP
#define MHFA_NTMSIM_HPP

#include "automata.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mhfa {

/// Work-tape machine that runs a k-head automaton through 2k+1 tracks:
/// one binary position counter and one log-width symbol cache per head
/// (each cache holding a marked window of the input between `#` delimiters)
/// plus a shared middle-marker track.

struct SimStats {
  std::uint64_t simulated_steps = 0;
  std::uint64_t work_moves = 0;  // work-tape head motions, the cost unit
  std::uint64_t input_moves = 0;
  std::uint64_t init_moves = 0;
  std::uint64_t read_moves = 0;
  std::uint64_t move_moves = 0;
  std::uint64_t recache_moves = 0;
  std::vector<std::uint64_t> recaches_per_head;
  std::uint64_t min_recache_gap = 0;  // least simulated steps between re-caches
                                      // of one cache; 0 when under two re-caches
  int window = 0;                     // cache width W
  int counter_bits = 0;
  std::size_t tape_cells = 0;
};

enum class SimOutcome { accept, reject, stuck };

struct SimResult {
  SimOutcome outcome = SimOutcome::stuck;
  SimStats stats;
  std::vector<std::string> trace;  // one line per simulated step, when requested
};

struct SimOptions {
  std::uint64_t step_budget = 50'000'000;  // work moves
  bool want_trace = false;
};

/// Runs the machine on x along an explicit resolution of the nondeterministic
/// choices: each simulated step consumes the next transition id from `path`;
/// once the path is exhausted, steps with a unique alternative continue and
/// a branching point stops the run as `stuck`. The outcome always equals the
/// direct replay of the same choices on the automaton.
/// Throws std::invalid_argument when a path entry is not offered by the
/// transition relation, BudgetError past the step budget.
SimResult simulate(const MultiHeadNFA& m, const Word& x, const std::vector<int>& path,
                   const SimOptions& opts = {});

/// Exhaustive nondeterministic acceptance through the tape machinery, for
/// desk-size inputs only (|x| <= 12).
bool simulate_exhaustive(const MultiHeadNFA& m, const Word& x, const SimOptions& opts = {});

struct ScalingRow {
  int n = 0;
  std::uint64_t simulated_steps = 0;
  std::uint64_t work_moves = 0;
  std::uint64_t recaches = 0;
  double ratio = 0.0;  // work_moves * log2(n) / n^2
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
};

/// Runs the accepting path found by accepts() for a generated member input of
/// each length and reports the normalized cost ratio.
ScalingReport scaling_report(const MultiHeadNFA& m, const std::vector<int>& lengths,
                             const std::function<Word(int)>& generator,
                             const SimOptions& opts = {});

}  // namespace mhfa

#endif
