#ifndef MHFA_HALTING_HPP
#define MHFA_HALTING_HPP

#include "automata.hpp"

#include <optional>

namespace mhfa {

struct HaltingOptions {
  std::size_t afa_state_cap = 64;
  std::size_t nfa_state_cap = 1u << 20;
  RunOptions run;
};

/// Converts a two-way alternating automaton into a language-equivalent
/// one-way NFA by a left-to-right determinization of the acceptance game.
///
/// The NFA state reached after a prefix is the pair (S, I):
///  - S maps each AFA state q to the antichain of minimal "exit guarantees":
///    sets E such that, starting at the rightmost cell of the prefix region
///    in q, the existential player can force every play to either win inside
///    the region or leave it rightward in a state of E;
///  - I is the same family for the game started at the initial configuration.
/// Both are updated per input symbol by a least-fixed-point evaluation of the
/// one-cell boundary game; a state accepts when the game for the right end
/// marker is won from I. The result is deterministic but returned as an NFA.
///
/// Throws BudgetError when the AFA exceeds afa_state_cap states or the
/// construction generates more than nfa_state_cap summaries.
OneWayNFA afa_to_onfa(const TwoWayAFA& a, const HaltingOptions& opts = {});

struct UniversalityResult {
  bool universal = false;
  std::optional<std::vector<int>> counterexample;  // shortest, lex-least letters
};

/// On-the-fly subset construction fused with the emptiness-of-complement
/// check: explores reachable state subsets and reports the shortest word
/// leading to a subset with no accepting state.
UniversalityResult onfa_universal(const OneWayNFA& n, std::size_t subset_cap = 1u << 20);

struct SafetyResult {
  bool safe = false;
  /// For a risky head: an input on which the single-head view can loop.
  std::optional<Word> counterexample;
};

/// Head i is safe iff the single-head view of head i halts on every path of
/// every input, decided by the wrapper -> one-way NFA -> universality chain.
SafetyResult head_is_safe(const MultiHeadNFA& m, int head, const HaltingOptions& opts = {});

/// Bounded brute-force oracle: scans all inputs up to max_len (shortest
/// first, then lexicographic) for a reachable configuration cycle of the
/// 1-head machine. A witness proves the machine can loop; absence is only
/// evidence.
std::optional<std::pair<Word, LoopWitness>> find_loop_witness(const MultiHeadNFA& m, int max_len,
                                                              const RunOptions& opts = {});

}  // namespace mhfa

#endif
