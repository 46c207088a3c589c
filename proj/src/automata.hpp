#ifndef MHFA_AUTOMATA_HPP
#define MHFA_AUTOMATA_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mhfa {

// ---------------------------------------------------------------------------
// Errors

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Raised when an exploration would exceed its configured resource budget.
/// Distinct from a negative answer: callers must not treat it as "nonmember".
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& message) : std::runtime_error(message) {}
};

// ---------------------------------------------------------------------------
// Basic domain types

using StateId = int;
using Symbol = int;

enum class HeadMove : std::uint8_t { left = 0, stay = 1, right = 2 };

inline int move_offset(HeadMove m) { return static_cast<int>(m) - 1; }
char move_letter(HeadMove m);
std::optional<HeadMove> move_from_letter(const std::string& token);

/// Input symbols plus the two reserved end markers. Symbols are interned:
/// 0 = left marker `^`, 1 = right marker `$`, input symbols from 2 upward
/// in declared order.
struct TapeAlphabet {
  static constexpr Symbol left_marker = 0;
  static constexpr Symbol right_marker = 1;
  static constexpr Symbol first_input = 2;

  std::vector<std::string> input_tokens;

  int sigma_size() const { return static_cast<int>(input_tokens.size()); }
  int gamma_size() const { return sigma_size() + 2; }
  bool is_marker(Symbol s) const { return s == left_marker || s == right_marker; }
  const std::string& token(Symbol s) const;
  std::optional<Symbol> find(const std::string& token) const;

  bool operator==(const TapeAlphabet&) const = default;
};

/// One input word, already interned (values >= first_input).
using Word = std::vector<Symbol>;

struct Transition {
  StateId from = -1;
  std::vector<Symbol> scan;
  StateId to = -1;
  std::vector<HeadMove> moves;

  bool operator==(const Transition&) const = default;
};

struct MultiHeadNFA {
  std::string name;
  int heads = 1;
  TapeAlphabet alphabet;
  std::vector<std::string> state_names;
  StateId initial = -1;
  StateId accept = -1;
  StateId reject = -1;
  std::vector<Transition> transitions;  // source order; the index is the id

  int state_count() const { return static_cast<int>(state_names.size()); }
  bool is_terminal(StateId q) const { return q == accept || q == reject; }
  std::optional<StateId> find_state(const std::string& name) const;

  /// Checks structural invariants and (re)builds the transition index.
  /// Throws std::invalid_argument on violations.
  void finalize();

  /// Ids of transitions with the given source state and scanned tuple,
  /// in source order. Empty when none (a "stuck" situation).
  const std::vector<int>& transitions_from(StateId q, const std::vector<Symbol>& scan) const;

 private:
  std::uint64_t scan_key(StateId q, const std::vector<Symbol>& scan) const;
  std::unordered_map<std::uint64_t, std::vector<int>> index_;
};

MultiHeadNFA parse_machine(const std::string& text);

/// Source-order serialization by default; canonical form sorts the
/// transition lines lexicographically.
std::string serialize_machine(const MultiHeadNFA& m, bool canonical = false);

/// Structural equality: canonical serializations agree, ignoring the
/// automaton name (a projection of a 1-head machine *is* that machine).
bool same_machine(const MultiHeadNFA& a, const MultiHeadNFA& b);

/// Interns an input string. If every alphabet token is a single character
/// the string is split per character, otherwise on whitespace.
/// Throws std::invalid_argument for tokens outside the alphabet.
Word parse_input(const MultiHeadNFA& m, const std::string& text);
std::string render_input(const MultiHeadNFA& m, const Word& w);

// ---------------------------------------------------------------------------
// Configurations and runs

struct Configuration {
  StateId state = -1;
  std::vector<int> positions;  // each in [0, n+1]

  auto operator<=>(const Configuration&) const = default;
};

Configuration initial_configuration(const MultiHeadNFA& m);

/// Symbols under the heads: position 0 reads the left marker, n+1 the right.
std::vector<Symbol> scanned_symbols(const Word& x, const Configuration& c);

/// All successors of c, ordered by transition id. Terminal states have none.
/// Moves past an end marker are clamped (the head stays).
std::vector<std::pair<Configuration, int>> successors(const MultiHeadNFA& m, const Word& x,
                                                      const Configuration& c);

struct PathStep {
  Configuration config;  // configuration the step was taken from
  int transition = -1;
};

struct LoopWitness {
  std::vector<PathStep> stem;   // from the initial configuration to the cycle entry
  std::vector<PathStep> cycle;  // closes back on the cycle entry
  Configuration entry;
};

struct RunOptions {
  std::uint64_t node_budget = 10'000'000;
};

struct RunResult {
  bool member = false;
  std::optional<std::vector<PathStep>> accepting_path;  // present iff member
  bool halting = true;                                  // all paths halt
  std::optional<LoopWitness> loop;                      // present iff !halting
};

/// BFS reachability over the configuration graph; also reports whether every
/// path halts. The accepting path is shortest, with successor expansion
/// ordered by (transition id, configuration) so reruns are byte-identical.
RunResult accepts(const MultiHeadNFA& m, const Word& x, const RunOptions& opts = {});

std::pair<bool, std::optional<LoopWitness>> always_halts_on(const MultiHeadNFA& m, const Word& x,
                                                            const RunOptions& opts = {});

/// Longest path from the initial configuration, or nullopt when a reachable
/// cycle makes the supremum infinite.
std::optional<std::uint64_t> max_run_steps(const MultiHeadNFA& m, const Word& x,
                                           const RunOptions& opts = {});

// ---------------------------------------------------------------------------
// Two-way alternating automata (single head)

struct AFATransition {
  StateId from = -1;
  Symbol scan = -1;
  StateId to = -1;
  HeadMove move = HeadMove::stay;
};

struct TwoWayAFA {
  TapeAlphabet alphabet;
  std::vector<std::string> state_names;
  std::vector<bool> universal;   // per state; false = existential
  std::vector<bool> accepting;   // accepting states are terminal
  StateId initial = -1;
  std::vector<AFATransition> transitions;

  int state_count() const { return static_cast<int>(state_names.size()); }
  void finalize();
  const std::vector<int>& transitions_from(StateId q, Symbol s) const;

 private:
  std::unordered_map<std::uint64_t, std::vector<int>> index_;
};

/// Least-fixed-point evaluation of the AND-OR configuration graph: accepting
/// states win, stuck universal configurations win vacuously, infinite plays
/// lose.
bool afa_accepts(const TwoWayAFA& a, const Word& x);

/// A 1-head NFA viewed as an all-existential AFA.
TwoWayAFA afa_from_nfa(const MultiHeadNFA& m);

// ---------------------------------------------------------------------------
// One-way automata over the input alphabet (no end markers)

struct OneWayNFA {
  std::vector<std::string> sigma_tokens;
  int num_states = 0;
  std::vector<int> initial;
  std::vector<bool> accepting;
  // delta[q * sigma + a] = target states, ascending
  std::vector<std::vector<int>> delta;

  int sigma_size() const { return static_cast<int>(sigma_tokens.size()); }
  const std::vector<int>& targets(int q, int a) const { return delta[q * sigma_size() + a]; }
};

struct OneWayDFA {
  std::vector<std::string> sigma_tokens;
  int num_states = 0;
  int initial = 0;
  std::vector<bool> accepting;
  std::vector<int> next;  // total: next[q * sigma + a]

  int sigma_size() const { return static_cast<int>(sigma_tokens.size()); }
};

/// Letters here are indices into sigma_tokens (not tape symbols).
bool onfa_accepts(const OneWayNFA& n, const std::vector<int>& word);
bool odfa_accepts(const OneWayDFA& d, const std::vector<int>& word);

/// Classic subset construction; used as a test oracle for the fused
/// universality check. Throws BudgetError past max_states.
OneWayDFA determinize(const OneWayNFA& n, std::size_t max_states = 1u << 20);

}  // namespace mhfa

#endif
