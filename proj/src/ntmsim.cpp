#include "ntmsim.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace mhfa {

namespace {

constexpr int kCacheHash = -2;
constexpr int kCacheBlank = -1;

int window_width(int n) {
  int bits = 1;
  while ((1 << bits) < n + 2) ++bits;
  int w = std::max(4, bits);
  if (w % 2 != 0) ++w;
  return w;
}

int counter_bits(int n) {
  int bits = 1;
  while ((1 << bits) < n + 2) ++bits;
  return bits;
}

/// The multi-track work tape plus both tape heads, with every head motion
/// charged to a phase counter. Copyable so the exhaustive mode can branch.
struct TapeMachine {
  const MultiHeadNFA* m;
  Word x;
  int n, k, W, bits, mid;

  struct Cell {
    std::vector<char> ctr;    // '0', '1' or ' '
    std::vector<int> cache;   // tape symbol, kCacheHash or kCacheBlank
    std::vector<bool> mark;
    bool middle = false;
  };
  std::vector<Cell> tape;
  int work_pos = 0;
  int input_pos = 0;  // over the marked-up input, 0 = left marker

  StateId state;
  std::vector<int> pos;           // semantic head positions (control view)
  std::vector<int> window_start;  // input position of window cell 1, per head
  std::vector<std::uint64_t> last_recache;
  SimStats stats;
  std::uint64_t* phase = nullptr;
  std::uint64_t budget = 0;

  TapeMachine(const MultiHeadNFA& machine, const Word& input, std::uint64_t step_budget)
      : m(&machine), x(input), n(static_cast<int>(input.size())), k(machine.heads),
        W(window_width(n)), bits(counter_bits(n)), mid(W / 2), state(machine.initial) {
    pos.assign(static_cast<std::size_t>(k), 0);
    window_start.assign(static_cast<std::size_t>(k), 0);
    last_recache.assign(static_cast<std::size_t>(k), 0);
    stats.recaches_per_head.assign(static_cast<std::size_t>(k), 0);
    stats.window = W;
    stats.counter_bits = bits;
    budget = step_budget;
    Cell blank;
    blank.ctr.assign(static_cast<std::size_t>(k), ' ');
    blank.cache.assign(static_cast<std::size_t>(k), kCacheBlank);
    blank.mark.assign(static_cast<std::size_t>(k), false);
    tape.assign(static_cast<std::size_t>(W) + 2, blank);
    stats.tape_cells = tape.size();
    init();
  }

  void charge(std::uint64_t cost) {
    stats.work_moves += cost;
    *phase += cost;
    if (stats.work_moves > budget) throw BudgetError("simulation step budget exceeded");
  }

  void walk(int to) {
    charge(static_cast<std::uint64_t>(std::abs(to - work_pos)));
    work_pos = to;
  }

  void input_walk(int to) {
    const std::uint64_t d = static_cast<std::uint64_t>(std::abs(to - input_pos));
    stats.input_moves += d;
    charge(d);  // steps where only the input head moves
    input_pos = to;
  }

  int input_symbol(int p) const {
    if (p <= 0) return TapeAlphabet::left_marker;
    if (p >= n + 1) return p == n + 1 ? TapeAlphabet::right_marker : kCacheBlank;
    return x[static_cast<std::size_t>(p - 1)];
  }

  void init() {
    phase = &stats.init_moves;
    // Counters start at zero: one digit write per head at the left end.
    walk(0);
    for (int h = 0; h < k; ++h) tape[0].ctr[static_cast<std::size_t>(h)] = '0';
    charge(1);
    // Cache sweep: '#', the marked left end marker, the first W-1 input
    // symbols, '#'. The input head rides along.
    for (int cell = 0; cell <= W + 1; ++cell) {
      walk(cell);
      charge(1);
      int content;
      if (cell == 0 || cell == W + 1) {
        content = kCacheHash;
      } else {
        content = input_symbol(cell - 1);
        if (cell - 1 <= n + 1) {
          stats.input_moves += static_cast<std::uint64_t>(std::abs((cell - 1) - input_pos));
          input_pos = cell - 1;
        }
      }
      for (int h = 0; h < k; ++h) {
        tape[static_cast<std::size_t>(cell)].cache[static_cast<std::size_t>(h)] = content;
        if (cell == 1) tape[1].mark[static_cast<std::size_t>(h)] = true;
      }
    }
    // Middle marker by converging from both ends.
    int a = 0, b = W + 1;
    walk(0);
    while (b - a > 1) {
      walk(b);
      --b;
      walk(a);
      ++a;
    }
    walk(a);
    charge(1);
    tape[static_cast<std::size_t>(a)].middle = true;
  }

  // -- counter track helpers (LSB at the left end) --------------------------

  void counter_increment(int h) {
    walk(0);
    int j = 0;
    while (tape[static_cast<std::size_t>(j)].ctr[static_cast<std::size_t>(h)] == '1') {
      tape[static_cast<std::size_t>(j)].ctr[static_cast<std::size_t>(h)] = '0';
      walk(j + 1);
      ++j;
    }
    tape[static_cast<std::size_t>(j)].ctr[static_cast<std::size_t>(h)] = '1';
    charge(1);
  }

  /// Decrements if nonzero; returns false on zero. The borrow scan doubles as
  /// the zero test.
  bool counter_decrement(int h) {
    walk(0);
    int j = 0;
    while (j < bits &&
           tape[static_cast<std::size_t>(j)].ctr[static_cast<std::size_t>(h)] != '1') {
      walk(j + 1);
      ++j;
    }
    if (j >= bits) return false;
    tape[static_cast<std::size_t>(j)].ctr[static_cast<std::size_t>(h)] = '0';
    charge(1);
    for (int i = 0; i < j; ++i) {
      tape[static_cast<std::size_t>(i)].ctr[static_cast<std::size_t>(h)] = '1';
    }
    return true;
  }

  int counter_value(int h) const {  // audit view, no cost
    int value = 0;
    for (int j = bits - 1; j >= 0; --j) {
      value <<= 1;
      if (tape[static_cast<std::size_t>(j)].ctr[static_cast<std::size_t>(h)] == '1') value |= 1;
    }
    return value;
  }

  int mark_cell(int h) const {  // audit view, no cost
    for (int cell = 0; cell <= W + 1; ++cell) {
      if (tape[static_cast<std::size_t>(cell)].mark[static_cast<std::size_t>(h)]) return cell;
    }
    throw std::logic_error("cache track lost its mark");
  }

  /// One full sweep of the cache region, noting every marked symbol. Doubles
  /// as the audit that each cache track carries exactly one mark.
  std::vector<Symbol> read_marks() {
    phase = &stats.read_moves;
    std::vector<int> found(static_cast<std::size_t>(k), kCacheBlank);
    std::vector<int> marks(static_cast<std::size_t>(k), 0);
    walk(0);
    for (int cell = 0; cell <= W + 1; ++cell) {
      walk(cell);
      for (int h = 0; h < k; ++h) {
        if (tape[static_cast<std::size_t>(cell)].mark[static_cast<std::size_t>(h)]) {
          ++marks[static_cast<std::size_t>(h)];
          found[static_cast<std::size_t>(h)] =
              tape[static_cast<std::size_t>(cell)].cache[static_cast<std::size_t>(h)];
        }
      }
    }
    std::vector<Symbol> symbols;
    for (int h = 0; h < k; ++h) {
      if (marks[static_cast<std::size_t>(h)] != 1)
        throw std::logic_error("cache track must carry exactly one mark");
      int c = found[static_cast<std::size_t>(h)];
      if (c < 0) throw std::logic_error("mark rests on a non-symbol cell");
      symbols.push_back(c);
    }
    return symbols;
  }

  /// Applies one transition: adjust counters, move marks, re-cache tracks
  /// whose mark reached a delimiter. Returns which heads re-cached.
  std::vector<int> apply(const Transition& t) {
    phase = &stats.move_moves;
    std::vector<int> recached;
    for (int h = 0; h < k; ++h) {
      HeadMove mv = t.moves[static_cast<std::size_t>(h)];
      if (mv == HeadMove::stay) continue;
      // Movements beyond an end marker are skipped.
      if (mv == HeadMove::left && pos[static_cast<std::size_t>(h)] == 0) continue;
      if (mv == HeadMove::right && pos[static_cast<std::size_t>(h)] == n + 1) continue;
      if (mv == HeadMove::right) {
        counter_increment(h);
        pos[static_cast<std::size_t>(h)] += 1;
      } else {
        if (!counter_decrement(h)) throw std::logic_error("counter underflow");
        pos[static_cast<std::size_t>(h)] -= 1;
      }
      int cell = mark_cell(h);
      walk(cell);
      charge(1);
      tape[static_cast<std::size_t>(cell)].mark[static_cast<std::size_t>(h)] = false;
      int next = cell + (mv == HeadMove::right ? 1 : -1);
      walk(next);
      charge(1);
      tape[static_cast<std::size_t>(next)].mark[static_cast<std::size_t>(h)] = true;
    }
    state = t.to;
    ++stats.simulated_steps;
    for (int h = 0; h < k; ++h) {
      int cell = mark_cell(h);
      if (tape[static_cast<std::size_t>(cell)].cache[static_cast<std::size_t>(h)] == kCacheHash) {
        recache(h);
        recached.push_back(h + 1);
      }
    }
    return recached;
  }

  void recache(int h) {
    phase = &stats.recache_moves;
    const std::uint64_t step_now = stats.simulated_steps;
    if (stats.recaches_per_head[static_cast<std::size_t>(h)] > 0) {
      std::uint64_t gap = step_now - last_recache[static_cast<std::size_t>(h)];
      if (stats.min_recache_gap == 0 || gap < stats.min_recache_gap)
        stats.min_recache_gap = gap;
    }
    last_recache[static_cast<std::size_t>(h)] = step_now;
    ++stats.recaches_per_head[static_cast<std::size_t>(h)];

    // Clear the mark on the delimiter.
    int cell = mark_cell(h);
    walk(cell);
    charge(1);
    tape[static_cast<std::size_t>(cell)].mark[static_cast<std::size_t>(h)] = false;

    // Locate the head on the input by counting the counter down to zero.
    input_walk(0);
    int located = 0;
    while (counter_decrement(h)) {
      ++input_pos;
      ++stats.input_moves;
      ++located;
    }
    if (located != pos[static_cast<std::size_t>(h)])
      throw std::logic_error("counter disagrees with the simulated position");

    // Window centered on the head, clamped to the marked-up input.
    int start = located - (mid - 1);
    start = std::max(0, std::min(start, std::max(0, n + 2 - W)));
    window_start[static_cast<std::size_t>(h)] = start;
    input_walk(start);
    for (int j = 1; j <= W; ++j) {
      walk(j);
      charge(1);
      int p = start + j - 1;
      tape[static_cast<std::size_t>(j)].cache[static_cast<std::size_t>(h)] = input_symbol(p);
      if (p <= n + 1) {
        stats.input_moves += static_cast<std::uint64_t>(std::abs(p - input_pos));
        input_pos = std::min(p, n + 1);
      }
    }
    // Set the counter back to the head position by re-counting.
    for (int v = 0; v < located; ++v) counter_increment(h);
    // Mark the head's cell (the middle, except near the tape ends).
    int mark_at = located - start + 1;
    walk(mark_at);
    charge(1);
    tape[static_cast<std::size_t>(mark_at)].mark[static_cast<std::size_t>(h)] = true;
  }
};

std::string trace_line(const MultiHeadNFA& m, const TapeMachine& tm,
                       const std::vector<int>& recached) {
  std::ostringstream out;
  out << "step " << tm.stats.simulated_steps << " state "
      << m.state_names[static_cast<std::size_t>(tm.state)] << " heads";
  for (int p : tm.pos) out << ' ' << p;
  out << " recache ";
  if (recached.empty()) {
    out << '-';
  } else {
    for (std::size_t i = 0; i < recached.size(); ++i) {
      if (i > 0) out << ',';
      out << recached[i];
    }
  }
  return out.str();
}

}  // namespace

SimResult simulate(const MultiHeadNFA& m, const Word& x, const std::vector<int>& path,
                   const SimOptions& opts) {
  TapeMachine tm(m, x, opts.step_budget);
  SimResult result;
  std::size_t next_choice = 0;
  while (true) {
    if (tm.state == m.accept) {
      result.outcome = SimOutcome::accept;
      break;
    }
    if (tm.state == m.reject) {
      result.outcome = SimOutcome::reject;
      break;
    }
    std::vector<Symbol> scan = tm.read_marks();
    const auto& choices = m.transitions_from(tm.state, scan);
    int tid;
    if (next_choice < path.size()) {
      tid = path[next_choice++];
      if (std::find(choices.begin(), choices.end(), tid) == choices.end())
        throw std::invalid_argument("path step " + std::to_string(next_choice - 1) +
                                    " is not offered by the transition relation");
    } else if (choices.size() == 1) {
      tid = choices[0];
    } else {
      result.outcome = SimOutcome::stuck;  // out of guidance or out of moves
      break;
    }
    auto recached = tm.apply(m.transitions[static_cast<std::size_t>(tid)]);
    if (opts.want_trace) result.trace.push_back(trace_line(m, tm, recached));
  }
  result.stats = tm.stats;
  return result;
}

bool simulate_exhaustive(const MultiHeadNFA& m, const Word& x, const SimOptions& opts) {
  if (x.size() > 12) throw std::invalid_argument("exhaustive mode is limited to |x| <= 12");
  std::set<std::pair<StateId, std::vector<int>>> visited;
  std::vector<TapeMachine> stack;
  stack.emplace_back(m, x, opts.step_budget);
  std::uint64_t moves_total = 0;
  while (!stack.empty()) {
    TapeMachine tm = std::move(stack.back());
    stack.pop_back();
    if (tm.state == m.accept) return true;
    if (tm.state == m.reject) continue;
    if (!visited.insert({tm.state, tm.pos}).second) continue;
    std::vector<Symbol> scan = tm.read_marks();
    auto choices = m.transitions_from(tm.state, scan);
    moves_total += tm.stats.work_moves;
    if (moves_total > opts.step_budget) throw BudgetError("exhaustive simulation budget exceeded");
    for (int tid : choices) {
      TapeMachine branch = tm;
      branch.apply(m.transitions[static_cast<std::size_t>(tid)]);
      stack.push_back(std::move(branch));
    }
  }
  return false;
}

ScalingReport scaling_report(const MultiHeadNFA& m, const std::vector<int>& lengths,
                             const std::function<Word(int)>& generator, const SimOptions& opts) {
  ScalingReport report;
  for (int n : lengths) {
    Word w = generator(n);
    if (static_cast<int>(w.size()) != n)
      throw std::invalid_argument("generator returned a word of the wrong length");
    RunResult run = accepts(m, w);
    if (!run.member)
      throw std::invalid_argument("scaling inputs must be members (length " + std::to_string(n) +
                                  " is not)");
    std::vector<int> path;
    for (const auto& step : *run.accepting_path) path.push_back(step.transition);
    SimResult sim = simulate(m, w, path, opts);
    ScalingRow row;
    row.n = n;
    row.simulated_steps = sim.stats.simulated_steps;
    row.work_moves = sim.stats.work_moves;
    for (auto r : sim.stats.recaches_per_head) row.recaches += r;
    row.ratio = static_cast<double>(sim.stats.work_moves) * std::log2(static_cast<double>(n)) /
                (static_cast<double>(n) * static_cast<double>(n));
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace mhfa
