#include "transforms.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <string>

namespace mhfa {

MultiHeadNFA project_head(const MultiHeadNFA& m, int head) {
  if (head < 1 || head > m.heads) throw std::invalid_argument("head index out of range");
  const std::size_t h = static_cast<std::size_t>(head - 1);
  MultiHeadNFA p;
  p.name = m.name + "@h" + std::to_string(head);
  p.heads = 1;
  p.alphabet = m.alphabet;
  p.state_names = m.state_names;
  p.initial = m.initial;
  p.accept = m.accept;
  p.reject = m.reject;
  std::set<std::tuple<StateId, Symbol, StateId, HeadMove>> seen;
  for (const auto& t : m.transitions) {
    auto key = std::make_tuple(t.from, t.scan[h], t.to, t.moves[h]);
    if (!seen.insert(key).second) continue;
    p.transitions.push_back({t.from, {t.scan[h]}, t.to, {t.moves[h]}});
  }
  p.finalize();
  return p;
}

namespace {

std::vector<Symbol> gamma_symbols(const TapeAlphabet& alphabet, bool allow_right_marker) {
  std::vector<Symbol> out;
  out.push_back(TapeAlphabet::left_marker);
  if (allow_right_marker) out.push_back(TapeAlphabet::right_marker);
  for (int i = 0; i < alphabet.sigma_size(); ++i) out.push_back(TapeAlphabet::first_input + i);
  return out;
}

std::vector<Symbol> input_symbols(const TapeAlphabet& alphabet) {
  std::vector<Symbol> out;
  for (int i = 0; i < alphabet.sigma_size(); ++i) out.push_back(TapeAlphabet::first_input + i);
  return out;
}

/// Calls fn for every tuple in the product of the given per-position ranges,
/// in lexicographic order.
void for_each_combo(const std::vector<std::vector<Symbol>>& ranges,
                    const std::function<void(const std::vector<Symbol>&)>& fn) {
  std::vector<Symbol> tuple(ranges.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == ranges.size()) {
      fn(tuple);
      return;
    }
    for (Symbol s : ranges[i]) {
      tuple[i] = s;
      rec(i + 1);
    }
  };
  rec(0);
}

template <typename T>
std::vector<T> concat(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<HeadMove> moves_all(std::size_t count, HeadMove mv) {
  return std::vector<HeadMove>(count, mv);
}

}  // namespace

MultiHeadNFA add_timer_head(const MultiHeadNFA& m, int slope) {
  if (slope < 1) throw std::invalid_argument("timer slope must be positive");
  const int k = m.heads;
  MultiHeadNFA out;
  out.name = m.name + "@timer" + std::to_string(slope);
  out.heads = k + 1;
  out.alphabet = m.alphabet;

  // Non-terminal states carry the step residue modulo the slope.
  std::vector<std::vector<StateId>> staged(m.state_names.size());
  for (StateId q = 0; q < m.state_count(); ++q) {
    if (m.is_terminal(q)) continue;
    for (int t = 0; t < slope; ++t) {
      staged[static_cast<std::size_t>(q)].push_back(static_cast<StateId>(out.state_names.size()));
      out.state_names.push_back(m.state_names[static_cast<std::size_t>(q)] + "@t" +
                                std::to_string(t));
    }
  }
  StateId acc = static_cast<StateId>(out.state_names.size());
  out.state_names.push_back(m.state_names[static_cast<std::size_t>(m.accept)]);
  StateId rej = static_cast<StateId>(out.state_names.size());
  out.state_names.push_back(m.state_names[static_cast<std::size_t>(m.reject)]);
  out.accept = acc;
  out.reject = rej;

  auto staged_state = [&](StateId q, int t) -> StateId {
    if (q == m.accept) return acc;
    if (q == m.reject) return rej;
    return staged[static_cast<std::size_t>(q)][static_cast<std::size_t>(t)];
  };
  out.initial = staged_state(m.initial, 0);

  const auto any_symbol = gamma_symbols(m.alphabet, true);
  const auto not_right = gamma_symbols(m.alphabet, false);

  for (const auto& t : m.transitions) {
    for (int res = 0; res + 1 < slope; ++res) {
      for (Symbol s : any_symbol) {
        out.transitions.push_back({staged_state(t.from, res), concat<Symbol>(t.scan, {s}),
                                   staged_state(t.to, res + 1), concat<HeadMove>(t.moves, {HeadMove::stay})});
      }
    }
    for (Symbol s : not_right) {
      out.transitions.push_back({staged_state(t.from, slope - 1), concat<Symbol>(t.scan, {s}),
                                 staged_state(t.to, 0), concat<HeadMove>(t.moves, {HeadMove::right})});
    }
  }
  // Timeout: a demanded timer move while scanning the right marker.
  std::set<std::pair<StateId, std::vector<Symbol>>> seen;
  for (const auto& t : m.transitions) {
    if (!seen.insert({t.from, t.scan}).second) continue;
    out.transitions.push_back({staged_state(t.from, slope - 1),
                               concat<Symbol>(t.scan, {TapeAlphabet::right_marker}), rej,
                               moves_all(static_cast<std::size_t>(k) + 1, HeadMove::stay)});
  }
  out.finalize();
  return out;
}

MultiHeadNFA add_counter_heads(const MultiHeadNFA& m) {
  const int k = m.heads;
  const int modulus = m.state_count();
  MultiHeadNFA out;
  out.name = m.name + "@counters";
  out.heads = 2 * k;
  out.alphabet = m.alphabet;

  std::vector<std::vector<StateId>> staged(m.state_names.size());
  std::vector<std::vector<StateId>> rewinding(m.state_names.size());
  for (StateId q = 0; q < m.state_count(); ++q) {
    if (m.is_terminal(q)) continue;
    for (int t = 0; t < modulus; ++t) {
      staged[static_cast<std::size_t>(q)].push_back(static_cast<StateId>(out.state_names.size()));
      out.state_names.push_back(m.state_names[static_cast<std::size_t>(q)] + "@t" +
                                std::to_string(t));
    }
    for (int i = 1; i < k; ++i) {
      rewinding[static_cast<std::size_t>(q)].push_back(
          static_cast<StateId>(out.state_names.size()));
      out.state_names.push_back(m.state_names[static_cast<std::size_t>(q)] + "@rw" +
                                std::to_string(i));
    }
  }
  StateId acc = static_cast<StateId>(out.state_names.size());
  out.state_names.push_back(m.state_names[static_cast<std::size_t>(m.accept)]);
  StateId rej = static_cast<StateId>(out.state_names.size());
  out.state_names.push_back(m.state_names[static_cast<std::size_t>(m.reject)]);
  out.accept = acc;
  out.reject = rej;

  auto staged_state = [&](StateId q, int t) -> StateId {
    if (q == m.accept) return acc;
    if (q == m.reject) return rej;
    return staged[static_cast<std::size_t>(q)][static_cast<std::size_t>(t)];
  };
  out.initial = staged_state(m.initial, 0);

  const auto any_symbol = gamma_symbols(m.alphabet, true);
  const auto not_right = gamma_symbols(m.alphabet, false);
  const auto inputs_only = input_symbols(m.alphabet);
  const std::vector<Symbol> left_only{TapeAlphabet::left_marker};
  const std::vector<Symbol> right_only{TapeAlphabet::right_marker};

  // Counter scan ranges in the steady state: counters 1..k-1 are never seen
  // resting on the right marker, counter k may be.
  auto steady_ranges = [&]() {
    std::vector<std::vector<Symbol>> r(static_cast<std::size_t>(k), not_right);
    r[static_cast<std::size_t>(k - 1)] = any_symbol;
    return r;
  };

  // Simulated steps.
  for (const auto& t : m.transitions) {
    for (int res = 0; res + 1 < modulus; ++res) {
      for_each_combo(steady_ranges(), [&](const std::vector<Symbol>& ctr) {
        out.transitions.push_back({staged_state(t.from, res), concat(t.scan, ctr),
                                   staged_state(t.to, res + 1),
                                   concat(t.moves, moves_all(static_cast<std::size_t>(k),
                                                             HeadMove::stay))});
      });
    }
    // The modulus-th step also advances counter 1.
    auto advance_ranges = steady_ranges();
    if (k == 1) advance_ranges[0] = not_right;
    for_each_combo(advance_ranges, [&](const std::vector<Symbol>& ctr) {
      auto ctr_moves = moves_all(static_cast<std::size_t>(k), HeadMove::stay);
      ctr_moves[0] = HeadMove::right;
      out.transitions.push_back({staged_state(t.from, modulus - 1), concat(t.scan, ctr),
                                 staged_state(t.to, 0), concat(t.moves, ctr_moves)});
    });
  }
  if (k == 1) {
    // Odometer overflow for the single counter.
    std::set<std::pair<StateId, std::vector<Symbol>>> seen;
    for (const auto& t : m.transitions) {
      if (!seen.insert({t.from, t.scan}).second) continue;
      out.transitions.push_back({staged_state(t.from, modulus - 1), concat(t.scan, right_only),
                                 rej, moves_all(static_cast<std::size_t>(2 * k), HeadMove::stay)});
    }
  }

  // Rewind machinery (k >= 2). Simulated heads freeze, counter i walks back
  // to the left marker, then counter i+1 advances once.
  const std::vector<std::vector<Symbol>> all_sim(static_cast<std::size_t>(k), any_symbol);
  for (StateId q = 0; q < m.state_count() && k >= 2; ++q) {
    if (m.is_terminal(q)) continue;
    for (int i = 1; i < k; ++i) {
      StateId rw = rewinding[static_cast<std::size_t>(q)][static_cast<std::size_t>(i - 1)];
      // Trigger: counter i observed on the right marker at residue 0.
      {
        std::vector<std::vector<Symbol>> ranges = all_sim;
        for (int j = 1; j < i; ++j) ranges.push_back(left_only);
        ranges.push_back(right_only);
        for (int j = i + 1; j < k; ++j) ranges.push_back(not_right);
        ranges.push_back(any_symbol);  // counter k
        for_each_combo(ranges, [&](const std::vector<Symbol>& scan) {
          auto moves = moves_all(static_cast<std::size_t>(2 * k), HeadMove::stay);
          moves[static_cast<std::size_t>(k + i - 1)] = HeadMove::left;
          out.transitions.push_back({staged_state(q, 0), scan, rw, moves});
        });
      }
      // Walk left over input symbols.
      {
        std::vector<std::vector<Symbol>> ranges = all_sim;
        for (int j = 1; j < i; ++j) ranges.push_back(left_only);
        ranges.push_back(inputs_only);
        for (int j = i + 1; j < k; ++j) ranges.push_back(not_right);
        ranges.push_back(any_symbol);  // counter k
        for_each_combo(ranges, [&](const std::vector<Symbol>& scan) {
          auto moves = moves_all(static_cast<std::size_t>(2 * k), HeadMove::stay);
          moves[static_cast<std::size_t>(k + i - 1)] = HeadMove::left;
          out.transitions.push_back({rw, scan, rw, moves});
        });
      }
      // Completion: counter i is back on the left marker; carry into i+1.
      {
        std::vector<std::vector<Symbol>> ranges = all_sim;
        for (int j = 1; j <= i; ++j) ranges.push_back(left_only);
        if (i + 1 < k) {
          ranges.push_back(not_right);  // counter i+1 advances
          for (int j = i + 2; j < k; ++j) ranges.push_back(not_right);
          ranges.push_back(any_symbol);  // counter k
          for_each_combo(ranges, [&](const std::vector<Symbol>& scan) {
            auto moves = moves_all(static_cast<std::size_t>(2 * k), HeadMove::stay);
            moves[static_cast<std::size_t>(k + i)] = HeadMove::right;
            out.transitions.push_back({rw, scan, staged_state(q, 0), moves});
          });
        } else {
          // Counter k advances, or overflows into rejection.
          auto ok_ranges = ranges;
          ok_ranges.push_back(not_right);
          for_each_combo(ok_ranges, [&](const std::vector<Symbol>& scan) {
            auto moves = moves_all(static_cast<std::size_t>(2 * k), HeadMove::stay);
            moves[static_cast<std::size_t>(k + i)] = HeadMove::right;
            out.transitions.push_back({rw, scan, staged_state(q, 0), moves});
          });
          auto of_ranges = ranges;
          of_ranges.push_back(right_only);
          for_each_combo(of_ranges, [&](const std::vector<Symbol>& scan) {
            out.transitions.push_back(
                {rw, scan, rej, moves_all(static_cast<std::size_t>(2 * k), HeadMove::stay)});
          });
        }
      }
    }
  }
  out.finalize();
  return out;
}

TwoWayAFA halting_wrapper(const MultiHeadNFA& m) {
  if (m.heads != 1)
    throw std::invalid_argument("halting_wrapper requires a 1-head machine, got " +
                                std::to_string(m.heads) + " heads");
  TwoWayAFA a;
  a.alphabet = m.alphabet;
  a.state_names = m.state_names;
  a.universal.assign(m.state_names.size(), true);
  a.accepting.assign(m.state_names.size(), false);
  a.accepting[static_cast<std::size_t>(m.accept)] = true;
  a.accepting[static_cast<std::size_t>(m.reject)] = true;
  a.initial = m.initial;
  for (const auto& t : m.transitions) {
    a.transitions.push_back({t.from, t.scan[0], t.to, t.moves[0]});
  }
  a.finalize();
  return a;
}

}  // namespace mhfa
