#include "halting.hpp"

#include "transforms.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>

namespace mhfa {

namespace {

// An upward-closed family of state sets, kept as the sorted antichain of its
// minimal elements. The empty family is "no guarantee"; {emptyset} is an
// outright win.
using Mask = std::uint64_t;
using Family = std::vector<Mask>;

constexpr std::size_t kFamilyGuard = 200'000;

bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }

Family normalize(std::vector<Mask> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  Family out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    bool minimal = true;
    for (std::size_t j = 0; j < sets.size() && minimal; ++j) {
      if (i != j && subset_of(sets[j], sets[i])) minimal = false;
    }
    if (minimal) out.push_back(sets[i]);
  }
  return out;
}

Family family_union(const Family& a, const Family& b) {
  std::vector<Mask> all = a;
  all.insert(all.end(), b.begin(), b.end());
  return normalize(std::move(all));
}

Family family_intersect(const Family& a, const Family& b) {
  std::vector<Mask> all;
  all.reserve(a.size() * b.size());
  for (Mask x : a) {
    for (Mask y : b) all.push_back(x | y);
  }
  if (all.size() > kFamilyGuard) throw BudgetError("guarantee-family budget exceeded");
  return normalize(std::move(all));
}

const Family kWin{Mask{0}};  // up({emptyset})

/// Per-state guarantee families for games over a prefix region, plus the
/// family for the game started at the initial configuration.
struct Summary {
  std::vector<Family> states;
  Family initial;

  bool operator==(const Summary&) const = default;
  bool operator<(const Summary& o) const {
    if (states != o.states) return states < o.states;
    return initial < o.initial;
  }
};

/// Least fixed point of the one-cell boundary game: for each AFA state, the
/// family of exit guarantees for plays starting at the cell. `region` is the
/// summary of everything to the left (nullptr for the leftmost cell, whose
/// left moves clamp in place).
std::vector<Family> boundary_game(const TwoWayAFA& a, Symbol cell,
                                  const std::vector<Family>* region) {
  const int n = a.state_count();
  std::vector<Family> at(static_cast<std::size_t>(n));
  std::vector<Family> enter(static_cast<std::size_t>(n));
  bool changed = true;
  while (changed) {
    changed = false;
    for (StateId q = 0; q < n; ++q) {
      // enter(q): prover picks a region guarantee, refuter picks the exit.
      if (region != nullptr) {
        Family next;
        for (Mask exits : (*region)[static_cast<std::size_t>(q)]) {
          Family branch = kWin;
          for (int r = 0; r < n; ++r) {
            if ((exits >> r) & 1u) branch = family_intersect(branch, at[static_cast<std::size_t>(r)]);
          }
          next = family_union(next, branch);
        }
        if (next != enter[static_cast<std::size_t>(q)]) {
          enter[static_cast<std::size_t>(q)] = std::move(next);
          changed = true;
        }
      }
      Family next;
      if (a.accepting[static_cast<std::size_t>(q)]) {
        next = kWin;
      } else {
        const auto& tids = a.transitions_from(q, cell);
        bool universal = a.universal[static_cast<std::size_t>(q)];
        bool first = true;
        if (universal) next = kWin;  // stuck universal wins vacuously
        for (int tid : tids) {
          const auto& t = a.transitions[static_cast<std::size_t>(tid)];
          Family succ;
          switch (t.move) {
            case HeadMove::right:
              succ = Family{Mask{1} << t.to};
              break;
            case HeadMove::stay:
              succ = at[static_cast<std::size_t>(t.to)];
              break;
            case HeadMove::left:
              succ = (region == nullptr) ? at[static_cast<std::size_t>(t.to)]
                                         : enter[static_cast<std::size_t>(t.to)];
              break;
          }
          if (universal) {
            next = family_intersect(next, succ);
          } else {
            next = first ? succ : family_union(next, succ);
          }
          first = false;
        }
      }
      if (next != at[static_cast<std::size_t>(q)]) {
        at[static_cast<std::size_t>(q)] = std::move(next);
        changed = true;
      }
    }
  }
  return at;
}

Family thread_initial(const Family& initial, const std::vector<Family>& at, int n) {
  Family next;
  for (Mask exits : initial) {
    Family branch = kWin;
    for (int r = 0; r < n; ++r) {
      if ((exits >> r) & 1u) branch = family_intersect(branch, at[static_cast<std::size_t>(r)]);
    }
    next = family_union(next, branch);
  }
  return next;
}

Summary base_summary(const TwoWayAFA& a) {
  Summary s;
  s.states = boundary_game(a, TapeAlphabet::left_marker, nullptr);
  s.initial = s.states[static_cast<std::size_t>(a.initial)];
  return s;
}

Summary step_summary(const TwoWayAFA& a, const Summary& prev, Symbol sym) {
  Summary s;
  s.states = boundary_game(a, sym, &prev.states);
  s.initial = thread_initial(prev.initial, s.states, a.state_count());
  return s;
}

/// Boolean game for the right end marker cell: right moves clamp in place.
bool final_check(const TwoWayAFA& a, const Summary& summary) {
  const int n = a.state_count();
  std::vector<bool> win_at(static_cast<std::size_t>(n), false);
  std::vector<bool> win_enter(static_cast<std::size_t>(n), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (StateId q = 0; q < n; ++q) {
      if (!win_enter[static_cast<std::size_t>(q)]) {
        bool v = false;
        for (Mask exits : summary.states[static_cast<std::size_t>(q)]) {
          bool all = true;
          for (int r = 0; r < n && all; ++r) {
            if (((exits >> r) & 1u) && !win_at[static_cast<std::size_t>(r)]) all = false;
          }
          if (all) {
            v = true;
            break;
          }
        }
        if (v) {
          win_enter[static_cast<std::size_t>(q)] = true;
          changed = true;
        }
      }
      if (win_at[static_cast<std::size_t>(q)]) continue;
      bool v;
      if (a.accepting[static_cast<std::size_t>(q)]) {
        v = true;
      } else {
        const auto& tids = a.transitions_from(q, TapeAlphabet::right_marker);
        bool universal = a.universal[static_cast<std::size_t>(q)];
        v = universal;  // stuck universal wins
        for (int tid : tids) {
          const auto& t = a.transitions[static_cast<std::size_t>(tid)];
          bool succ = (t.move == HeadMove::left) ? win_enter[static_cast<std::size_t>(t.to)]
                                                 : win_at[static_cast<std::size_t>(t.to)];
          if (universal) {
            v = v && succ;
          } else {
            v = v || succ;
          }
        }
        if (!universal && tids.empty()) v = false;
      }
      if (v) {
        win_at[static_cast<std::size_t>(q)] = true;
        changed = true;
      }
    }
  }
  bool accept = false;
  for (Mask exits : summary.initial) {
    bool all = true;
    const int nn = a.state_count();
    for (int r = 0; r < nn && all; ++r) {
      if (((exits >> r) & 1u) && !win_at[static_cast<std::size_t>(r)]) all = false;
    }
    if (all) {
      accept = true;
      break;
    }
  }
  return accept;
}

}  // namespace

OneWayNFA afa_to_onfa(const TwoWayAFA& a, const HaltingOptions& opts) {
  if (static_cast<std::size_t>(a.state_count()) > opts.afa_state_cap)
    throw BudgetError("AFA state cap exceeded (" + std::to_string(a.state_count()) + " > " +
                      std::to_string(opts.afa_state_cap) + ")");
  if (a.state_count() > 63) throw BudgetError("AFA state masks support at most 63 states");

  OneWayNFA nfa;
  nfa.sigma_tokens = a.alphabet.input_tokens;
  const int sigma = nfa.sigma_size();

  std::map<Summary, int> id_of;
  std::vector<Summary> summaries;
  auto intern = [&](Summary s) {
    auto it = id_of.find(s);
    if (it != id_of.end()) return it->second;
    if (summaries.size() >= opts.nfa_state_cap)
      throw BudgetError("generated state budget exceeded");
    int id = static_cast<int>(summaries.size());
    id_of.emplace(s, id);
    summaries.push_back(std::move(s));
    return id;
  };

  intern(base_summary(a));
  for (std::size_t u = 0; u < summaries.size(); ++u) {
    for (int letter = 0; letter < sigma; ++letter) {
      Summary next = step_summary(a, summaries[u], TapeAlphabet::first_input + letter);
      int v = intern(std::move(next));
      nfa.delta.resize((u + 1) * static_cast<std::size_t>(sigma));
      nfa.delta[u * static_cast<std::size_t>(sigma) + static_cast<std::size_t>(letter)] = {v};
    }
  }
  nfa.num_states = static_cast<int>(summaries.size());
  nfa.delta.resize(static_cast<std::size_t>(nfa.num_states) * static_cast<std::size_t>(sigma));
  nfa.initial = {0};
  nfa.accepting.assign(static_cast<std::size_t>(nfa.num_states), false);
  for (int u = 0; u < nfa.num_states; ++u) {
    nfa.accepting[static_cast<std::size_t>(u)] = final_check(a, summaries[static_cast<std::size_t>(u)]);
  }
  return nfa;
}

UniversalityResult onfa_universal(const OneWayNFA& n, std::size_t subset_cap) {
  const int sigma = n.sigma_size();
  std::map<std::vector<int>, int> id_of;
  std::vector<std::vector<int>> subsets;
  std::vector<int> parent, parent_letter;

  auto rejecting = [&](const std::vector<int>& subset) {
    for (int q : subset) {
      if (n.accepting[static_cast<std::size_t>(q)]) return false;
    }
    return true;
  };

  std::vector<int> init = n.initial;
  std::sort(init.begin(), init.end());
  init.erase(std::unique(init.begin(), init.end()), init.end());
  id_of.emplace(init, 0);
  subsets.push_back(init);
  parent.push_back(-1);
  parent_letter.push_back(-1);

  int bad = rejecting(init) ? 0 : -1;
  std::deque<int> queue{0};
  while (!queue.empty() && bad < 0) {
    int u = queue.front();
    queue.pop_front();
    const std::vector<int> current = subsets[static_cast<std::size_t>(u)];
    for (int letter = 0; letter < sigma && bad < 0; ++letter) {
      std::set<int> next_set;
      for (int q : current) {
        for (int t : n.targets(q, letter)) next_set.insert(t);
      }
      std::vector<int> next(next_set.begin(), next_set.end());
      auto it = id_of.find(next);
      if (it != id_of.end()) continue;
      if (subsets.size() >= subset_cap) throw BudgetError("subset budget exceeded");
      int v = static_cast<int>(subsets.size());
      id_of.emplace(next, v);
      subsets.push_back(next);
      parent.push_back(u);
      parent_letter.push_back(letter);
      if (rejecting(next)) {
        bad = v;
        break;
      }
      queue.push_back(v);
    }
  }
  UniversalityResult result;
  if (bad < 0) {
    result.universal = true;
    return result;
  }
  std::vector<int> word;
  for (int cur = bad; parent[static_cast<std::size_t>(cur)] >= 0;
       cur = parent[static_cast<std::size_t>(cur)]) {
    word.push_back(parent_letter[static_cast<std::size_t>(cur)]);
  }
  std::reverse(word.begin(), word.end());
  result.universal = false;
  result.counterexample = std::move(word);
  return result;
}

SafetyResult head_is_safe(const MultiHeadNFA& m, int head, const HaltingOptions& opts) {
  MultiHeadNFA view = project_head(m, head);
  TwoWayAFA wrapper = halting_wrapper(view);
  OneWayNFA nfa = afa_to_onfa(wrapper, opts);
  UniversalityResult u = onfa_universal(nfa, opts.nfa_state_cap);
  SafetyResult result;
  result.safe = u.universal;
  if (!u.universal) {
    Word w;
    for (int letter : *u.counterexample) w.push_back(TapeAlphabet::first_input + letter);
    result.counterexample = std::move(w);
  }
  return result;
}

std::optional<std::pair<Word, LoopWitness>> find_loop_witness(const MultiHeadNFA& m, int max_len,
                                                              const RunOptions& opts) {
  if (max_len < 0) throw std::invalid_argument("max_len must be nonnegative");
  const int sigma = m.alphabet.sigma_size();
  for (int len = 0; len <= max_len; ++len) {
    Word w(static_cast<std::size_t>(len), TapeAlphabet::first_input);
    if (len == 0) {
      auto [halts, witness] = always_halts_on(m, w, opts);
      if (!halts) return std::make_pair(w, std::move(*witness));
      continue;
    }
    if (sigma == 0) break;
    while (true) {
      auto [halts, witness] = always_halts_on(m, w, opts);
      if (!halts) return std::make_pair(w, std::move(*witness));
      int i = len - 1;
      while (i >= 0 && w[static_cast<std::size_t>(i)] == TapeAlphabet::first_input + sigma - 1) {
        w[static_cast<std::size_t>(i)] = TapeAlphabet::first_input;
        --i;
      }
      if (i < 0) break;
      ++w[static_cast<std::size_t>(i)];
    }
  }
  return std::nullopt;
}

}  // namespace mhfa
