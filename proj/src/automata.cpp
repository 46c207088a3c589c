#include "automata.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace mhfa {

char move_letter(HeadMove m) {
  switch (m) {
    case HeadMove::left: return 'L';
    case HeadMove::stay: return 'S';
    case HeadMove::right: return 'R';
  }
  return '?';
}

std::optional<HeadMove> move_from_letter(const std::string& token) {
  if (token == "L") return HeadMove::left;
  if (token == "S") return HeadMove::stay;
  if (token == "R") return HeadMove::right;
  return std::nullopt;
}

const std::string& TapeAlphabet::token(Symbol s) const {
  static const std::string kLeft = "^";
  static const std::string kRight = "$";
  if (s == left_marker) return kLeft;
  if (s == right_marker) return kRight;
  return input_tokens.at(static_cast<std::size_t>(s - first_input));
}

std::optional<Symbol> TapeAlphabet::find(const std::string& tok) const {
  if (tok == "^") return left_marker;
  if (tok == "$") return right_marker;
  for (std::size_t i = 0; i < input_tokens.size(); ++i) {
    if (input_tokens[i] == tok) return static_cast<Symbol>(i) + first_input;
  }
  return std::nullopt;
}

std::optional<StateId> MultiHeadNFA::find_state(const std::string& name) const {
  for (std::size_t i = 0; i < state_names.size(); ++i) {
    if (state_names[i] == name) return static_cast<StateId>(i);
  }
  return std::nullopt;
}

std::uint64_t MultiHeadNFA::scan_key(StateId q, const std::vector<Symbol>& scan) const {
  std::uint64_t key = static_cast<std::uint64_t>(q);
  const std::uint64_t gamma = static_cast<std::uint64_t>(alphabet.gamma_size());
  for (Symbol s : scan) key = key * gamma + static_cast<std::uint64_t>(s);
  return key;
}

void MultiHeadNFA::finalize() {
  if (heads < 1) throw std::invalid_argument("head count must be positive");
  if (initial < 0 || initial >= state_count()) throw std::invalid_argument("initial state undeclared");
  if (accept < 0 || accept >= state_count()) throw std::invalid_argument("accept state undeclared");
  if (reject < 0 || reject >= state_count()) throw std::invalid_argument("reject state undeclared");
  if (accept == reject) throw std::invalid_argument("accept and reject states must differ");
  {
    std::set<std::string> seen;
    for (const auto& s : state_names) {
      if (!seen.insert(s).second) throw std::invalid_argument("duplicate state " + s);
    }
    std::set<std::string> toks;
    for (const auto& t : alphabet.input_tokens) {
      if (t == "^" || t == "$") throw std::invalid_argument("end marker tokens are reserved");
      if (!toks.insert(t).second) throw std::invalid_argument("duplicate alphabet token " + t);
    }
  }
  index_.clear();
  for (std::size_t id = 0; id < transitions.size(); ++id) {
    const Transition& t = transitions[id];
    if (t.from < 0 || t.from >= state_count() || t.to < 0 || t.to >= state_count())
      throw std::invalid_argument("transition references undeclared state");
    if (is_terminal(t.from))
      throw std::invalid_argument("transition out of a terminal state");
    if (static_cast<int>(t.scan.size()) != heads || static_cast<int>(t.moves.size()) != heads)
      throw std::invalid_argument("transition arity mismatch");
    for (Symbol s : t.scan) {
      if (s < 0 || s >= alphabet.gamma_size())
        throw std::invalid_argument("transition references undeclared symbol");
    }
    index_[scan_key(t.from, t.scan)].push_back(static_cast<int>(id));
  }
}

const std::vector<int>& MultiHeadNFA::transitions_from(StateId q,
                                                       const std::vector<Symbol>& scan) const {
  static const std::vector<int> kEmpty;
  auto it = index_.find(scan_key(q, scan));
  return it == index_.end() ? kEmpty : it->second;
}

// ---------------------------------------------------------------------------
// Parsing / serialization

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') break;
    out.push_back(tok);
  }
  return out;
}

}  // namespace

MultiHeadNFA parse_machine(const std::string& text) {
  MultiHeadNFA m;
  m.heads = 0;
  bool saw_states = false;
  bool saw_alphabet = false;
  std::string init_name, acc_name, rej_name;
  int init_line = 0;

  struct RawTrans {
    std::vector<std::string> tokens;
    int line;
  };
  std::vector<RawTrans> raw_transitions;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0];
    if (head == "automaton") {
      if (toks.size() != 2) throw ParseError(lineno, "expected: automaton <name>");
      m.name = toks[1];
    } else if (head == "heads") {
      if (toks.size() != 2) throw ParseError(lineno, "expected: heads <k>");
      try {
        m.heads = std::stoi(toks[1]);
      } catch (const std::exception&) {
        throw ParseError(lineno, "head count is not a number");
      }
      if (m.heads < 1) throw ParseError(lineno, "head count must be positive");
    } else if (head == "alphabet") {
      saw_alphabet = true;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (toks[i] == "^" || toks[i] == "$")
          throw ParseError(lineno, "end marker tokens are reserved");
        m.alphabet.input_tokens.push_back(toks[i]);
      }
    } else if (head == "states") {
      saw_states = true;
      for (std::size_t i = 1; i < toks.size(); ++i) m.state_names.push_back(toks[i]);
    } else if (head == "initial") {
      if (toks.size() != 2) throw ParseError(lineno, "expected: initial <state>");
      init_name = toks[1];
      init_line = lineno;
    } else if (head == "accept") {
      if (toks.size() != 2) throw ParseError(lineno, "expected: accept <state>");
      acc_name = toks[1];
    } else if (head == "reject") {
      if (toks.size() != 2) throw ParseError(lineno, "expected: reject <state>");
      rej_name = toks[1];
    } else if (head == "trans") {
      raw_transitions.push_back({toks, lineno});
    } else {
      throw ParseError(lineno, "unknown directive '" + head + "'");
    }
  }

  if (m.heads == 0) throw ParseError(lineno, "missing 'heads' declaration");
  if (!saw_alphabet) throw ParseError(lineno, "missing 'alphabet' declaration");
  if (!saw_states) throw ParseError(lineno, "missing 'states' declaration");
  if (m.name.empty()) m.name = "machine";

  auto state_or_throw = [&](const std::string& name, int at) -> StateId {
    auto q = m.find_state(name);
    if (!q) throw ParseError(at, "undeclared state '" + name + "'");
    return *q;
  };
  if (init_name.empty()) throw ParseError(lineno, "missing 'initial'");
  if (acc_name.empty()) throw ParseError(lineno, "missing 'accept'");
  if (rej_name.empty()) throw ParseError(lineno, "missing 'reject'");
  m.initial = state_or_throw(init_name, init_line);
  m.accept = state_or_throw(acc_name, init_line);
  m.reject = state_or_throw(rej_name, init_line);

  for (const auto& raw : raw_transitions) {
    const auto& toks = raw.tokens;
    // trans <q> <s1> .. <sk> -> <q'> <m1> .. <mk>
    const std::size_t want = 1 + 1 + static_cast<std::size_t>(m.heads) + 1 + 1 +
                             static_cast<std::size_t>(m.heads);
    if (toks.size() != want || toks[2 + static_cast<std::size_t>(m.heads)] != "->")
      throw ParseError(raw.line, "transition arity mismatch (expected " +
                                     std::to_string(m.heads) + " symbols and moves)");
    Transition t;
    t.from = state_or_throw(toks[1], raw.line);
    for (int i = 0; i < m.heads; ++i) {
      const std::string& st = toks[2 + static_cast<std::size_t>(i)];
      auto sym = m.alphabet.find(st);
      if (!sym) throw ParseError(raw.line, "undeclared symbol '" + st + "'");
      t.scan.push_back(*sym);
    }
    t.to = state_or_throw(toks[3 + static_cast<std::size_t>(m.heads)], raw.line);
    for (int i = 0; i < m.heads; ++i) {
      const std::string& mt = toks[4 + static_cast<std::size_t>(m.heads + i)];
      auto mv = move_from_letter(mt);
      if (!mv) throw ParseError(raw.line, "bad move '" + mt + "' (expected L, S or R)");
      t.moves.push_back(*mv);
    }
    if (m.is_terminal(t.from))
      throw ParseError(raw.line, "transition out of terminal state '" + toks[1] + "'");
    m.transitions.push_back(std::move(t));
  }

  try {
    m.finalize();
  } catch (const std::invalid_argument& e) {
    throw ParseError(lineno, e.what());
  }
  return m;
}

namespace {

std::string render_transition(const MultiHeadNFA& m, const Transition& t) {
  std::ostringstream out;
  out << "trans " << m.state_names[static_cast<std::size_t>(t.from)];
  for (Symbol s : t.scan) out << ' ' << m.alphabet.token(s);
  out << " -> " << m.state_names[static_cast<std::size_t>(t.to)];
  for (HeadMove mv : t.moves) out << ' ' << move_letter(mv);
  return out.str();
}

std::string serialize_body(const MultiHeadNFA& m, bool canonical) {
  std::ostringstream out;
  out << "heads " << m.heads << "\n";
  out << "alphabet";
  for (const auto& t : m.alphabet.input_tokens) out << ' ' << t;
  out << "\n";
  out << "states";
  for (const auto& s : m.state_names) out << ' ' << s;
  out << "\n";
  out << "initial " << m.state_names[static_cast<std::size_t>(m.initial)] << "\n";
  out << "accept " << m.state_names[static_cast<std::size_t>(m.accept)] << "\n";
  out << "reject " << m.state_names[static_cast<std::size_t>(m.reject)] << "\n";
  std::vector<std::string> lines;
  lines.reserve(m.transitions.size());
  for (const auto& t : m.transitions) lines.push_back(render_transition(m, t));
  if (canonical) std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) out << l << "\n";
  return out.str();
}

}  // namespace

std::string serialize_machine(const MultiHeadNFA& m, bool canonical) {
  return "automaton " + m.name + "\n" + serialize_body(m, canonical);
}

bool same_machine(const MultiHeadNFA& a, const MultiHeadNFA& b) {
  return serialize_body(a, true) == serialize_body(b, true);
}

Word parse_input(const MultiHeadNFA& m, const std::string& text) {
  bool single_char = true;
  for (const auto& t : m.alphabet.input_tokens) {
    if (t.size() != 1) single_char = false;
  }
  std::vector<std::string> toks;
  if (single_char) {
    for (char c : text) {
      if (c == ' ' || c == '\t') continue;
      toks.emplace_back(1, c);
    }
  } else {
    std::istringstream in(text);
    std::string t;
    while (in >> t) toks.push_back(t);
  }
  Word w;
  w.reserve(toks.size());
  for (const auto& t : toks) {
    auto s = m.alphabet.find(t);
    if (!s || m.alphabet.is_marker(*s))
      throw std::invalid_argument("input token '" + t + "' not in the input alphabet");
    w.push_back(*s);
  }
  return w;
}

std::string render_input(const MultiHeadNFA& m, const Word& w) {
  bool single_char = true;
  for (const auto& t : m.alphabet.input_tokens) {
    if (t.size() != 1) single_char = false;
  }
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!single_char && i > 0) out += ' ';
    out += m.alphabet.token(w[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration graph machinery

Configuration initial_configuration(const MultiHeadNFA& m) {
  Configuration c;
  c.state = m.initial;
  c.positions.assign(static_cast<std::size_t>(m.heads), 0);
  return c;
}

std::vector<Symbol> scanned_symbols(const Word& x, const Configuration& c) {
  const int n = static_cast<int>(x.size());
  std::vector<Symbol> scan;
  scan.reserve(c.positions.size());
  for (int p : c.positions) {
    if (p == 0) {
      scan.push_back(TapeAlphabet::left_marker);
    } else if (p == n + 1) {
      scan.push_back(TapeAlphabet::right_marker);
    } else {
      scan.push_back(x[static_cast<std::size_t>(p - 1)]);
    }
  }
  return scan;
}

namespace {

int clamp_move(int pos, HeadMove mv, int n) {
  int next = pos + move_offset(mv);
  if (next < 0) next = 0;
  if (next > n + 1) next = n + 1;
  return next;
}

/// Dense encoding of configurations for visited sets. The configuration
/// space must fit a 64-bit code; anything larger is over budget anyway.
class ConfigCodec {
 public:
  ConfigCodec(const MultiHeadNFA& m, int n) : width_(n + 2) {
    std::uint64_t capacity = static_cast<std::uint64_t>(m.state_count());
    for (int h = 0; h < m.heads; ++h) {
      if (capacity > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(width_))
        throw BudgetError("configuration space exceeds the 64-bit encoding");
      capacity *= static_cast<std::uint64_t>(width_);
    }
  }

  std::uint64_t encode(const Configuration& c) const {
    std::uint64_t code = static_cast<std::uint64_t>(c.state);
    for (int p : c.positions) code = code * static_cast<std::uint64_t>(width_) +
                                     static_cast<std::uint64_t>(p);
    return code;
  }

 private:
  int width_;
};

struct ReachableGraph {
  // nodes in BFS discovery order; edges ordered by transition id
  std::vector<Configuration> nodes;
  std::vector<std::vector<std::pair<int, int>>> edges;  // (target node, transition id)
  std::unordered_map<std::uint64_t, int> id_of;
};

ReachableGraph explore(const MultiHeadNFA& m, const Word& x, const RunOptions& opts) {
  ReachableGraph g;
  ConfigCodec codec(m, static_cast<int>(x.size()));
  std::deque<int> queue;
  Configuration init = initial_configuration(m);
  g.id_of[codec.encode(init)] = 0;
  g.nodes.push_back(init);
  g.edges.emplace_back();
  queue.push_back(0);
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    Configuration cu = g.nodes[static_cast<std::size_t>(u)];
    auto succ = successors(m, x, cu);
    std::vector<std::pair<int, int>> out;
    out.reserve(succ.size());
    for (auto& [cv, tid] : succ) {
      std::uint64_t code = codec.encode(cv);
      auto it = g.id_of.find(code);
      int v;
      if (it == g.id_of.end()) {
        if (g.nodes.size() >= opts.node_budget)
          throw BudgetError("configuration budget exceeded (" +
                            std::to_string(opts.node_budget) + " nodes)");
        v = static_cast<int>(g.nodes.size());
        g.id_of.emplace(code, v);
        g.nodes.push_back(cv);
        g.edges.emplace_back();
        queue.push_back(v);
      } else {
        v = it->second;
      }
      out.emplace_back(v, tid);
    }
    g.edges[static_cast<std::size_t>(u)] = std::move(out);
  }
  return g;
}

/// Iterative DFS over the reachable graph; returns a lasso if a cycle exists.
std::optional<LoopWitness> find_cycle(const ReachableGraph& g) {
  const int n = static_cast<int>(g.nodes.size());
  std::vector<int> color(static_cast<std::size_t>(n), 0);  // 0 white, 1 grey, 2 black
  struct Frame {
    int node;
    std::size_t next_edge;
    int via_tid;  // transition that led here (-1 for root)
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0, -1});
  color[0] = 1;
  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto& out = g.edges[static_cast<std::size_t>(f.node)];
    if (f.next_edge < out.size()) {
      auto [v, tid] = out[f.next_edge++];
      if (color[static_cast<std::size_t>(v)] == 0) {
        color[static_cast<std::size_t>(v)] = 1;
        stack.push_back({v, 0, tid});
      } else if (color[static_cast<std::size_t>(v)] == 1) {
        // back edge: v is on the stack
        LoopWitness w;
        std::size_t entry_idx = 0;
        for (std::size_t i = 0; i < stack.size(); ++i) {
          if (stack[i].node == v) {
            entry_idx = i;
            break;
          }
        }
        for (std::size_t i = 0; i < entry_idx; ++i) {
          w.stem.push_back({g.nodes[static_cast<std::size_t>(stack[i].node)],
                            stack[i + 1].via_tid});
        }
        for (std::size_t i = entry_idx; i + 1 < stack.size(); ++i) {
          w.cycle.push_back({g.nodes[static_cast<std::size_t>(stack[i].node)],
                             stack[i + 1].via_tid});
        }
        w.cycle.push_back({g.nodes[static_cast<std::size_t>(f.node)], tid});
        w.entry = g.nodes[static_cast<std::size_t>(v)];
        return w;
      }
    } else {
      color[static_cast<std::size_t>(f.node)] = 2;
      stack.pop_back();
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::pair<Configuration, int>> successors(const MultiHeadNFA& m, const Word& x,
                                                      const Configuration& c) {
  std::vector<std::pair<Configuration, int>> out;
  if (m.is_terminal(c.state)) return out;
  const int n = static_cast<int>(x.size());
  auto scan = scanned_symbols(x, c);
  for (int tid : m.transitions_from(c.state, scan)) {
    const Transition& t = m.transitions[static_cast<std::size_t>(tid)];
    Configuration next;
    next.state = t.to;
    next.positions.reserve(c.positions.size());
    for (std::size_t i = 0; i < c.positions.size(); ++i) {
      next.positions.push_back(clamp_move(c.positions[i], t.moves[i], n));
    }
    out.emplace_back(std::move(next), tid);
  }
  return out;
}

RunResult accepts(const MultiHeadNFA& m, const Word& x, const RunOptions& opts) {
  ReachableGraph g = explore(m, x, opts);
  RunResult result;

  // Shortest path to an accept configuration (BFS discovery order).
  std::vector<int> parent(g.nodes.size(), -1);
  std::vector<int> parent_tid(g.nodes.size(), -1);
  std::vector<int> depth(g.nodes.size(), -1);
  depth[0] = 0;
  std::deque<int> queue{0};
  int goal = -1;
  if (g.nodes[0].state == m.accept) goal = 0;
  while (!queue.empty() && goal < 0) {
    int u = queue.front();
    queue.pop_front();
    for (auto [v, tid] : g.edges[static_cast<std::size_t>(u)]) {
      if (depth[static_cast<std::size_t>(v)] >= 0) continue;
      depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(u)] + 1;
      parent[static_cast<std::size_t>(v)] = u;
      parent_tid[static_cast<std::size_t>(v)] = tid;
      if (g.nodes[static_cast<std::size_t>(v)].state == m.accept) {
        goal = v;
        break;
      }
      queue.push_back(v);
    }
  }
  if (goal >= 0) {
    result.member = true;
    std::vector<PathStep> path;
    int cur = goal;
    while (parent[static_cast<std::size_t>(cur)] >= 0) {
      int p = parent[static_cast<std::size_t>(cur)];
      path.push_back({g.nodes[static_cast<std::size_t>(p)],
                      parent_tid[static_cast<std::size_t>(cur)]});
      cur = p;
    }
    std::reverse(path.begin(), path.end());
    result.accepting_path = std::move(path);
  }

  auto cycle = find_cycle(g);
  result.halting = !cycle.has_value();
  result.loop = std::move(cycle);
  return result;
}

std::pair<bool, std::optional<LoopWitness>> always_halts_on(const MultiHeadNFA& m, const Word& x,
                                                            const RunOptions& opts) {
  ReachableGraph g = explore(m, x, opts);
  auto cycle = find_cycle(g);
  bool halts = !cycle.has_value();
  return {halts, std::move(cycle)};
}

std::optional<std::uint64_t> max_run_steps(const MultiHeadNFA& m, const Word& x,
                                           const RunOptions& opts) {
  ReachableGraph g = explore(m, x, opts);
  const std::size_t n = g.nodes.size();
  std::vector<int> indegree(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    for (auto [v, tid] : g.edges[u]) {
      (void)tid;
      ++indegree[static_cast<std::size_t>(v)];
    }
  }
  std::deque<int> queue;
  for (std::size_t u = 0; u < n; ++u) {
    if (indegree[u] == 0) queue.push_back(static_cast<int>(u));
  }
  std::vector<int> topo;
  topo.reserve(n);
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    topo.push_back(u);
    for (auto [v, tid] : g.edges[static_cast<std::size_t>(u)]) {
      (void)tid;
      if (--indegree[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
    }
  }
  if (topo.size() != n) return std::nullopt;  // reachable cycle

  std::vector<std::int64_t> dist(n, -1);
  dist[0] = 0;
  std::uint64_t best = 0;
  for (int u : topo) {
    if (dist[static_cast<std::size_t>(u)] < 0) continue;
    for (auto [v, tid] : g.edges[static_cast<std::size_t>(u)]) {
      (void)tid;
      std::int64_t cand = dist[static_cast<std::size_t>(u)] + 1;
      if (cand > dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = cand;
        if (static_cast<std::uint64_t>(cand) > best) best = static_cast<std::uint64_t>(cand);
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Two-way alternating automata

void TwoWayAFA::finalize() {
  if (initial < 0 || initial >= state_count()) throw std::invalid_argument("bad initial state");
  if (universal.size() != state_names.size() || accepting.size() != state_names.size())
    throw std::invalid_argument("state attribute arity mismatch");
  index_.clear();
  const std::uint64_t gamma = static_cast<std::uint64_t>(alphabet.gamma_size());
  for (std::size_t id = 0; id < transitions.size(); ++id) {
    const auto& t = transitions[id];
    if (t.from < 0 || t.from >= state_count() || t.to < 0 || t.to >= state_count())
      throw std::invalid_argument("AFA transition references undeclared state");
    if (t.scan < 0 || t.scan >= alphabet.gamma_size())
      throw std::invalid_argument("AFA transition references undeclared symbol");
    index_[static_cast<std::uint64_t>(t.from) * gamma + static_cast<std::uint64_t>(t.scan)]
        .push_back(static_cast<int>(id));
  }
}

const std::vector<int>& TwoWayAFA::transitions_from(StateId q, Symbol s) const {
  static const std::vector<int> kEmpty;
  auto it = index_.find(static_cast<std::uint64_t>(q) *
                            static_cast<std::uint64_t>(alphabet.gamma_size()) +
                        static_cast<std::uint64_t>(s));
  return it == index_.end() ? kEmpty : it->second;
}

bool afa_accepts(const TwoWayAFA& a, const Word& x) {
  const int n = static_cast<int>(x.size());
  const int width = n + 2;
  const int total = a.state_count() * width;
  auto id_of = [&](StateId q, int pos) { return q * width + pos; };
  auto symbol_at = [&](int pos) -> Symbol {
    if (pos == 0) return TapeAlphabet::left_marker;
    if (pos == n + 1) return TapeAlphabet::right_marker;
    return x[static_cast<std::size_t>(pos - 1)];
  };

  // Forward edges and reverse adjacency.
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(total));
  std::vector<std::vector<int>> pred(static_cast<std::size_t>(total));
  for (StateId q = 0; q < a.state_count(); ++q) {
    if (a.accepting[static_cast<std::size_t>(q)]) continue;  // terminal
    for (int pos = 0; pos < width; ++pos) {
      Symbol s = symbol_at(pos);
      for (int tid : a.transitions_from(q, s)) {
        const auto& t = a.transitions[static_cast<std::size_t>(tid)];
        int next = clamp_move(pos, t.move, n);
        int u = id_of(q, pos);
        int v = id_of(t.to, next);
        succ[static_cast<std::size_t>(u)].push_back(v);
        pred[static_cast<std::size_t>(v)].push_back(u);
      }
    }
  }

  std::vector<bool> winning(static_cast<std::size_t>(total), false);
  std::vector<int> remaining(static_cast<std::size_t>(total), 0);
  std::deque<int> queue;
  for (StateId q = 0; q < a.state_count(); ++q) {
    for (int pos = 0; pos < width; ++pos) {
      int u = id_of(q, pos);
      if (a.accepting[static_cast<std::size_t>(q)]) {
        winning[static_cast<std::size_t>(u)] = true;
        queue.push_back(u);
        continue;
      }
      remaining[static_cast<std::size_t>(u)] =
          static_cast<int>(succ[static_cast<std::size_t>(u)].size());
      if (a.universal[static_cast<std::size_t>(q)] && remaining[static_cast<std::size_t>(u)] == 0) {
        winning[static_cast<std::size_t>(u)] = true;  // stuck universal: vacuous win
        queue.push_back(u);
      }
    }
  }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int u : pred[static_cast<std::size_t>(v)]) {
      if (winning[static_cast<std::size_t>(u)]) continue;
      StateId q = u / width;
      if (a.universal[static_cast<std::size_t>(q)]) {
        if (--remaining[static_cast<std::size_t>(u)] == 0) {
          winning[static_cast<std::size_t>(u)] = true;
          queue.push_back(u);
        }
      } else {
        winning[static_cast<std::size_t>(u)] = true;
        queue.push_back(u);
      }
    }
  }
  return winning[static_cast<std::size_t>(id_of(a.initial, 0))];
}

TwoWayAFA afa_from_nfa(const MultiHeadNFA& m) {
  if (m.heads != 1) throw std::invalid_argument("afa_from_nfa requires a 1-head machine");
  TwoWayAFA a;
  a.alphabet = m.alphabet;
  a.state_names = m.state_names;
  a.universal.assign(m.state_names.size(), false);
  a.accepting.assign(m.state_names.size(), false);
  a.accepting[static_cast<std::size_t>(m.accept)] = true;
  a.initial = m.initial;
  for (const auto& t : m.transitions) {
    a.transitions.push_back({t.from, t.scan[0], t.to, t.moves[0]});
  }
  a.finalize();
  return a;
}

// ---------------------------------------------------------------------------
// One-way automata

bool onfa_accepts(const OneWayNFA& n, const std::vector<int>& word) {
  std::set<int> current(n.initial.begin(), n.initial.end());
  for (int a : word) {
    std::set<int> next;
    for (int q : current) {
      for (int t : n.targets(q, a)) next.insert(t);
    }
    current = std::move(next);
  }
  for (int q : current) {
    if (n.accepting[static_cast<std::size_t>(q)]) return true;
  }
  return false;
}

bool odfa_accepts(const OneWayDFA& d, const std::vector<int>& word) {
  int q = d.initial;
  for (int a : word) q = d.next[static_cast<std::size_t>(q * d.sigma_size() + a)];
  return d.accepting[static_cast<std::size_t>(q)];
}

OneWayDFA determinize(const OneWayNFA& n, std::size_t max_states) {
  OneWayDFA d;
  d.sigma_tokens = n.sigma_tokens;
  std::map<std::vector<int>, int> id_of;
  std::vector<std::vector<int>> subsets;
  auto intern = [&](std::vector<int> subset) {
    auto it = id_of.find(subset);
    if (it != id_of.end()) return it->second;
    if (subsets.size() >= max_states) throw BudgetError("subset budget exceeded");
    int id = static_cast<int>(subsets.size());
    id_of.emplace(subset, id);
    subsets.push_back(std::move(subset));
    return id;
  };
  std::vector<int> init(n.initial.begin(), n.initial.end());
  std::sort(init.begin(), init.end());
  init.erase(std::unique(init.begin(), init.end()), init.end());
  d.initial = intern(init);
  for (std::size_t u = 0; u < subsets.size(); ++u) {
    const std::vector<int> current = subsets[u];  // intern() may reallocate
    for (int a = 0; a < n.sigma_size(); ++a) {
      std::set<int> next;
      for (int q : current) {
        for (int t : n.targets(q, a)) next.insert(t);
      }
      int v = intern(std::vector<int>(next.begin(), next.end()));
      d.next.resize(std::max(d.next.size(), (u + 1) * static_cast<std::size_t>(n.sigma_size())));
      d.next[u * static_cast<std::size_t>(n.sigma_size()) + static_cast<std::size_t>(a)] = v;
    }
  }
  d.num_states = static_cast<int>(subsets.size());
  d.next.resize(static_cast<std::size_t>(d.num_states) * static_cast<std::size_t>(n.sigma_size()));
  d.accepting.assign(static_cast<std::size_t>(d.num_states), false);
  for (int u = 0; u < d.num_states; ++u) {
    for (int q : subsets[static_cast<std::size_t>(u)]) {
      if (n.accepting[static_cast<std::size_t>(q)]) d.accepting[static_cast<std::size_t>(u)] = true;
    }
  }
  return d;
}

}  // namespace mhfa
