#include "ips.hpp"

#include "halting.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace mhfa {

std::string mode_name(VerifierMode mode) {
  switch (mode) {
    case VerifierMode::GB: return "GB";
    case VerifierMode::SYW: return "SYW";
    case VerifierMode::SYS: return "SYS";
  }
  return "?";
}

std::optional<VerifierMode> mode_from_name(const std::string& name) {
  if (name == "GB") return VerifierMode::GB;
  if (name == "SYW") return VerifierMode::SYW;
  if (name == "SYS") return VerifierMode::SYS;
  return std::nullopt;
}

int VerifierSpec::coins_per_round() const {
  return (mode == VerifierMode::GB ? weight_bits : 0) + selector_bits;
}

int VerifierSpec::upfront_coins() const {
  return mode == VerifierMode::SYS ? selector_bits + 1 : 0;
}

namespace {

int ceil_log2(int k) {
  int bits = 0;
  while ((1 << bits) < k) ++bits;
  return bits;
}

void check_classification(const HeadClassification& c, int heads) {
  std::vector<bool> seen(static_cast<std::size_t>(heads) + 1, false);
  auto take = [&](const std::vector<int>& group) {
    int prev = 0;
    for (int i : group) {
      if (i < 1 || i > heads) throw std::invalid_argument("head index out of range");
      if (i <= prev) throw std::invalid_argument("head indices must be ascending");
      if (seen[static_cast<std::size_t>(i)])
        throw std::invalid_argument("head classified twice");
      seen[static_cast<std::size_t>(i)] = true;
      prev = i;
    }
  };
  take(c.safe);
  take(c.risky);
  if (c.head_count() != heads)
    throw std::invalid_argument("classification must cover every head");
}

std::vector<Rational> head_probabilities_impl(const HeadClassification& c, VerifierMode mode,
                                              int selector_bits, const Rational& w) {
  const int k = c.head_count();
  std::vector<Rational> probs(static_cast<std::size_t>(k), Rational(0));
  const BigInt selector_count = BigInt(1) << selector_bits;
  const Rational per_u(1, selector_count);
  for (BigInt u = 0; u < selector_count; ++u) {
    if (mode == VerifierMode::GB) {
      if (c.risky_count() > 0) {
        int idx = static_cast<int>(u % c.risky_count());
        probs[static_cast<std::size_t>(c.risky[static_cast<std::size_t>(idx)] - 1)] += w * per_u;
      }
      int idx = static_cast<int>(u % c.safe_count());
      probs[static_cast<std::size_t>(c.safe[static_cast<std::size_t>(idx)] - 1)] +=
          (Rational(1) - w) * per_u;
    } else {
      int idx = static_cast<int>(u % k);
      probs[static_cast<std::size_t>(idx)] += per_u;
    }
  }
  return probs;
}

}  // namespace

VerifierSpec build_verifier(const MultiHeadNFA& machine, const HeadClassification& classification,
                            VerifierMode mode, int rounds, const Rational& risky_weight,
                            bool verify_classification) {
  check_classification(classification, machine.heads);
  if (rounds < 1) throw std::invalid_argument("round count must be positive");

  VerifierSpec v;
  v.machine = machine;
  v.classification = classification;
  v.mode = mode;
  v.rounds = rounds;
  v.selector_bits = ceil_log2(machine.heads);

  if (mode == VerifierMode::GB) {
    if (classification.safe_count() == 0)
      throw std::invalid_argument("GB requires at least one safe head");
    if (risky_weight < 0 || risky_weight >= 1)
      throw std::invalid_argument("risky weight must lie in [0, 1)");
    int bits = 0;
    if (!is_dyadic(risky_weight, &bits))
      throw std::invalid_argument("risky weight must be dyadic (a/2^B)");
    if ((risky_weight == 0) != (classification.risky_count() == 0))
      throw std::invalid_argument("risky weight is zero exactly when no head is risky");
    v.risky_weight = risky_weight;
    v.weight_bits = bits;
  } else {
    v.risky_weight = 0;
    v.weight_bits = 0;
    if (mode == VerifierMode::SYS) {
      const int k = machine.heads;
      v.sys_reject_target = Rational(k - 1, 2 * k);
      const BigInt scale = BigInt(1) << (v.selector_bits + 1);
      // Nearest dyadic on selector_bits+1 coins, half away from zero.
      BigInt num = BigInt(k - 1) * scale;
      BigInt den = BigInt(2 * k);
      BigInt a = (num + den / 2) / den;
      v.sys_reject_realized = Rational(a, scale);
      v.sys_approximate = v.sys_reject_realized != v.sys_reject_target;
    }
  }

  if (verify_classification) {
    for (int head = 1; head <= machine.heads; ++head) {
      bool claimed_safe = std::find(classification.safe.begin(), classification.safe.end(),
                                    head) != classification.safe.end();
      if (head_is_safe(machine, head).safe != claimed_safe)
        throw std::invalid_argument("classification disagrees with the safety pipeline on head " +
                                    std::to_string(head));
    }
  }
  return v;
}

std::vector<Rational> head_probabilities(const VerifierSpec& v) {
  return head_probabilities_impl(v.classification, v.mode, v.selector_bits, v.risky_weight);
}

Rational detection_floor(const VerifierSpec& v) {
  auto probs = head_probabilities(v);
  Rational p = 1;
  for (const auto& q : probs) p = std::min(p, q);
  return p;
}

// ---------------------------------------------------------------------------
// Verifier block serialization

namespace {

std::string join_heads(const std::vector<int>& heads) {
  if (heads.empty()) return "-";
  std::ostringstream out;
  for (std::size_t i = 0; i < heads.size(); ++i) {
    if (i > 0) out << ',';
    out << heads[i];
  }
  return out.str();
}

std::vector<int> split_heads(const std::string& text) {
  std::vector<int> out;
  if (text == "-" || text.empty()) return out;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) out.push_back(std::stoi(part));
  return out;
}

}  // namespace

std::string serialize_verifier(const VerifierSpec& v) {
  std::ostringstream out;
  out << "verifier mode=" << mode_name(v.mode) << " rounds=" << v.rounds
      << " w=" << fraction_string(v.risky_weight) << " heads=safe:"
      << join_heads(v.classification.safe) << ";risky:" << join_heads(v.classification.risky);
  if (v.mode == VerifierMode::SYS) {
    out << " sys_reject=" << fraction_string(v.sys_reject_realized);
  }
  out << "\n";
  return out.str();
}

VerifierSpec parse_verifier(const MultiHeadNFA& machine, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> toks;
    while (ls >> tok) {
      if (tok[0] == '#') break;
      toks.push_back(tok);
    }
    if (toks.empty()) continue;
    if (toks[0] != "verifier") throw ParseError(lineno, "expected 'verifier ...'");
    std::optional<VerifierMode> mode;
    int rounds = -1;
    Rational w = 0;
    HeadClassification c;
    for (std::size_t i = 1; i < toks.size(); ++i) {
      auto eq = toks[i].find('=');
      if (eq == std::string::npos) throw ParseError(lineno, "expected key=value, got " + toks[i]);
      std::string key = toks[i].substr(0, eq);
      std::string value = toks[i].substr(eq + 1);
      if (key == "mode") {
        mode = mode_from_name(value);
        if (!mode) throw ParseError(lineno, "unknown mode " + value);
      } else if (key == "rounds") {
        rounds = std::stoi(value);
      } else if (key == "w") {
        auto parsed = parse_fraction(value);
        if (!parsed) throw ParseError(lineno, "bad fraction " + value);
        w = *parsed;
      } else if (key == "heads") {
        auto semi = value.find(';');
        if (semi == std::string::npos || value.rfind("safe:", 0) != 0 ||
            value.find("risky:", semi + 1) != semi + 1)
          throw ParseError(lineno, "expected heads=safe:...;risky:...");
        c.safe = split_heads(value.substr(5, semi - 5));
        c.risky = split_heads(value.substr(semi + 7));
      } else if (key == "sys_reject") {
        // derived; recomputed by the builder
      } else {
        throw ParseError(lineno, "unknown key " + key);
      }
    }
    if (!mode || rounds < 0) throw ParseError(lineno, "missing mode or rounds");
    try {
      return build_verifier(machine, c, *mode, rounds, w);
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, e.what());
    }
  }
  throw ParseError(lineno, "missing verifier line");
}

// ---------------------------------------------------------------------------
// Certificates

std::string serialize_certificate(const MultiHeadNFA& m, const Certificate& cert) {
  std::ostringstream out;
  out << "certificate\n";
  auto emit = [&](const std::vector<CertificateRecord>& records) {
    for (const auto& r : records) {
      out << "rec";
      for (Symbol s : r.claimed) out << ' ' << m.alphabet.token(s);
      out << ' ' << m.state_names[static_cast<std::size_t>(r.next_state)];
      for (HeadMove mv : r.moves) out << ' ' << move_letter(mv);
      out << "\n";
    }
  };
  out << "prefix\n";
  emit(cert.prefix);
  out << "cycle\n";
  emit(cert.cycle);
  return out.str();
}

Certificate parse_certificate(const MultiHeadNFA& m, const std::string& text) {
  Certificate cert;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  int section = -1;  // 0 prefix, 1 cycle
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) {
      if (tok[0] == '#') break;
      toks.push_back(tok);
    }
    if (toks.empty()) continue;
    if (toks[0] == "certificate") {
      saw_header = true;
    } else if (toks[0] == "prefix") {
      section = 0;
    } else if (toks[0] == "cycle") {
      section = 1;
    } else if (toks[0] == "rec") {
      if (!saw_header) throw ParseError(lineno, "missing 'certificate' header");
      if (section < 0) throw ParseError(lineno, "record outside prefix/cycle section");
      const std::size_t k = static_cast<std::size_t>(m.heads);
      if (toks.size() != 2 + 2 * k)
        throw ParseError(lineno, "record arity mismatch (expected " + std::to_string(k) +
                                     " symbols and moves)");
      CertificateRecord r;
      for (std::size_t i = 0; i < k; ++i) {
        auto s = m.alphabet.find(toks[1 + i]);
        if (!s) throw ParseError(lineno, "undeclared symbol '" + toks[1 + i] + "'");
        r.claimed.push_back(*s);
      }
      auto q = m.find_state(toks[1 + k]);
      if (!q) throw ParseError(lineno, "undeclared state '" + toks[1 + k] + "'");
      r.next_state = *q;
      for (std::size_t i = 0; i < k; ++i) {
        auto mv = move_from_letter(toks[2 + k + i]);
        if (!mv) throw ParseError(lineno, "bad move '" + toks[2 + k + i] + "'");
        r.moves.push_back(*mv);
      }
      (section == 0 ? cert.prefix : cert.cycle).push_back(std::move(r));
    } else {
      throw ParseError(lineno, "unknown directive '" + toks[0] + "'");
    }
  }
  if (!saw_header) throw ParseError(lineno, "missing 'certificate' header");
  return cert;
}

std::optional<Certificate> honest_certificate(const MultiHeadNFA& m, const Word& x, int rounds,
                                              const RunOptions& opts) {
  RunResult run = accepts(m, x, opts);
  if (!run.member) return std::nullopt;
  Certificate cert;
  for (int round = 0; round < rounds; ++round) {
    for (const auto& step : *run.accepting_path) {
      const Transition& t = m.transitions[static_cast<std::size_t>(step.transition)];
      cert.prefix.push_back({t.scan, t.to, t.moves});
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Replay

namespace {

/// Random access into prefix.cycle^inf.
class CertStream {
 public:
  CertStream(const Certificate& cert) : cert_(&cert) {}

  bool has(std::size_t index) const {
    return index < cert_->prefix.size() || !cert_->cycle.empty();
  }
  const CertificateRecord& at(std::size_t index) const {
    if (index < cert_->prefix.size()) return cert_->prefix[index];
    return cert_->cycle[(index - cert_->prefix.size()) % cert_->cycle.size()];
  }
  bool in_cycle(std::size_t index) const {
    return index >= cert_->prefix.size() && !cert_->cycle.empty();
  }
  std::size_t cycle_index(std::size_t index) const {
    return (index - cert_->prefix.size()) % cert_->cycle.size();
  }
  std::size_t prefix_size() const { return cert_->prefix.size(); }
  std::size_t cycle_size() const { return cert_->cycle.size(); }

 private:
  const Certificate* cert_;
};

int clamp_position(int pos, HeadMove mv, int n) {
  int next = pos + move_offset(mv);
  if (next < 0) next = 0;
  if (next > n + 1) next = n + 1;
  return next;
}

Symbol symbol_at(const Word& x, int pos) {
  const int n = static_cast<int>(x.size());
  if (pos == 0) return TapeAlphabet::left_marker;
  if (pos == n + 1) return TapeAlphabet::right_marker;
  return x[static_cast<std::size_t>(pos - 1)];
}

/// True when the record is a legal continuation from state q: some
/// delta-alternative on the claimed symbols matches (next_state, moves) and
/// the next state is not the reject state.
bool record_valid(const MultiHeadNFA& m, StateId q, const CertificateRecord& r) {
  if (r.next_state == m.reject) return false;
  for (int tid : m.transitions_from(q, r.claimed)) {
    const Transition& t = m.transitions[static_cast<std::size_t>(tid)];
    if (t.to == r.next_state && t.moves == r.moves) return true;
  }
  return false;
}

class CoinCursor {
 public:
  explicit CoinCursor(const std::vector<bool>& coins) : coins_(&coins) {}

  BigInt draw(int bits) {
    BigInt value = 0;
    for (int i = 0; i < bits; ++i) {
      if (next_ >= coins_->size()) throw std::invalid_argument("coin underflow");
      value = (value << 1) + ((*coins_)[next_++] ? 1 : 0);
    }
    return value;
  }
  int used() const { return static_cast<int>(next_); }

 private:
  const std::vector<bool>* coins_;
  std::size_t next_ = 0;
};

int pick_head(const VerifierSpec& v, CoinCursor& coins) {
  const auto& c = v.classification;
  if (v.mode == VerifierMode::GB) {
    BigInt t = coins.draw(v.weight_bits);
    BigInt u = coins.draw(v.selector_bits);
    BigInt threshold = numerator(v.risky_weight) * ((BigInt(1) << v.weight_bits) /
                                                    denominator(v.risky_weight));
    if (v.risky_weight > 0 && t < threshold) {
      return c.risky[static_cast<std::size_t>(u % c.risky_count())];
    }
    return c.safe[static_cast<std::size_t>(u % c.safe_count())];
  }
  BigInt u = coins.draw(v.selector_bits);
  return static_cast<int>(u % c.head_count()) + 1;
}

}  // namespace

VerifierRunOutcome run_verifier(const VerifierSpec& v, const Word& x, const Certificate& cert,
                                const std::vector<bool>& coins) {
  const MultiHeadNFA& m = v.machine;
  const int n = static_cast<int>(x.size());
  CertStream stream(cert);
  CoinCursor cursor(coins);
  VerifierRunOutcome out;

  if (v.mode == VerifierMode::SYS) {
    BigInt draw = cursor.draw(v.selector_bits + 1);
    BigInt threshold = numerator(v.sys_reject_realized) *
                       ((BigInt(1) << (v.selector_bits + 1)) / denominator(v.sys_reject_realized));
    if (draw < threshold) {
      out.kind = RunOutcomeKind::reject;
      out.reject_position = 0;
      out.coins_used = cursor.used();
      return out;
    }
  }

  std::size_t pos_in_stream = 0;
  for (int round = 0; round < v.rounds; ++round) {
    const int head = pick_head(v, cursor);
    const std::size_t h = static_cast<std::size_t>(head - 1);
    StateId q = m.initial;
    int pos = 0;  // tape head back to the left end each round
    std::set<std::tuple<StateId, int, std::size_t>> seen;
    while (true) {
      if (stream.in_cycle(pos_in_stream)) {
        auto key = std::make_tuple(q, pos, stream.cycle_index(pos_in_stream));
        if (!seen.insert(key).second) {
          out.kind = RunOutcomeKind::loop;
          out.loop_witness = {q, pos, std::get<2>(key)};
          out.coins_used = cursor.used();
          out.rounds_completed = round;
          return out;
        }
      }
      if (!stream.has(pos_in_stream)) {
        out.kind = RunOutcomeKind::reject;  // certificate exhausted mid-round
        out.reject_position = pos_in_stream;
        out.coins_used = cursor.used();
        out.rounds_completed = round;
        return out;
      }
      const CertificateRecord& rec = stream.at(pos_in_stream);
      if (rec.claimed[h] != symbol_at(x, pos) || !record_valid(m, q, rec)) {
        out.kind = RunOutcomeKind::reject;
        out.reject_position = pos_in_stream;
        out.coins_used = cursor.used();
        out.rounds_completed = round;
        return out;
      }
      q = rec.next_state;
      pos = clamp_position(pos, rec.moves[h], n);
      ++pos_in_stream;
      if (q == m.accept) break;  // round passed
    }
  }
  out.kind = RunOutcomeKind::accept;
  out.coins_used = cursor.used();
  out.rounds_completed = v.rounds;
  return out;
}

HardwiredVerifier::HardwiredVerifier(const VerifierSpec& v, std::vector<bool> coins)
    : spec_(&v), coins_(std::move(coins)) {
  if (static_cast<int>(coins_.size()) != v.total_coins())
    throw std::invalid_argument("hardwired coin string must match the full budget (" +
                                std::to_string(v.total_coins()) + " coins)");
}

VerifierRunOutcome HardwiredVerifier::run(const Word& x, const Certificate& cert) const {
  return run_verifier(*spec_, x, cert, coins_);
}

HardwiredVerifier hardwire_coins(const VerifierSpec& v, std::vector<bool> coins) {
  return HardwiredVerifier(v, std::move(coins));
}

// ---------------------------------------------------------------------------
// Round outcome table and exact distribution

RoundOutcomeTable round_outcome_table(const VerifierSpec& v, const Word& x,
                                      const Certificate& cert) {
  const MultiHeadNFA& m = v.machine;
  const int n = static_cast<int>(x.size());
  const int k = m.heads;
  CertStream stream(cert);
  RoundOutcomeTable table;

  std::size_t begin = 0;
  for (int round = 0; round < v.rounds; ++round) {
    RoundRow row;
    row.begin = begin;
    row.outcome.assign(static_cast<std::size_t>(k), RoundHeadOutcome::reject);
    row.reject_position.assign(static_cast<std::size_t>(k), 0);

    // Head-independent segmentation: find the next accept-state record.
    std::optional<std::size_t> boundary;
    if (stream.cycle_size() == 0) {
      for (std::size_t idx = begin; idx < stream.prefix_size(); ++idx) {
        if (stream.at(idx).next_state == m.accept) {
          boundary = idx;
          break;
        }
      }
    } else {
      std::size_t scan_end = std::max(stream.prefix_size(), begin) + stream.cycle_size();
      for (std::size_t idx = begin; idx < scan_end; ++idx) {
        if (stream.at(idx).next_state == m.accept) {
          boundary = idx;
          break;
        }
      }
    }

    if (boundary) {
      row.end = *boundary + 1;
      for (int head = 1; head <= k; ++head) {
        const std::size_t h = static_cast<std::size_t>(head - 1);
        StateId q = m.initial;
        int pos = 0;
        RoundHeadOutcome verdict = RoundHeadOutcome::pass;
        for (std::size_t idx = begin; idx < row.end; ++idx) {
          const CertificateRecord& rec = stream.at(idx);
          if (rec.claimed[h] != symbol_at(x, pos) || !record_valid(m, q, rec)) {
            verdict = RoundHeadOutcome::reject;
            row.reject_position[h] = idx;
            break;
          }
          q = rec.next_state;
          pos = clamp_position(pos, rec.moves[h], n);
        }
        row.outcome[h] = verdict;
      }
      table.rows.push_back(std::move(row));
      begin = *boundary + 1;
      continue;
    }

    if (stream.cycle_size() == 0) {
      // The certificate ends before this round can finish.
      row.exhausted = true;
      row.end = stream.prefix_size();
      for (int head = 1; head <= k; ++head) {
        const std::size_t h = static_cast<std::size_t>(head - 1);
        StateId q = m.initial;
        int pos = 0;
        std::size_t reject_at = stream.prefix_size();
        for (std::size_t idx = begin; idx < stream.prefix_size(); ++idx) {
          const CertificateRecord& rec = stream.at(idx);
          if (rec.claimed[h] != symbol_at(x, pos) || !record_valid(m, q, rec)) {
            reject_at = idx;
            break;
          }
          q = rec.next_state;
          pos = clamp_position(pos, rec.moves[h], n);
        }
        row.outcome[h] = RoundHeadOutcome::reject;
        row.reject_position[h] = reject_at;
      }
      table.rows.push_back(std::move(row));
      break;
    }

    // Unbounded final round: no accept record ever appears again.
    row.unbounded = true;
    row.end = row.begin;
    for (int head = 1; head <= k; ++head) {
      const std::size_t h = static_cast<std::size_t>(head - 1);
      StateId q = m.initial;
      int pos = 0;
      std::set<std::tuple<StateId, int, std::size_t>> seen;
      std::size_t idx = begin;
      while (true) {
        if (stream.in_cycle(idx)) {
          auto key = std::make_tuple(q, pos, stream.cycle_index(idx));
          if (!seen.insert(key).second) {
            row.outcome[h] = RoundHeadOutcome::loop;
            break;
          }
        }
        const CertificateRecord& rec = stream.at(idx);
        if (rec.claimed[h] != symbol_at(x, pos) || !record_valid(m, q, rec)) {
          row.outcome[h] = RoundHeadOutcome::reject;
          row.reject_position[h] = idx;
          break;
        }
        q = rec.next_state;
        pos = clamp_position(pos, rec.moves[h], n);
        ++idx;
      }
    }
    table.rows.push_back(std::move(row));
    break;
  }
  return table;
}

OutcomeDistribution outcome_distribution(const VerifierSpec& v, const Word& x,
                                         const Certificate& cert) {
  RoundOutcomeTable table = round_outcome_table(v, x, cert);
  const auto probs = head_probabilities(v);

  Rational survive = 1;
  if (v.mode == VerifierMode::SYS) survive -= v.sys_reject_realized;

  OutcomeDistribution dist;
  Rational run_prefix = survive;  // probability of reaching the current round
  for (const auto& row : table.rows) {
    Rational pass = 0;
    Rational loop = 0;
    for (std::size_t h = 0; h < probs.size(); ++h) {
      if (row.outcome[h] == RoundHeadOutcome::pass) pass += probs[h];
      if (row.outcome[h] == RoundHeadOutcome::loop) loop += probs[h];
    }
    dist.loop += run_prefix * loop;
    run_prefix *= pass;
  }
  // Early rows end only with zero pass mass, so the prefix product already
  // equals the full C-round accept probability.
  dist.accept = run_prefix;
  dist.reject = Rational(1) - dist.accept - dist.loop;
  return dist;
}

OutcomeDistribution enumerate_distribution(const VerifierSpec& v, const Word& x,
                                           const Certificate& cert) {
  const int total = v.total_coins();
  if (total > 26) throw BudgetError("coin enumeration over 2^" + std::to_string(total) +
                                    " strings exceeds the oracle budget");
  const std::uint64_t count = std::uint64_t{1} << total;
  std::uint64_t accepts_n = 0, rejects_n = 0, loops_n = 0;
  std::vector<bool> coins(static_cast<std::size_t>(total), false);
  for (std::uint64_t z = 0; z < count; ++z) {
    for (int b = 0; b < total; ++b) {
      coins[static_cast<std::size_t>(b)] = (z >> (total - 1 - b)) & 1u;
    }
    switch (run_verifier(v, x, cert, coins).kind) {
      case RunOutcomeKind::accept: ++accepts_n; break;
      case RunOutcomeKind::reject: ++rejects_n; break;
      case RunOutcomeKind::loop: ++loops_n; break;
    }
  }
  OutcomeDistribution dist;
  dist.accept = Rational(accepts_n, count);
  dist.reject = Rational(rejects_n, count);
  dist.loop = Rational(loops_n, count);
  return dist;
}

// ---------------------------------------------------------------------------
// Optimal adversary

namespace {

/// Node of the adversary product graph: machine state, set of heads not yet
/// caught, and the positions of those heads (dead heads pinned to 0).
struct AdvNode {
  StateId state;
  std::uint32_t alive;
  std::vector<int> positions;

  auto operator<=>(const AdvNode&) const = default;
};

struct AdvGraph {
  std::vector<AdvNode> nodes;
  std::vector<std::vector<std::pair<int, int>>> edges;  // (target node, transition id)
  std::vector<int> parent;       // BFS tree for prefix reconstruction
  std::vector<int> parent_tid;
  std::map<AdvNode, int> id_of;
};

Rational mask_mass(std::uint32_t mask, const std::vector<Rational>& probs) {
  Rational mass = 0;
  for (std::size_t h = 0; h < probs.size(); ++h) {
    if ((mask >> h) & 1u) mass += probs[h];
  }
  return mass;
}

}  // namespace

AdversaryResult best_adversarial_certificate(const VerifierSpec& v, const Word& x,
                                             const RunOptions& opts) {
  const MultiHeadNFA& m = v.machine;
  const int n = static_cast<int>(x.size());
  const int k = m.heads;
  const auto probs = head_probabilities(v);

  Rational survive = 1;
  if (v.mode == VerifierMode::SYS) survive -= v.sys_reject_realized;

  AdversaryResult result;
  if (auto honest = honest_certificate(m, x, v.rounds, opts)) {
    result.certificate = std::move(*honest);
    result.distribution = outcome_distribution(v, x, result.certificate);
    result.value = result.distribution.accept + result.distribution.loop;
    result.best_accept = result.distribution.accept;
    return result;
  }

  // Transitions grouped by source state, in id order.
  std::vector<std::vector<int>> by_state(m.state_names.size());
  for (std::size_t tid = 0; tid < m.transitions.size(); ++tid) {
    by_state[static_cast<std::size_t>(m.transitions[tid].from)].push_back(static_cast<int>(tid));
  }

  AdvGraph g;
  auto intern = [&](AdvNode node, int parent, int tid) {
    auto it = g.id_of.find(node);
    if (it != g.id_of.end()) return it->second;
    if (g.nodes.size() >= opts.node_budget) throw BudgetError("adversary graph budget exceeded");
    int id = static_cast<int>(g.nodes.size());
    g.id_of.emplace(node, id);
    g.nodes.push_back(std::move(node));
    g.edges.emplace_back();
    g.parent.push_back(parent);
    g.parent_tid.push_back(tid);
    return id;
  };

  AdvNode start{m.initial, (k >= 32 ? ~0u : (1u << k) - 1u),
                std::vector<int>(static_cast<std::size_t>(k), 0)};
  intern(std::move(start), -1, -1);

  // Accept events: (graph node the accepting record was taken from, transition
  // id, surviving mask). The best one maximizes surviving mass.
  Rational best_pass = 0;
  int best_pass_node = -1;
  int best_pass_tid = -1;
  bool have_pass = false;

  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    const AdvNode node = g.nodes[u];
    for (int tid : by_state[static_cast<std::size_t>(node.state)]) {
      const Transition& t = m.transitions[static_cast<std::size_t>(tid)];
      if (t.to == m.reject) continue;  // dominated: rejects every head at once
      std::uint32_t mask = 0;
      for (int h = 0; h < k; ++h) {
        if (!((node.alive >> h) & 1u)) continue;
        if (t.scan[static_cast<std::size_t>(h)] ==
            symbol_at(x, node.positions[static_cast<std::size_t>(h)]))
          mask |= (1u << h);
      }
      if (t.to == m.accept) {
        Rational mass = mask_mass(mask, probs);
        if (!have_pass || mass > best_pass) {
          have_pass = true;
          best_pass = mass;
          best_pass_node = static_cast<int>(u);
          best_pass_tid = tid;
        }
        continue;
      }
      if (mask == 0) continue;  // nothing left to convince
      AdvNode next;
      next.state = t.to;
      next.alive = mask;
      next.positions.assign(static_cast<std::size_t>(k), 0);
      for (int h = 0; h < k; ++h) {
        if ((mask >> h) & 1u) {
          next.positions[static_cast<std::size_t>(h)] = clamp_position(
              node.positions[static_cast<std::size_t>(h)], t.moves[static_cast<std::size_t>(h)], n);
        }
      }
      int vid = intern(std::move(next), static_cast<int>(u), tid);
      g.edges[u].emplace_back(vid, tid);
    }
  }

  // Loop option: strongly connected component containing a cycle; the alive
  // mask is constant on a cycle, so its mass is the loop mass.
  const int num_nodes = static_cast<int>(g.nodes.size());
  std::vector<int> comp(static_cast<std::size_t>(num_nodes), -1);
  {
    // Iterative Tarjan.
    std::vector<int> index(static_cast<std::size_t>(num_nodes), -1);
    std::vector<int> low(static_cast<std::size_t>(num_nodes), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(num_nodes), false);
    std::vector<int> stack;
    int next_index = 0;
    int next_comp = 0;
    struct Frame {
      int node;
      std::size_t edge;
    };
    for (int root = 0; root < num_nodes; ++root) {
      if (index[static_cast<std::size_t>(root)] >= 0) continue;
      std::vector<Frame> frames{{root, 0}};
      index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = next_index++;
      stack.push_back(root);
      on_stack[static_cast<std::size_t>(root)] = true;
      while (!frames.empty()) {
        Frame& f = frames.back();
        const auto& out = g.edges[static_cast<std::size_t>(f.node)];
        if (f.edge < out.size()) {
          int w = out[f.edge++].first;
          if (index[static_cast<std::size_t>(w)] < 0) {
            index[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = next_index++;
            stack.push_back(w);
            on_stack[static_cast<std::size_t>(w)] = true;
            frames.push_back({w, 0});
          } else if (on_stack[static_cast<std::size_t>(w)]) {
            low[static_cast<std::size_t>(f.node)] =
                std::min(low[static_cast<std::size_t>(f.node)], index[static_cast<std::size_t>(w)]);
          }
        } else {
          if (low[static_cast<std::size_t>(f.node)] == index[static_cast<std::size_t>(f.node)]) {
            while (true) {
              int w = stack.back();
              stack.pop_back();
              on_stack[static_cast<std::size_t>(w)] = false;
              comp[static_cast<std::size_t>(w)] = next_comp;
              if (w == f.node) break;
            }
            ++next_comp;
          }
          int done = f.node;
          frames.pop_back();
          if (!frames.empty()) {
            low[static_cast<std::size_t>(frames.back().node)] =
                std::min(low[static_cast<std::size_t>(frames.back().node)],
                         low[static_cast<std::size_t>(done)]);
          }
        }
      }
    }
  }
  std::vector<bool> loopable(static_cast<std::size_t>(num_nodes), false);
  {
    std::vector<int> comp_size(static_cast<std::size_t>(num_nodes), 0);
    for (int u = 0; u < num_nodes; ++u) ++comp_size[static_cast<std::size_t>(comp[static_cast<std::size_t>(u)])];
    for (int u = 0; u < num_nodes; ++u) {
      if (comp_size[static_cast<std::size_t>(comp[static_cast<std::size_t>(u)])] > 1) {
        loopable[static_cast<std::size_t>(u)] = true;
        continue;
      }
      for (auto [w, tid] : g.edges[static_cast<std::size_t>(u)]) {
        (void)tid;
        if (w == u) loopable[static_cast<std::size_t>(u)] = true;
      }
    }
  }
  Rational best_loop = 0;
  int best_loop_node = -1;
  for (int u = 0; u < num_nodes; ++u) {
    if (!loopable[static_cast<std::size_t>(u)]) continue;
    Rational mass = mask_mass(g.nodes[static_cast<std::size_t>(u)].alive, probs);
    if (best_loop_node < 0 || mass > best_loop) {
      best_loop = mass;
      best_loop_node = u;
    }
  }

  const Rational pass_value = survive * rational_pow(best_pass, static_cast<unsigned>(v.rounds));
  const Rational loop_value = survive * best_loop;
  result.best_accept = have_pass ? pass_value : Rational(0);

  auto prefix_records = [&](int node) {
    std::vector<CertificateRecord> records;
    for (int cur = node; g.parent[static_cast<std::size_t>(cur)] >= 0;
         cur = g.parent[static_cast<std::size_t>(cur)]) {
      const Transition& t =
          m.transitions[static_cast<std::size_t>(g.parent_tid[static_cast<std::size_t>(cur)])];
      records.push_back({t.scan, t.to, t.moves});
    }
    std::reverse(records.begin(), records.end());
    return records;
  };

  Certificate cert;
  if (best_loop_node >= 0 && (!have_pass || loop_value >= pass_value)) {
    // Shortest cycle through the chosen node, restricted to its component.
    const int target = best_loop_node;
    std::vector<int> pred(static_cast<std::size_t>(num_nodes), -1);
    std::vector<int> pred_tid(static_cast<std::size_t>(num_nodes), -1);
    std::deque<int> queue{target};
    std::vector<bool> seen(static_cast<std::size_t>(num_nodes), false);
    seen[static_cast<std::size_t>(target)] = true;
    int closing_from = -1, closing_tid = -1;
    while (!queue.empty() && closing_from < 0) {
      int u = queue.front();
      queue.pop_front();
      for (auto [w, tid] : g.edges[static_cast<std::size_t>(u)]) {
        if (comp[static_cast<std::size_t>(w)] != comp[static_cast<std::size_t>(target)]) continue;
        if (w == target) {
          closing_from = u;
          closing_tid = tid;
          break;
        }
        if (seen[static_cast<std::size_t>(w)]) continue;
        seen[static_cast<std::size_t>(w)] = true;
        pred[static_cast<std::size_t>(w)] = u;
        pred_tid[static_cast<std::size_t>(w)] = tid;
        queue.push_back(w);
      }
    }
    std::vector<CertificateRecord> cycle;
    int cur = closing_from;
    cycle.push_back({m.transitions[static_cast<std::size_t>(closing_tid)].scan,
                     m.transitions[static_cast<std::size_t>(closing_tid)].to,
                     m.transitions[static_cast<std::size_t>(closing_tid)].moves});
    while (cur != target) {
      const Transition& t =
          m.transitions[static_cast<std::size_t>(pred_tid[static_cast<std::size_t>(cur)])];
      cycle.push_back({t.scan, t.to, t.moves});
      cur = pred[static_cast<std::size_t>(cur)];
    }
    std::reverse(cycle.begin(), cycle.end());
    cert.prefix = prefix_records(target);
    cert.cycle = std::move(cycle);
  } else if (have_pass && best_pass > 0) {
    std::vector<CertificateRecord> round = prefix_records(best_pass_node);
    const Transition& t = m.transitions[static_cast<std::size_t>(best_pass_tid)];
    round.push_back({t.scan, t.to, t.moves});
    for (int r = 0; r < v.rounds; ++r) {
      cert.prefix.insert(cert.prefix.end(), round.begin(), round.end());
    }
  }
  result.certificate = std::move(cert);
  result.distribution = outcome_distribution(v, x, result.certificate);
  result.value = result.distribution.accept + result.distribution.loop;
  return result;
}

// ---------------------------------------------------------------------------
// Error sweeps and parameter choice

ErrorSweepReport strong_error_sweep(const VerifierSpec& v, int max_len, const RunOptions& opts) {
  if (max_len < 0) throw std::invalid_argument("max_len must be nonnegative");
  ErrorSweepReport report;
  report.detection_floor = detection_floor(v);
  report.weak_bound = rational_pow(Rational(1) - report.detection_floor,
                                   static_cast<unsigned>(v.rounds));
  report.strong_bound = v.mode == VerifierMode::GB
                            ? std::max(report.weak_bound, v.risky_weight)
                            : Rational(1);

  const MultiHeadNFA& m = v.machine;
  const int sigma = m.alphabet.sigma_size();
  auto consider = [&](const Word& w) {
    if (accepts(m, w, opts).member) return;
    AdversaryResult adv = best_adversarial_certificate(v, w, opts);
    report.rows.push_back({w, adv.value, adv.best_accept});
    report.strong_error = std::max(report.strong_error, adv.value);
    report.weak_error = std::max(report.weak_error, adv.best_accept);
  };
  for (int len = 0; len <= max_len; ++len) {
    Word w(static_cast<std::size_t>(len), TapeAlphabet::first_input);
    if (len == 0) {
      consider(w);
      continue;
    }
    if (sigma == 0) break;
    while (true) {
      consider(w);
      int i = len - 1;
      while (i >= 0 && w[static_cast<std::size_t>(i)] == TapeAlphabet::first_input + sigma - 1) {
        w[static_cast<std::size_t>(i)] = TapeAlphabet::first_input;
        --i;
      }
      if (i < 0) break;
      ++w[static_cast<std::size_t>(i)];
    }
  }
  report.weak_within_bound = report.weak_error <= report.weak_bound;
  report.strong_within_bound =
      v.mode != VerifierMode::GB || report.strong_error <= report.strong_bound;
  return report;
}

ParameterChoice choose_parameters(const HeadClassification& classification,
                                  const Rational& epsilon) {
  if (classification.safe_count() == 0)
    throw std::invalid_argument("parameter choice requires at least one safe head");
  if (epsilon <= 0 || epsilon >= Rational(1, 2))
    throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  int eps_bits = 0;
  if (!is_dyadic(epsilon, &eps_bits)) throw std::invalid_argument("epsilon must be dyadic");

  ParameterChoice choice;
  choice.risky_weight = classification.risky_count() > 0 ? epsilon : Rational(0);
  is_dyadic(choice.risky_weight, &choice.weight_bits);

  const int k = classification.head_count();
  auto probs = head_probabilities_impl(classification, VerifierMode::GB, ceil_log2(k),
                                       choice.risky_weight);
  Rational p = 1;
  for (const auto& q : probs) p = std::min(p, q);
  choice.detection_floor = p;

  Rational failure = Rational(1) - p;
  Rational acc = failure;
  int rounds = 1;
  while (acc > epsilon) {
    acc *= failure;
    ++rounds;
  }
  choice.rounds = rounds;
  return choice;
}

}  // namespace mhfa
