#ifndef MHFA_IPS_HPP
#define MHFA_IPS_HPP

#include "automata.hpp"
#include "rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mhfa {

// ---------------------------------------------------------------------------
// Verifier specification

/// Safe/risky head indices (1-based, ascending). The ordering fixes the
/// selection maps used by the coin-driven head choice.
struct HeadClassification {
  std::vector<int> safe;
  std::vector<int> risky;

  int safe_count() const { return static_cast<int>(safe.size()); }
  int risky_count() const { return static_cast<int>(risky.size()); }
  int head_count() const { return safe_count() + risky_count(); }
};

enum class VerifierMode { GB, SYW, SYS };

std::string mode_name(VerifierMode mode);
std::optional<VerifierMode> mode_from_name(const std::string& name);

struct VerifierSpec {
  MultiHeadNFA machine;
  HeadClassification classification;
  VerifierMode mode = VerifierMode::GB;
  int rounds = 1;

  /// Probability of tracking a risky head per round (GB only), a dyadic
  /// a/2^weight_bits. Zero exactly when there are no risky heads, in which
  /// case weight_bits is 0 and no weight coins are flipped.
  Rational risky_weight = 0;
  int weight_bits = 0;    // B
  int selector_bits = 0;  // SB = ceil(log2 k), 0 for k = 1

  /// SYS only: target upfront rejection probability (k-1)/2k and its dyadic
  /// realization on selector_bits+1 coins; approximate when they differ.
  Rational sys_reject_target = 0;
  Rational sys_reject_realized = 0;
  bool sys_approximate = false;

  int coins_per_round() const;
  int upfront_coins() const;
  int total_coins() const { return upfront_coins() + rounds * coins_per_round(); }
};

/// Checks the mode-specific constraints and derives the coin layout.
/// `verify_classification` re-runs the safety pipeline per head and rejects a
/// classification that contradicts it (callers doing their own analysis can
/// skip the re-check). Throws std::invalid_argument on bad parameters.
VerifierSpec build_verifier(const MultiHeadNFA& machine, const HeadClassification& classification,
                            VerifierMode mode, int rounds, const Rational& risky_weight,
                            bool verify_classification = false);

/// Exact per-head selection probabilities (index 0 = head 1) and the
/// detection floor p = min over heads. Residue skew of `u mod m` for
/// non-power-of-two m is reflected exactly, not idealized away.
std::vector<Rational> head_probabilities(const VerifierSpec& v);
Rational detection_floor(const VerifierSpec& v);

std::string serialize_verifier(const VerifierSpec& v);
VerifierSpec parse_verifier(const MultiHeadNFA& machine, const std::string& text);

// ---------------------------------------------------------------------------
// Certificates

struct CertificateRecord {
  std::vector<Symbol> claimed;  // arity k
  StateId next_state = -1;
  std::vector<HeadMove> moves;  // arity k

  bool operator==(const CertificateRecord&) const = default;
};

/// A lasso: finite prefix plus an optionally repeated cycle. With a nonempty
/// cycle the certificate denotes the infinite stream prefix.cycle^inf.
struct Certificate {
  std::vector<CertificateRecord> prefix;
  std::vector<CertificateRecord> cycle;

  bool infinite() const { return !cycle.empty(); }
  bool operator==(const Certificate&) const = default;
};

std::string serialize_certificate(const MultiHeadNFA& m, const Certificate& cert);
Certificate parse_certificate(const MultiHeadNFA& m, const std::string& text);

/// Records of the shortest accepting path, repeated `rounds` times (prefix
/// only); nullopt for nonmembers. Deterministic via the accepts() tie-break.
std::optional<Certificate> honest_certificate(const MultiHeadNFA& m, const Word& x, int rounds,
                                              const RunOptions& opts = {});

// ---------------------------------------------------------------------------
// Replay

enum class RunOutcomeKind { accept, reject, loop };

struct LoopPoint {
  StateId state = -1;
  int position = -1;
  std::size_t cycle_index = 0;  // index into the certificate cycle

  bool operator==(const LoopPoint&) const = default;
};

struct VerifierRunOutcome {
  RunOutcomeKind kind = RunOutcomeKind::reject;
  std::size_t reject_position = 0;  // absolute record index, when rejecting
  LoopPoint loop_witness;           // when looping
  int coins_used = 0;
  int rounds_completed = 0;
};

/// Deterministic replay against an explicit coin string. Coins are consumed
/// per round as weight_bits then selector_bits (plus the SYS upfront draw).
/// Under-supplying coins for the rounds actually executed throws
/// std::invalid_argument. A certificate that runs out mid-round rejects.
VerifierRunOutcome run_verifier(const VerifierSpec& v, const Word& x, const Certificate& cert,
                                const std::vector<bool>& coins);

/// A verifier with all coin outcomes fixed up front (|coins| must equal the
/// full worst-case budget). Averaging run() over all coin strings reproduces
/// outcome_distribution exactly; that average is the enumeration oracle.
/// Holds a reference to the spec, which must outlive it.
class HardwiredVerifier {
 public:
  HardwiredVerifier(const VerifierSpec& v, std::vector<bool> coins);
  VerifierRunOutcome run(const Word& x, const Certificate& cert) const;
  const std::vector<bool>& coins() const { return coins_; }

 private:
  const VerifierSpec* spec_;
  std::vector<bool> coins_;
};

HardwiredVerifier hardwire_coins(const VerifierSpec& v, std::vector<bool> coins);

// ---------------------------------------------------------------------------
// Exact outcome analysis

enum class RoundHeadOutcome { pass, reject, loop };

struct RoundRow {
  std::size_t begin = 0;  // absolute record range of the round
  std::size_t end = 0;    // one past the last record; end == begin for an
                          // exhausted round, unbounded rounds have no end
  bool unbounded = false;
  bool exhausted = false;  // certificate ended before the round could finish
  std::vector<RoundHeadOutcome> outcome;      // per head
  std::vector<std::size_t> reject_position;   // per head, when rejecting
};

/// Head-independent round segmentation plus the per-(round, head) verdicts
/// from single-head replay. Rows stop at the first round no head can finish.
struct RoundOutcomeTable {
  std::vector<RoundRow> rows;
};

RoundOutcomeTable round_outcome_table(const VerifierSpec& v, const Word& x,
                                      const Certificate& cert);

/// Exact accept/reject/loop probabilities; the three always sum to one.
struct OutcomeDistribution {
  Rational accept = 0;
  Rational reject = 0;
  Rational loop = 0;
};

OutcomeDistribution outcome_distribution(const VerifierSpec& v, const Word& x,
                                         const Certificate& cert);

/// Uniform average of hardwired runs over all coin strings.
OutcomeDistribution enumerate_distribution(const VerifierSpec& v, const Word& x,
                                           const Certificate& cert);

// ---------------------------------------------------------------------------
// Adversary and error sweeps

struct AdversaryResult {
  Certificate certificate;
  OutcomeDistribution distribution;
  Rational value = 0;       // accept + loop of the optimal certificate
  Rational best_accept = 0; // best achievable accept mass alone
};

/// Optimal adversarial certificate for a nonmember: maximizes
/// P_accept + P_loop over all certificates. Members get their honest
/// certificate (value 1). Ties between the best repeated finite round and
/// the best looping round go to the looping certificate.
AdversaryResult best_adversarial_certificate(const VerifierSpec& v, const Word& x,
                                             const RunOptions& opts = {});

struct ErrorSweepRow {
  Word input;
  Rational strong_value;
  Rational weak_value;
};

struct ErrorSweepReport {
  std::vector<ErrorSweepRow> rows;  // nonmembers only, by length then lex
  Rational strong_error = 0;
  Rational weak_error = 0;
  Rational detection_floor = 0;
  Rational weak_bound = 0;    // (1-p)^C
  Rational strong_bound = 0;  // max((1-p)^C, w) for GB
  bool weak_within_bound = true;
  bool strong_within_bound = true;
};

ErrorSweepReport strong_error_sweep(const VerifierSpec& v, int max_len,
                                    const RunOptions& opts = {});

struct ParameterChoice {
  int rounds = 1;
  Rational risky_weight = 0;
  int weight_bits = 0;
  Rational detection_floor = 0;
};

/// Smallest GB parameters meeting a dyadic error target: w is the largest
/// dyadic <= epsilon (zero iff no risky heads) and C the least count with
/// (1-p)^C <= epsilon. Requires at least one safe head.
ParameterChoice choose_parameters(const HeadClassification& classification,
                                  const Rational& epsilon);

}  // namespace mhfa

#endif
