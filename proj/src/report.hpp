#ifndef MHFA_REPORT_HPP
#define MHFA_REPORT_HPP

#include "automata.hpp"
#include "halting.hpp"
#include "ips.hpp"
#include "ntmsim.hpp"

#include <string>
#include <vector>

namespace mhfa {

/// All reports are deterministic: identical inputs yield byte-identical text.
/// Rationals print as reduced fractions `a/b`; `approx` appends a decimal
/// column, `machine_readable` switches to line-oriented `key=value` output.
struct ReportOptions {
  bool machine_readable = false;
  bool approx = false;
};

std::string report_run(const MultiHeadNFA& m, const Word& x, const RunResult& r,
                       const ReportOptions& opts = {});

struct HeadSafety {
  int head = 0;
  bool safe = false;
  std::optional<Word> counterexample;
};

std::string report_analysis(const MultiHeadNFA& m, const std::vector<HeadSafety>& heads,
                            const ReportOptions& opts = {});

std::string report_distribution(const OutcomeDistribution& dist, const ReportOptions& opts = {});

std::string report_verifier(const VerifierSpec& v, const ReportOptions& opts = {});

std::string report_outcome(const MultiHeadNFA& m, const VerifierRunOutcome& outcome,
                           const ReportOptions& opts = {});

std::string report_error_sweep(const MultiHeadNFA& m, const ErrorSweepReport& sweep,
                               const ReportOptions& opts = {});

std::string report_params(const ParameterChoice& choice, const ReportOptions& opts = {});

std::string report_simulation(const MultiHeadNFA& m, const SimResult& sim,
                              const ReportOptions& opts = {});

std::string report_scaling(const ScalingReport& scaling, const ReportOptions& opts = {});

}  // namespace mhfa

#endif
