#include "report.hpp"

#include <iomanip>
#include <sstream>

namespace mhfa {

namespace {

std::string frac(const Rational& r, const ReportOptions& opts) {
  return opts.approx ? fraction_string_approx(r) : fraction_string(r);
}

std::string quoted_input(const MultiHeadNFA& m, const Word& w) {
  return "\"" + render_input(m, w) + "\"";
}

}  // namespace

std::string report_run(const MultiHeadNFA& m, const Word& x, const RunResult& r,
                       const ReportOptions& opts) {
  std::ostringstream out;
  if (opts.machine_readable) {
    out << "verdict=" << (r.member ? "member" : "nonmember") << "\n";
    out << "halting=" << (r.halting ? "true" : "false") << "\n";
    if (r.accepting_path) out << "path_length=" << r.accepting_path->size() << "\n";
    if (r.loop) {
      out << "loop_state=" << m.state_names[static_cast<std::size_t>(r.loop->entry.state)] << "\n";
      out << "loop_cycle_length=" << r.loop->cycle.size() << "\n";
    }
    return out.str();
  }
  out << "input " << quoted_input(m, x) << ": " << (r.member ? "member" : "nonmember") << "\n";
  out << "halting: " << (r.halting ? "yes" : "no") << "\n";
  if (r.accepting_path) {
    out << "accepting path (" << r.accepting_path->size() << " steps):\n";
    for (const auto& step : *r.accepting_path) {
      const Transition& t = m.transitions[static_cast<std::size_t>(step.transition)];
      out << "  at " << m.state_names[static_cast<std::size_t>(step.config.state)];
      for (int p : step.config.positions) out << ' ' << p;
      out << "  take trans " << m.state_names[static_cast<std::size_t>(t.from)];
      for (Symbol s : t.scan) out << ' ' << m.alphabet.token(s);
      out << " -> " << m.state_names[static_cast<std::size_t>(t.to)];
      for (HeadMove mv : t.moves) out << ' ' << move_letter(mv);
      out << "\n";
    }
  }
  if (r.loop) {
    out << "loop witness: enters " << m.state_names[static_cast<std::size_t>(r.loop->entry.state)]
        << " at";
    for (int p : r.loop->entry.positions) out << ' ' << p;
    out << " after " << r.loop->stem.size() << " steps, cycle of " << r.loop->cycle.size()
        << "\n";
  }
  return out.str();
}

std::string report_analysis(const MultiHeadNFA& m, const std::vector<HeadSafety>& heads,
                            const ReportOptions& opts) {
  std::ostringstream out;
  for (const auto& h : heads) {
    if (opts.machine_readable) {
      out << "head" << h.head << "=" << (h.safe ? "safe" : "risky") << "\n";
    } else {
      out << "head " << h.head << ": " << (h.safe ? "safe" : "risky");
      if (!h.safe && h.counterexample) {
        out << "  # can loop on " << quoted_input(m, *h.counterexample);
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string report_distribution(const OutcomeDistribution& dist, const ReportOptions& opts) {
  std::ostringstream out;
  if (opts.machine_readable) {
    out << "accept=" << frac(dist.accept, opts) << "\n";
    out << "reject=" << frac(dist.reject, opts) << "\n";
    out << "loop=" << frac(dist.loop, opts) << "\n";
  } else {
    out << "accept=" << frac(dist.accept, opts) << " reject=" << frac(dist.reject, opts)
        << " loop=" << frac(dist.loop, opts) << "\n";
  }
  return out.str();
}

std::string report_verifier(const VerifierSpec& v, const ReportOptions& opts) {
  std::ostringstream out;
  out << serialize_verifier(v);
  if (opts.machine_readable) {
    out << "selector_bits=" << v.selector_bits << "\n";
    out << "weight_bits=" << v.weight_bits << "\n";
    out << "coins_per_round=" << v.coins_per_round() << "\n";
    out << "upfront_coins=" << v.upfront_coins() << "\n";
    out << "total_coins=" << v.total_coins() << "\n";
    out << "detection_floor=" << frac(detection_floor(v), opts) << "\n";
    if (v.mode == VerifierMode::SYS) {
      out << "sys_approximate=" << (v.sys_approximate ? "true" : "false") << "\n";
    }
  } else {
    out << "coins: " << v.coins_per_round() << " per round";
    if (v.upfront_coins() > 0) out << " + " << v.upfront_coins() << " upfront";
    out << ", " << v.total_coins() << " total\n";
    out << "detection floor p = " << frac(detection_floor(v), opts) << "\n";
    if (v.mode == VerifierMode::SYS && v.sys_approximate) {
      out << "note: upfront rejection " << fraction_string(v.sys_reject_realized)
          << " approximates " << fraction_string(v.sys_reject_target) << "\n";
    }
  }
  return out.str();
}

std::string report_outcome(const MultiHeadNFA& m, const VerifierRunOutcome& outcome,
                           const ReportOptions& opts) {
  std::ostringstream out;
  const char* kind = outcome.kind == RunOutcomeKind::accept   ? "accept"
                     : outcome.kind == RunOutcomeKind::reject ? "reject"
                                                              : "loop";
  if (opts.machine_readable) {
    out << "outcome=" << kind << "\n";
    if (outcome.kind == RunOutcomeKind::reject)
      out << "reject_position=" << outcome.reject_position << "\n";
    if (outcome.kind == RunOutcomeKind::loop) {
      out << "loop_state=" << m.state_names[static_cast<std::size_t>(outcome.loop_witness.state)]
          << "\n";
      out << "loop_position=" << outcome.loop_witness.position << "\n";
      out << "loop_cycle_index=" << outcome.loop_witness.cycle_index << "\n";
    }
    out << "coins_used=" << outcome.coins_used << "\n";
    out << "rounds_completed=" << outcome.rounds_completed << "\n";
    return out.str();
  }
  out << "outcome: " << kind;
  if (outcome.kind == RunOutcomeKind::reject) {
    out << " at record " << outcome.reject_position;
  } else if (outcome.kind == RunOutcomeKind::loop) {
    out << " (repeats " << m.state_names[static_cast<std::size_t>(outcome.loop_witness.state)]
        << " at position " << outcome.loop_witness.position << ", cycle index "
        << outcome.loop_witness.cycle_index << ")";
  }
  out << "; " << outcome.coins_used << " coins, " << outcome.rounds_completed
      << " rounds completed\n";
  return out.str();
}

std::string report_error_sweep(const MultiHeadNFA& m, const ErrorSweepReport& sweep,
                               const ReportOptions& opts) {
  std::ostringstream out;
  if (opts.machine_readable) {
    for (const auto& row : sweep.rows) {
      out << "input=" << render_input(m, row.input) << " strong=" << frac(row.strong_value, opts)
          << " weak=" << frac(row.weak_value, opts) << "\n";
    }
    out << "nonmembers=" << sweep.rows.size() << "\n";
    out << "strong_error=" << frac(sweep.strong_error, opts) << "\n";
    out << "weak_error=" << frac(sweep.weak_error, opts) << "\n";
    out << "detection_floor=" << frac(sweep.detection_floor, opts) << "\n";
    out << "weak_bound=" << frac(sweep.weak_bound, opts) << "\n";
    out << "strong_bound=" << frac(sweep.strong_bound, opts) << "\n";
    out << "weak_within_bound=" << (sweep.weak_within_bound ? "true" : "false") << "\n";
    out << "strong_within_bound=" << (sweep.strong_within_bound ? "true" : "false") << "\n";
    return out.str();
  }
  for (const auto& row : sweep.rows) {
    out << "  x=" << quoted_input(m, row.input) << " strong=" << frac(row.strong_value, opts)
        << " weak=" << frac(row.weak_value, opts) << "\n";
  }
  out << "nonmembers examined: " << sweep.rows.size() << "\n";
  out << "strong_error = " << frac(sweep.strong_error, opts) << "\n";
  out << "weak_error = " << frac(sweep.weak_error, opts) << "\n";
  out << "detection floor p = " << frac(sweep.detection_floor, opts) << ", weak bound "
      << frac(sweep.weak_bound, opts) << ", strong bound " << frac(sweep.strong_bound, opts)
      << "\n";
  out << "bounds hold: " << ((sweep.weak_within_bound && sweep.strong_within_bound) ? "yes" : "NO")
      << "\n";
  return out.str();
}

std::string report_params(const ParameterChoice& choice, const ReportOptions& opts) {
  std::ostringstream out;
  if (opts.machine_readable) {
    out << "rounds=" << choice.rounds << "\n";
    out << "w=" << frac(choice.risky_weight, opts) << "\n";
    out << "weight_bits=" << choice.weight_bits << "\n";
    out << "detection_floor=" << frac(choice.detection_floor, opts) << "\n";
  } else {
    out << "rounds = " << choice.rounds << "\n";
    out << "w = " << frac(choice.risky_weight, opts) << " (" << choice.weight_bits
        << " fractional bits)\n";
    out << "detection floor p = " << frac(choice.detection_floor, opts) << "\n";
  }
  return out.str();
}

std::string report_simulation(const MultiHeadNFA& m, const SimResult& sim,
                              const ReportOptions& opts) {
  (void)m;
  std::ostringstream out;
  const char* kind = sim.outcome == SimOutcome::accept   ? "accept"
                     : sim.outcome == SimOutcome::reject ? "reject"
                                                         : "stuck";
  if (opts.machine_readable) {
    out << "outcome=" << kind << "\n";
    out << "simulated_steps=" << sim.stats.simulated_steps << "\n";
    out << "work_moves=" << sim.stats.work_moves << "\n";
    out << "input_moves=" << sim.stats.input_moves << "\n";
    out << "init_moves=" << sim.stats.init_moves << "\n";
    out << "read_moves=" << sim.stats.read_moves << "\n";
    out << "move_moves=" << sim.stats.move_moves << "\n";
    out << "recache_moves=" << sim.stats.recache_moves << "\n";
    out << "window=" << sim.stats.window << "\n";
    out << "counter_bits=" << sim.stats.counter_bits << "\n";
    out << "tape_cells=" << sim.stats.tape_cells << "\n";
    out << "min_recache_gap=" << sim.stats.min_recache_gap << "\n";
    for (std::size_t h = 0; h < sim.stats.recaches_per_head.size(); ++h) {
      out << "recaches_head" << (h + 1) << "=" << sim.stats.recaches_per_head[h] << "\n";
    }
  } else {
    out << "outcome: " << kind << "\n";
    out << "simulated steps: " << sim.stats.simulated_steps << ", work moves: "
        << sim.stats.work_moves << " (init " << sim.stats.init_moves << ", read "
        << sim.stats.read_moves << ", move " << sim.stats.move_moves << ", re-cache "
        << sim.stats.recache_moves << ")\n";
    out << "window " << sim.stats.window << ", counter bits " << sim.stats.counter_bits
        << ", tape cells " << sim.stats.tape_cells << "\n";
    out << "re-caches:";
    for (std::size_t h = 0; h < sim.stats.recaches_per_head.size(); ++h) {
      out << " head" << (h + 1) << "=" << sim.stats.recaches_per_head[h];
    }
    out << " (min gap " << sim.stats.min_recache_gap << " steps)\n";
  }
  for (const auto& line : sim.trace) out << line << "\n";
  return out.str();
}

std::string report_scaling(const ScalingReport& scaling, const ReportOptions& opts) {
  std::ostringstream out;
  if (opts.machine_readable) {
    for (const auto& row : scaling.rows) {
      out << "n=" << row.n << " steps=" << row.simulated_steps << " work=" << row.work_moves
          << " recaches=" << row.recaches << " ratio=" << std::fixed << std::setprecision(6)
          << row.ratio << "\n";
    }
    return out.str();
  }
  out << std::setw(6) << "n" << std::setw(12) << "steps" << std::setw(14) << "work"
      << std::setw(10) << "recaches" << std::setw(18) << "work*log2(n)/n^2" << "\n";
  for (const auto& row : scaling.rows) {
    out << std::setw(6) << row.n << std::setw(12) << row.simulated_steps << std::setw(14)
        << row.work_moves << std::setw(10) << row.recaches << std::setw(18) << std::fixed
        << std::setprecision(6) << row.ratio << "\n";
  }
  return out.str();
}

}  // namespace mhfa
