#include "mhfa.h"

#include "automata.hpp"
#include "halting.hpp"
#include "ips.hpp"
#include "ntmsim.hpp"
#include "report.hpp"
#include "transforms.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

using namespace mhfa;

struct mhfa_machine {
  MultiHeadNFA m;
};
struct mhfa_verifier {
  VerifierSpec v;  // owns its machine copy
};
struct mhfa_certificate {
  Certificate c;
};

namespace {

thread_local std::string t_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ReportOptions options_from(unsigned flags) {
  ReportOptions opts;
  opts.machine_readable = (flags & MHFA_REPORT_MACHINE) != 0;
  opts.approx = (flags & MHFA_REPORT_APPROX) != 0;
  return opts;
}

RunOptions run_options(uint64_t node_budget) {
  RunOptions opts;
  if (node_budget > 0) opts.node_budget = node_budget;
  return opts;
}

template <typename Fn>
mhfa_status guard(Fn&& fn) {
  try {
    fn();
    return MHFA_OK;
  } catch (const ParseError& e) {
    t_last_error = e.what();
    return MHFA_ERR_PARSE;
  } catch (const BudgetError& e) {
    t_last_error = e.what();
    return MHFA_ERR_BUDGET;
  } catch (const std::invalid_argument& e) {
    t_last_error = e.what();
    return MHFA_ERR_INVALID;
  } catch (const std::ios_base::failure& e) {
    t_last_error = e.what();
    return MHFA_ERR_IO;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return MHFA_ERR_INTERNAL;
  }
}

HeadClassification parse_heads_spec(const std::string& text) {
  auto semi = text.find(';');
  if (semi == std::string::npos || text.rfind("safe:", 0) != 0 ||
      text.find("risky:", semi + 1) != semi + 1)
    throw std::invalid_argument("expected heads as safe:...;risky:...");
  auto split = [](const std::string& group) {
    std::vector<int> out;
    if (group == "-" || group.empty()) return out;
    std::istringstream in(group);
    std::string part;
    while (std::getline(in, part, ',')) out.push_back(std::stoi(part));
    return out;
  };
  HeadClassification c;
  c.safe = split(text.substr(5, semi - 5));
  c.risky = split(text.substr(semi + 7));
  return c;
}

HeadClassification classify_by_pipeline(const MultiHeadNFA& m) {
  HeadClassification c;
  for (int head = 1; head <= m.heads; ++head) {
    (head_is_safe(m, head).safe ? c.safe : c.risky).push_back(head);
  }
  return c;
}

std::vector<bool> parse_coins(const char* coins) {
  std::vector<bool> out;
  if (coins == nullptr) return out;
  for (const char* p = coins; *p != '\0'; ++p) {
    if (*p == '0') {
      out.push_back(false);
    } else if (*p == '1') {
      out.push_back(true);
    } else if (*p != ' ') {
      throw std::invalid_argument("coin strings use only '0' and '1'");
    }
  }
  return out;
}

}  // namespace

extern "C" {

const char* mhfa_last_error(void) { return t_last_error.c_str(); }

void mhfa_string_free(char* s) { delete[] s; }
void mhfa_machine_free(mhfa_machine* m) { delete m; }
void mhfa_verifier_free(mhfa_verifier* v) { delete v; }
void mhfa_certificate_free(mhfa_certificate* c) { delete c; }

mhfa_status mhfa_machine_parse(const char* text, mhfa_machine** out) {
  return guard([&] { *out = new mhfa_machine{parse_machine(text)}; });
}

mhfa_status mhfa_machine_parse_file(const char* path, mhfa_machine** out) {
  return guard([&] {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure(std::string("cannot open ") + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    *out = new mhfa_machine{parse_machine(buffer.str())};
  });
}

mhfa_status mhfa_machine_serialize(const mhfa_machine* m, int canonical, char** out) {
  return guard([&] { *out = dup_string(serialize_machine(m->m, canonical != 0)); });
}

int mhfa_machine_heads(const mhfa_machine* m) { return m->m.heads; }
int mhfa_machine_state_count(const mhfa_machine* m) { return m->m.state_count(); }
int mhfa_machine_transition_count(const mhfa_machine* m) {
  return static_cast<int>(m->m.transitions.size());
}
int mhfa_machine_same(const mhfa_machine* a, const mhfa_machine* b) {
  return same_machine(a->m, b->m) ? 1 : 0;
}

mhfa_status mhfa_project_head(const mhfa_machine* m, int head, mhfa_machine** out) {
  return guard([&] { *out = new mhfa_machine{project_head(m->m, head)}; });
}

mhfa_status mhfa_add_timer_head(const mhfa_machine* m, int slope, mhfa_machine** out) {
  return guard([&] { *out = new mhfa_machine{add_timer_head(m->m, slope)}; });
}

mhfa_status mhfa_add_counter_heads(const mhfa_machine* m, mhfa_machine** out) {
  return guard([&] { *out = new mhfa_machine{add_counter_heads(m->m)}; });
}

mhfa_status mhfa_run_report(const mhfa_machine* m, const char* input, uint64_t node_budget,
                            unsigned flags, char** report, int* member) {
  return guard([&] {
    Word x = parse_input(m->m, input);
    RunResult r = accepts(m->m, x, run_options(node_budget));
    if (member != nullptr) *member = r.member ? 1 : 0;
    *report = dup_string(report_run(m->m, x, r, options_from(flags)));
  });
}

mhfa_status mhfa_analyze_report(const mhfa_machine* m, const char* method, int bounded_maxlen,
                                uint64_t subset_budget, unsigned flags, char** report) {
  return guard([&] {
    std::string mode = method == nullptr ? "pipeline" : method;
    HaltingOptions halting;
    if (subset_budget > 0) halting.nfa_state_cap = subset_budget;
    std::vector<HeadSafety> heads;
    for (int head = 1; head <= m->m.heads; ++head) {
      HeadSafety h;
      h.head = head;
      if (mode == "pipeline") {
        SafetyResult s = head_is_safe(m->m, head, halting);
        h.safe = s.safe;
        h.counterexample = s.counterexample;
      } else if (mode == "bounded") {
        auto witness = find_loop_witness(project_head(m->m, head), bounded_maxlen);
        h.safe = !witness.has_value();
        if (witness) h.counterexample = witness->first;
      } else {
        throw std::invalid_argument("method must be 'pipeline' or 'bounded'");
      }
      heads.push_back(std::move(h));
    }
    *report = dup_string(report_analysis(m->m, heads, options_from(flags)));
  });
}

mhfa_status mhfa_head_is_safe(const mhfa_machine* m, int head, int* safe) {
  return guard([&] { *safe = head_is_safe(m->m, head).safe ? 1 : 0; });
}

mhfa_status mhfa_verifier_build(const mhfa_machine* m, const char* mode, int rounds,
                                const char* weight, const char* heads, int check_classification,
                                mhfa_verifier** out) {
  return guard([&] {
    auto parsed_mode = mode_from_name(mode == nullptr ? "GB" : mode);
    if (!parsed_mode) throw std::invalid_argument("mode must be GB, SYW or SYS");
    Rational w = 0;
    if (weight != nullptr && *weight != '\0') {
      auto parsed = parse_fraction(weight);
      if (!parsed) throw std::invalid_argument(std::string("bad fraction ") + weight);
      w = *parsed;
    }
    HeadClassification c =
        heads != nullptr ? parse_heads_spec(heads) : classify_by_pipeline(m->m);
    bool check = heads != nullptr && check_classification != 0;
    *out = new mhfa_verifier{build_verifier(m->m, c, *parsed_mode, rounds, w, check)};
  });
}

mhfa_status mhfa_verifier_parse(const mhfa_machine* m, const char* text, mhfa_verifier** out) {
  return guard([&] { *out = new mhfa_verifier{parse_verifier(m->m, text)}; });
}

mhfa_status mhfa_verifier_report(const mhfa_verifier* v, unsigned flags, char** report) {
  return guard([&] { *report = dup_string(report_verifier(v->v, options_from(flags))); });
}

mhfa_status mhfa_certificate_parse(const mhfa_machine* m, const char* text,
                                   mhfa_certificate** out) {
  return guard([&] { *out = new mhfa_certificate{parse_certificate(m->m, text)}; });
}

mhfa_status mhfa_certificate_serialize(const mhfa_machine* m, const mhfa_certificate* c,
                                       char** out) {
  return guard([&] { *out = dup_string(serialize_certificate(m->m, c->c)); });
}

mhfa_status mhfa_prove(const mhfa_machine* m, const char* input, int rounds,
                       uint64_t node_budget, mhfa_certificate** out) {
  return guard([&] {
    Word x = parse_input(m->m, input);
    auto cert = honest_certificate(m->m, x, rounds, run_options(node_budget));
    *out = cert ? new mhfa_certificate{std::move(*cert)} : nullptr;
  });
}

mhfa_status mhfa_verifier_run_report(const mhfa_verifier* v, const char* input,
                                     const mhfa_certificate* c, const char* coins,
                                     unsigned flags, char** report) {
  return guard([&] {
    Word x = parse_input(v->v.machine, input);
    VerifierRunOutcome outcome = run_verifier(v->v, x, c->c, parse_coins(coins));
    *report = dup_string(report_outcome(v->v.machine, outcome, options_from(flags)));
  });
}

mhfa_status mhfa_distribution_report(const mhfa_verifier* v, const char* input,
                                     const mhfa_certificate* c, unsigned flags, char** report) {
  return guard([&] {
    Word x = parse_input(v->v.machine, input);
    OutcomeDistribution dist = outcome_distribution(v->v, x, c->c);
    *report = dup_string(report_distribution(dist, options_from(flags)));
  });
}

mhfa_status mhfa_attack(const mhfa_verifier* v, const char* input, uint64_t node_budget,
                        unsigned flags, char** report, mhfa_certificate** cert_out) {
  return guard([&] {
    Word x = parse_input(v->v.machine, input);
    AdversaryResult adv = best_adversarial_certificate(v->v, x, run_options(node_budget));
    ReportOptions opts = options_from(flags);
    std::ostringstream out;
    if (opts.machine_readable) {
      out << "value=" << fraction_string(adv.value) << "\n";
      out << "best_accept=" << fraction_string(adv.best_accept) << "\n";
      out << report_distribution(adv.distribution, opts);
    } else {
      out << "# value = " << fraction_string(adv.value) << "\n";
      out << "# " << report_distribution(adv.distribution, opts);
      out << serialize_certificate(v->v.machine, adv.certificate);
    }
    *report = dup_string(out.str());
    if (cert_out != nullptr) *cert_out = new mhfa_certificate{std::move(adv.certificate)};
  });
}

mhfa_status mhfa_error_sweep_report(const mhfa_verifier* v, int max_len, uint64_t node_budget,
                                    unsigned flags, char** report) {
  return guard([&] {
    ErrorSweepReport sweep = strong_error_sweep(v->v, max_len, run_options(node_budget));
    *report = dup_string(report_error_sweep(v->v.machine, sweep, options_from(flags)));
  });
}

mhfa_status mhfa_params_report(const mhfa_machine* m, const char* epsilon, unsigned flags,
                               char** report) {
  return guard([&] {
    auto eps = parse_fraction(epsilon);
    if (!eps) throw std::invalid_argument(std::string("bad fraction ") + epsilon);
    HeadClassification c = classify_by_pipeline(m->m);
    ParameterChoice choice = choose_parameters(c, *eps);
    *report = dup_string(report_params(choice, options_from(flags)));
  });
}

mhfa_status mhfa_ntmsim_run_report(const mhfa_machine* m, const char* input, int trace,
                                   unsigned flags, char** report) {
  return guard([&] {
    Word x = parse_input(m->m, input);
    RunResult r = accepts(m->m, x);
    std::vector<int> path;
    if (r.member) {
      for (const auto& step : *r.accepting_path) path.push_back(step.transition);
    }
    SimOptions opts;
    opts.want_trace = trace != 0;
    SimResult sim = simulate(m->m, x, path, opts);
    *report = dup_string(report_simulation(m->m, sim, options_from(flags)));
  });
}

mhfa_status mhfa_ntmsim_scaling_report(const mhfa_machine* m, const int* lengths, size_t count,
                                       const char* family, unsigned flags, char** report) {
  return guard([&] {
    std::string fam = family == nullptr ? "half:0:1" : family;
    std::function<Word(int)> generator;
    if (fam.rfind("half:", 0) == 0) {
      auto rest = fam.substr(5);
      auto colon = rest.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("family half needs two symbols, half:<a>:<b>");
      auto a = m->m.alphabet.find(rest.substr(0, colon));
      auto b = m->m.alphabet.find(rest.substr(colon + 1));
      if (!a || !b) throw std::invalid_argument("family symbols not in the alphabet");
      generator = [a, b](int n) {
        Word w;
        for (int i = 0; i < n / 2; ++i) w.push_back(*a);
        for (int i = n / 2; i < n; ++i) w.push_back(*b);
        return w;
      };
    } else if (fam.rfind("uniform:", 0) == 0) {
      auto a = m->m.alphabet.find(fam.substr(8));
      if (!a) throw std::invalid_argument("family symbol not in the alphabet");
      generator = [a](int n) { return Word(static_cast<std::size_t>(n), *a); };
    } else {
      throw std::invalid_argument("family must be half:<a>:<b> or uniform:<a>");
    }
    std::vector<int> ns(lengths, lengths + count);
    ScalingReport scaling = scaling_report(m->m, ns, generator);
    *report = dup_string(report_scaling(scaling, options_from(flags)));
  });
}

}  // extern "C"
