// Command-line front end for the mhfa shared library. Everything here goes
// through the C API in mhfa.h; the heavy lifting and report formatting live
// behind it.

#include "mhfa.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct MachineDeleter {
  void operator()(mhfa_machine* m) const { mhfa_machine_free(m); }
};
struct VerifierDeleter {
  void operator()(mhfa_verifier* v) const { mhfa_verifier_free(v); }
};
struct CertDeleter {
  void operator()(mhfa_certificate* c) const { mhfa_certificate_free(c); }
};
using MachinePtr = std::unique_ptr<mhfa_machine, MachineDeleter>;
using VerifierPtr = std::unique_ptr<mhfa_verifier, VerifierDeleter>;
using CertPtr = std::unique_ptr<mhfa_certificate, CertDeleter>;

struct OwnedString {
  char* data = nullptr;
  ~OwnedString() { mhfa_string_free(data); }
  std::string str() const { return data == nullptr ? std::string() : std::string(data); }
};

int exit_code_for(mhfa_status status) {
  switch (status) {
    case MHFA_OK: return 0;
    case MHFA_ERR_BUDGET: return 2;
    default: return 1;
  }
}

[[noreturn]] void fail(mhfa_status status) {
  std::cerr << "error: " << mhfa_last_error() << "\n";
  std::exit(exit_code_for(status));
}

void check(mhfa_status status) {
  if (status != MHFA_OK) fail(status);
}

MachinePtr load_machine(const std::string& path) {
  mhfa_machine* m = nullptr;
  check(mhfa_machine_parse_file(path.c_str(), &m));
  return MachinePtr(m);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(1);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    std::exit(1);
  }
  out << text;
}

struct CommonFlags {
  bool machine_readable = false;
  bool approx = false;
  std::uint64_t node_budget = 0;
  std::uint64_t subset_budget = 0;

  unsigned flags() const {
    return (machine_readable ? MHFA_REPORT_MACHINE : 0u) | (approx ? MHFA_REPORT_APPROX : 0u);
  }
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_flag("--machine-readable", flags.machine_readable, "line-oriented key=value output");
  cmd->add_flag("--approx", flags.approx, "append approximate decimals to exact fractions");
  cmd->add_option("--node-budget", flags.node_budget,
                  "configuration/search budget (default 10^7)");
}

struct VerifierFlags {
  std::string machine;
  std::string verifier_file;
  std::string mode = "GB";
  int rounds = 1;
  std::string weight;
  std::string heads;
  bool check_heads = false;
};

void add_verifier_options(CLI::App* cmd, VerifierFlags& vf, bool with_machine = true) {
  if (with_machine) {
    cmd->add_option("--machine", vf.machine, "machine file (.mhfa)")->required();
  }
  cmd->add_option("--verifier", vf.verifier_file, "verifier parameter file");
  cmd->add_option("--mode", vf.mode, "GB, SYW or SYS");
  cmd->add_option("--rounds", vf.rounds, "number of simulation rounds C");
  cmd->add_option("--w", vf.weight, "risky-head probability, a dyadic fraction like 1/4");
  cmd->add_option("--heads", vf.heads,
                  "explicit classification safe:...;risky:... (default: pipeline analysis)");
  cmd->add_flag("--check-heads", vf.check_heads,
                "re-validate an explicit classification against the pipeline");
}

VerifierPtr build_verifier(const mhfa_machine* m, const VerifierFlags& vf) {
  mhfa_verifier* v = nullptr;
  if (!vf.verifier_file.empty()) {
    std::string text = read_file(vf.verifier_file);
    check(mhfa_verifier_parse(m, text.c_str(), &v));
  } else {
    check(mhfa_verifier_build(m, vf.mode.c_str(), vf.rounds,
                              vf.weight.empty() ? nullptr : vf.weight.c_str(),
                              vf.heads.empty() ? nullptr : vf.heads.c_str(),
                              vf.check_heads ? 1 : 0, &v));
  }
  return VerifierPtr(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-head two-way automata: simulation, head safety analysis,\n"
               "constant-coin verification protocols and tape-machine simulation"};
  app.require_subcommand(1);

  // ---- run ----------------------------------------------------------------
  std::string run_machine, run_input;
  CommonFlags run_flags;
  auto* cmd_run = app.add_subcommand("run", "acceptance and halting on one input");
  cmd_run->add_option("machine", run_machine, "machine file (.mhfa)")->required();
  cmd_run->add_option("--input", run_input, "input string")->required();
  add_common(cmd_run, run_flags);
  cmd_run->callback([&] {
    auto m = load_machine(run_machine);
    OwnedString report;
    check(mhfa_run_report(m.get(), run_input.c_str(), run_flags.node_budget, run_flags.flags(),
                          &report.data, nullptr));
    std::cout << report.str();
  });

  // ---- project --------------------------------------------------------------
  std::string proj_machine, proj_out;
  int proj_head = 1;
  bool proj_canonical = false;
  auto* cmd_project = app.add_subcommand("project", "single-head view of one head");
  cmd_project->add_option("machine", proj_machine)->required();
  cmd_project->add_option("--head", proj_head, "head index (1-based)")->required();
  cmd_project->add_flag("--canonical", proj_canonical, "sort transitions lexicographically");
  cmd_project->add_option("-o,--output", proj_out, "output file (default stdout)");
  cmd_project->callback([&] {
    auto m = load_machine(proj_machine);
    mhfa_machine* p = nullptr;
    check(mhfa_project_head(m.get(), proj_head, &p));
    MachinePtr projected(p);
    OwnedString text;
    check(mhfa_machine_serialize(projected.get(), proj_canonical ? 1 : 0, &text.data));
    write_output(text.str(), proj_out);
  });

  // ---- transform -------------------------------------------------------------
  auto* cmd_transform = app.add_subcommand("transform", "automaton-to-automaton constructions");
  cmd_transform->require_subcommand(1);
  std::string tr_machine, tr_out;
  int tr_slope = 1;
  bool tr_canonical = false;
  auto* cmd_timer = cmd_transform->add_subcommand("timer", "append a timer head");
  cmd_timer->add_option("machine", tr_machine)->required();
  cmd_timer->add_option("--slope", tr_slope, "simulated steps per timer move")->required();
  cmd_timer->add_flag("--canonical", tr_canonical);
  cmd_timer->add_option("-o,--output", tr_out);
  cmd_timer->callback([&] {
    auto m = load_machine(tr_machine);
    mhfa_machine* t = nullptr;
    check(mhfa_add_timer_head(m.get(), tr_slope, &t));
    MachinePtr timed(t);
    OwnedString text;
    check(mhfa_machine_serialize(timed.get(), tr_canonical ? 1 : 0, &text.data));
    write_output(text.str(), tr_out);
  });
  auto* cmd_counters = cmd_transform->add_subcommand("counters", "append odometer counter heads");
  cmd_counters->add_option("machine", tr_machine)->required();
  cmd_counters->add_flag("--canonical", tr_canonical);
  cmd_counters->add_option("-o,--output", tr_out);
  cmd_counters->callback([&] {
    auto m = load_machine(tr_machine);
    mhfa_machine* t = nullptr;
    check(mhfa_add_counter_heads(m.get(), &t));
    MachinePtr counted(t);
    OwnedString text;
    check(mhfa_machine_serialize(counted.get(), tr_canonical ? 1 : 0, &text.data));
    write_output(text.str(), tr_out);
  });

  // ---- analyze ---------------------------------------------------------------
  std::string an_machine, an_method = "pipeline";
  int an_maxlen = 6;
  CommonFlags an_flags;
  auto* cmd_analyze = app.add_subcommand("analyze", "per-head safety report");
  cmd_analyze->add_option("machine", an_machine)->required();
  cmd_analyze->add_option("--method", an_method, "pipeline (decisive) or bounded");
  cmd_analyze->add_option("--maxlen", an_maxlen, "input length bound for --method bounded");
  cmd_analyze->add_option("--subset-budget", an_flags.subset_budget,
                          "cap on generated one-way states (default 2^20)");
  add_common(cmd_analyze, an_flags);
  cmd_analyze->callback([&] {
    auto m = load_machine(an_machine);
    OwnedString report;
    check(mhfa_analyze_report(m.get(), an_method.c_str(), an_maxlen, an_flags.subset_budget,
                              an_flags.flags(), &report.data));
    std::cout << report.str();
  });

  // ---- verifier ---------------------------------------------------------------
  auto* cmd_verifier = app.add_subcommand("verifier", "build and execute verifiers");
  cmd_verifier->require_subcommand(1);

  VerifierFlags vb_flags;
  CommonFlags vb_common;
  auto* cmd_vbuild = cmd_verifier->add_subcommand("build", "derive a verifier parameter block");
  add_verifier_options(cmd_vbuild, vb_flags);
  add_common(cmd_vbuild, vb_common);
  cmd_vbuild->callback([&] {
    auto m = load_machine(vb_flags.machine);
    auto v = build_verifier(m.get(), vb_flags);
    OwnedString report;
    check(mhfa_verifier_report(v.get(), vb_common.flags(), &report.data));
    std::cout << report.str();
  });

  VerifierFlags vr_flags;
  CommonFlags vr_common;
  std::string vr_input, vr_cert, vr_coins;
  auto* cmd_vrun = cmd_verifier->add_subcommand("run", "replay a certificate against coins");
  add_verifier_options(cmd_vrun, vr_flags);
  cmd_vrun->add_option("--input", vr_input)->required();
  cmd_vrun->add_option("--cert", vr_cert, "certificate file (.cert)")->required();
  cmd_vrun->add_option("--coins", vr_coins, "coin string over 0/1")->required();
  add_common(cmd_vrun, vr_common);
  cmd_vrun->callback([&] {
    auto m = load_machine(vr_flags.machine);
    auto v = build_verifier(m.get(), vr_flags);
    std::string cert_text = read_file(vr_cert);
    mhfa_certificate* c = nullptr;
    check(mhfa_certificate_parse(m.get(), cert_text.c_str(), &c));
    CertPtr cert(c);
    OwnedString report;
    check(mhfa_verifier_run_report(v.get(), vr_input.c_str(), cert.get(), vr_coins.c_str(),
                                   vr_common.flags(), &report.data));
    std::cout << report.str();
  });

  VerifierFlags vd_flags;
  CommonFlags vd_common;
  std::string vd_input, vd_cert;
  auto* cmd_vdist = cmd_verifier->add_subcommand(
      "distribution", "exact accept/reject/loop probabilities of a certificate");
  add_verifier_options(cmd_vdist, vd_flags);
  cmd_vdist->add_option("--input", vd_input)->required();
  cmd_vdist->add_option("--cert", vd_cert)->required();
  add_common(cmd_vdist, vd_common);
  cmd_vdist->callback([&] {
    auto m = load_machine(vd_flags.machine);
    auto v = build_verifier(m.get(), vd_flags);
    std::string cert_text = read_file(vd_cert);
    mhfa_certificate* c = nullptr;
    check(mhfa_certificate_parse(m.get(), cert_text.c_str(), &c));
    CertPtr cert(c);
    OwnedString report;
    check(mhfa_distribution_report(v.get(), vd_input.c_str(), cert.get(), vd_common.flags(),
                                   &report.data));
    std::cout << report.str();
  });

  // ---- prove -------------------------------------------------------------------
  std::string pv_machine, pv_input, pv_out;
  int pv_rounds = 1;
  CommonFlags pv_common;
  auto* cmd_prove = app.add_subcommand("prove", "honest certificate for a member input");
  cmd_prove->add_option("--machine", pv_machine)->required();
  cmd_prove->add_option("--input", pv_input)->required();
  cmd_prove->add_option("--rounds", pv_rounds, "rounds to log");
  cmd_prove->add_option("-o,--output", pv_out);
  add_common(cmd_prove, pv_common);
  cmd_prove->callback([&] {
    auto m = load_machine(pv_machine);
    mhfa_certificate* c = nullptr;
    check(mhfa_prove(m.get(), pv_input.c_str(), pv_rounds, pv_common.node_budget, &c));
    if (c == nullptr) {
      std::cout << "# no certificate: input is not a member\n";
      return;
    }
    CertPtr cert(c);
    OwnedString text;
    check(mhfa_certificate_serialize(m.get(), cert.get(), &text.data));
    write_output(text.str(), pv_out);
  });

  // ---- attack --------------------------------------------------------------------
  VerifierFlags at_flags;
  CommonFlags at_common;
  std::string at_input, at_cert_out;
  auto* cmd_attack = app.add_subcommand("attack", "optimal adversarial certificate");
  add_verifier_options(cmd_attack, at_flags);
  cmd_attack->add_option("--input", at_input)->required();
  cmd_attack->add_option("--emit-cert", at_cert_out, "also write the certificate to a file");
  add_common(cmd_attack, at_common);
  cmd_attack->callback([&] {
    auto m = load_machine(at_flags.machine);
    auto v = build_verifier(m.get(), at_flags);
    OwnedString report;
    mhfa_certificate* c = nullptr;
    check(mhfa_attack(v.get(), at_input.c_str(), at_common.node_budget, at_common.flags(),
                      &report.data, at_cert_out.empty() ? nullptr : &c));
    std::cout << report.str();
    if (!at_cert_out.empty()) {
      CertPtr cert(c);
      OwnedString text;
      check(mhfa_certificate_serialize(m.get(), cert.get(), &text.data));
      write_output(text.str(), at_cert_out);
    }
  });

  // ---- error ---------------------------------------------------------------------
  VerifierFlags er_flags;
  CommonFlags er_common;
  int er_maxlen = 8;
  auto* cmd_error = app.add_subcommand("error", "strong/weak error sweep over nonmembers");
  add_verifier_options(cmd_error, er_flags);
  cmd_error->add_option("--maxlen", er_maxlen, "input length bound");
  add_common(cmd_error, er_common);
  cmd_error->callback([&] {
    auto m = load_machine(er_flags.machine);
    auto v = build_verifier(m.get(), er_flags);
    OwnedString report;
    check(mhfa_error_sweep_report(v.get(), er_maxlen, er_common.node_budget, er_common.flags(),
                                  &report.data));
    std::cout << report.str();
  });

  // ---- params ---------------------------------------------------------------------
  std::string pa_machine, pa_epsilon;
  CommonFlags pa_common;
  auto* cmd_params = app.add_subcommand("params", "rounds and weight for an error target");
  cmd_params->add_option("--machine", pa_machine)->required();
  cmd_params->add_option("--epsilon", pa_epsilon, "dyadic target like 1/8")->required();
  add_common(cmd_params, pa_common);
  cmd_params->callback([&] {
    auto m = load_machine(pa_machine);
    OwnedString report;
    check(mhfa_params_report(m.get(), pa_epsilon.c_str(), pa_common.flags(), &report.data));
    std::cout << report.str();
  });

  // ---- ntmsim ---------------------------------------------------------------------
  auto* cmd_ntmsim = app.add_subcommand("ntmsim", "multi-track tape simulation");
  cmd_ntmsim->require_subcommand(1);

  std::string ns_machine, ns_input;
  bool ns_trace = false;
  CommonFlags ns_common;
  auto* cmd_nrun = cmd_ntmsim->add_subcommand("run", "simulate one input");
  cmd_nrun->add_option("--machine", ns_machine)->required();
  cmd_nrun->add_option("--input", ns_input)->required();
  cmd_nrun->add_flag("--trace", ns_trace, "one line per simulated step");
  add_common(cmd_nrun, ns_common);
  cmd_nrun->callback([&] {
    auto m = load_machine(ns_machine);
    OwnedString report;
    check(mhfa_ntmsim_run_report(m.get(), ns_input.c_str(), ns_trace ? 1 : 0, ns_common.flags(),
                                 &report.data));
    std::cout << report.str();
  });

  std::string sc_machine, sc_lengths = "16,32,64,128", sc_family = "half:0:1";
  CommonFlags sc_common;
  auto* cmd_scaling = cmd_ntmsim->add_subcommand("scaling", "normalized cost over a length sweep");
  cmd_scaling->add_option("--machine", sc_machine)->required();
  cmd_scaling->add_option("--lengths", sc_lengths, "comma-separated input lengths");
  cmd_scaling->add_option("--family", sc_family, "half:<a>:<b> or uniform:<a>");
  add_common(cmd_scaling, sc_common);
  cmd_scaling->callback([&] {
    auto m = load_machine(sc_machine);
    std::vector<int> lengths;
    std::istringstream in(sc_lengths);
    std::string part;
    while (std::getline(in, part, ',')) lengths.push_back(std::stoi(part));
    OwnedString report;
    check(mhfa_ntmsim_scaling_report(m.get(), lengths.data(), lengths.size(), sc_family.c_str(),
                                     sc_common.flags(), &report.data));
    std::cout << report.str();
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage problems exit 1; --help and --version exit 0.
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return 0;
}
