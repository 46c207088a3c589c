/* mhfa.h -- C interface to the multi-head finite automaton toolkit.
 *
 * The library works on three opaque handles: machines (parsed from the
 * `.mhfa` text format), verifiers (a machine plus protocol parameters) and
 * certificates (parsed from the `.cert` format). Every entry point returns
 * an mhfa_status; on failure mhfa_last_error() describes the problem for the
 * calling thread. Strings returned through `char**` are heap-allocated and
 * must be released with mhfa_string_free().
 */
#ifndef MHFA_H
#define MHFA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mhfa_status {
  MHFA_OK = 0,
  MHFA_ERR_PARSE = 1,   /* malformed input text, message carries the line */
  MHFA_ERR_INVALID = 2, /* contract violation (bad arity, index, parameter) */
  MHFA_ERR_BUDGET = 3,  /* an exploration exceeded its resource budget */
  MHFA_ERR_IO = 4,
  MHFA_ERR_INTERNAL = 5
} mhfa_status;

typedef struct mhfa_machine mhfa_machine;
typedef struct mhfa_verifier mhfa_verifier;
typedef struct mhfa_certificate mhfa_certificate;

/* Report flags. */
#define MHFA_REPORT_MACHINE 1u /* line-oriented key=value output */
#define MHFA_REPORT_APPROX 2u  /* append approximate decimals to fractions */

const char* mhfa_last_error(void);
void mhfa_string_free(char* s);
void mhfa_machine_free(mhfa_machine* m);
void mhfa_verifier_free(mhfa_verifier* v);
void mhfa_certificate_free(mhfa_certificate* c);

/* -- machines ----------------------------------------------------------- */

mhfa_status mhfa_machine_parse(const char* text, mhfa_machine** out);
mhfa_status mhfa_machine_parse_file(const char* path, mhfa_machine** out);
/* canonical != 0 sorts the transition lines lexicographically */
mhfa_status mhfa_machine_serialize(const mhfa_machine* m, int canonical, char** out);
int mhfa_machine_heads(const mhfa_machine* m);
int mhfa_machine_state_count(const mhfa_machine* m);
int mhfa_machine_transition_count(const mhfa_machine* m);
/* structural equality: canonical forms agree up to the automaton name */
int mhfa_machine_same(const mhfa_machine* a, const mhfa_machine* b);

/* -- transforms ---------------------------------------------------------- */

mhfa_status mhfa_project_head(const mhfa_machine* m, int head, mhfa_machine** out);
mhfa_status mhfa_add_timer_head(const mhfa_machine* m, int slope, mhfa_machine** out);
mhfa_status mhfa_add_counter_heads(const mhfa_machine* m, mhfa_machine** out);

/* -- runs and analysis ---------------------------------------------------- */

/* Acceptance and halting for one input; *member (nullable) is set to 1/0.
 * node_budget = 0 selects the default of 10^7 configurations. */
mhfa_status mhfa_run_report(const mhfa_machine* m, const char* input, uint64_t node_budget,
                            unsigned flags, char** report, int* member);

/* Per-head safety. method is "pipeline" (decisive) or "bounded" (loop search
 * over inputs up to bounded_maxlen; finding a loop proves riskiness).
 * subset_budget caps the generated one-way states (0 = default 2^20). */
mhfa_status mhfa_analyze_report(const mhfa_machine* m, const char* method, int bounded_maxlen,
                                uint64_t subset_budget, unsigned flags, char** report);
mhfa_status mhfa_head_is_safe(const mhfa_machine* m, int head, int* safe);

/* -- verifiers ------------------------------------------------------------ */

/* mode is "GB", "SYW" or "SYS"; weight is a fraction like "1/4" (GB only).
 * heads overrides the safety classification as "safe:2;risky:1" ("-" for an
 * empty group); pass NULL to classify via the pipeline. check_classification
 * re-validates an explicit classification against the pipeline. */
mhfa_status mhfa_verifier_build(const mhfa_machine* m, const char* mode, int rounds,
                                const char* weight, const char* heads, int check_classification,
                                mhfa_verifier** out);
mhfa_status mhfa_verifier_parse(const mhfa_machine* m, const char* text, mhfa_verifier** out);
mhfa_status mhfa_verifier_report(const mhfa_verifier* v, unsigned flags, char** report);

/* -- certificates ---------------------------------------------------------- */

mhfa_status mhfa_certificate_parse(const mhfa_machine* m, const char* text,
                                   mhfa_certificate** out);
mhfa_status mhfa_certificate_serialize(const mhfa_machine* m, const mhfa_certificate* c,
                                       char** out);
/* Honest certificate: the shortest accepting path logged `rounds` times.
 * Sets *out to NULL (status MHFA_OK) when the input is a nonmember. */
mhfa_status mhfa_prove(const mhfa_machine* m, const char* input, int rounds,
                       uint64_t node_budget, mhfa_certificate** out);

/* -- verification ----------------------------------------------------------- */

/* coins is a string over '0'/'1', consumed per round as weight bits then
 * selector bits (SYS draws its upfront coins first). */
mhfa_status mhfa_verifier_run_report(const mhfa_verifier* v, const char* input,
                                     const mhfa_certificate* c, const char* coins,
                                     unsigned flags, char** report);
/* Exact accept/reject/loop probabilities of the triple. */
mhfa_status mhfa_distribution_report(const mhfa_verifier* v, const char* input,
                                     const mhfa_certificate* c, unsigned flags, char** report);
/* Optimal adversarial certificate for the input; cert_out is optional. */
mhfa_status mhfa_attack(const mhfa_verifier* v, const char* input, uint64_t node_budget,
                        unsigned flags, char** report, mhfa_certificate** cert_out);
/* Strong/weak error over every nonmember up to max_len. */
mhfa_status mhfa_error_sweep_report(const mhfa_verifier* v, int max_len, uint64_t node_budget,
                                    unsigned flags, char** report);
/* Least GB parameters for a dyadic error target like "1/8". */
mhfa_status mhfa_params_report(const mhfa_machine* m, const char* epsilon, unsigned flags,
                               char** report);

/* -- tape simulation --------------------------------------------------------- */

/* Simulates the machine through the multi-track tape; nondeterminism is
 * resolved by the shortest accepting path when one exists. trace != 0 appends
 * one line per simulated step. */
mhfa_status mhfa_ntmsim_run_report(const mhfa_machine* m, const char* input, int trace,
                                   unsigned flags, char** report);
/* family is "half:<a>:<b>" for a^(n/2) b^(n/2) or "uniform:<a>" for a^n. */
mhfa_status mhfa_ntmsim_scaling_report(const mhfa_machine* m, const int* lengths, size_t count,
                                       const char* family, unsigned flags, char** report);

#ifdef __cplusplus
}
#endif

#endif /* MHFA_H */
