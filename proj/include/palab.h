#ifndef PALAB_H
#define PALAB_H

/* C interface of libpalab: exact analysis of probabilistic automata.
 *
 * Every fallible entry point returns a palab_status; on failure the
 * thread-local message of palab_last_error() describes the problem. Strings
 * returned through out-parameters are heap copies owned by the caller and
 * must be released with palab_string_free (palab_verdict fields with
 * palab_verdict_clear). */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum palab_status {
  PALAB_OK = 0,
  PALAB_ERR_INPUT = 1,    /* malformed or unsupported input data */
  PALAB_ERR_CONTRACT = 2, /* a documented precondition was violated */
  PALAB_ERR_RESOURCE = 3, /* a configured budget ran out */
  PALAB_ERR_NOMEM = 4
} palab_status;

/* Message for the most recent failure on this thread ("" when none).
 * The pointer stays valid until the next library call on the thread. */
const char* palab_last_error(void);

/* First line of every report emitted by the command runner. */
const char* palab_version(void);

void palab_string_free(char* s);

/* ---- Automata ---- */

typedef struct palab_pa palab_pa; /* opaque automaton handle */

/* Parses the line-based automaton format (alphabet/state/initial/final/trans
 * lines, '#' comments). The handle must be released with palab_pa_free. */
palab_status palab_pa_parse(const char* text, palab_pa** out);
void palab_pa_free(palab_pa* pa);

/* Renders in the same format; parse(render(pa)) reproduces the automaton. */
palab_status palab_pa_render(const palab_pa* pa, char** text_out);

size_t palab_pa_state_count(const palab_pa* pa);
size_t palab_pa_letter_count(const palab_pa* pa);

/* Exact acceptance value of a word as "num/den". The word is a
 * whitespace-separated list of letters; "" is the empty word, and when all
 * letters are single characters a compact word like "aab" is accepted. */
palab_status palab_pa_eval(const palab_pa* pa, const char* word,
                           char** value_out);

/* Ambiguity class, rendered as one of "unambiguous", "finite degree=k",
 * "polynomial degree=d", "exponential". */
palab_status palab_pa_classify(const palab_pa* pa, char** class_out);

/* ---- Decision procedures ---- */

/* answer: 1 yes, 0 no (witness set), -1 undecided. The certificate is a
 * human-readable, exactly re-checkable derivation of the verdict. */
typedef struct palab_verdict {
  int answer;
  char* witness;     /* NULL unless the verdict carries a witness */
  char* certificate; /* never NULL after a successful call */
} palab_verdict;

void palab_verdict_clear(palab_verdict* v);

/* Is [[A]](w) <= 1/2 for every word? Requires a finitely ambiguous
 * automaton; a "no" carries a word with value > 1/2. */
palab_status palab_empty(const palab_pa* a, palab_verdict* out);

/* Is [[A]](w) <= [[B]](w) for every word? Decided configurations: finitely
 * ambiguous vs unambiguous and unambiguous vs finitely ambiguous; others
 * fail with PALAB_ERR_INPUT. */
palab_status palab_contain(const palab_pa* a, const palab_pa* b,
                           palab_verdict* out);

/* Emptiness under a gap promise of width epsilon ("num/den", in (0,1)):
 * "yes" asserts [[A]] <= 1/2 + epsilon everywhere, "no" carries a word with
 * value > 1/2 exactly. override_n >= 0 replaces the certified layer count
 * (waiving the promise); pass -1 to keep the computed value. */
palab_status palab_gap_empty(const palab_pa* a, const char* epsilon,
                             long override_n, palab_verdict* out);

/* Decides whether an integer point satisfies f(x) < 1 and Mx < c for the
 * instance text (header "ipexp n ell m", term and row lines). answer 1 means
 * satisfiable with witness "(x1, ..., xn)"; 0 unsatisfiable with a
 * certificate; -1 undecided within budgets. radius < 0 keeps the default
 * direct-search radius. */
palab_status palab_ipexp_solve(const char* text, long radius,
                               palab_verdict* out);

/* Compiles a two-counter machine (state/init/halt/inc/dec lines) into the
 * four automata of the containment reduction. Each out-parameter may be
 * NULL when that automaton is not wanted. The machine halts if and only if
 * some word w has [[Aprime]](w) > [[Bprime]](w). */
palab_status palab_forge(const char* machine_text, palab_pa** a_out,
                         palab_pa** b_out, palab_pa** aprime_out,
                         palab_pa** bprime_out);

/* ---- Command runner ---- */

/* Runs the full command-line interface (argv[0] is the program name) and
 * returns its exit code: 0 decided, 2 undecided, 1 usage or input error.
 * Reports go to stdout, diagnostics to stderr. */
int palab_run(int argc, char** argv);

#ifdef __cplusplus
}
#endif

#endif /* PALAB_H */
