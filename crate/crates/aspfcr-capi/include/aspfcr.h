/* C interface for the aspfcr answer set solver.
 *
 * Usage pattern:
 *
 *   AspfcrProgram *prog = NULL;
 *   char *err = NULL;
 *   if (aspfcr_program_parse("p :- not q.\n", &prog, &err) != ASPFCR_OK) {
 *       fprintf(stderr, "%s\n", err);
 *       aspfcr_string_free(err);
 *       return 1;
 *   }
 *   AspfcrResult *res = NULL;
 *   if (aspfcr_solve(prog, 0, 0, &res, &err) == ASPFCR_OK) {
 *       for (size_t i = 0; i < aspfcr_result_count(res); i++) {
 *           char *m = aspfcr_result_model(res, i);
 *           printf("%s\n", m);
 *           aspfcr_string_free(m);
 *       }
 *   }
 *   aspfcr_result_free(res);
 *   aspfcr_program_free(prog);
 *
 * Every char* returned by the library is heap-allocated and must be
 * released with aspfcr_string_free, except aspfcr_version's static string.
 * Handles are not thread-safe; do not share one handle across threads
 * without external synchronization.
 */

#ifndef ASPFCR_H
#define ASPFCR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. */
enum {
    ASPFCR_OK = 0,
    ASPFCR_INVALID_ARG = 1, /* NULL pointer or invalid UTF-8 */
    ASPFCR_PARSE = 2,       /* syntax error in the program text */
    ASPFCR_GROUND = 3,      /* unsafe rule, ill-sorted expression, ... */
    ASPFCR_EVAL = 4,        /* ill-sorted comparison during solving */
    ASPFCR_LIMIT = 5,       /* budget expired before any answer was found */
    ASPFCR_INTERNAL = 6
};

/* A parsed and grounded program. */
typedef struct AspfcrProgram AspfcrProgram;

/* Answers from one solve call. */
typedef struct AspfcrResult AspfcrResult;

/* Library version; static storage, do not free. */
const char *aspfcr_version(void);

/* Releases a string returned by the library. NULL is ignored. */
void aspfcr_string_free(char *s);

/* Parses and grounds a NUL-terminated UTF-8 program. On ASPFCR_OK stores a
 * handle in *out. On failure stores a diagnostic in *err when err is
 * non-NULL; release it with aspfcr_string_free. */
int32_t aspfcr_program_parse(const char *src, AspfcrProgram **out, char **err);

/* Releases a program handle. NULL is ignored. */
void aspfcr_program_free(AspfcrProgram *p);

/* The ground program in concrete syntax, or NULL when p is NULL. */
char *aspfcr_program_ground_text(const AspfcrProgram *p);

/* Per-rule instantiation counts as CSV (line,hash,instances). */
char *aspfcr_program_stats_csv(const AspfcrProgram *p);

/* Computes answers. max_models 0 means all, time_budget_ms 0 means no
 * budget. Stores a result handle in *out on ASPFCR_OK and also on
 * ASPFCR_LIMIT (the budget expired before any answer was found; the result
 * is then empty and incomplete). */
int32_t aspfcr_solve(const AspfcrProgram *p, size_t max_models,
                     uint64_t time_budget_ms, AspfcrResult **out, char **err);

/* Releases a result handle. NULL is ignored. */
void aspfcr_result_free(AspfcrResult *r);

/* Number of answers held by the result. */
size_t aspfcr_result_count(const AspfcrResult *r);

/* 1 when the enumeration is known exhaustive, 0 when answers may be
 * missing (budget expired or the max_models cap was reached). */
int32_t aspfcr_result_complete(const AspfcrResult *r);

/* The i-th answer's visible literals, sorted and space-separated. NULL when
 * i is out of range. */
char *aspfcr_result_model(const AspfcrResult *r, size_t i);

/* The i-th answer's support label, e.g. "{cr@4[P=p2]}". Empty for programs
 * without consistency-restoring rules. NULL when i is out of range. */
char *aspfcr_result_support(const AspfcrResult *r, size_t i);

#ifdef __cplusplus
}
#endif

#endif /* ASPFCR_H */
