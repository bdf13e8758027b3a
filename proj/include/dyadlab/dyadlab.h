#ifndef DYADLAB_DYADLAB_H
#define DYADLAB_DYADLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define DL_API __attribute__((visibility("default")))
#else
#define DL_API
#endif

/* Status codes. Every call that can fail returns one; dl_last_error() then holds a message
   for the calling thread. */
typedef enum {
  DL_OK = 0,
  DL_INVALID_ARGUMENT = 1,
  DL_DOMAIN = 2,
  DL_PARSE = 3,
  DL_IO = 4,
  DL_INTERNAL = 5
} dl_status;

typedef struct dl_lattice dl_lattice;
typedef struct dl_gridfn dl_gridfn;
typedef struct dl_shift dl_shift;

DL_API const char* dl_version(void);
/* Message for the last failed call on this thread; empty after a successful call. */
DL_API const char* dl_last_error(void);
/* Frees strings returned through char** out-parameters. NULL is ignored. */
DL_API void dl_string_free(char* s);

/* Lattices. `shift_seed` < 0 gives the standard lattice, otherwise a random shift. */
DL_API dl_status dl_lattice_new(int dim, int depth, int64_t shift_seed, dl_lattice** out);
DL_API void dl_lattice_free(dl_lattice* lat);
DL_API dl_status dl_lattice_cells(const dl_lattice* lat, uint64_t* out);

/* Matrix-valued functions on the finest cells. Values are row-major complex n×n blocks,
   interleaved (re, im), cell after cell: 2·n²·cells doubles. */
DL_API dl_status dl_gridfn_random(const dl_lattice* lat, int n, uint64_t seed, dl_gridfn** out);
DL_API dl_status dl_gridfn_from_values(const dl_lattice* lat, int n, const double* values, size_t count,
                                       dl_gridfn** out);
DL_API void dl_gridfn_free(dl_gridfn* f);
DL_API dl_status dl_gridfn_lp_norm(const dl_gridfn* f, double p, double r, double* out);

/* Shifts from the JSON schema used by the CLI (`shift` field of shift-eval). */
DL_API dl_status dl_shift_from_json(const char* json, int clamp, dl_shift** out);
DL_API void dl_shift_free(dl_shift* s);
DL_API dl_status dl_shift_to_json(const dl_shift* s, char** json);
/* Evaluates the form on `count` functions; the result is written as (re, im). */
DL_API dl_status dl_shift_eval(const dl_shift* s, const dl_gridfn* const* fs, size_t count, double* re,
                               double* im);

/* Schatten p-norm of a row-major complex n×n matrix; p may be INFINITY. */
DL_API dl_status dl_schatten_norm(const double* values, int n, double p, double* out);

/* Runs one CLI subcommand. `config_json` may be NULL for defaults. When has_seed is
   nonzero, `seed` overrides the configured seed. Output strings may be requested
   selectively by passing NULL; `table_csv` is empty when the command has no table. */
DL_API dl_status dl_run(const char* subcommand, const char* config_json, uint64_t seed, int has_seed,
                        char** report_json, char** records_csv, char** table_csv, int* hard_failures);
/* Newline-separated subcommand names. */
DL_API const char* dl_subcommands(void);

#ifdef __cplusplus
}
#endif

#endif
