#ifndef FRLAB_H
#define FRLAB_H

/* C interface to the fractional-Laplacian stochastic PDE laboratory.
 * All entry points are synchronous; a session carries the last error and
 * owns every string it returns. Exit-code convention mirrors the runner:
 * 0 pass, 1 soft assertion failure, 2 invalid configuration, 3 divergence;
 * negative values indicate API misuse. */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct frlab_session frlab_session;

frlab_session* frlab_session_create(void);
void frlab_session_destroy(frlab_session* session);

/* Run the experiment described by a JSON config file. */
int frlab_run(frlab_session* session, const char* config_path);

/* Re-run with one axis ("dt", "grid", "K", "K_basis", "mc_paths") scaled by
 * each factor. */
int frlab_sweep(frlab_session* session, const char* config_path,
                const char* axis, const double* factors, int n_factors);

/* Newline-separated experiment names; owned by the session. */
const char* frlab_list_experiments(frlab_session* session);

/* Message from the most recent call; owned by the session. */
const char* frlab_last_error(frlab_session* session);

#ifdef __cplusplus
}
#endif

#endif /* FRLAB_H */
