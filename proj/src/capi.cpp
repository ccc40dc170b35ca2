#include "frlab.h"

#include <string>
#include <vector>

#include "frlab/experiment.hpp"

struct frlab_session {
  std::string last_message;
  std::string experiments;
};

extern "C" {

frlab_session* frlab_session_create(void) {
  auto* s = new (std::nothrow) frlab_session;
  if (s) {
    for (const auto& name : frlab::experiment_names()) {
      if (!s->experiments.empty()) s->experiments += '\n';
      s->experiments += name;
    }
  }
  return s;
}

void frlab_session_destroy(frlab_session* session) { delete session; }

int frlab_run(frlab_session* session, const char* config_path) {
  if (!session) return -1;
  if (!config_path) {
    session->last_message = "null config path";
    return -1;
  }
  const frlab::RunResult res = frlab::run_experiment_file(config_path);
  session->last_message = res.message;
  return res.exit_code;
}

int frlab_sweep(frlab_session* session, const char* config_path,
                const char* axis, const double* factors, int n_factors) {
  if (!session) return -1;
  if (!config_path || !axis || (!factors && n_factors > 0) || n_factors < 1) {
    if (session) session->last_message = "invalid sweep arguments";
    return -1;
  }
  const std::vector<double> fs(factors, factors + n_factors);
  const frlab::RunResult res =
      frlab::sweep_experiment_file(config_path, axis, fs);
  session->last_message = res.message;
  return res.exit_code;
}

const char* frlab_list_experiments(frlab_session* session) {
  return session ? session->experiments.c_str() : "";
}

const char* frlab_last_error(frlab_session* session) {
  return session ? session->last_message.c_str() : "";
}

}  // extern "C"
