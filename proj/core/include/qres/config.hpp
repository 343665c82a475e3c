#pragma once

#include <string>

#include "qres/ihhl.hpp"
#include "qres/physics.hpp"

namespace qres {

// Everything a pipeline run needs, with the alpha-alpha defaults baked in.
struct RunConfig {
  PotentialParams potential;
  ChannelSpec channel;
  RadialBasis basis;

  double lambda_min = 1.45;
  double lambda_max = 1.75;
  int training_count = 8;

  double target_lambda = 1.0;
  double theta_deg = 20.0;

  IhhlOptions ihhl;
  // True when ihhl.update came from a config file or flag rather than the
  // default; circuit-backend runs switch the default rule to rayleigh only
  // when the user never chose one.
  bool ihhl_update_set = false;

  // Reference resonance used to select the physical eigenvalue from the EC
  // spectrum.
  Complex ec_reference{11.8079, -1.8085};
};

// Flat key=value format, one pair per line, '#' starts a comment.  Unknown
// keys are an error so that typos fail loudly.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string config_to_string(const RunConfig& cfg);

// Value of QRES_CONFIG, or empty when unset.
std::string default_config_path();

}  // namespace qres
