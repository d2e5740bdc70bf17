#ifndef CMCIRCUITS_CONFIG_HPP
#define CMCIRCUITS_CONFIG_HPP

#include <string>

#include "cmcircuits/combres.hpp"
#include "cmcircuits/poly.hpp"

namespace cmc {

// Run-wide knobs.  Everything downstream is deterministic in these values.
struct RunConfig {
  unsigned long seed = 1;
  int membership_samples = 16;
  long coordinate_bound = 1000;
  FactorBudget factor_budget;
  PlanMode plan_mode = PlanMode::kGreedy;
  // minor expansion avoids the giant exact divisions of Bareiss on the
  // desk-scale Sylvester matrices; both engines agree and are cross-checked
  ResultantEngine resultant_engine = ResultantEngine::kMinorExpansion;
  std::string cache_dir;  // empty = no cache
  int threads = 1;
  int verbosity = 0;
};

}  // namespace cmc

#endif
