#pragma once

#include <utility>
#include <vector>

#include "carnot/fields.hpp"
#include "carnot/grid.hpp"

namespace carnot {

struct HeatOptions {
  double cfl_safety = 0.4;   // dt = cfl_safety / sigma_stencil
  double dt_override = 0.0;  // > 0 forces the step size
  int snapshot_stride = 0;   // 0: keep only the final state
  bool periodic = false;
  int sponge_check_stride = 200;
};

struct HeatRun {
  GridField final;
  double t_final = 0.0;
  double dt = 0.0;
  long steps = 0;
  std::vector<std::pair<double, GridField>> snapshots;
  double mass_initial = 0.0, mass_final = 0.0, mass_drift_rel = 0.0;
  double min0 = 0.0, max0 = 0.0, min_final = 0.0, max_final = 0.0;
  bool sponge_touched = false;  // |u| above threshold in the sponge zone
  double sponge_peak = 0.0;
};

/// Explicit Euler integration of du/dt = L u with the symmetric discrete
/// sub-Laplacian, Dirichlet-zero boundary (or periodic wrap). Throws on a
/// forced dt above the stability bound.
HeatRun heat_evolve(const LeftInvariantFrame& fr, const GridField& u0,
                    double t_final, const HeatOptions& opt = {});

}  // namespace carnot
