#include "carnot/heat.hpp"

#include <cmath>
#include <stdexcept>

#include "carnot/stencil.hpp"

namespace carnot {

namespace {

double sponge_max_abs(const GridField& u) {
  const GridSpec& spec = u.spec;
  double peak = 0.0;
  std::vector<int> idx(spec.dim());
  for (size_t i = 0; i < u.size(); ++i) {
    spec.unflatten(i, idx);
    if (spec.in_sponge(idx)) peak = std::max(peak, std::abs(u.v[i]));
  }
  return peak;
}

}  // namespace

HeatRun heat_evolve(const LeftInvariantFrame& fr, const GridField& u0,
                    double t_final, const HeatOptions& opt) {
  if (!(t_final >= 0.0)) throw std::invalid_argument("heat_evolve: t >= 0");
  HeatRun run;
  double sigma = sigma_stencil(fr, u0.spec);
  double dt_cfl = opt.cfl_safety / sigma;
  run.dt = opt.dt_override > 0.0 ? opt.dt_override : dt_cfl;
  if (run.dt > dt_cfl * (1.0 + 1e-12))
    throw std::invalid_argument("heat_evolve: dt violates the stability bound");

  GridField u = u0, lap(u0.spec);
  std::vector<GridField> ws;
  run.mass_initial = pairwise_sum(u.v) * u.spec.cell_volume();
  run.min0 = min_val(u.v);
  run.max0 = max_val(u.v);

  double t = 0.0;
  long step = 0;
  long total_steps = static_cast<long>(std::ceil(t_final / run.dt - 1e-12));
  while (t < t_final - 1e-15 * (1.0 + t_final)) {
    double dt = std::min(run.dt, t_final - t);
    if (opt.periodic)
      apply_sub_laplacian_periodic(fr, u, lap, ws);
    else
      apply_sub_laplacian(fr, u, lap, ws);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int64_t i = 0; i < static_cast<int64_t>(u.size()); ++i)
      u.v[i] += dt * lap.v[i];
    t += dt;
    ++step;
    if (opt.snapshot_stride > 0 &&
        (step % opt.snapshot_stride == 0 || step == total_steps))
      run.snapshots.emplace_back(t, u);
    if (opt.sponge_check_stride > 0 && step % opt.sponge_check_stride == 0) {
      double peak = sponge_max_abs(u);
      run.sponge_peak = std::max(run.sponge_peak, peak);
    }
  }
  run.steps = step;
  run.t_final = t;
  run.mass_final = pairwise_sum(u.v) * u.spec.cell_volume();
  double scale = std::max(std::abs(run.mass_initial), 1e-300);
  run.mass_drift_rel = std::abs(run.mass_final - run.mass_initial) / scale;
  run.min_final = min_val(u.v);
  run.max_final = max_val(u.v);
  run.sponge_peak = std::max(run.sponge_peak, sponge_max_abs(u));
  double amp = std::max(std::abs(run.max0), std::abs(run.min0));
  run.sponge_touched = run.sponge_peak > 1e-10 * std::max(amp, 1e-300);
  run.final = std::move(u);
  return run;
}

}  // namespace carnot
