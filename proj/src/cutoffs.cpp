#include "carnot/cutoffs.hpp"

#include <cmath>
#include <stdexcept>

#include "carnot/profiles.hpp"
#include "carnot/stencil.hpp"

namespace carnot {

namespace {

GridField sample_hom_norm(const StratifiedAlgebra& a, const GridSpec& spec) {
  return sample_field(spec, [&](std::span<const double> x) {
    return hom_norm(a, GroupPoint(x.begin(), x.end()));
  });
}

/// sup over stencil-valid non-sponge nodes.
double sup_valid(const GridField& f, int width) {
  const GridSpec& spec = f.spec;
  double m = 0.0;
  std::vector<int> idx(spec.dim());
  for (size_t i = 0; i < f.size(); ++i) {
    spec.unflatten(i, idx);
    if (!spec.is_interior(idx, width) || spec.in_sponge(idx)) continue;
    m = std::max(m, std::abs(f.v[i]));
  }
  return m;
}

}  // namespace

GridSpec make_cutoff_grid(const StratifiedAlgebra& a, double R, double h,
                          double htau_factor, double gamma_cap, double pad) {
  std::vector<double> extents, spacings;
  double reach = pad * gamma_cap * R;
  for (int i = 0; i < a.total_dim(); ++i) {
    int l = a.layer_of(i);
    extents.push_back(std::pow(reach, l));
    spacings.push_back(l == 1 ? h : std::max(h, htau_factor * R * R * h));
  }
  return GridSpec::centered(extents, spacings);
}

CoarseCutoff coarse_cutoff(const LeftInvariantFrame& fr, const GridSpec& spec,
                           double R, double gamma0) {
  const auto& alg = fr.algebra();
  if (!(R > 0.0)) throw std::invalid_argument("coarse_cutoff: R > 0");
  for (int i = 0; i < alg.total_dim(); ++i) {
    if (spec.extent(i) < std::pow(gamma0 * R, alg.layer_of(i)))
      throw std::invalid_argument("coarse_cutoff: grid too small for gamma0*R");
  }
  CoarseCutoff out;
  out.R = R;
  out.gamma0 = gamma0;
  GridField norm = sample_hom_norm(alg, spec);
  out.field = GridField(spec);
  for (size_t i = 0; i < norm.size(); ++i)
    out.field.v[i] = eta_coarse(norm.v[i] / R, gamma0);

  GridField gam = gamma_grid(fr, out.field, out.field);
  double nu = 0.25 * R * R;
  if (alg.step() == 2) {
    GridField gz = gamma_z_grid(fr, out.field, out.field);
    for (size_t i = 0; i < gam.size(); ++i) gam.v[i] += nu * gz.v[i];
  }
  out.C0 = sup_valid(gam, 1) * R * R;
  return out;
}

CutoffFunction good_cutoff(const LeftInvariantFrame& fr, const GridSpec& spec,
                           double R, const CdParams& cd,
                           const GoodCutoffOptions& opt) {
  const auto& alg = fr.algebra();
  CoarseCutoff coarse = coarse_cutoff(fr, spec, R, opt.gamma0);

  CutoffFunction out;
  out.R = R;
  out.nu = 0.25 * R * R;
  out.A = -cd.kappa / out.nu;
  out.C0 = coarse.C0;

  double c1_kappa = cd.kappa > 0 ? 1.0 / (8.0 * cd.kappa) : 1e300;
  double c1_c0 = 1.0 / (64.0 * std::max(coarse.C0, 1e-12) * cd.d);
  double C1 = std::min(c1_kappa, c1_c0);

  GridField norm = sample_hom_norm(alg, spec);
  HeatRun run;
  bool ok = false;
  for (int attempt = 0; attempt <= opt.max_halvings; ++attempt) {
    run = heat_evolve(fr, coarse.field, C1 * R * R);
    // band check: psi in [3/4, 1] on B_R and <= 1/4 outside B_{gamma_cap R}
    double min_inner = 1e300, max_outer = 0.0, max_all = 0.0;
    for (size_t i = 0; i < run.final.size(); ++i) {
      max_all = std::max(max_all, run.final.v[i]);
      if (norm.v[i] <= R) min_inner = std::min(min_inner, run.final.v[i]);
      if (norm.v[i] >= opt.gamma_cap * R)
        max_outer = std::max(max_outer, run.final.v[i]);
    }
    ok = min_inner >= 0.75 && max_outer <= 0.25 && max_all <= 1.0 + 1e-9;
    if (ok) break;
    C1 *= 0.5;
    out.halvings = attempt + 1;
  }
  if (!ok)
    throw std::runtime_error("good_cutoff: band condition failed after retries");
  out.bands_ok = true;
  out.C1 = C1;
  out.t_R = C1 * R * R;

  out.field = GridField(spec);
  double gamma_emp = 0.0;
  for (size_t i = 0; i < run.final.size(); ++i) {
    double v = rho_ramp(run.final.v[i]);
    v = std::clamp(v, 0.0, 1.0);
    out.field.v[i] = v;
    if (v > 0.0) gamma_emp = std::max(gamma_emp, norm.v[i] / R);
  }
  out.gamma_factor = gamma_emp;

  GridField lap = apply_sub_laplacian(fr, out.field);
  out.sup_L_R2 = sup_valid(lap, 2) * R * R;
  GridField gam = gamma_grid(fr, out.field, out.field);
  GridField gz = gamma_z_grid(fr, out.field, out.field);
  for (size_t i = 0; i < gam.size(); ++i) gam.v[i] += out.nu * gz.v[i];
  out.sup_grad_R2 = sup_valid(gam, 1) * R * R;
  return out;
}

GradientBoundReport verify_semigroup_gradient_bound(const LeftInvariantFrame& fr,
                                                    const GridField& f, double t,
                                                    double nu,
                                                    const CdParams& cd) {
  if (!(nu > 0.0)) throw std::invalid_argument("nu > 0 required");
  GradientBoundReport rep;
  rep.t = t;
  rep.nu = nu;
  rep.h = f.spec.min_spacing();
  double A = -cd.kappa / nu;
  rep.A = A;

  GridField g0 = gamma_grid(fr, f, f);
  GridField gz0 = gamma_z_grid(fr, f, f);
  for (size_t i = 0; i < g0.size(); ++i) g0.v[i] += nu * gz0.v[i];

  HeatRun ru = heat_evolve(fr, f, t);
  HeatRun rv = heat_evolve(fr, g0, t);

  GridField gu = gamma_grid(fr, ru.final, ru.final);
  GridField gzu = gamma_z_grid(fr, ru.final, ru.final);
  GridField lu = apply_sub_laplacian(fr, ru.final);

  double cA = (A == 0.0) ? 2.0 * t / cd.d
                         : (std::exp(-2.0 * A * t) - 1.0) / (-A * cd.d);
  double decay = std::exp(-2.0 * A * t);

  const GridSpec& spec = f.spec;
  std::vector<int> idx(spec.dim());
  double margin = 1e300, lhs_max = 0.0;
  for (size_t i = 0; i < gu.size(); ++i) {
    spec.unflatten(i, idx);
    if (!spec.is_interior(idx, 2) || spec.in_sponge(idx)) continue;
    double lhs = gu.v[i] + nu * gzu.v[i] + cA * lu.v[i] * lu.v[i];
    double rhs = rv.final.v[i] * decay;
    margin = std::min(margin, rhs - lhs);
    lhs_max = std::max(lhs_max, std::abs(lhs));
  }
  rep.margin = margin;
  rep.lhs_max = lhs_max;
  return rep;
}

}  // namespace carnot
