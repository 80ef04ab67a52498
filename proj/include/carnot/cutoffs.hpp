#pragma once

#include "carnot/algebra.hpp"
#include "carnot/fields.hpp"
#include "carnot/grid.hpp"
#include "carnot/heat.hpp"

namespace carnot {

struct CoarseCutoff {
  GridField field;  // psi_0 = eta(hom_norm/R)
  double R = 0.0;
  double gamma0 = 0.0;  // support inflation of the profile
  double C0 = 0.0;      // measured sup(Gamma + (R/2)^2 GammaZ)(psi_0) * R^2
};

/// Coarse cut-off of Lemma-3.2 type; the constant C0 is measured on the grid
/// rather than assumed.
CoarseCutoff coarse_cutoff(const LeftInvariantFrame& fr, const GridSpec& spec,
                           double R, double gamma0 = 1.5);

struct CutoffFunction {
  GridField field;  // phi_R, values in [0,1] exactly
  double R = 0.0;
  double gamma_factor = 0.0;  // measured: sup{ hom_norm/R : phi > 0 }
  double t_R = 0.0;           // evolution time C1 * R^2
  double nu = 0.0;            // (R/2)^2
  double A = 0.0;             // -kappa/nu
  double C0 = 0.0;            // measured coarse constant
  double C1 = 0.0;            // time factor actually used
  int halvings = 0;           // automatic C1 reductions
  bool bands_ok = false;      // psi_{t_R} within [3/4,1] on B_R, [0,1/4] far out
  double sup_L_R2 = 0.0;      // sup |L phi| * R^2
  double sup_grad_R2 = 0.0;   // sup (Gamma + nu GammaZ)(phi) * R^2
};

struct GoodCutoffOptions {
  double gamma0 = 1.5;     // support factor of the coarse profile
  double gamma_cap = 2.1;  // outer band checked at this inflation
  int max_halvings = 4;
};

/// Heat-regularized cut-off: evolve the coarse profile to t_R = C1 R^2 with
/// C1 = min{1/(8 kappa), 1/(64 C0 d)}, then compose with a C^2 ramp that maps
/// [3/4,1] -> 1 and [0,1/4] -> 0. If the discrete evolution leaves the bands,
/// C1 is halved and the evolution retried.
CutoffFunction good_cutoff(const LeftInvariantFrame& fr, const GridSpec& spec,
                           double R, const CdParams& cd,
                           const GoodCutoffOptions& opt = {});

/// Grid sized for a good cut-off at radius R: horizontal extent
/// pad * gamma_cap * R at spacing h, vertical extents graded as the square
/// with spacing scaled by R^2 (vertical features of the cut-off live on that
/// scale).
GridSpec make_cutoff_grid(const StratifiedAlgebra& a, double R, double h,
                          double htau_factor = 1.0 / 12.0,
                          double gamma_cap = 2.1, double pad = 1.15);

struct GradientBoundReport {
  double margin = 0.0;  // min over interior of RHS - LHS (>= 0 continuum)
  double t = 0.0, nu = 0.0, A = 0.0, h = 0.0;
  double lhs_max = 0.0;  // scale reference for the margin
};

/// Pointwise check of the semigroup gradient bound:
///   Gamma(P_t f) + nu GammaZ(P_t f) + (e^{-2At}-1)/(-Ad) (L P_t f)^2
///     <= P_t(Gamma(f) + nu GammaZ(f)) e^{-2At},  A = -kappa/nu
/// ((e^{-2At}-1)/(-Ad) = 2t/d when A = 0). Returns the worst signed margin
/// over the stencil-valid interior outside the sponge.
GradientBoundReport verify_semigroup_gradient_bound(const LeftInvariantFrame& fr,
                                                    const GridField& f, double t,
                                                    double nu,
                                                    const CdParams& cd);

}  // namespace carnot
