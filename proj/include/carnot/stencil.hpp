#pragma once

#include <vector>

#include "carnot/fields.hpp"
#include "carnot/grid.hpp"

namespace carnot {

/// Discrete left-invariant derivative A_k f = sum_j c^k_j(x) D^0_j f with
/// centered differences. Valid on the width-1 interior; boundary output is 0.
void apply_field_grid(const LeftInvariantFrame& fr, int k, const GridField& f,
                      GridField& out);

/// Discrete sub-Laplacian L = -sum_{k<=d} A_k^T A_k. The transpose pairing
/// makes the matrix exactly symmetric and mass-conserving (row and column
/// sums vanish); left-invariant fields are divergence-free for Haar measure,
/// so A_k^T is consistent with -X_k and L is second-order accurate. Valid on
/// the width-2 interior.
void apply_sub_laplacian(const LeftInvariantFrame& fr, const GridField& f,
                         GridField& out, std::vector<GridField>& workspace);
GridField apply_sub_laplacian(const LeftInvariantFrame& fr, const GridField& f);

/// Periodic variants (index-wrapped); intended for small oracle grids.
void apply_sub_laplacian_periodic(const LeftInvariantFrame& fr,
                                  const GridField& f, GridField& out,
                                  std::vector<GridField>& workspace);

/// Gamma(f,g) = sum_{k<=d} (A_k f)(A_k g), nonnegative for f == g.
GridField gamma_grid(const LeftInvariantFrame& fr, const GridField& f,
                     const GridField& g);
/// Vertical form over the layer-2 frame; step-2 algebras only.
GridField gamma_z_grid(const LeftInvariantFrame& fr, const GridField& f,
                       const GridField& g);

/// Upper bound on the max absolute row sum of -L over all grid nodes
/// (sum_k (max_x sum_j |c^k_j(x)|/h_j)^2). Drives the stability limits:
/// explicit Euler dt = safety / sigma, leapfrog dt = safety / sqrt(sigma).
double sigma_stencil(const LeftInvariantFrame& fr, const GridSpec& spec);

struct ConvergenceRow {
  double h = 0;
  double sup_err = 0;
  double ratio = 0;  // previous sup_err / this sup_err (0 on the first row)
};

/// Discrete sub-Laplacian error against the exact L(P e^S) oracle on a
/// sequence of halved grids; second-order stencils give ratio ~ 4.
std::vector<ConvergenceRow> fd_convergence_report(const LeftInvariantFrame& fr,
                                                  const ExpPoly& f,
                                                  const GridSpec& base,
                                                  int levels);

}  // namespace carnot
