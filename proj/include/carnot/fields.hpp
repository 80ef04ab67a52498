#pragma once

#include <cmath>
#include <vector>

#include "carnot/algebra.hpp"
#include "carnot/poly.hpp"

namespace carnot {

/// Left-invariant vector field X_k = sum_j c_j(x) d/dx_j with polynomial
/// coefficients, derived from the group law: c_j(x) = d z_j(x, s e_k)/ds at
/// s = 0.
struct VectorField {
  int index = 0;  // which basis direction
  int layer = 1;
  std::vector<Poly> coeffs;  // n polynomials in n variables
};

std::vector<VectorField> left_invariant_basis(const StratifiedAlgebra& a);

/// The full left-invariant frame plus the symbolic calculus used by oracles
/// and audits. Grid discretizations live in stencil.hpp.
class LeftInvariantFrame {
 public:
  explicit LeftInvariantFrame(const StratifiedAlgebra& a);

  const StratifiedAlgebra& algebra() const { return *alg_; }
  int num_fields() const { return static_cast<int>(fields_.size()); }
  int horizontal_dim() const { return alg_->horizontal_dim(); }
  const VectorField& field(int k) const { return fields_[k]; }
  const std::vector<VectorField>& fields() const { return fields_; }

  Poly apply_poly(int k, const Poly& f) const;
  /// Sub-Laplacian sum_{k<=d} X_k^2 f.
  Poly lap_poly(const Poly& f) const;
  /// Carre du champ via the frame: sum_{k<=d} (X_k f)(X_k g).
  Poly gamma_poly(const Poly& f, const Poly& g) const;
  /// Vertical form sum_m (Z_m f)(Z_m g); step-2 algebras only.
  Poly gamma_z_poly(const Poly& f, const Poly& g) const;

 private:
  const StratifiedAlgebra* alg_;
  std::vector<VectorField> fields_;
};

/// P(x) * exp(S(x)) with polynomial P, S: closed under the sub-Laplacian,
/// which makes smooth non-polynomial convergence oracles exact.
struct ExpPoly {
  Poly pre;
  Poly expo;

  double eval(std::span<const double> x) const {
    return pre.eval(x) * std::exp(expo.eval(x));
  }
};

/// L(P e^S) = e^S (LP + 2 Gamma(P,S) + P (LS + Gamma(S))).
ExpPoly lap_exp_poly(const LeftInvariantFrame& fr, const ExpPoly& f);

}  // namespace carnot
