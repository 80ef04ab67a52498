#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "carnot/poly.hpp"

namespace carnot {

/// A group element in graded exponential coordinates, flattened across strata.
using GroupPoint = std::vector<double>;

struct CdParams {
  double rho2 = 0.0;   // curvature parameter, Prop 2.3
  double kappa = 0.0;  // vertical coupling parameter
  int d = 0;           // horizontal dimension n_1
  double bigD = 0.0;   // (1 + 3*kappa/(2*rho2)) * d
};

struct BallVolumeEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  uint64_t samples = 0;
  uint64_t hits = 0;
};

/// Stratified (Carnot) Lie algebra given by structure constants on a graded
/// basis, together with the cached polynomial group law.
///
/// Basis vectors are indexed globally 0..n-1, layer by layer. The group law
/// z(x,y) = exp^{-1}(exp(x) exp(y)) is computed once per algebra from the
/// Dynkin form of the Baker-Campbell-Hausdorff series truncated at the step,
/// which is exact for nilpotent algebras.
class StratifiedAlgebra {
 public:
  static StratifiedAlgebra heisenberg(int n);
  static StratifiedAlgebra abelian(int n);
  /// Quadruples are (i, j, m, value) with 1-based global basis indices,
  /// meaning [e_i, e_j] has coefficient `value` on e_m. Either one or both
  /// orientations of a pair may be listed; antisymmetry is completed and
  /// validated.
  static StratifiedAlgebra from_structure(
      int step, std::vector<int> strata_dims,
      const std::vector<std::tuple<int, int, int, double>>& quadruples);
  /// Random antisymmetric step-2 structure with horizontal dim d and vertical
  /// dim h; coefficients uniform in [-1, 1].
  static StratifiedAlgebra random_step2(int d, int h, uint64_t seed);
  /// Parses preset names "heisenberg-<n>" and "abelian-<n>".
  static StratifiedAlgebra preset(const std::string& name);

  int step() const { return step_; }
  const std::vector<int>& strata_dims() const { return strata_dims_; }
  int total_dim() const { return n_; }
  int hom_dim() const { return hom_dim_; }
  int horizontal_dim() const { return strata_dims_[0]; }
  int vertical_dim() const { return step_ >= 2 ? strata_dims_[1] : 0; }
  /// 1-based layer of global basis index i.
  int layer_of(int i) const { return layer_of_[i]; }
  int layer_offset(int layer) const { return layer_offset_[layer - 1]; }

  /// Bracket coefficients: gamma(i,j) lists (m, c) with [e_i,e_j] = sum c e_m.
  const std::vector<std::pair<int, double>>& bracket(int i, int j) const;
  /// Structure map as a flat list of (i, j, m, value), 0-based, all entries.
  std::vector<std::tuple<int, int, int, double>> structure_entries() const;

  /// Lie bracket of polynomial-valued algebra elements.
  std::vector<Poly> bracket_vec(const std::vector<Poly>& u,
                                const std::vector<Poly>& v) const;
  /// Lie bracket of numeric algebra elements.
  std::vector<double> bracket_num(std::span<const double> u,
                                  std::span<const double> v) const;

  /// Cached group-law polynomials; z[j] is a polynomial in 2n variables
  /// (x_0..x_{n-1}, y_0..y_{n-1}).
  const std::vector<Poly>& product_polys() const { return product_; }

  std::string name() const { return name_; }

 private:
  StratifiedAlgebra() = default;
  void finalize();  // validates and caches the BCH product
  void validate() const;
  void build_product();

  int step_ = 1;
  std::vector<int> strata_dims_;
  int n_ = 0;
  int hom_dim_ = 0;
  std::vector<int> layer_of_;
  std::vector<int> layer_offset_;
  std::map<std::pair<int, int>, std::vector<std::pair<int, double>>> gamma_;
  std::vector<Poly> product_;
  std::string name_ = "custom";
};

// Group operations (exponential coordinates).
GroupPoint multiply(const StratifiedAlgebra& a, const GroupPoint& x,
                    const GroupPoint& y);
GroupPoint inverse(const GroupPoint& x);
GroupPoint dilate(const StratifiedAlgebra& a, double lambda,
                  const GroupPoint& x);
double hom_norm(const StratifiedAlgebra& a, const GroupPoint& x);
/// 2r!-th power of the homogeneous norm (a polynomial, smooth everywhere).
double hom_norm_pow(const StratifiedAlgebra& a, const GroupPoint& x);
double distance(const StratifiedAlgebra& a, const GroupPoint& x,
                const GroupPoint& y);

/// Monte Carlo estimate of the Haar volume of {hom_norm < R}. Samples come
/// from the per-layer box |x_j^{(i)}| <= R^i, which contains the ball; blocks
/// get independent substreams and are reduced in index order.
BallVolumeEstimate ball_volume_mc(const StratifiedAlgebra& a, double R,
                                  uint64_t samples, uint64_t seed);

/// Curvature-dimension parameters of a step-2 group per Prop 2.3, via the
/// extreme eigenvalues of the two Gram forms. Throws if step != 2 or if the
/// rho2 form is degenerate (rho2 <= 0).
CdParams cd_parameters(const StratifiedAlgebra& a);

}  // namespace carnot
