#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace carnot {

/// Sparse multivariate polynomial with double coefficients.
///
/// Exponent vectors are kept in a std::map, so term iteration order is
/// deterministic. This class backs the cached group-law polynomials and the
/// symbolic oracles; grid hot loops go through compile_along() instead of
/// eval().
class Poly {
 public:
  using Mono = std::vector<uint8_t>;

  Poly() : nvars_(0) {}
  explicit Poly(int nvars) : nvars_(nvars) {}

  static Poly constant(int nvars, double c);
  static Poly var(int nvars, int i);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  size_t num_terms() const { return terms_.size(); }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly scaled(double c) const;

  /// Partial derivative with respect to variable i.
  Poly derivative(int i) const;

  double eval(std::span<const double> x) const;

  /// Multiply each variable i by factor[i] (variable rescaling x_i -> f_i x_i).
  Poly scale_vars(std::span<const double> factors) const;

  /// Substitute 0 for all variables with index >= keep and reinterpret the
  /// result as a polynomial in the first `keep` variables.
  Poly restrict_front(int keep) const;

  /// Reinterpret as a polynomial in `nvars` >= nvars() variables.
  Poly widen(int nvars) const;

  /// Coefficients in variable `axis` after substituting point[] for all other
  /// variables; out[k] multiplies (x_axis)^k. Used to precompile stencil
  /// coefficients per grid row.
  void compile_along(int axis, std::span<const double> point,
                     std::vector<double>& out) const;

  /// Drops terms with |coeff| <= tol (cleans roundoff from cancellations).
  Poly pruned(double tol = 0.0) const;

  std::string to_string() const;

  const std::map<Mono, double>& terms() const { return terms_; }
  void add_term(const Mono& m, double c);

 private:
  int nvars_;
  std::map<Mono, double> terms_;
};

inline double horner(std::span<const double> coeffs, double x) {
  if (coeffs.empty()) return 0.0;
  double v = coeffs.back();
  for (size_t k = coeffs.size() - 1; k-- > 0;) v = v * x + coeffs[k];
  return v;
}

}  // namespace carnot
