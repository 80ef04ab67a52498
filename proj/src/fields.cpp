#include "carnot/fields.hpp"

#include <stdexcept>

namespace carnot {

std::vector<VectorField> left_invariant_basis(const StratifiedAlgebra& a) {
  int n = a.total_dim();
  const auto& prod = a.product_polys();
  std::vector<VectorField> out(n);
  for (int k = 0; k < n; ++k) {
    VectorField vf;
    vf.index = k;
    vf.layer = a.layer_of(k);
    vf.coeffs.resize(n);
    for (int j = 0; j < n; ++j)
      vf.coeffs[j] = prod[j].derivative(n + k).restrict_front(n);
    out[k] = std::move(vf);
  }
  return out;
}

LeftInvariantFrame::LeftInvariantFrame(const StratifiedAlgebra& a)
    : alg_(&a), fields_(left_invariant_basis(a)) {}

Poly LeftInvariantFrame::apply_poly(int k, const Poly& f) const {
  const auto& vf = fields_[k];
  Poly out(f.nvars());
  for (int j = 0; j < static_cast<int>(vf.coeffs.size()); ++j) {
    if (vf.coeffs[j].is_zero()) continue;
    Poly df = f.derivative(j);
    if (df.is_zero()) continue;
    out += vf.coeffs[j] * df;
  }
  return out;
}

Poly LeftInvariantFrame::lap_poly(const Poly& f) const {
  Poly out(f.nvars());
  for (int k = 0; k < horizontal_dim(); ++k)
    out += apply_poly(k, apply_poly(k, f));
  return out;
}

Poly LeftInvariantFrame::gamma_poly(const Poly& f, const Poly& g) const {
  Poly out(f.nvars());
  for (int k = 0; k < horizontal_dim(); ++k)
    out += apply_poly(k, f) * apply_poly(k, g);
  return out;
}

Poly LeftInvariantFrame::gamma_z_poly(const Poly& f, const Poly& g) const {
  if (alg_->step() != 2)
    throw std::invalid_argument("gamma_z: step-2 algebra required");
  Poly out(f.nvars());
  int d = horizontal_dim();
  for (int m = 0; m < alg_->vertical_dim(); ++m)
    out += apply_poly(d + m, f) * apply_poly(d + m, g);
  return out;
}

ExpPoly lap_exp_poly(const LeftInvariantFrame& fr, const ExpPoly& f) {
  ExpPoly out;
  out.expo = f.expo;
  out.pre = fr.lap_poly(f.pre) + fr.gamma_poly(f.pre, f.expo).scaled(2.0) +
            f.pre * (fr.lap_poly(f.expo) + fr.gamma_poly(f.expo, f.expo));
  return out;
}

}  // namespace carnot
