#include "carnot/stencil.hpp"

#include <cassert>
#include <cmath>
#include <cstring>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace carnot {

namespace {

struct LineWalker {
  const GridSpec* spec;
  int dim;
  int nlast;
  int64_t nlines;

  explicit LineWalker(const GridSpec& s)
      : spec(&s),
        dim(s.dim()),
        nlast(s.nside(s.dim() - 1)),
        nlines(static_cast<int64_t>(s.num_nodes() / s.nside(s.dim() - 1))) {}

  // Decode a line id into fixed-axis indices, the base flat offset and the
  // fixed-axis coordinates (last axis coordinate left at 0). Buffers are
  // caller-owned so the hot loops stay allocation-free.
  void decode(int64_t line, int* idx, double* x, size_t& base) const {
    idx[dim - 1] = 0;
    x[dim - 1] = 0.0;
    int64_t rest = line;
    for (int a = dim - 2; a >= 0; --a) {
      int n = spec->nside(a);
      idx[a] = static_cast<int>(rest % n);
      rest /= n;
      x[a] = spec->coord(a, idx[a]);
    }
    base = 0;
    for (int a = 0; a < dim - 1; ++a)
      base += static_cast<size_t>(idx[a]) * spec->stride(a);
  }

  // Line interior in the fixed axes at the given width?
  bool fixed_interior(const int* idx, int width) const {
    for (int a = 0; a < dim - 1; ++a)
      if (idx[a] < width || idx[a] >= spec->nside(a) - width) return false;
    return true;
  }
};

struct FieldTerms {
  // nonzero coefficient polynomial indices for one vector field
  std::vector<int> axes;
  std::vector<const Poly*> polys;
};

FieldTerms collect_terms(const VectorField& vf) {
  FieldTerms t;
  for (int j = 0; j < static_cast<int>(vf.coeffs.size()); ++j) {
    if (!vf.coeffs[j].is_zero()) {
      t.axes.push_back(j);
      t.polys.push_back(&vf.coeffs[j]);
    }
  }
  if (t.axes.size() > 16)
    throw std::invalid_argument("stencil: more than 16 coefficient terms");
  return t;
}

// Pass 1: g = A_k f on the width-1 interior. Coefficient polynomials never
// involve the last-axis variable (top-layer coordinates bracket to zero), so
// they are constants along each line.
void first_difference(const LeftInvariantFrame& fr, int k, const GridField& f,
                      GridField& g) {
  const GridSpec& spec = f.spec;
  LineWalker lw(spec);
  const FieldTerms terms = collect_terms(fr.field(k));
  std::fill(g.v.begin(), g.v.end(), 0.0);
  const double* fv = f.v.data();
  double* gv = g.v.data();
  const int nt = static_cast<int>(terms.axes.size());

#ifdef _OPENMP
#pragma omp parallel
#endif
  {
    std::vector<int> idx(lw.dim);
    std::vector<double> x(lw.dim);
    double w[16];
    size_t s[16];
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (int64_t line = 0; line < lw.nlines; ++line) {
      size_t base;
      lw.decode(line, idx.data(), x.data(), base);
      if (!lw.fixed_interior(idx.data(), 1)) continue;
      for (int t = 0; t < nt; ++t) {
        int j = terms.axes[t];
        w[t] = terms.polys[t]->eval(x) * 0.5 / spec.spacing[j];
        s[t] = spec.stride(j);
      }
      for (int ii = 1; ii < lw.nlast - 1; ++ii) {
        size_t p = base + static_cast<size_t>(ii);
        double acc = 0.0;
        for (int t = 0; t < nt; ++t) acc += w[t] * (fv[p + s[t]] - fv[p - s[t]]);
        gv[p] = acc;
      }
    }
  }
}

// Pass 2: out += sum_j D_j^0 (c_j g), i.e. out += -A_k^T g, on the width-2
// interior. Needs c_j at the +/- e_j neighbours, still line constants.
void divergence_accumulate(const LeftInvariantFrame& fr, int k,
                           const GridField& g, GridField& out) {
  const GridSpec& spec = g.spec;
  LineWalker lw(spec);
  const FieldTerms terms = collect_terms(fr.field(k));
  const double* gv = g.v.data();
  double* ov = out.v.data();
  const int nt = static_cast<int>(terms.axes.size());

#ifdef _OPENMP
#pragma omp parallel
#endif
  {
    std::vector<int> idx(lw.dim);
    std::vector<double> x(lw.dim), xs(lw.dim);
    double wp[16], wm[16];
    size_t s[16];
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (int64_t line = 0; line < lw.nlines; ++line) {
      size_t base;
      lw.decode(line, idx.data(), x.data(), base);
      if (!lw.fixed_interior(idx.data(), 2)) continue;
      for (int t = 0; t < nt; ++t) {
        int j = terms.axes[t];
        double inv2h = 0.5 / spec.spacing[j];
        xs = x;
        xs[j] = x[j] + spec.spacing[j];
        wp[t] = terms.polys[t]->eval(xs) * inv2h;
        xs[j] = x[j] - spec.spacing[j];
        wm[t] = terms.polys[t]->eval(xs) * inv2h;
        s[t] = spec.stride(j);
      }
      for (int ii = 2; ii < lw.nlast - 2; ++ii) {
        size_t p = base + static_cast<size_t>(ii);
        double acc = 0.0;
        for (int t = 0; t < nt; ++t)
          acc += wp[t] * gv[p + s[t]] - wm[t] * gv[p - s[t]];
        ov[p] += acc;
      }
    }
  }
}

}  // namespace

void apply_field_grid(const LeftInvariantFrame& fr, int k, const GridField& f,
                      GridField& out) {
  if (!(out.spec == f.spec)) out = GridField(f.spec);
  first_difference(fr, k, f, out);
}

void apply_sub_laplacian(const LeftInvariantFrame& fr, const GridField& f,
                         GridField& out, std::vector<GridField>& ws) {
  const int d = fr.horizontal_dim();
  if (ws.size() < 1) ws.resize(1);
  if (!(out.spec == f.spec)) out = GridField(f.spec);
  std::fill(out.v.begin(), out.v.end(), 0.0);
  for (int k = 0; k < d; ++k) {
    if (!(ws[0].spec == f.spec)) ws[0] = GridField(f.spec);
    first_difference(fr, k, f, ws[0]);
    divergence_accumulate(fr, k, ws[0], out);
  }
}

GridField apply_sub_laplacian(const LeftInvariantFrame& fr, const GridField& f) {
  GridField out(f.spec);
  std::vector<GridField> ws;
  apply_sub_laplacian(fr, f, out, ws);
  return out;
}

void apply_sub_laplacian_periodic(const LeftInvariantFrame& fr,
                                  const GridField& f, GridField& out,
                                  std::vector<GridField>& ws) {
  const GridSpec& spec = f.spec;
  const int d = fr.horizontal_dim();
  const int dim = spec.dim();
  if (ws.size() < 1) ws.resize(1);
  if (!(ws[0].spec == spec)) ws[0] = GridField(spec);
  if (!(out.spec == spec)) out = GridField(spec);
  std::fill(out.v.begin(), out.v.end(), 0.0);

  size_t N = spec.num_nodes();
  std::vector<int> idx(dim);
  std::vector<double> x(dim), xs(dim);
  auto wrap_flat = [&](std::vector<int> id, int axis, int delta) {
    int n = spec.nside(axis);
    id[axis] = (id[axis] + delta + n) % n;
    size_t flat = 0;
    for (int a = 0; a < dim; ++a)
      flat += static_cast<size_t>(id[a]) * spec.stride(a);
    return flat;
  };

  for (int k = 0; k < d; ++k) {
    GridField& g = ws[0];
    const FieldTerms terms = collect_terms(fr.field(k));
    for (size_t p = 0; p < N; ++p) {
      spec.unflatten(p, idx);
      spec.coords(p, x);
      double acc = 0.0;
      for (size_t t = 0; t < terms.axes.size(); ++t) {
        int j = terms.axes[t];
        double w = terms.polys[t]->eval(x) * 0.5 / spec.spacing[j];
        acc += w * (f.v[wrap_flat(idx, j, +1)] - f.v[wrap_flat(idx, j, -1)]);
      }
      g.v[p] = acc;
    }
    for (size_t p = 0; p < N; ++p) {
      spec.unflatten(p, idx);
      spec.coords(p, x);
      double acc = 0.0;
      for (size_t t = 0; t < terms.axes.size(); ++t) {
        int j = terms.axes[t];
        double inv2h = 0.5 / spec.spacing[j];
        xs = x;
        xs[j] = spec.coord(j, (idx[j] + 1) % spec.nside(j));
        // periodic wrap of the coefficient coordinate as well, so that the
        // operator stays exactly antisymmetric in the pairing
        double cp = terms.polys[t]->eval(xs);
        xs[j] = spec.coord(j, (idx[j] - 1 + spec.nside(j)) % spec.nside(j));
        double cm = terms.polys[t]->eval(xs);
        acc += inv2h * (cp * g.v[wrap_flat(idx, j, +1)] -
                        cm * g.v[wrap_flat(idx, j, -1)]);
      }
      out.v[p] += acc;
    }
  }
}

GridField gamma_grid(const LeftInvariantFrame& fr, const GridField& f,
                     const GridField& g) {
  GridField out(f.spec), af(f.spec), ag(f.spec);
  const bool same = (&f == &g);
  for (int k = 0; k < fr.horizontal_dim(); ++k) {
    first_difference(fr, k, f, af);
    if (!same) first_difference(fr, k, g, ag);
    const GridField& bg = same ? af : ag;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int64_t i = 0; i < static_cast<int64_t>(out.size()); ++i)
      out.v[i] += af.v[i] * bg.v[i];
  }
  return out;
}

GridField gamma_z_grid(const LeftInvariantFrame& fr, const GridField& f,
                       const GridField& g) {
  if (fr.algebra().step() != 2)
    throw std::invalid_argument("gamma_z_grid: step-2 algebra required");
  GridField out(f.spec), af(f.spec), ag(f.spec);
  const bool same = (&f == &g);
  int d = fr.horizontal_dim();
  for (int m = 0; m < fr.algebra().vertical_dim(); ++m) {
    first_difference(fr, d + m, f, af);
    if (!same) first_difference(fr, d + m, g, ag);
    const GridField& bg = same ? af : ag;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int64_t i = 0; i < static_cast<int64_t>(out.size()); ++i)
      out.v[i] += af.v[i] * bg.v[i];
  }
  return out;
}

double sigma_stencil(const LeftInvariantFrame& fr, const GridSpec& spec) {
  LineWalker lw(spec);
  double sigma = 0.0;
  for (int k = 0; k < fr.horizontal_dim(); ++k) {
    const FieldTerms terms = collect_terms(fr.field(k));
    double mx = 0.0;
#ifdef _OPENMP
#pragma omp parallel for reduction(max : mx) schedule(static)
#endif
    for (int64_t line = 0; line < lw.nlines; ++line) {
      std::vector<int> idx(lw.dim);
      std::vector<double> x(lw.dim);
      size_t base;
      lw.decode(line, idx.data(), x.data(), base);
      double s = 0.0;
      for (size_t t = 0; t < terms.axes.size(); ++t) {
        int j = terms.axes[t];
        // coefficients are extremal at the line's own coordinates; the last
        // axis never appears in them
        s += std::abs(terms.polys[t]->eval(x)) / spec.spacing[j];
      }
      mx = std::max(mx, s);
    }
    sigma += mx * mx;
  }
  return sigma;
}

std::vector<ConvergenceRow> fd_convergence_report(const LeftInvariantFrame& fr,
                                                  const ExpPoly& f,
                                                  const GridSpec& base,
                                                  int levels) {
  std::vector<ConvergenceRow> rows;
  ExpPoly lf = lap_exp_poly(fr, f);
  GridSpec spec = base;
  for (int lev = 0; lev < levels; ++lev) {
    GridField uf = sample_field(spec, [&](std::span<const double> x) {
      return f.eval(x);
    });
    GridField lap = apply_sub_laplacian(fr, uf);
    double err = 0.0;
    std::vector<int> idx(spec.dim());
    std::vector<double> x(spec.dim());
    for (size_t i = 0; i < lap.size(); ++i) {
      spec.unflatten(i, idx);
      if (!spec.is_interior(idx, 2)) continue;
      spec.coords(i, x);
      err = std::max(err, std::abs(lap.v[i] - lf.eval(x)));
    }
    ConvergenceRow row;
    row.h = spec.min_spacing();
    row.sup_err = err;
    row.ratio = rows.empty() ? 0.0 : rows.back().sup_err / err;
    rows.push_back(row);
    for (auto& h : spec.spacing) h *= 0.5;
    for (auto& n : spec.half) n *= 2;
  }
  return rows;
}

}  // namespace carnot
