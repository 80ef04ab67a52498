#include "carnot/algebra.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "carnot/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace carnot {

namespace {

int factorial(int k) {
  int f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

struct BchTerm {
  std::vector<int> word;  // 0 = X, 1 = Y
  double coeff;
};

// Dynkin's form of the BCH series: enumerate block sequences
// ((r_1,s_1),...,(r_k,s_k)), r_i+s_i >= 1, of total weight <= maxw. Each
// sequence contributes the right-nested bracket of the word
// X^{r_1} Y^{s_1} ... X^{r_k} Y^{s_k} with coefficient
// (-1)^{k-1}/k * 1 / (W * prod r_i! s_i!), W the total weight. Words whose
// nested bracket vanishes identically are skipped.
void enumerate_bch(std::vector<BchTerm>& out, std::vector<int>& word,
                   int blocks, int weight, double denom, int maxw) {
  if (weight >= 1) {
    // close the sequence here
    const auto& w = word;
    size_t len = w.size();
    bool trivial = false;
    if (len >= 2) {
      // innermost bracket [w[len-2], w[len-1]] vanishes if letters equal
      if (w[len - 2] == w[len - 1]) trivial = true;
    }
    if (!trivial) {
      double sign = (blocks % 2 == 1) ? 1.0 : -1.0;
      out.push_back({word, sign / blocks / (weight * denom)});
    }
  }
  if (weight >= maxw) return;
  for (int r = 0; r <= maxw - weight; ++r) {
    for (int s = (r == 0 ? 1 : 0); r + s <= maxw - weight; ++s) {
      if (r == 0 && s == 0) continue;
      for (int k = 0; k < r; ++k) word.push_back(0);
      for (int k = 0; k < s; ++k) word.push_back(1);
      enumerate_bch(out, word, blocks + 1, weight + r + s,
                    denom * factorial(r) * factorial(s), maxw);
      word.resize(word.size() - r - s);
    }
  }
}

}  // namespace

StratifiedAlgebra StratifiedAlgebra::heisenberg(int n) {
  if (n < 1) throw std::invalid_argument("heisenberg: n >= 1 required");
  StratifiedAlgebra a;
  a.step_ = 2;
  a.strata_dims_ = {2 * n, 1};
  // [X_i, Y_i] = Z with X_i = e_i, Y_i = e_{n+i}, Z = e_{2n}
  for (int i = 0; i < n; ++i) {
    a.gamma_[{i, n + i}].push_back({2 * n, 1.0});
    a.gamma_[{n + i, i}].push_back({2 * n, -1.0});
  }
  a.name_ = "heisenberg-" + std::to_string(n);
  a.finalize();
  return a;
}

StratifiedAlgebra StratifiedAlgebra::abelian(int n) {
  if (n < 1) throw std::invalid_argument("abelian: n >= 1 required");
  StratifiedAlgebra a;
  a.step_ = 1;
  a.strata_dims_ = {n};
  a.name_ = "abelian-" + std::to_string(n);
  a.finalize();
  return a;
}

StratifiedAlgebra StratifiedAlgebra::from_structure(
    int step, std::vector<int> strata_dims,
    const std::vector<std::tuple<int, int, int, double>>& quadruples) {
  if (step < 1) throw std::invalid_argument("step >= 1 required");
  if (static_cast<int>(strata_dims.size()) != step)
    throw std::invalid_argument("strata_dims must have `step` entries");
  StratifiedAlgebra a;
  a.step_ = step;
  a.strata_dims_ = std::move(strata_dims);
  int n = std::accumulate(a.strata_dims_.begin(), a.strata_dims_.end(), 0);
  std::map<std::tuple<int, int, int>, double> entries;
  for (const auto& [i1, j1, m1, v] : quadruples) {
    int i = i1 - 1, j = j1 - 1, m = m1 - 1;
    if (i < 0 || j < 0 || m < 0 || i >= n || j >= n || m >= n)
      throw std::invalid_argument("structure constant index out of range");
    entries[{i, j, m}] += v;
  }
  // complete antisymmetrically; reject inconsistent double listings
  for (const auto& [key, v] : entries) {
    auto [i, j, m] = key;
    auto flip = entries.find({j, i, m});
    if (flip != entries.end()) {
      if (std::abs(flip->second + v) > 1e-14 * (1.0 + std::abs(v)))
        throw std::invalid_argument("structure constants not antisymmetric");
    }
  }
  std::map<std::tuple<int, int, int>, double> full = entries;
  for (const auto& [key, v] : entries) {
    auto [i, j, m] = key;
    if (!full.count({j, i, m})) full[{j, i, m}] = -v;
  }
  for (const auto& [key, v] : full) {
    auto [i, j, m] = key;
    if (v != 0.0) a.gamma_[{i, j}].push_back({m, v});
  }
  a.finalize();
  return a;
}

StratifiedAlgebra StratifiedAlgebra::random_step2(int d, int h, uint64_t seed) {
  if (d < 2 || h < 1) throw std::invalid_argument("random_step2: d>=2, h>=1");
  StratifiedAlgebra a;
  a.step_ = 2;
  a.strata_dims_ = {d, h};
  Rng rng(seed);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      for (int m = 0; m < h; ++m) {
        double c = rng.uniform(-1.0, 1.0);
        if (std::abs(c) < 0.05) continue;  // keep the map sparse-ish
        a.gamma_[{i, j}].push_back({d + m, c});
        a.gamma_[{j, i}].push_back({d + m, -c});
      }
    }
  }
  a.name_ = "random-step2-" + std::to_string(d) + "-" + std::to_string(h);
  a.finalize();
  return a;
}

StratifiedAlgebra StratifiedAlgebra::preset(const std::string& name) {
  auto dash = name.rfind('-');
  if (dash != std::string::npos) {
    std::string base = name.substr(0, dash);
    int n = 0;
    try {
      n = std::stoi(name.substr(dash + 1));
    } catch (...) {
      n = 0;
    }
    if (n >= 1) {
      if (base == "heisenberg") return heisenberg(n);
      if (base == "abelian") return abelian(n);
    }
  }
  throw std::invalid_argument("unknown preset: " + name);
}

void StratifiedAlgebra::finalize() {
  n_ = std::accumulate(strata_dims_.begin(), strata_dims_.end(), 0);
  hom_dim_ = 0;
  layer_of_.assign(n_, 0);
  layer_offset_.assign(step_, 0);
  int idx = 0;
  for (int l = 0; l < step_; ++l) {
    layer_offset_[l] = idx;
    hom_dim_ += (l + 1) * strata_dims_[l];
    for (int k = 0; k < strata_dims_[l]; ++k) layer_of_[idx++] = l + 1;
  }
  validate();
  build_product();
}

void StratifiedAlgebra::validate() const {
  for (const auto& [key, lst] : gamma_) {
    auto [i, j] = key;
    int target = layer_of_[i] + layer_of_[j];
    for (const auto& [m, c] : lst) {
      if (target > step_)
        throw std::invalid_argument("bracket exceeds the step (grading)");
      if (layer_of_[m] != target)
        throw std::invalid_argument("bracket lands outside V_{a+b} (grading)");
      // antisymmetry
      double flip = 0.0;
      auto it = gamma_.find({j, i});
      if (it != gamma_.end())
        for (const auto& [m2, c2] : it->second)
          if (m2 == m) flip = c2;
      if (std::abs(flip + c) > 1e-14 * (1.0 + std::abs(c)))
        throw std::invalid_argument("structure constants not antisymmetric");
    }
  }
  if (step_ >= 3) {
    // Jacobi identity on basis triples; required for the BCH product to
    // define an associative group law.
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        for (int k = 0; k < n_; ++k) {
          std::vector<double> ei(n_, 0.0), ej(n_, 0.0), ek(n_, 0.0);
          ei[i] = ej[j] = ek[k] = 1.0;
          auto t1 = bracket_num(ei, bracket_num(ej, ek));
          auto t2 = bracket_num(ej, bracket_num(ek, ei));
          auto t3 = bracket_num(ek, bracket_num(ei, ej));
          for (int m = 0; m < n_; ++m)
            if (std::abs(t1[m] + t2[m] + t3[m]) > 1e-12)
              throw std::invalid_argument("Jacobi identity violated");
        }
      }
    }
  }
}

std::vector<Poly> StratifiedAlgebra::bracket_vec(
    const std::vector<Poly>& u, const std::vector<Poly>& v) const {
  std::vector<Poly> w(n_);
  for (const auto& [key, lst] : gamma_) {
    auto [i, j] = key;
    if (u[i].is_zero() || v[j].is_zero()) continue;
    Poly prod = u[i] * v[j];
    for (const auto& [m, c] : lst) w[m] += prod.scaled(c);
  }
  return w;
}

std::vector<double> StratifiedAlgebra::bracket_num(
    std::span<const double> u, std::span<const double> v) const {
  std::vector<double> w(n_, 0.0);
  for (const auto& [key, lst] : gamma_) {
    auto [i, j] = key;
    double prod = u[i] * v[j];
    if (prod == 0.0) continue;
    for (const auto& [m, c] : lst) w[m] += c * prod;
  }
  return w;
}

void StratifiedAlgebra::build_product() {
  // X, Y as polynomial-valued algebra elements in 2n variables
  std::vector<Poly> X(n_), Y(n_);
  for (int i = 0; i < n_; ++i) {
    X[i] = Poly::var(2 * n_, i);
    Y[i] = Poly::var(2 * n_, n_ + i);
  }
  std::vector<Poly> Z(n_);
  for (int i = 0; i < n_; ++i) Z[i] = Poly(2 * n_);

  std::vector<BchTerm> terms;
  std::vector<int> word;
  enumerate_bch(terms, word, 0, 0, 1.0, step_);

  for (const auto& term : terms) {
    // right-nested bracket of the word
    std::vector<Poly> acc = (term.word.back() == 0) ? X : Y;
    for (size_t q = term.word.size() - 1; q-- > 0;) {
      acc = bracket_vec(term.word[q] == 0 ? X : Y, acc);
      bool zero = true;
      for (const auto& p : acc)
        if (!p.is_zero()) zero = false;
      if (zero) break;
    }
    for (int i = 0; i < n_; ++i)
      if (!acc[i].is_zero()) Z[i] += acc[i].scaled(term.coeff);
  }
  product_.resize(n_);
  for (int i = 0; i < n_; ++i) product_[i] = Z[i].pruned(1e-15);
}

const std::vector<std::pair<int, double>>& StratifiedAlgebra::bracket(
    int i, int j) const {
  static const std::vector<std::pair<int, double>> kEmpty;
  auto it = gamma_.find({i, j});
  return it == gamma_.end() ? kEmpty : it->second;
}

std::vector<std::tuple<int, int, int, double>>
StratifiedAlgebra::structure_entries() const {
  std::vector<std::tuple<int, int, int, double>> out;
  for (const auto& [key, lst] : gamma_)
    for (const auto& [m, c] : lst) out.emplace_back(key.first, key.second, m, c);
  return out;
}

GroupPoint multiply(const StratifiedAlgebra& a, const GroupPoint& x,
                    const GroupPoint& y) {
  int n = a.total_dim();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw std::invalid_argument("multiply: dimension mismatch");
  std::vector<double> xy(2 * n);
  std::copy(x.begin(), x.end(), xy.begin());
  std::copy(y.begin(), y.end(), xy.begin() + n);
  GroupPoint z(n);
  const auto& prod = a.product_polys();
  for (int i = 0; i < n; ++i) z[i] = prod[i].eval(xy);
  return z;
}

GroupPoint inverse(const GroupPoint& x) {
  GroupPoint y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = -x[i];
  return y;
}

GroupPoint dilate(const StratifiedAlgebra& a, double lambda,
                  const GroupPoint& x) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilate: lambda > 0");
  int n = a.total_dim();
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("dilate: dimension mismatch");
  GroupPoint y(n);
  for (int i = 0; i < n; ++i)
    y[i] = std::pow(lambda, a.layer_of(i)) * x[i];
  return y;
}

double hom_norm_pow(const StratifiedAlgebra& a, const GroupPoint& x) {
  int r = a.step();
  double sum = 0.0;
  int idx = 0;
  for (int l = 1; l <= r; ++l) {
    double s2 = 0.0;
    for (int k = 0; k < a.strata_dims()[l - 1]; ++k, ++idx)
      s2 += x[idx] * x[idx];
    // |x^{(l)}|^{2r!/l} = (|x^{(l)}|^2)^{r!/l}; r!/l is an integer
    int e = factorial(r) / l;
    double term = 1.0;
    for (int q = 0; q < e; ++q) term *= s2;
    sum += term;
  }
  return sum;
}

double hom_norm(const StratifiedAlgebra& a, const GroupPoint& x) {
  int twoRfact = 2 * factorial(a.step());
  return std::pow(hom_norm_pow(a, x), 1.0 / twoRfact);
}

double distance(const StratifiedAlgebra& a, const GroupPoint& x,
                const GroupPoint& y) {
  return hom_norm(a, multiply(a, inverse(y), x));
}

BallVolumeEstimate ball_volume_mc(const StratifiedAlgebra& a, double R,
                                  uint64_t samples, uint64_t seed) {
  if (!(R > 0.0)) throw std::invalid_argument("ball_volume_mc: R > 0");
  if (samples < 10000)
    throw std::invalid_argument("ball_volume_mc: samples >= 1e4 required");
  int n = a.total_dim();
  std::vector<double> hw(n);  // per-coordinate half-width R^layer
  double box_vol = 1.0;
  for (int i = 0; i < n; ++i) {
    hw[i] = std::pow(R, a.layer_of(i));
    box_vol *= 2.0 * hw[i];
  }
  double Rpow = 1.0;
  for (int q = 0; q < 2 * factorial(a.step()); ++q) Rpow *= R;

  const uint64_t block = 1 << 14;
  const uint64_t nblocks = (samples + block - 1) / block;
  std::vector<uint64_t> hits_per_block(nblocks, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int64_t b = 0; b < static_cast<int64_t>(nblocks); ++b) {
    Rng rng(Rng::mix(seed, static_cast<uint64_t>(b)));
    uint64_t lo = b * block;
    uint64_t hi = std::min<uint64_t>(lo + block, samples);
    uint64_t h = 0;
    GroupPoint x(n);
    for (uint64_t s = lo; s < hi; ++s) {
      for (int i = 0; i < n; ++i) x[i] = rng.uniform(-hw[i], hw[i]);
      if (hom_norm_pow(a, x) < Rpow) ++h;
    }
    hits_per_block[b] = h;
  }
  uint64_t hits = 0;  // index-ordered integer reduction: thread-count invariant
  for (auto h : hits_per_block) hits += h;

  double p = static_cast<double>(hits) / static_cast<double>(samples);
  BallVolumeEstimate est;
  est.samples = samples;
  est.hits = hits;
  est.estimate = box_vol * p;
  est.stderr_ = box_vol * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return est;
}

CdParams cd_parameters(const StratifiedAlgebra& a) {
  if (a.step() != 2)
    throw std::invalid_argument("cd_parameters: step-2 algebra required");
  int d = a.horizontal_dim();
  int h = a.vertical_dim();

  // gamma[i][j][m] with i,j horizontal (0-based), m vertical (0-based)
  auto gam = [&](int i, int j, int m) {
    for (const auto& [mm, c] : a.bracket(i, j))
      if (mm == d + m) return c;
    return 0.0;
  };

  // rho2 form on z in R^h: 1/4 sum_{ij} (sum_m gamma_ij^m z_m)^2
  Eigen::MatrixXd M1 = Eigen::MatrixXd::Zero(h, h);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int m = 0; m < h; ++m)
        for (int m2 = 0; m2 < h; ++m2)
          M1(m, m2) += 0.25 * gam(i, j, m) * gam(i, j, m2);

  // kappa form on x in R^d: sum_j sum_m (sum_i gamma_ij^m x_i)^2.
  // Note: the printed formula indexes the inner variable by m; that is read
  // as x_i (the only reading with matching dimensions).
  Eigen::MatrixXd M2 = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int m = 0; m < h; ++m)
      for (int i = 0; i < d; ++i)
        for (int i2 = 0; i2 < d; ++i2)
          M2(i, i2) += gam(i, j, m) * gam(i2, j, m);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es1(M1), es2(M2);
  CdParams cd;
  cd.rho2 = es1.eigenvalues().minCoeff();
  cd.kappa = es2.eigenvalues().maxCoeff();
  cd.d = d;
  if (!(cd.rho2 > 1e-12))
    throw std::domain_error("cd_parameters: rho2 > 0 violated (degenerate bracket)");
  cd.bigD = (1.0 + 1.5 * cd.kappa / cd.rho2) * d;
  return cd;
}

}  // namespace carnot
