#include "carnot/poly.hpp"

#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace carnot {

Poly Poly::constant(int nvars, double c) {
  Poly p(nvars);
  if (c != 0.0) p.terms_[Mono(nvars, 0)] = c;
  return p;
}

Poly Poly::var(int nvars, int i) {
  assert(i >= 0 && i < nvars);
  Poly p(nvars);
  Mono m(nvars, 0);
  m[i] = 1;
  p.terms_[m] = 1.0;
  return p;
}

int Poly::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) {
    int t = 0;
    for (auto e : m) t += e;
    if (t > d) d = t;
  }
  return d;
}

void Poly::add_term(const Mono& m, double c) {
  assert(static_cast<int>(m.size()) == nvars_);
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    if (c != 0.0) terms_[m] = c;
  } else {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  assert(nvars_ == o.nvars_ || is_zero() || o.is_zero());
  if (nvars_ == 0) nvars_ = o.nvars_;
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  assert(nvars_ == o.nvars_ || is_zero() || o.is_zero());
  if (nvars_ == 0) nvars_ = o.nvars_;
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r += o;
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  r -= o;
  return r;
}

Poly Poly::operator-() const { return scaled(-1.0); }

Poly Poly::scaled(double c) const {
  Poly r(nvars_);
  if (c == 0.0) return r;
  for (const auto& [m, v] : terms_) r.terms_[m] = v * c;
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  assert(nvars_ == o.nvars_);
  Poly r(nvars_);
  Mono m(nvars_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      for (int i = 0; i < nvars_; ++i) m[i] = static_cast<uint8_t>(ma[i] + mb[i]);
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

Poly Poly::derivative(int i) const {
  assert(i >= 0 && i < nvars_);
  Poly r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[i] == 0) continue;
    Mono mm = m;
    mm[i] -= 1;
    r.add_term(mm, c * m[i]);
  }
  return r;
}

double Poly::eval(std::span<const double> x) const {
  assert(static_cast<int>(x.size()) == nvars_);
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (int i = 0; i < nvars_; ++i) {
      for (int k = 0; k < m[i]; ++k) t *= x[i];
    }
    sum += t;
  }
  return sum;
}

Poly Poly::scale_vars(std::span<const double> factors) const {
  assert(static_cast<int>(factors.size()) == nvars_);
  Poly r(nvars_);
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < m[i]; ++k) t *= factors[i];
    r.add_term(m, t);
  }
  return r;
}

Poly Poly::restrict_front(int keep) const {
  assert(keep <= nvars_);
  Poly r(keep);
  for (const auto& [m, c] : terms_) {
    bool tail = false;
    for (int i = keep; i < nvars_; ++i)
      if (m[i] != 0) tail = true;
    if (tail) continue;
    Mono mm(m.begin(), m.begin() + keep);
    r.add_term(mm, c);
  }
  return r;
}

Poly Poly::widen(int nvars) const {
  assert(nvars >= nvars_);
  Poly r(nvars);
  for (const auto& [m, c] : terms_) {
    Mono mm(nvars, 0);
    for (int i = 0; i < nvars_; ++i) mm[i] = m[i];
    r.add_term(mm, c);
  }
  return r;
}

void Poly::compile_along(int axis, std::span<const double> point,
                         std::vector<double>& out) const {
  assert(axis >= 0 && axis < nvars_);
  assert(static_cast<int>(point.size()) == nvars_);
  out.clear();
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (int i = 0; i < nvars_; ++i) {
      if (i == axis) continue;
      for (int k = 0; k < m[i]; ++k) t *= point[i];
    }
    size_t pw = m[axis];
    if (out.size() <= pw) out.resize(pw + 1, 0.0);
    out[pw] += t;
  }
  if (out.empty()) out.push_back(0.0);
}

Poly Poly::pruned(double tol) const {
  Poly r(nvars_);
  for (const auto& [m, c] : terms_)
    if (std::abs(c) > tol) r.terms_[m] = c;
  return r;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (int i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      os << "*x" << i;
      if (m[i] > 1) os << "^" << static_cast<int>(m[i]);
    }
  }
  return os.str();
}

}  // namespace carnot
