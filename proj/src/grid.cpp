#include "carnot/grid.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace carnot {

GridSpec GridSpec::centered(std::span<const double> extents,
                            std::span<const double> spacings) {
  if (extents.size() != spacings.size())
    throw std::invalid_argument("GridSpec: extents/spacings size mismatch");
  GridSpec s;
  for (size_t i = 0; i < extents.size(); ++i) {
    if (!(spacings[i] > 0.0)) throw std::invalid_argument("GridSpec: h > 0");
    int half = static_cast<int>(std::ceil(extents[i] / spacings[i] - 1e-12));
    if (half < 1) half = 1;
    s.half.push_back(half);
    s.spacing.push_back(spacings[i]);
  }
  return s;
}

size_t GridSpec::num_nodes() const {
  size_t n = 1;
  for (int a = 0; a < dim(); ++a) n *= static_cast<size_t>(nside(a));
  return n;
}

size_t GridSpec::stride(int axis) const {
  size_t s = 1;
  for (int a = dim() - 1; a > axis; --a) s *= static_cast<size_t>(nside(a));
  return s;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (double h : spacing) v *= h;
  return v;
}

double GridSpec::min_spacing() const {
  double m = spacing[0];
  for (double h : spacing) m = std::min(m, h);
  return m;
}

void GridSpec::unflatten(size_t flat, std::span<int> idx) const {
  for (int a = dim() - 1; a >= 0; --a) {
    size_t n = static_cast<size_t>(nside(a));
    idx[a] = static_cast<int>(flat % n);
    flat /= n;
  }
}

void GridSpec::coords(size_t flat, std::span<double> x) const {
  for (int a = dim() - 1; a >= 0; --a) {
    size_t n = static_cast<size_t>(nside(a));
    x[a] = coord(a, static_cast<int>(flat % n));
    flat /= n;
  }
}

bool GridSpec::is_interior(std::span<const int> idx, int width) const {
  for (int a = 0; a < dim(); ++a)
    if (idx[a] < width || idx[a] >= nside(a) - width) return false;
  return true;
}

bool GridSpec::in_sponge(std::span<const int> idx, double frac) const {
  for (int a = 0; a < dim(); ++a) {
    int w = static_cast<int>(frac * nside(a));
    if (w < 1) w = 1;
    if (idx[a] < w || idx[a] >= nside(a) - w) return true;
  }
  return false;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 32) {
    double s = 0.0;
    for (double t : v) s += t;
    return s;
  }
  size_t mid = v.size() / 2;
  return pairwise_sum(v.subspan(0, mid)) + pairwise_sum(v.subspan(mid));
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
#ifdef _OPENMP
#pragma omp parallel for reduction(max : m) schedule(static)
#endif
  for (int64_t i = 0; i < static_cast<int64_t>(v.size()); ++i)
    m = std::max(m, std::abs(v[i]));
  return m;
}

double max_val(std::span<const double> v) {
  double m = -1e300;
#ifdef _OPENMP
#pragma omp parallel for reduction(max : m) schedule(static)
#endif
  for (int64_t i = 0; i < static_cast<int64_t>(v.size()); ++i)
    m = std::max(m, v[i]);
  return m;
}

double min_val(std::span<const double> v) {
  double m = 1e300;
#ifdef _OPENMP
#pragma omp parallel for reduction(min : m) schedule(static)
#endif
  for (int64_t i = 0; i < static_cast<int64_t>(v.size()); ++i)
    m = std::min(m, v[i]);
  return m;
}

namespace {
constexpr uint32_t kMagic = 0x43474631;  // "CGF1"
constexpr uint32_t kEndianTag = 0x01020304;
}  // namespace

void save_gridfield(const std::string& path, const GridField& f) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw std::runtime_error("cannot open for write: " + path);
  uint32_t ndim = static_cast<uint32_t>(f.spec.dim());
  std::fwrite(&kMagic, 4, 1, fp);
  std::fwrite(&kEndianTag, 4, 1, fp);
  std::fwrite(&ndim, 4, 1, fp);
  for (int a = 0; a < f.spec.dim(); ++a) {
    uint32_t n = static_cast<uint32_t>(f.spec.nside(a));
    double h = f.spec.spacing[a];
    std::fwrite(&n, 4, 1, fp);
    std::fwrite(&h, 8, 1, fp);
  }
  std::fwrite(f.v.data(), 8, f.v.size(), fp);
  std::fclose(fp);
}

GridField load_gridfield(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw std::runtime_error("cannot open for read: " + path);
  uint32_t magic = 0, endian = 0, ndim = 0;
  if (std::fread(&magic, 4, 1, fp) != 1 || magic != kMagic ||
      std::fread(&endian, 4, 1, fp) != 1 || endian != kEndianTag ||
      std::fread(&ndim, 4, 1, fp) != 1 || ndim == 0 || ndim > 16) {
    std::fclose(fp);
    throw std::runtime_error("bad gridfield header: " + path);
  }
  GridSpec spec;
  for (uint32_t a = 0; a < ndim; ++a) {
    uint32_t n = 0;
    double h = 0;
    if (std::fread(&n, 4, 1, fp) != 1 || std::fread(&h, 8, 1, fp) != 1 ||
        n % 2 == 0) {
      std::fclose(fp);
      throw std::runtime_error("bad gridfield axis header: " + path);
    }
    spec.half.push_back(static_cast<int>(n / 2));
    spec.spacing.push_back(h);
  }
  GridField f(spec);
  size_t got = std::fread(f.v.data(), 8, f.v.size(), fp);
  std::fclose(fp);
  if (got != f.v.size()) throw std::runtime_error("truncated gridfield: " + path);
  return f;
}

}  // namespace carnot
