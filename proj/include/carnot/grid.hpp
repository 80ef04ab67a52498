#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace carnot {

/// Uniform origin-centered grid with independent per-axis spacing. Axis order
/// follows the algebra's global basis order, so vertical axes come last and
/// the fastest-varying (last) axis is always a top-layer coordinate.
struct GridSpec {
  std::vector<int> half;        // nodes per axis = 2*half+1
  std::vector<double> spacing;  // h_j > 0

  /// Builds the smallest centered grid covering [-extent_j, extent_j].
  static GridSpec centered(std::span<const double> extents,
                           std::span<const double> spacings);

  int dim() const { return static_cast<int>(half.size()); }
  int nside(int axis) const { return 2 * half[axis] + 1; }
  size_t num_nodes() const;
  double extent(int axis) const { return half[axis] * spacing[axis]; }
  double coord(int axis, int idx) const {
    return (idx - half[axis]) * spacing[axis];
  }
  size_t stride(int axis) const;  // row-major, last axis contiguous
  double cell_volume() const;
  double min_spacing() const;
  bool operator==(const GridSpec& o) const {
    return half == o.half && spacing == o.spacing;
  }

  /// Decodes a flat node index into per-axis indices.
  void unflatten(size_t flat, std::span<int> idx) const;
  /// Node coordinates for a flat index.
  void coords(size_t flat, std::span<double> x) const;
  /// True if the node is at least `width` nodes away from every face.
  bool is_interior(std::span<const int> idx, int width) const;
  /// True if any axis index lies in the outermost `frac` fraction of nodes.
  bool in_sponge(std::span<const int> idx, double frac = 0.1) const;
};

struct GridField {
  GridSpec spec;
  std::vector<double> v;

  GridField() = default;
  explicit GridField(const GridSpec& s) : spec(s), v(s.num_nodes(), 0.0) {}
  double& operator[](size_t i) { return v[i]; }
  double operator[](size_t i) const { return v[i]; }
  size_t size() const { return v.size(); }
};

/// Fills a field by evaluating fn at node coordinates.
template <typename Fn>
GridField sample_field(const GridSpec& spec, Fn&& fn) {
  GridField f(spec);
  int d = spec.dim();
  std::vector<double> x(d);
  for (size_t i = 0; i < f.size(); ++i) {
    spec.coords(i, x);
    f.v[i] = fn(std::span<const double>(x));
  }
  return f;
}

/// Deterministic pairwise summation (independent of thread count).
double pairwise_sum(std::span<const double> v);
double max_abs(std::span<const double> v);
double max_val(std::span<const double> v);
double min_val(std::span<const double> v);

/// Flat binary persistence: magic, endianness tag, dims, spacings, payload.
void save_gridfield(const std::string& path, const GridField& f);
GridField load_gridfield(const std::string& path);

}  // namespace carnot
