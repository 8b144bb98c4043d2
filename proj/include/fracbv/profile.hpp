#pragma once

#include <memory>
#include <vector>

#include "fracbv/psi.hpp"

namespace fracbv {

/// One interval of an exact time-t solution.
/// constant: u = value.  fan: u = Psi(x - center, t) * scale, scale = e^{B(t)}.
struct Region {
  enum class Kind { constant, fan };
  double left;
  double right;
  Kind kind;
  double value = 0.0;
  double center = 0.0;
};

/// Exact entropy solution at a fixed time, as ordered contiguous regions.
/// Outside [regions.front().left, regions.back().right] the solution is zero.
/// Each interior boundary is flagged as a shock or as a continuous seam.
class PiecewiseProfile {
 public:
  PiecewiseProfile(std::shared_ptr<const PsiContext> ctx, double time);

  /// Appends a region to the right of the previous one; a gap is filled with zero.
  /// `shock_at_left` flags the boundary with the previous region.
  void append_constant(double left, double right, double value, bool shock_at_left = false);
  void append_fan(double left, double right, double center, bool shock_at_left = false);

  double time() const { return time_; }
  double scale() const { return scale_; }
  const PsiContext& context() const { return *ctx_; }
  const std::vector<Region>& regions() const { return regions_; }
  /// shock flag for the boundary at regions()[k].left, k >= 1
  bool shock_at(std::size_t k) const { return shock_[k]; }
  double lo() const;
  double hi() const;

  /// Value on the region [left, right) containing x; zero outside.
  double operator()(double x) const;
  double left_limit(double x) const;
  double right_limit(double x) const;
  /// Value of region k evaluated at x (no containment check).
  double region_value(std::size_t k, double x) const;

  /// Exact integral over [a, b], using fan primitives.
  double integral(double a, double b) const;

  struct Check {
    double max_seam_defect = 0.0;   ///< largest jump at an interior non-shock boundary
    double max_edge_value = 0.0;    ///< largest |u| at lo() or hi(), i.e. the jump to the zero exterior
    double min_shock_drop = 0.0;    ///< smallest left - right over shock boundaries (inf if none)
    bool contiguous = true;
  };
  Check check() const;

 private:
  void push(Region r, bool shock_at_left);
  std::size_t locate(double x) const;
  double fan_primitive(const Region& r, double x) const;

  std::shared_ptr<const PsiContext> ctx_;
  double time_;
  double scale_;
  std::vector<Region> regions_;
  std::vector<bool> shock_;
  bool pending_shock_ = false;
};

}  // namespace fracbv
