#include "fracbv/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracbv {

namespace {
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
}

PiecewiseProfile::PiecewiseProfile(std::shared_ptr<const PsiContext> ctx, double time)
    : ctx_(std::move(ctx)), time_(time) {
  if (!ctx_) throw std::invalid_argument("PiecewiseProfile: null context");
  if (!(time_ > 0.0)) throw std::domain_error("PiecewiseProfile: time must be > 0");
  scale_ = std::exp(ctx_->source.beta(time_));
}

void PiecewiseProfile::push(Region r, bool shock_at_left) {
  if (!(r.right > r.left)) {
    pending_shock_ = pending_shock_ || shock_at_left;
    return;
  }
  if (!regions_.empty() && r.left < regions_.back().right)
    throw std::invalid_argument("PiecewiseProfile: regions must be ordered and non-overlapping");
  if (!regions_.empty() && r.left > regions_.back().right) {
    // gap between supports: explicit zero region
    shock_.push_back(pending_shock_);
    pending_shock_ = false;
    regions_.push_back(Region{regions_.back().right, r.left, Region::Kind::constant, 0.0, 0.0});
  }
  shock_.push_back(!regions_.empty() && (shock_at_left || pending_shock_));
  pending_shock_ = false;
  regions_.push_back(r);
}

void PiecewiseProfile::append_constant(double left, double right, double value, bool shock_at_left) {
  push(Region{left, right, Region::Kind::constant, value, 0.0}, shock_at_left);
}

void PiecewiseProfile::append_fan(double left, double right, double center, bool shock_at_left) {
  push(Region{left, right, Region::Kind::fan, 0.0, center}, shock_at_left);
}

double PiecewiseProfile::lo() const { return regions_.empty() ? 0.0 : regions_.front().left; }
double PiecewiseProfile::hi() const { return regions_.empty() ? 0.0 : regions_.back().right; }

std::size_t PiecewiseProfile::locate(double x) const {
  if (regions_.empty() || x < lo() || x >= hi()) return kNone;
  auto it = std::upper_bound(regions_.begin(), regions_.end(), x,
                             [](double v, const Region& r) { return v < r.left; });
  return static_cast<std::size_t>(it - regions_.begin()) - 1;
}

double PiecewiseProfile::region_value(std::size_t k, double x) const {
  const Region& r = regions_[k];
  if (r.kind == Region::Kind::constant) return r.value;
  return psi(*ctx_, x - r.center, time_) * scale_;
}

double PiecewiseProfile::operator()(double x) const {
  const std::size_t k = locate(x);
  return k == kNone ? 0.0 : region_value(k, x);
}

double PiecewiseProfile::right_limit(double x) const { return (*this)(x); }

double PiecewiseProfile::left_limit(double x) const {
  if (regions_.empty() || x <= lo() || x > hi()) return 0.0;
  auto it = std::lower_bound(regions_.begin(), regions_.end(), x,
                             [](const Region& r, double v) { return r.right < v; });
  return region_value(static_cast<std::size_t>(it - regions_.begin()), x);
}

double PiecewiseProfile::fan_primitive(const Region& r, double x) const {
  return psi_primitive(*ctx_, x - r.center, time_) * scale_;
}

double PiecewiseProfile::integral(double a, double b) const {
  if (!(b > a)) return 0.0;
  double sum = 0.0;
  for (const Region& r : regions_) {
    const double x0 = std::max(a, r.left);
    const double x1 = std::min(b, r.right);
    if (!(x1 > x0)) continue;
    if (r.kind == Region::Kind::constant) sum += r.value * (x1 - x0);
    else sum += fan_primitive(r, x1) - fan_primitive(r, x0);
  }
  return sum;
}

PiecewiseProfile::Check PiecewiseProfile::check() const {
  Check c;
  c.min_shock_drop = kInf;
  if (regions_.empty()) return c;
  auto seam = [&](double jump) { c.max_seam_defect = std::max(c.max_seam_defect, std::abs(jump)); };
  c.max_edge_value = std::max(std::abs(region_value(0, regions_.front().left)),
                              std::abs(region_value(regions_.size() - 1, regions_.back().right)));
  for (std::size_t k = 1; k < regions_.size(); ++k) {
    const double x = regions_[k].left;
    if (regions_[k - 1].right != x) c.contiguous = false;
    const double l = region_value(k - 1, x);
    const double r = region_value(k, x);
    if (shock_[k]) c.min_shock_drop = std::min(c.min_shock_drop, l - r);
    else seam(l - r);
  }
  return c;
}

}  // namespace fracbv
