#include "sarml/scene.hpp"

#include <algorithm>
#include <cmath>

namespace sarml {

namespace {

double centered(Interval r, int n, int twice_offset) {
  // twice_offset = 2k - n for cell centres (k in [0, n)) and corners use 2k - n too.
  return 0.5 * (r.lo + r.hi) + 0.5 * r.width() * twice_offset / n;
}

}  // namespace

SceneField::SceneField(SurfaceChart chart, Interval u, Interval v, int n_u, int n_v,
                       std::vector<double> values)
    : chart_(std::move(chart)), u_(u), v_(v), n_u_(n_u), n_v_(n_v), values_(std::move(values)) {
  if (n_u < 1 || n_v < 1) throw ConfigError("scene grid must have at least one cell");
  if (!(u.hi > u.lo) || !(v.hi > v.lo) || !std::isfinite(u.width()) || !std::isfinite(v.width()))
    throw ConfigError("scene grid ranges must be finite and non-empty");
  if (values_.size() != static_cast<std::size_t>(n_u) * n_v)
    throw ConfigError("scene sample count does not match grid");
  if (!chart_.in_domain(u.lo, v.lo) || !chart_.in_domain(u.hi, v.hi))
    throw DomainError("scene grid extends outside the chart domain");
  for (double x : values_)
    if (!std::isfinite(x)) throw ConfigError("scene samples must be finite");
}

SceneField SceneField::sample(SurfaceChart chart, Interval u, Interval v, int n_u, int n_v,
                              const std::function<double(double, double)>& fn) {
  SceneField f(std::move(chart), u, v, n_u, n_v,
               std::vector<double>(static_cast<std::size_t>(std::max(n_u, 1)) * std::max(n_v, 1), 0.0));
  for (int j = 0; j < n_v; ++j)
    for (int i = 0; i < n_u; ++i) f.value(i, j) = fn(f.u_center(i), f.v_center(j));
  for (double x : f.values_)
    if (!std::isfinite(x)) throw ConfigError("scene samples must be finite");
  return f;
}

double SceneField::u_center(int i) const { return centered(u_, n_u_, 2 * i + 1 - n_u_); }
double SceneField::v_center(int j) const { return centered(v_, n_v_, 2 * j + 1 - n_v_); }
double SceneField::u_corner(int i) const { return centered(u_, n_u_, 2 * i - n_u_); }
double SceneField::v_corner(int j) const { return centered(v_, n_v_, 2 * j - n_v_); }

double SceneField::at(double u, double v) const {
  if (!u_.contains(u) || !v_.contains(v)) return 0.0;
  const int i = std::clamp(static_cast<int>(std::floor((u - u_.lo) / du())), 0, n_u_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor((v - v_.lo) / dv())), 0, n_v_ - 1);
  return value(i, j);
}

double SceneField::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

SceneField SceneField::operator+(const SceneField& other) const {
  if (other.n_u_ != n_u_ || other.n_v_ != n_v_ || other.u_.lo != u_.lo || other.u_.hi != u_.hi ||
      other.v_.lo != v_.lo || other.v_.hi != v_.hi)
    throw ConfigError("scene fields live on different grids");
  SceneField out = *this;
  for (std::size_t k = 0; k < values_.size(); ++k) out.values_[k] += other.values_[k];
  return out;
}

SceneField SceneField::scaled(double a) const {
  SceneField out = *this;
  for (double& x : out.values_) x *= a;
  return out;
}

Sinogram::Sinogram(const AcquisitionWindow& w, int ns, int nt)
    : window(w), n_s(ns), n_t(nt),
      values(static_cast<std::size_t>(ns) * nt, 0.0),
      mask(static_cast<std::size_t>(ns) * nt, 0) {}

double Sinogram::s_at(int is) const {
  return n_s > 1 ? window.s.lo + window.s.width() * is / (n_s - 1) : 0.5 * (window.s.lo + window.s.hi);
}

double Sinogram::t_at(int it) const {
  return n_t > 1 ? window.t.lo + window.t.width() * it / (n_t - 1) : 0.5 * (window.t.lo + window.t.hi);
}

double Sinogram::max_abs() const {
  double m = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k)
    if (!mask[k]) m = std::max(m, std::abs(values[k]));
  return m;
}

int Sinogram::unmasked_count() const {
  return static_cast<int>(std::count(mask.begin(), mask.end(), 0));
}

}  // namespace sarml
