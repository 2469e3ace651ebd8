#include "ellipt/obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ellipt/errors.hpp"

namespace ellipt {

Obstacle Obstacle::circle(double radius, complex_type center) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidSpec("circle radius must be positive and finite");
  }
  Obstacle o;
  o.is_circle_ = true;
  o.radius_ = radius;
  o.centroid_ = center;
  o.max_radius_ = radius;
  return o;
}

Obstacle Obstacle::curve(Curve gamma, int resolution) {
  if (!gamma) throw InvalidSpec("obstacle curve is empty");
  if (resolution < 16) throw InvalidSpec("obstacle curve resolution must be >= 16");
  Obstacle o;
  o.is_circle_ = false;
  o.gamma_ = std::make_shared<const Curve>(std::move(gamma));
  o.polygon_.reserve(resolution);
  for (int k = 0; k < resolution; ++k) {
    const complex_type p = (*o.gamma_)(double(k) / resolution);
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
      throw InvalidSpec("obstacle curve produced a non-finite point");
    }
    o.polygon_.push_back(p);
  }

  // Area centroid of the polygon (shoelace).
  double area2 = 0.0;
  complex_type moment = 0.0;
  const auto& poly = o.polygon_;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const complex_type a = poly[k];
    const complex_type b = poly[(k + 1) % poly.size()];
    const double cross = a.real() * b.imag() - b.real() * a.imag();
    area2 += cross;
    moment += cross * (a + b);
  }
  if (!(area2 > 0.0)) {
    throw InvalidSpec("obstacle curve must be a counterclockwise closed curve");
  }
  o.centroid_ = moment / (3.0 * area2);
  o.radius_ = 0.0;
  for (const auto& p : poly) o.max_radius_ = std::max(o.max_radius_, std::abs(p - o.centroid_));
  return o;
}

Obstacle::complex_type Obstacle::point(double t) const {
  if (is_circle_) {
    return centroid_ + std::polar(radius_, 2.0 * std::numbers::pi * t);
  }
  return (*gamma_)(t);
}

bool Obstacle::contains(complex_type z) const {
  if (is_circle_) return std::abs(z - centroid_) < radius_;
  if (std::abs(z - centroid_) > max_radius_) return false;
  // even-odd crossing rule
  bool inside = false;
  const auto& poly = polygon_;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const complex_type a = poly[i];
    const complex_type b = poly[j];
    if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
      const double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) /
                                      (b.imag() - a.imag());
      if (z.real() < x) inside = !inside;
    }
  }
  return inside;
}

double Obstacle::distance(complex_type z) const {
  if (is_circle_) return std::abs(std::abs(z - centroid_) - radius_);
  double best = std::numeric_limits<double>::infinity();
  const auto& poly = polygon_;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const complex_type a = poly[i];
    const complex_type b = poly[(i + 1) % poly.size()];
    const complex_type ab = b - a;
    const double len2 = std::norm(ab);
    double t = len2 > 0.0 ? ((z - a) * std::conj(ab)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::abs(z - (a + t * ab)));
  }
  return best;
}

}  // namespace ellipt
