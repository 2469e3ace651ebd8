#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace ellipt {

/// Closed obstacle boundary gamma(t), t in [0, 1), traversed counterclockwise.
///
/// Circles are handled in closed form. Other curves are represented by the
/// parametrization plus a fine polygon used for membership, distance and
/// centroid queries.
class Obstacle {
 public:
  using complex_type = std::complex<double>;
  using Curve = std::function<complex_type(double)>;

  static Obstacle circle(double radius, complex_type center = 0.0);

  /// General closed curve; `resolution` polygon vertices back the geometric
  /// queries.
  static Obstacle curve(Curve gamma, int resolution = 4096);

  complex_type point(double t) const;
  complex_type centroid() const { return centroid_; }

  /// Largest distance from the centroid to the boundary. Equals the radius for
  /// circles.
  double max_radius() const { return max_radius_; }

  bool is_circle() const { return is_circle_; }
  double radius() const { return radius_; }

  /// Strict interior test.
  bool contains(complex_type z) const;

  /// Distance from z to the boundary curve.
  double distance(complex_type z) const;

 private:
  Obstacle() = default;

  bool is_circle_ = true;
  double radius_ = 0.0;
  complex_type centroid_ = 0.0;
  double max_radius_ = 0.0;
  std::shared_ptr<const Curve> gamma_;
  std::vector<complex_type> polygon_;
};

}  // namespace ellipt
