#include "se2fleet/se2.hpp"

#include <cmath>

namespace se2fleet {

double wrap_angle(double theta) {
  double t = std::remainder(theta, 2.0 * kPi);
  if (t <= -kPi) t += 2.0 * kPi;  // remainder lands in [-pi, pi]; map -pi to +pi
  return t;
}

Twist operator+(const Twist& a, const Twist& b) { return {a.a + b.a, a.v1 + b.v1, a.v2 + b.v2}; }
Twist operator-(const Twist& a, const Twist& b) { return {a.a - b.a, a.v1 - b.v1, a.v2 - b.v2}; }
Twist operator-(const Twist& a) { return {-a.a, -a.v1, -a.v2}; }
Twist operator*(double c, const Twist& xi) { return {c * xi.a, c * xi.v1, c * xi.v2}; }
Momentum operator+(const Momentum& a, const Momentum& b) { return {a.m1 + b.m1, a.m2 + b.m2, a.m3 + b.m3}; }
Momentum operator-(const Momentum& a, const Momentum& b) { return {a.m1 - b.m1, a.m2 - b.m2, a.m3 - b.m3}; }
Momentum operator-(const Momentum& a) { return {-a.m1, -a.m2, -a.m3}; }
Momentum operator*(double c, const Momentum& mu) { return {c * mu.m1, c * mu.m2, c * mu.m3}; }

Pose2 compose(const Pose2& g, const Pose2& h) {
  const double c = std::cos(g.theta), s = std::sin(g.theta);
  return {g.theta + h.theta, g.x + c * h.x - s * h.y, g.y + s * h.x + c * h.y};
}

Pose2 inverse(const Pose2& g) {
  const double c = std::cos(g.theta), s = std::sin(g.theta);
  return {-g.theta, -(c * g.x + s * g.y), -(-s * g.x + c * g.y)};
}

Pose2 exp(const Twist& xi) {
  const double a = xi.a;
  if (std::abs(a) < 1e-8) {
    // second-order expansion of V(a); remainder is O(a^2 |v|)
    return {a, xi.v1 - 0.5 * a * xi.v2, xi.v2 + 0.5 * a * xi.v1};
  }
  const double s = std::sin(a);
  const double half_sin = std::sin(0.5 * a);
  // V(a) = [[sin a, cos a - 1], [1 - cos a, sin a]] / a, with
  // 1 - cos a = 2 sin^2(a/2) evaluated in the cancellation-free form
  const double one_minus_c = 2.0 * half_sin * half_sin;
  const double x = (s * xi.v1 - one_minus_c * xi.v2) / a;
  const double y = (one_minus_c * xi.v1 + s * xi.v2) / a;
  return {a, x, y};
}

Twist log(const Pose2& g) {
  const double a = g.theta;
  if (std::abs(a) < 1e-8) {
    return {a, g.x + 0.5 * a * g.y, g.y - 0.5 * a * g.x};
  }
  // V(a)^{-1} = [[A, B], [-B, A]] with A = (a/2) cot(a/2), B = a/2.
  // Well defined on (-pi, pi]: at a = pi, A = 0.
  const double half = 0.5 * a;
  const double A = half * std::cos(half) / std::sin(half);
  const double B = half;
  return {a, A * g.x + B * g.y, -B * g.x + A * g.y};
}

Twist bracket(const Twist& a, const Twist& b) {
  // [e1,e2] = e3, [e2,e3] = 0, [e3,e1] = e2
  return {0.0, a.v2 * b.a - a.a * b.v2, a.a * b.v1 - a.v1 * b.a};
}

double pairing(const Momentum& mu, const Twist& xi) {
  return mu.m1 * xi.a + mu.m2 * xi.v1 + mu.m3 * xi.v2;
}

double inner(const Twist& a, const Twist& b) {
  return 2.0 * a.a * b.a + a.v1 * b.v1 + a.v2 * b.v2;
}

double norm_sq(const Twist& xi) { return inner(xi, xi); }

Twist adjoint(const Pose2& g, const Twist& xi) {
  const double c = std::cos(g.theta), s = std::sin(g.theta);
  return {xi.a,
          c * xi.v1 - s * xi.v2 + xi.a * g.y,
          s * xi.v1 + c * xi.v2 - xi.a * g.x};
}

Momentum coadjoint_star(const Twist& xi, const Momentum& mu) {
  return {xi.v2 * mu.m2 - xi.v1 * mu.m3, xi.a * mu.m3, -xi.a * mu.m2};
}

Momentum cotangent_lift_position_gradient(const Pose2& g, double du_dx, double du_dy) {
  const double c = std::cos(g.theta), s = std::sin(g.theta);
  return {0.0, c * du_dx + s * du_dy, -s * du_dx + c * du_dy};
}

Eigen::Matrix3d to_matrix(const Pose2& g) {
  const double c = std::cos(g.theta), s = std::sin(g.theta);
  Eigen::Matrix3d m;
  m << c, -s, g.x,
       s,  c, g.y,
       0,  0, 1;
  return m;
}

Pose2 pose_from_matrix(const Eigen::Matrix3d& m) {
  return {std::atan2(m(1, 0), m(0, 0)), m(0, 2), m(1, 2)};
}

Eigen::Matrix3d to_matrix(const Twist& xi) {
  Eigen::Matrix3d m;
  m <<     0, -xi.a, xi.v1,
        xi.a,     0, xi.v2,
           0,     0,     0;
  return m;
}

Twist twist_from_matrix(const Eigen::Matrix3d& m) {
  return {m(1, 0), m(0, 2), m(1, 2)};
}

Eigen::Matrix3d to_matrix(const Momentum& mu) {
  Eigen::Matrix3d m;
  m <<            0, 0.5 * mu.m1, 0,
       -0.5 * mu.m1,           0, 0,
              mu.m2,       mu.m3, 0;
  return m;
}

}  // namespace se2fleet
