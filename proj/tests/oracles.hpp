#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here goes through explicit 3x3 matrices or finite differences,
// never through the code paths under test.

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "se2fleet/se2.hpp"

namespace oracle {

using se2fleet::Momentum;
using se2fleet::Pose2;
using se2fleet::Twist;

inline Eigen::Matrix3d pose_matrix(const Pose2& g) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 0) = std::cos(g.theta);
  m(0, 1) = -std::sin(g.theta);
  m(1, 0) = std::sin(g.theta);
  m(1, 1) = std::cos(g.theta);
  m(0, 2) = g.x;
  m(1, 2) = g.y;
  return m;
}

inline Eigen::Matrix3d twist_matrix(const Twist& xi) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(0, 1) = -xi.a;
  m(1, 0) = xi.a;
  m(0, 2) = xi.v1;
  m(1, 2) = xi.v2;
  return m;
}

// dual-basis matrices: e^1 has the +-1/2 rotation block, e^2/e^3 sit in the
// bottom row so that <alpha, xi> = tr(alpha_matrix * xi_matrix)
inline Eigen::Matrix3d momentum_matrix(const Momentum& mu) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(0, 1) = 0.5 * mu.m1;
  m(1, 0) = -0.5 * mu.m1;
  m(2, 0) = mu.m2;
  m(2, 1) = mu.m3;
  return m;
}

inline Pose2 pose_from_matrix(const Eigen::Matrix3d& m) {
  return Pose2(std::atan2(m(1, 0), m(0, 0)), m(0, 2), m(1, 2));
}

inline Twist twist_from_matrix(const Eigen::Matrix3d& m) {
  return {m(1, 0), m(0, 2), m(1, 2)};
}

inline Pose2 compose(const Pose2& g, const Pose2& h) {
  return pose_from_matrix((pose_matrix(g) * pose_matrix(h)).eval());
}

inline Pose2 inverse(const Pose2& g) {
  return pose_from_matrix(pose_matrix(g).inverse().eval());
}

// truncated matrix exponential, sum_{k=0}^{terms} A^k / k!
inline Eigen::Matrix3d exp_series(const Twist& xi, int terms = 20) {
  const Eigen::Matrix3d A = twist_matrix(xi);
  Eigen::Matrix3d sum = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d power = Eigen::Matrix3d::Identity();
  for (int k = 1; k <= terms; ++k) {
    power = (power * A).eval() / static_cast<double>(k);
    sum += power;
  }
  return sum;
}

inline Twist bracket(const Twist& a, const Twist& b) {
  const Eigen::Matrix3d m =
      twist_matrix(a) * twist_matrix(b) - twist_matrix(b) * twist_matrix(a);
  return twist_from_matrix(m);
}

inline double pairing(const Momentum& mu, const Twist& xi) {
  return (momentum_matrix(mu) * twist_matrix(xi)).trace();
}

inline Twist adjoint(const Pose2& g, const Twist& xi) {
  const Eigen::Matrix3d m =
      pose_matrix(g) * twist_matrix(xi) * pose_matrix(g).inverse();
  return twist_from_matrix(m);
}

// central-difference gradient of f along g exp(t e_k); independent of the
// library's own finite-difference helper
template <class F>
Momentum body_gradient(const Pose2& g, F&& f, double step = 1e-5) {
  Momentum out;
  const Twist basis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  double* slots[3] = {&out.m1, &out.m2, &out.m3};
  for (int k = 0; k < 3; ++k) {
    const Eigen::Matrix3d plus = pose_matrix(g) * exp_series(step * basis[k], 24);
    const Eigen::Matrix3d minus = pose_matrix(g) * exp_series(-1.0 * step * basis[k], 24);
    *slots[k] =
        (f(pose_from_matrix(plus)) - f(pose_from_matrix(minus))) / (2.0 * step);
  }
  return out;
}

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine);
  }
  Pose2 pose(double box = 5.0) {
    return Pose2(uniform(-se2fleet::kPi, se2fleet::kPi), uniform(-box, box),
                 uniform(-box, box));
  }
  Twist twist(double box = 1.0) {
    return {uniform(-box, box), uniform(-box, box), uniform(-box, box)};
  }
  Momentum momentum(double box = 1.0) {
    return {uniform(-box, box), uniform(-box, box), uniform(-box, box)};
  }
};

}  // namespace oracle
