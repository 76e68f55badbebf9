#pragma once

#include <Eigen/Dense>

// SE(2) kernel: group operations, exponential/logarithm, (co)adjoint maps and
// the trace pairing between the algebra and its dual.
//
// Conventions
// -----------
// A group element g = (theta, x, y) acts as the homogeneous matrix
//   [ cos -sin  x ]
//   [ sin  cos  y ]
//   [  0    0   1 ].
// The algebra basis is
//   e1 = [[0,-1,0],[1,0,0],[0,0,0]]   (rotation)
//   e2 = [[0,0,1],[0,0,0],[0,0,0]]    (body x translation)
//   e3 = [[0,0,0],[0,0,1],[0,0,0]]    (body y translation)
// with brackets [e1,e2] = e3, [e2,e3] = 0, [e3,e1] = e2. A twist
// xi = a*e1 + v1*e2 + v2*e3 is stored by coordinates (a, v1, v2).
// The dual basis (under the trace pairing <alpha, xi> = tr(alpha xi)) is
//   e^1 = [[0,1/2,0],[-1/2,0,0],[0,0,0]],  e^2 = [[0,0,0],[0,0,0],[1,0,0]],
//   e^3 = [[0,0,0],[0,0,0],[0,1,0]],
// so a momentum mu = m1*e^1 + m2*e^2 + m3*e^3 pairs with xi as
//   <mu, xi> = m1*a + m2*v1 + m3*v2.
// The algebra inner product is <xi, eta> = tr(xi^T eta) = 2 a b + v.w, hence
// |e1|^2 = 2 and |e2|^2 = |e3|^2 = 1.

namespace se2fleet {

inline constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

/// Algebra element xi = (a, v1, v2) in the e1, e2, e3 basis.
struct Twist {
  double a = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
};

/// Dual element mu = (m1, m2, m3) in the e^1, e^2, e^3 basis.
struct Momentum {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
};

/// Group element (theta, x, y); theta is kept wrapped in (-pi, pi] by every
/// constructor and operation.
struct Pose2 {
  double theta = 0.0;
  double x = 0.0;
  double y = 0.0;

  Pose2() = default;
  Pose2(double theta_, double x_, double y_) : theta(wrap_angle(theta_)), x(x_), y(y_) {}
  static Pose2 identity() { return {}; }
};

Twist operator+(const Twist& a, const Twist& b);
Twist operator-(const Twist& a, const Twist& b);
Twist operator-(const Twist& a);
Twist operator*(double c, const Twist& xi);
Momentum operator+(const Momentum& a, const Momentum& b);
Momentum operator-(const Momentum& a, const Momentum& b);
Momentum operator-(const Momentum& a);
Momentum operator*(double c, const Momentum& mu);

/// Group product g * h.
Pose2 compose(const Pose2& g, const Pose2& h);

/// Group inverse g^{-1}.
Pose2 inverse(const Pose2& g);

/// Exponential map exp: se(2) -> SE(2), closed form with the second-order
/// small-angle branch below |a| < 1e-8.
Pose2 exp(const Twist& xi);

/// Logarithm log: SE(2) -> se(2); inverse of exp on (-pi, pi], defined for
/// every pose including theta = pi.
Twist log(const Pose2& g);

/// Lie bracket [xi, eta] = xi*eta - eta*xi (matrix commutator).
Twist bracket(const Twist& a, const Twist& b);

/// Duality pairing <mu, xi> = tr(mu_matrix * xi_matrix) = m1 a + m2 v1 + m3 v2.
double pairing(const Momentum& mu, const Twist& xi);

/// Inner product tr(xi^T eta) = 2 a b + v1 w1 + v2 w2.
double inner(const Twist& a, const Twist& b);

/// Squared algebra norm inner(xi, xi).
double norm_sq(const Twist& xi);

/// Adjoint action Ad_g(xi) = g xi g^{-1}; in coordinates
/// (a, R(theta) v + a (y, -x)).
Twist adjoint(const Pose2& g, const Twist& xi);

/// Infinitesimal coadjoint action ad*_xi(mu), defined by
/// <ad*_xi mu, eta> = <mu, [xi, eta]> for all eta; in coordinates
/// (v2 m2 - v1 m3, a m3, -a m2).
Momentum coadjoint_star(const Twist& xi, const Momentum& mu);

/// Pulls a world-frame position gradient (du/dx, du/dy) back to the dual of
/// the body frame:  (0, R(theta)^T grad). The e^1 slot vanishes because the
/// potential does not depend on heading.
Momentum cotangent_lift_position_gradient(const Pose2& g, double du_dx, double du_dy);

/// Homogeneous 3x3 matrix of a pose.
Eigen::Matrix3d to_matrix(const Pose2& g);

/// Pose from a homogeneous 3x3 matrix (assumed to lie in SE(2)).
Pose2 pose_from_matrix(const Eigen::Matrix3d& m);

/// 3x3 matrix of a twist in the basis above.
Eigen::Matrix3d to_matrix(const Twist& xi);

/// Twist from its 3x3 matrix.
Twist twist_from_matrix(const Eigen::Matrix3d& m);

/// 3x3 matrix of a momentum in the dual basis above.
Eigen::Matrix3d to_matrix(const Momentum& mu);

}  // namespace se2fleet
