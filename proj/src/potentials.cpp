#include "se2fleet/potentials.hpp"

#include <cmath>
#include <sstream>

namespace se2fleet {

namespace {

// Checks a barrier denominator and throws with context if the state is at or
// inside the pole (D < kSingularGuard).
double checked_denominator(double d, const char* kind) {
  if (!(d >= kSingularGuard)) {
    std::ostringstream os;
    os << kind << " barrier singular: denominator " << d << " < " << kSingularGuard;
    throw SingularityError(os.str());
  }
  return d;
}

}  // namespace

double cost(const Twist& u) { return 0.5 * norm_sq(u); }

double u_pair(const Pose2& gi, const Pose2& gj, double sigma, double rbar) {
  if (sigma == 0.0) return 0.0;
  const double dx = gi.x - gj.x, dy = gi.y - gj.y;
  const double d = checked_denominator(dx * dx + dy * dy - 4.0 * rbar * rbar, "pair");
  return sigma / (2.0 * d);
}

double u_obs(const Pose2& g, double sigma, double rbar) {
  if (sigma == 0.0) return 0.0;
  const double r = rbar + 1.0;
  const double d = checked_denominator(g.x * g.x + g.y * g.y - r * r, "obstacle");
  return sigma / (2.0 * d);
}

double u_ext(const Twist& alpha, double sigma) {
  if (sigma == 0.0) return 0.0;
  const double d = checked_denominator(norm_sq(alpha) - 6.0, "extended");
  return sigma / (2.0 * d);
}

Momentum grad_pair_body(const Pose2& gi, const Pose2& gj, double sigma, double rbar,
                        GradVariant variant) {
  if (sigma == 0.0) return {};
  const double dx = gi.x - gj.x, dy = gi.y - gj.y;
  const double d = checked_denominator(dx * dx + dy * dy - 4.0 * rbar * rbar, "pair");
  const double wx = -sigma * dx / (d * d);
  const double wy = -sigma * dy / (d * d);
  if (variant == GradVariant::printed) return {0.0, wx, wy};
  return cotangent_lift_position_gradient(gi, wx, wy);
}

Momentum grad_obs_ext(const Twist& alpha, double sigma) {
  if (sigma == 0.0) return {};
  const double d = checked_denominator(norm_sq(alpha) - 6.0, "extended");
  const double s = sigma / (d * d);
  return {0.0, -s * alpha.a * alpha.v2, s * alpha.a * alpha.v1};
}

double u_combined(const Pose2& gi, std::span<const Pose2> neighbors,
                  double sigma_tilde, double rbar, std::span<const double> d_des) {
  if (sigma_tilde == 0.0) return 0.0;
  const double r = rbar + 1.0;
  double denom =
      checked_denominator(gi.x * gi.x + gi.y * gi.y - r * r, "combined (obstacle factor)");
  for (std::size_t j = 0; j < neighbors.size(); ++j) {
    const double dx = gi.x - neighbors[j].x, dy = gi.y - neighbors[j].y;
    denom *= checked_denominator(dx * dx + dy * dy - d_des[j] * d_des[j],
                                 "combined (pair factor)");
  }
  return 0.5 * sigma_tilde / denom;
}

Momentum grad_combined_fd(const Pose2& gi, std::span<const Pose2> neighbors,
                          double sigma_tilde, double rbar, std::span<const double> d_des,
                          double step) {
  return body_gradient_fd(
      gi,
      [&](const Pose2& g) { return u_combined(g, neighbors, sigma_tilde, rbar, d_des); },
      step);
}

}  // namespace se2fleet
