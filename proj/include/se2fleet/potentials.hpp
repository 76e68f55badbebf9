#pragma once

#include <span>
#include <utility>

#include "se2fleet/errors.hpp"
#include "se2fleet/se2.hpp"

// Barrier potentials for collision and obstacle avoidance, and their
// body-frame gradients (elements of se(2)*).
//
// All barriers have the shape sigma / (2 D) with D > 0 away from contact:
//   pair:     D = |p_i - p_j|^2 - 4 rbar^2      (two discs of radius rbar)
//   obstacle: D = x^2 + y^2 - (rbar + 1)^2      (unit disc at the origin)
//   extended: D = |alpha|^2 - 6                 (advected-parameter form)
// A coupling sigma == 0 disables the corresponding term entirely: value and
// gradient are exactly zero for every pose and no pole can be hit.
// Otherwise, evaluating with D < kSingularGuard throws SingularityError.

namespace se2fleet {

inline constexpr double kSingularGuard = 1e-9;

/// Which body-frame pair gradient to use. `rotated` is the cotangent lift of
/// the world-frame gradient (the variant that conserves the reduced
/// Hamiltonian); `printed` skips the rotation into the body frame and matches
/// the rotated variant only at theta_i = 0.
enum class GradVariant { rotated, printed };

/// Running cost of a control twist: C(u) = (u^1)^2 + 1/2 (u^2)^2 + 1/2 (u^3)^2
/// = 1/2 |u|^2 in the algebra inner product.
double cost(const Twist& u);

/// Pair collision barrier sigma / (2 (|p_i - p_j|^2 - 4 rbar^2)).
double u_pair(const Pose2& gi, const Pose2& gj, double sigma, double rbar);

/// Obstacle barrier sigma / (2 (x^2 + y^2 - (rbar + 1)^2)) for the unit disc
/// at the origin.
double u_obs(const Pose2& g, double sigma, double rbar);

/// Extended barrier sigma / (2 (|alpha|^2 - 6)) on the advected parameter.
/// For rbar = 1 and alpha = Ad_{g^{-1}} e1 it coincides with u_obs(g).
double u_ext(const Twist& alpha, double sigma);

/// Body-frame gradient of u_pair with respect to agent i's pose, as a
/// momentum. With x_ij = x_i - x_j, y_ij = y_i - y_j, D the pair denominator
/// and world gradient w = -sigma/D^2 (x_ij, y_ij):
///   rotated:  (0, R(theta_i)^T w)
///   printed:  (0, w)
Momentum grad_pair_body(const Pose2& gi, const Pose2& gj, double sigma, double rbar,
                        GradVariant variant = GradVariant::rotated);

/// Gradient of u_ext on the coadjoint orbit: ad*_alpha(beta) with
/// beta = du_ext/dalpha, giving (0, -sigma a1 a3 / D^2, sigma a1 a2 / D^2).
Momentum grad_obs_ext(const Twist& alpha, double sigma);

/// Combined obstacle + pair barrier with per-neighbor desired offsets:
/// u(g_i) = sigma_tilde / (2 (x_i^2 + y_i^2 - (rbar+1)^2)
///                          * prod_j (|p_i - p_j|^2 - d_des_j^2)).
/// d_des.size() must equal neighbors.size(); d_des_j >= 2 rbar is the
/// caller's responsibility (contact still inside the barrier).
double u_combined(const Pose2& gi, std::span<const Pose2> neighbors,
                  double sigma_tilde, double rbar, std::span<const double> d_des);

/// Central-difference body-frame gradient of u_combined, differentiating
/// t -> u(g_i exp(t e_k)) at t = 0 for k = 1, 2, 3.
Momentum grad_combined_fd(const Pose2& gi, std::span<const Pose2> neighbors,
                          double sigma_tilde, double rbar, std::span<const double> d_des,
                          double step = 1e-5);

/// Central-difference body-frame gradient of an arbitrary scalar f(g).
template <class F>
Momentum body_gradient_fd(const Pose2& g, F&& f, double step) {
  auto diff = [&](const Twist& dir) {
    const Pose2 plus = compose(g, exp(step * dir));
    const Pose2 minus = compose(g, exp(-step * dir));
    return (f(plus) - f(minus)) / (2.0 * step);
  };
  return {diff({1, 0, 0}), diff({0, 1, 0}), diff({0, 0, 1})};
}

}  // namespace se2fleet
