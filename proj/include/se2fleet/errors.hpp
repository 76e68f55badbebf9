#pragma once

#include <stdexcept>
#include <string>

namespace se2fleet {

/// Thrown when an input file cannot be read or decoded (malformed JSON/CSV,
/// missing columns, wrong types). CLI maps this to exit code 5.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when well-formed input violates a documented invariant
/// (disconnected graph, asymmetric couplings, infeasible start, bad options).
/// CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a state sits at (or within the numerical guard of) a potential
/// pole, where the barrier and its gradient blow up. Carries the agents
/// involved when known (agent_j == -1 for the obstacle / extended potential).
/// CLI maps this to exit code 3.
class SingularityError : public std::runtime_error {
public:
  explicit SingularityError(const std::string& what, int agent_i = -1, int agent_j = -1)
      : std::runtime_error(what), agent_i(agent_i), agent_j(agent_j) {}
  int agent_i;
  int agent_j;
};

/// Thrown when the shooting solver exhausts its iteration budget without
/// meeting the residual tolerance. CLI maps this to exit code 4.
class NonConvergenceError : public std::runtime_error {
public:
  NonConvergenceError(const std::string& what, double residual_norm, int iterations)
      : std::runtime_error(what), residual_norm(residual_norm), iterations(iterations) {}
  double residual_norm;
  int iterations;
};

}  // namespace se2fleet
