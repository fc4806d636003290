#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dlo {

/// Base class for numerical failures (as opposed to invalid arguments,
/// which are reported with std::invalid_argument / std::domain_error).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The inertia matrix could not be factorized.
class SingularInertia : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The adaptive integrator shrank its step below the floor.
class StepFailure : public NumericalError {
 public:
  StepFailure(const std::string& what, double t) : NumericalError(what), time(t) {}
  double time;
};

/// An iterative solver ran out of iterations; carries its best iterate.
class ConvergenceFailure : public NumericalError {
 public:
  ConvergenceFailure(const std::string& what, Eigen::VectorXd best, double res)
      : NumericalError(what), best_iterate(std::move(best)), residual(res) {}
  Eigen::VectorXd best_iterate;
  double residual;
};

/// A least-squares regressor lacks the column rank needed for a unique fit.
class RankDeficient : public NumericalError {
 public:
  RankDeficient(const std::string& what, int r) : NumericalError(what), rank(r) {}
  int rank;
};

/// Identification produced a physically meaningless value (e.g. k <= 0).
class NonPhysical : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The data carries no excitation for the requested quantity.
class Degenerate : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Continuation lost the equilibrium branch; `last_good_phi` is the last
/// angle at which a stable, connected equilibrium was found.
class BranchLost : public NumericalError {
 public:
  BranchLost(const std::string& what, double last_phi, Eigen::VectorXd last_theta)
      : NumericalError(what), last_good_phi(last_phi), last_good_theta(std::move(last_theta)) {}
  double last_good_phi;
  Eigen::VectorXd last_good_theta;
};

class EmptyFeasibleSet : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnreachablePose : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace dlo
