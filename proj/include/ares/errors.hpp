#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace ares {

/// Caller passed arguments that violate an operation's precondition.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An internal structure is corrupt (e.g. a cyclic trajectory history).
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Rejection sampling ran out of attempts.
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The objective produced a non-finite value.
class OptimizationError : public std::runtime_error {
 public:
  OptimizationError(const std::string& what, Eigen::VectorXd position)
      : std::runtime_error(what), position_(std::move(position)) {}

  const Eigen::VectorXd& position() const noexcept { return position_; }

 private:
  Eigen::VectorXd position_;
};

}  // namespace ares
