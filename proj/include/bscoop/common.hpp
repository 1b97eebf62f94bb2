#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace bscoop {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Degree of base-station cooperation.
///   kScbf: each BS beamforms from its own users' channels only.
///   kCobf: CSI is shared, each BS transmits to its own users.
///   kComp: CSI and data are shared, all BSs jointly serve every user.
enum class Scheme { kScbf, kCobf, kComp };

std::string_view to_string(Scheme s);
/// Accepts "scbf", "cobf", "comp" (case-sensitive).
Scheme parse_scheme(std::string_view name);

/// Bad input: malformed config, violated preconditions.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The target SINRs cannot be met (negative or unbounded power solution,
/// spectral radius at or above one).
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, double spectral_radius = -1.0)
      : std::runtime_error(what), spectral_radius_(spectral_radius) {}
  /// Negative when not computed.
  double spectral_radius() const { return spectral_radius_; }

 private:
  double spectral_radius_;
};

/// An iteration ran out of budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Internal numerical failure (singular factorization, non-finite values).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bscoop
