#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ncsverify/channel.hpp"

namespace ncsverify {

/// Switched linear system driven by a packet channel:
///   x_{k+1} = A_closed x_k + w_k  when the packet is delivered,
///   x_{k+1} = A_open   x_k + w_k  when it is dropped,
/// with cost weight Q and noise covariance W. A_closed = 0 is the "simple"
/// model whose stability depends on the channel only through 1 - 1/rho(A)^2.
class PlantModel {
 public:
  /// Throws InputError on mismatched dimensions, non-finite entries, or
  /// Q/W that are not symmetric (to 1e-12) positive definite.
  PlantModel(Eigen::MatrixXd a_open, Eigen::MatrixXd a_closed, Eigen::MatrixXd q_weight,
             Eigen::MatrixXd w_cov);

  /// Simple model with A_closed = 0 and identity Q and W.
  static PlantModel simple(Eigen::MatrixXd a_open);
  /// 1x1 simple model with the given open-loop gain and unit Q, W.
  static PlantModel scalar(double a, double q_weight = 1.0, double w_cov = 1.0);

  Eigen::Index dim() const { return a_open_.rows(); }
  const Eigen::MatrixXd& a_open() const { return a_open_; }
  const Eigen::MatrixXd& a_closed() const { return a_closed_; }
  const Eigen::MatrixXd& q_weight() const { return q_weight_; }
  const Eigen::MatrixXd& w_cov() const { return w_cov_; }
  /// True when A_closed is identically zero.
  bool is_simple() const { return simple_; }
  /// Cached rho(A_open).
  double open_radius() const { return open_radius_; }

 private:
  Eigen::MatrixXd a_open_, a_closed_, q_weight_, w_cov_;
  bool simple_ = true;
  double open_radius_ = 0.0;
};

/// Sampled closed-loop run.
struct Trajectory {
  std::vector<Eigen::VectorXd> states;  // x_0 .. x_{H-1}
  std::vector<double> step_costs;       // x_k' Q x_k
  double running_cost = 0.0;            // mean of step_costs
  std::size_t horizon = 0;
};

/// Largest eigenvalue modulus. Throws InputError for non-square or
/// non-finite input.
double spectral_radius(const Eigen::MatrixXd& m);

/// Kronecker product a (x) b.
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Critical success rate 1 - 1/rho(A)^2 of a simple model; -infinity when
/// rho(A) = 0. A negative value means the plant is stable on any channel.
/// Throws InputError when A_closed is non-zero.
double stability_threshold(const PlantModel& plant);

/// Mean-square stability of the general model:
/// rho(q A_c (x) A_c + (1 - q) A_o (x) A_o) < 1 - 1e-12. Dimension capped at 32.
bool kronecker_stable(const PlantModel& plant, double q);

/// Long-run average cost J(q) = Tr(P W) with P = Q + (1 - q) A' P A.
/// Returns +infinity when (1 - q) rho(A)^2 >= 1 - 1e-12. Throws
/// ConvergenceError if the fixed-point iteration hits its cap.
double lyapunov_cost(const PlantModel& plant, double q);

/// Same iteration as lyapunov_cost but stops as soon as the (monotonically
/// increasing) partial trace exceeds `ceiling`, returning +infinity. Any
/// finite result is the converged cost and is <= ceiling.
double lyapunov_cost_capped(const PlantModel& plant, double q, double ceiling);

/// Smallest q in [0, 1] with J(q) <= j_req, to 1e-9; nullopt if even the
/// perfect channel misses the target (Tr(QW) > j_req).
std::optional<double> critical_rate(const PlantModel& plant, double j_req);

/// Runs the switched system from x_0 = 0 along the trace with Gaussian noise
/// of covariance W drawn from `seed`.
Trajectory simulate(const PlantModel& plant, const ChannelTrace& trace, std::uint64_t seed);

// Plant file (JSON): {"n": 2, "a_open": [row-major], "a_closed": [...],
// "q_weight": [...], "w_cov": [...]}. a_closed defaults to zero, q_weight
// and w_cov to identity. Unknown keys are rejected.
PlantModel parse_plant_json(const std::string& text);
PlantModel load_plant_file(const std::string& path);
std::string plant_to_json(const PlantModel& plant);

}  // namespace ncsverify
