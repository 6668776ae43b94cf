#include "ncsverify/sysmodel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "ncsverify/errors.hpp"

namespace ncsverify {

namespace {

constexpr double kGuard = 1e-12;
constexpr double kSymmetryTol = 1e-12;
constexpr int kFixedPointCap = 1'000'000;
constexpr Eigen::Index kKroneckerMaxDim = 32;

void check_finite(const Eigen::MatrixXd& m, const char* name) {
  if (!m.allFinite()) throw InputError(std::string(name) + " has non-finite entries");
}

void check_spd(const Eigen::MatrixXd& m, const char* name) {
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
    throw InputError(std::string(name) + " must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0)) {
    throw InputError(std::string(name) + " must be positive definite");
  }
}

void require_simple(const PlantModel& plant, const char* op) {
  if (!plant.is_simple()) {
    throw InputError(std::string(op) + " needs a plant with A_closed = 0; use the Kronecker test");
  }
}

void check_rate(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("success rate must lie in [0, 1]");
}

}  // namespace

PlantModel::PlantModel(Eigen::MatrixXd a_open, Eigen::MatrixXd a_closed, Eigen::MatrixXd q_weight,
                       Eigen::MatrixXd w_cov)
    : a_open_(std::move(a_open)),
      a_closed_(std::move(a_closed)),
      q_weight_(std::move(q_weight)),
      w_cov_(std::move(w_cov)) {
  const auto n = a_open_.rows();
  if (n < 1 || a_open_.cols() != n) throw InputError("a_open must be square with n >= 1");
  for (const auto* m : {&a_closed_, &q_weight_, &w_cov_}) {
    if (m->rows() != n || m->cols() != n) throw InputError("plant matrices must share dimension n");
  }
  check_finite(a_open_, "a_open");
  check_finite(a_closed_, "a_closed");
  check_finite(q_weight_, "q_weight");
  check_finite(w_cov_, "w_cov");
  check_spd(q_weight_, "q_weight");
  check_spd(w_cov_, "w_cov");
  simple_ = a_closed_.isZero(0.0);
  open_radius_ = spectral_radius(a_open_);
}

PlantModel PlantModel::simple(Eigen::MatrixXd a_open) {
  const auto n = a_open.rows();
  return PlantModel(std::move(a_open), Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Identity(n, n),
                    Eigen::MatrixXd::Identity(n, n));
}

PlantModel PlantModel::scalar(double a, double q_weight, double w_cov) {
  return PlantModel(Eigen::MatrixXd::Constant(1, 1, a), Eigen::MatrixXd::Zero(1, 1),
                    Eigen::MatrixXd::Constant(1, 1, q_weight), Eigen::MatrixXd::Constant(1, 1, w_cov));
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InputError("spectral radius needs a square matrix");
  check_finite(m, "matrix");
  if (m.rows() == 1) return std::abs(m(0, 0));
  // Hessenberg reduction followed by shifted QR (real Schur form).
  Eigen::EigenSolver<Eigen::MatrixXd> eig(m, /*computeEigenvectors=*/false);
  if (eig.info() != Eigen::Success) throw ConvergenceError("eigenvalue iteration did not converge");
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double stability_threshold(const PlantModel& plant) {
  require_simple(plant, "stability_threshold");
  const double rho = plant.open_radius();
  if (rho == 0.0) return -std::numeric_limits<double>::infinity();
  return 1.0 - 1.0 / (rho * rho);
}

bool kronecker_stable(const PlantModel& plant, double q) {
  check_rate(q);
  if (plant.dim() > kKroneckerMaxDim) {
    throw InputError("Kronecker stability test is limited to n <= 32");
  }
  const Eigen::MatrixXd second_moment =
      q * kron(plant.a_closed(), plant.a_closed()) + (1.0 - q) * kron(plant.a_open(), plant.a_open());
  return spectral_radius(second_moment) < 1.0 - kGuard;
}

double lyapunov_cost_capped(const PlantModel& plant, double q, double ceiling) {
  require_simple(plant, "lyapunov_cost");
  check_rate(q);
  const double drop = 1.0 - q;
  const double rho = plant.open_radius();
  if (drop * rho * rho >= 1.0 - kGuard) return std::numeric_limits<double>::infinity();

  const Eigen::MatrixXd& a = plant.a_open();
  const Eigen::MatrixXd& w = plant.w_cov();
  Eigen::MatrixXd p = plant.q_weight();
  // P_k increases monotonically in the PSD order, so Tr(P_k W) does too.
  for (int it = 0; it < kFixedPointCap; ++it) {
    Eigen::MatrixXd next = plant.q_weight() + drop * a.transpose() * p * a;
    const double step = (next - p).cwiseAbs().rowwise().sum().maxCoeff();
    const double scale = p.cwiseAbs().rowwise().sum().maxCoeff();
    p = std::move(next);
    const double cost = (p * w).trace();
    if (cost > ceiling) return std::numeric_limits<double>::infinity();
    if (step <= kGuard * scale) return cost;
  }
  throw ConvergenceError("Lyapunov fixed point did not converge; plant is near marginal stability");
}

double lyapunov_cost(const PlantModel& plant, double q) {
  return lyapunov_cost_capped(plant, q, std::numeric_limits<double>::infinity());
}

std::optional<double> critical_rate(const PlantModel& plant, double j_req) {
  require_simple(plant, "critical_rate");
  if (!(j_req > 0.0) || !std::isfinite(j_req)) throw InputError("j_req must be positive");
  const auto meets = [&](double q) { return lyapunov_cost_capped(plant, q, j_req) <= j_req; };
  if (!meets(1.0)) return std::nullopt;

  double lo = std::max(stability_threshold(plant) + 1e-9, 0.0);
  if (meets(lo)) return lo;
  double hi = 1.0;
  // J is strictly decreasing on (threshold, 1].
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (meets(mid) ? hi : lo) = mid;
  }
  return hi;
}

Trajectory simulate(const PlantModel& plant, const ChannelTrace& trace, std::uint64_t seed) {
  if (trace.empty()) throw InputError("simulation needs a non-empty trace");
  const auto n = plant.dim();
  Eigen::LLT<Eigen::MatrixXd> chol(plant.w_cov());
  if (chol.info() != Eigen::Success) throw InputError("w_cov Cholesky factorization failed");
  const Eigen::MatrixXd noise_factor = chol.matrixL();

  const CounterStream stream(seed);
  std::uint64_t draw = 0;
  const auto gaussian_pair = [&](double& z0, double& z1) {
    // Box-Muller on (0, 1] x [0, 1).
    const double u1 = 1.0 - stream.uniform(draw++);
    const double u2 = stream.uniform(draw++);
    const double r = std::sqrt(-2.0 * std::log(u1));
    z0 = r * std::cos(2.0 * std::numbers::pi * u2);
    z1 = r * std::sin(2.0 * std::numbers::pi * u2);
  };

  Trajectory traj;
  traj.horizon = trace.size();
  traj.states.reserve(traj.horizon);
  traj.step_costs.reserve(traj.horizon);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z(n);
  double total = 0.0;
  const auto& outcomes = trace.outcomes();
  for (std::size_t k = 0; k < traj.horizon; ++k) {
    const double cost = x.dot(plant.q_weight() * x);
    traj.states.push_back(x);
    traj.step_costs.push_back(cost);
    total += cost;
    for (Eigen::Index i = 0; i < n; i += 2) {
      double z0 = 0, z1 = 0;
      gaussian_pair(z0, z1);
      z(i) = z0;
      if (i + 1 < n) z(i + 1) = z1;
    }
    const Eigen::MatrixXd& dyn = outcomes[k] ? plant.a_closed() : plant.a_open();
    x = dyn * x + noise_factor * z;
  }
  traj.running_cost = total / static_cast<double>(traj.horizon);
  return traj;
}

}  // namespace ncsverify
