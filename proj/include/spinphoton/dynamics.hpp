#ifndef SPINPHOTON_DYNAMICS_HPP
#define SPINPHOTON_DYNAMICS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "spinphoton/model.hpp"

namespace spinphoton {

struct DynamicsOptions {
  double t_end = 10.0;
  int n_times = 201;  ///< uniform samples on [0, t_end], both ends included
  double dt_max = 0.05;
  OdeTolerance tol{1e-10, 1e-8};
  /// > 0: the pump params.eps_+- acts as a square pulse on [0, pulse_duration]
  /// instead of being applied beforehand with apply_coherent_kick.
  double pulse_duration = 0.0;

  void validate() const;
};

/// Default square-pulse duration, 0.003 / kappa.
inline constexpr double kDefaultPulseDuration = 0.003;

std::vector<double> uniform_times(double t_end, int n_times);

/// Observable traces. The stderr_* channels are empty for deterministic runs.
/// `concurrence` is NaN where the electron-photon block is empty.
struct TimeSeries {
  std::vector<double> t;
  std::vector<double> n_plus;
  std::vector<double> n_minus;
  std::vector<double> n_tr;
  std::vector<double> concurrence;
  std::vector<double> trace;  ///< Lindblad runs
  std::vector<double> norm;   ///< trajectory runs: squared norm before renormalization
  std::vector<double> stderr_n_plus;
  std::vector<double> stderr_n_minus;
  std::vector<double> stderr_n_tr;
  std::vector<double> stderr_concurrence;

  std::size_t size() const { return t.size(); }
  bool has_errors() const { return !stderr_n_plus.empty(); }
  /// Throws InvalidParams unless t is strictly increasing and every
  /// non-empty channel has the length of t.
  void validate() const;
};

struct LindbladResult {
  TimeSeries series;
  DensityOperator final_state;
  double min_eigenvalue = 0.0;  ///< smallest eigenvalue of rho over all samples
};

/// Integrates d rho/dt = -i(H_nh rho - rho H_nh^dag) + sum C rho C^dag.
/// Throws StiffnessError when the step size underflows.
LindbladResult evolve_lindblad(const DensityOperator& rho0, const SystemParams& params,
                               const DynamicsOptions& options);

/// Electron (x) single-photon block in the basis |up +>, |up ->, |down +>, |down ->,
/// where |+-> is one photon in the sigma+- mode and none in the other.
Eigen::Matrix4cd eph_block(const DensityOperator& rho, const CompositeBasis& basis);

/// Wootters concurrence of the normalized eph_block; nullopt if its trace is below 1e-12.
std::optional<double> eph_concurrence_from_rho(const DensityOperator& rho, const SystemParams& params);

struct JumpEvent {
  double t = 0.0;
  int channel = 0;  ///< 0: sigma+, 1: sigma-
};

/// Observables of the normalized trajectory state at one sample time.
struct Snapshot {
  double n_plus = 0.0;
  double n_minus = 0.0;
  double n_tr = 0.0;
  double norm = 1.0;
  /// Amplitudes on |e_up,1,0>, |e_up,0,1>, |e_down,1,0>, |e_down,0,1>.
  std::array<cplx, 4> eph{};
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::vector<JumpEvent> jumps;
  PureState final_state{CompositeBasis(1), Eigen::VectorXcd()};
  std::vector<double> times;
  std::vector<Snapshot> snapshots;
};

/// One Monte-Carlo wave-function trajectory. Jump times are located by
/// bisection on the squared-norm threshold to 1e-10 relative accuracy.
TrajectoryRecord run_trajectory(const PureState& psi0, const SystemParams& params,
                                const DynamicsOptions& options, std::uint64_t seed);

/// Mean and standard error over n_traj trajectories with seeds
/// derive_seed(seed, i). The concurrence is that of the averaged
/// electron-photon block; its error is the spread over 200 bootstrap
/// resamples of the trajectories, drawn from derive_seed(seed, n_traj). Results do not depend on `workers`.
TimeSeries average_trajectories(const PureState& psi0, const SystemParams& params,
                                const DynamicsOptions& options, int n_traj, std::uint64_t seed,
                                int workers = 1);

/// Time series of a single trajectory (no error bars).
TimeSeries trajectory_series(const TrajectoryRecord& record);

}  // namespace spinphoton

#endif  // SPINPHOTON_DYNAMICS_HPP
