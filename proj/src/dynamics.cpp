#include "spinphoton/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include "spinphoton/emission.hpp"
#include "spinphoton/errors.hpp"
#include "spinphoton/parallel.hpp"

namespace odeint = boost::numeric::odeint;

namespace spinphoton {

void DynamicsOptions::validate() const {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidParams("t_end must be positive");
  if (n_times < 2) throw InvalidParams("n_times must be >= 2");
  if (!(dt_max > 0.0)) throw InvalidParams("dt_max must be positive");
  if (!(tol.abs > 0.0) || !(tol.rel > 0.0)) throw InvalidParams("ODE tolerances must be positive");
  if (pulse_duration < 0.0 || pulse_duration >= t_end) {
    throw InvalidParams("pulse_duration must lie in [0, t_end)");
  }
}

std::vector<double> uniform_times(double t_end, int n_times) {
  if (n_times < 2) throw InvalidParams("n_times must be >= 2");
  std::vector<double> t(static_cast<std::size_t>(n_times));
  for (int i = 0; i < n_times; ++i) t[static_cast<std::size_t>(i)] = t_end * i / (n_times - 1);
  t.back() = t_end;
  return t;
}

void TimeSeries::validate() const {
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw InvalidParams("time grid must be strictly increasing");
  }
  for (const auto* c : {&n_plus, &n_minus, &n_tr, &concurrence, &trace, &norm, &stderr_n_plus,
                        &stderr_n_minus, &stderr_n_tr, &stderr_concurrence}) {
    if (!c->empty() && c->size() != t.size()) throw InvalidParams("channel length differs from time grid");
  }
}

namespace {

using State = std::vector<cplx>;
using Stepper = odeint::runge_kutta_dopri5<State>;

struct Diagonals {
  Eigen::VectorXd n_plus;
  Eigen::VectorXd n_minus;
  Eigen::VectorXd n_tr;
  std::array<Eigen::Index, 4> eph;
};

Diagonals diagonals(const CompositeBasis& basis) {
  const Eigen::Index d = basis.dimension();
  Diagonals out{Eigen::VectorXd(d), Eigen::VectorXd(d), Eigen::VectorXd(d), {}};
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto l = basis.label(i);
    out.n_plus(i) = l.n_plus;
    out.n_minus(i) = l.n_minus;
    out.n_tr(i) = (l.level == MatterLevel::TrionUp || l.level == MatterLevel::TrionDown) ? 1.0 : 0.0;
  }
  out.eph = {basis.index(MatterLevel::ElectronUp, 1, 0), basis.index(MatterLevel::ElectronUp, 0, 1),
             basis.index(MatterLevel::ElectronDown, 1, 0), basis.index(MatterLevel::ElectronDown, 0, 1)};
  return out;
}

// -(eps c^dag + eps* c) / tau for both circular modes.
SparseMatrixXcd square_pulse(const SystemParams& params, const CompositeBasis& basis, double tau) {
  const SparseMatrixXcd cp = annihilation_plus(basis).matrix;
  const SparseMatrixXcd cm = annihilation_minus(basis).matrix;
  const SparseMatrixXcd cpd = cp.adjoint();
  const SparseMatrixXcd cmd = cm.adjoint();
  SparseMatrixXcd h = params.eps_plus * cpd + std::conj(params.eps_plus) * cp + params.eps_minus * cmd +
                      std::conj(params.eps_minus) * cm;
  return (-1.0 / tau) * h;
}

struct Segment {
  double t0;
  double t1;
  SparseMatrixXcd h;
};

std::vector<Segment> segments(const SystemParams& params, const CompositeBasis& basis,
                              const DynamicsOptions& options) {
  const SparseMatrixXcd h = build_nonhermitian(params).matrix;
  if (options.pulse_duration > 0.0) {
    return {{0.0, options.pulse_duration, h + square_pulse(params, basis, options.pulse_duration)},
            {options.pulse_duration, options.t_end, h}};
  }
  return {{0.0, options.t_end, h}};
}

auto make_stepper(const DynamicsOptions& options) {
  return odeint::make_dense_output(options.tol.abs, options.tol.rel, options.dt_max, Stepper());
}

template <class DenseStepper, class System>
void checked_step(DenseStepper& stepper, System& sys) {
  try {
    stepper.do_step(sys);
  } catch (const odeint::odeint_error& e) {
    throw StiffnessError(std::string("step size control failed at t = ") +
                         std::to_string(stepper.current_time()) + ": " + e.what());
  }
  const double t = stepper.current_time();
  if (!(stepper.current_time_step() > 1e-14 * std::max(1.0, std::abs(t)))) {
    throw StiffnessError("step size underflow at t = " + std::to_string(t) +
                         "; reduce photon_cutoff or pump amplitude, or loosen tolerances");
  }
}

struct LindbladSystem {
  const SparseMatrixXcd* h;
  const std::array<Operator, 2>* jumps;
  Eigen::Index d;

  void operator()(const State& x, State& dxdt, double /*t*/) const {
    dxdt.resize(x.size());
    const Eigen::Map<const Eigen::MatrixXcd> rho(x.data(), d, d);
    Eigen::Map<Eigen::MatrixXcd> out(dxdt.data(), d, d);
    const Eigen::MatrixXcd h_rho = *h * rho;
    const Eigen::MatrixXcd rho_hdag = (*h * rho.adjoint()).adjoint();
    out = -kI * (h_rho - rho_hdag);
    for (const auto& c : *jumps) {
      const Eigen::MatrixXcd c_rho = c.matrix * rho;
      out += (c.matrix * c_rho.adjoint()).adjoint();
    }
  }
};

struct SchrodingerSystem {
  const SparseMatrixXcd* h;

  void operator()(const State& x, State& dxdt, double /*t*/) const {
    dxdt.resize(x.size());
    const Eigen::Map<const Eigen::VectorXcd> psi(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<Eigen::VectorXcd> out(dxdt.data(), static_cast<Eigen::Index>(x.size()));
    out = -kI * (*h * psi);
  }
};

double wootters_or_nan(const Eigen::Matrix4cd& block) {
  const double tr = block.trace().real();
  if (!(tr >= 1e-12)) return std::numeric_limits<double>::quiet_NaN();
  // Integration noise on a nearly empty block can leave tiny negative eigenvalues.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(0.5 * (block + block.adjoint()) / tr);
  const Eigen::Vector4d w = eig.eigenvalues().cwiseMax(0.0);
  return wootters_concurrence(eig.eigenvectors() * w.asDiagonal() * eig.eigenvectors().adjoint());
}

}  // namespace

Eigen::Matrix4cd eph_block(const DensityOperator& rho, const CompositeBasis& basis) {
  if (rho.matrix.rows() != basis.dimension() || rho.matrix.cols() != basis.dimension()) {
    throw InvalidParams("density matrix does not match the composite basis");
  }
  const auto idx = diagonals(basis).eph;
  Eigen::Matrix4cd block;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) block(i, j) = rho.matrix(idx[i], idx[j]);
  return block;
}

std::optional<double> eph_concurrence_from_rho(const DensityOperator& rho, const SystemParams& params) {
  params.validate();
  const double c = wootters_or_nan(eph_block(rho, CompositeBasis(params.photon_cutoff)));
  if (std::isnan(c)) return std::nullopt;
  return c;
}

LindbladResult evolve_lindblad(const DensityOperator& rho0, const SystemParams& params,
                               const DynamicsOptions& options) {
  params.validate();
  options.validate();
  const CompositeBasis basis(params.photon_cutoff);
  const Eigen::Index d = basis.dimension();
  if (rho0.matrix.rows() != d || rho0.matrix.cols() != d) {
    throw InvalidParams("initial density matrix does not match photon_cutoff");
  }
  rho0.validate();
  const auto diag = diagonals(basis);
  const auto jumps = jump_operators(params);
  const auto times = uniform_times(options.t_end, options.n_times);

  LindbladResult result;
  auto& s = result.series;
  s.t = times;
  result.min_eigenvalue = std::numeric_limits<double>::infinity();

  State x(rho0.matrix.data(), rho0.matrix.data() + d * d);
  std::size_t next = 0;
  const auto record = [&](const State& state) {
    const Eigen::Map<const Eigen::MatrixXcd> rho(state.data(), d, d);
    DensityOperator snapshot{0.5 * (rho + rho.adjoint())};
    const Eigen::VectorXd pop = snapshot.matrix.diagonal().real();
    s.n_plus.push_back(pop.dot(diag.n_plus));
    s.n_minus.push_back(pop.dot(diag.n_minus));
    s.n_tr.push_back(pop.dot(diag.n_tr));
    s.trace.push_back(rho.trace().real());
    s.concurrence.push_back(wootters_or_nan(eph_block(snapshot, basis)));
    result.min_eigenvalue = std::min(result.min_eigenvalue, snapshot.min_eigenvalue());
  };

  for (const auto& seg : segments(params, basis, options)) {
    LindbladSystem sys{&seg.h, &jumps, d};
    auto stepper = make_stepper(options);
    stepper.initialize(x, seg.t0, std::min(options.dt_max, 1e-3 * (seg.t1 - seg.t0) + 1e-6));
    State buffer(x.size());
    while (next < times.size() && times[next] <= seg.t0) record(x), ++next;
    while (stepper.current_time() < seg.t1) {
      checked_step(stepper, sys);
      const double tc = std::min(stepper.current_time(), seg.t1);
      while (next < times.size() && times[next] <= tc) {
        stepper.calc_state(times[next], buffer);
        record(buffer);
        ++next;
      }
    }
    stepper.calc_state(seg.t1, x);
  }
  result.final_state.matrix = Eigen::Map<const Eigen::MatrixXcd>(x.data(), d, d);
  return result;
}

TrajectoryRecord run_trajectory(const PureState& psi0, const SystemParams& params,
                                const DynamicsOptions& options, std::uint64_t seed) {
  params.validate();
  options.validate();
  const CompositeBasis basis(params.photon_cutoff);
  if (!(psi0.basis == basis)) throw InvalidParams("initial state does not match photon_cutoff");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw InvalidParams("initial state must be normalized");
  const auto diag = diagonals(basis);
  const auto jumps = jump_operators(params);
  const Eigen::Index d = basis.dimension();

  std::mt19937_64 rng(seed);
  double threshold = unit_interval(rng());

  TrajectoryRecord rec;
  rec.seed = seed;
  rec.times = uniform_times(options.t_end, options.n_times);
  rec.snapshots.reserve(rec.times.size());

  const auto norm2 = [](const State& v) {
    double n = 0.0;
    for (const auto& z : v) n += std::norm(z);
    return n;
  };
  const auto record = [&](const State& v) {
    const Eigen::Map<const Eigen::VectorXcd> psi(v.data(), d);
    const double n = psi.squaredNorm();
    const Eigen::VectorXd pop = psi.cwiseAbs2() / n;
    Snapshot snap;
    snap.n_plus = pop.dot(diag.n_plus);
    snap.n_minus = pop.dot(diag.n_minus);
    snap.n_tr = pop.dot(diag.n_tr);
    snap.norm = n;
    const double scale = 1.0 / std::sqrt(n);
    for (int k = 0; k < 4; ++k) snap.eph[static_cast<std::size_t>(k)] = psi(diag.eph[static_cast<std::size_t>(k)]) * scale;
    rec.snapshots.push_back(snap);
  };

  State x(psi0.amplitudes.data(), psi0.amplitudes.data() + d);
  std::size_t next = 0;
  State buffer(x.size());
  for (const auto& seg : segments(params, basis, options)) {
    SchrodingerSystem sys{&seg.h};
    auto stepper = make_stepper(options);
    const double dt0 = std::min(options.dt_max, 1e-3 * (seg.t1 - seg.t0) + 1e-6);
    stepper.initialize(x, seg.t0, dt0);
    while (next < rec.times.size() && rec.times[next] <= seg.t0) record(x), ++next;
    while (stepper.current_time() < seg.t1) {
      const double tp = stepper.current_time();
      checked_step(stepper, sys);
      const double tc = std::min(stepper.current_time(), seg.t1);
      stepper.calc_state(tc, buffer);
      double t_jump = std::numeric_limits<double>::infinity();
      if (norm2(buffer) <= threshold) {
        double lo = tp;
        double hi = tc;
        while (hi - lo > 1e-10 * std::max(1.0, hi)) {
          const double mid = 0.5 * (lo + hi);
          stepper.calc_state(mid, buffer);
          (norm2(buffer) <= threshold ? hi : lo) = mid;
        }
        t_jump = hi;
      }
      const double t_stop = std::min(tc, t_jump);
      while (next < rec.times.size() && rec.times[next] <= t_stop) {
        stepper.calc_state(rec.times[next], buffer);
        record(buffer);
        ++next;
      }
      if (t_jump <= tc) {
        stepper.calc_state(t_jump, buffer);
        const Eigen::Map<const Eigen::VectorXcd> psi(buffer.data(), d);
        std::array<Eigen::VectorXcd, 2> collapsed{jumps[0].matrix * psi, jumps[1].matrix * psi};
        const double w0 = collapsed[0].squaredNorm();
        const double w1 = collapsed[1].squaredNorm();
        if (!(w0 + w1 > 0.0)) throw NumericalError("quantum jump from a state without photons");
        const int channel = unit_interval(rng()) * (w0 + w1) < w0 ? 0 : 1;
        const Eigen::VectorXcd after = collapsed[static_cast<std::size_t>(channel)].normalized();
        std::copy(after.data(), after.data() + d, buffer.begin());
        rec.jumps.push_back({t_jump, channel});
        threshold = unit_interval(rng());
        stepper.initialize(buffer, t_jump, std::max(stepper.current_time_step(), 1e-6));
      }
    }
    stepper.calc_state(seg.t1, x);
    if (!rec.jumps.empty() && rec.jumps.back().t > seg.t1) {
      throw NumericalError("jump recorded outside the integration window");
    }
  }
  while (next < rec.times.size()) record(x), ++next;
  const Eigen::Map<const Eigen::VectorXcd> final_psi(x.data(), d);
  rec.final_state = PureState{basis, final_psi.normalized()};
  return rec;
}

TimeSeries trajectory_series(const TrajectoryRecord& record) {
  TimeSeries s;
  s.t = record.times;
  for (const auto& snap : record.snapshots) {
    s.n_plus.push_back(snap.n_plus);
    s.n_minus.push_back(snap.n_minus);
    s.n_tr.push_back(snap.n_tr);
    s.norm.push_back(snap.norm);
    Eigen::Vector4cd v(snap.eph[0], snap.eph[1], snap.eph[2], snap.eph[3]);
    s.concurrence.push_back(wootters_or_nan(v * v.adjoint()));
  }
  return s;
}

TimeSeries average_trajectories(const PureState& psi0, const SystemParams& params,
                                const DynamicsOptions& options, int n_traj, std::uint64_t seed,
                                int workers) {
  if (n_traj < 1) throw InvalidParams("n_traj must be >= 1");
  options.validate();
  const auto n = static_cast<std::size_t>(n_traj);
  std::vector<TrajectoryRecord> records(n);
  parallel_for(n, workers, [&](std::size_t i) {
    records[i] = run_trajectory(psi0, params, options, derive_seed(seed, i));
    records[i].final_state.amplitudes.resize(0);
  });

  TimeSeries s;
  s.t = uniform_times(options.t_end, options.n_times);
  const std::size_t m = s.t.size();
  const auto stats = [&](auto value, std::vector<double>& mean, std::vector<double>& err) {
    mean.assign(m, 0.0);
    err.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += value(records[i].snapshots[k]);
      const double mu = sum / static_cast<double>(n);
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dv = value(records[i].snapshots[k]) - mu;
        ss += dv * dv;
      }
      mean[k] = mu;
      err[k] = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    }
  };
  stats([](const Snapshot& x) { return x.n_plus; }, s.n_plus, s.stderr_n_plus);
  stats([](const Snapshot& x) { return x.n_minus; }, s.n_minus, s.stderr_n_minus);
  stats([](const Snapshot& x) { return x.n_tr; }, s.n_tr, s.stderr_n_tr);
  std::vector<double> unused;
  stats([](const Snapshot& x) { return x.norm; }, s.norm, unused);

  s.concurrence.assign(m, 0.0);
  s.stderr_concurrence.assign(m, 0.0);
  // Bootstrap over trajectories; resampling counts are shared by all times.
  constexpr int kReplicates = 200;
  std::vector<std::vector<std::uint32_t>> counts;
  if (n > 1) {
    std::mt19937_64 rng(derive_seed(seed, n));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    counts.assign(kReplicates, std::vector<std::uint32_t>(n, 0));
    for (auto& c : counts) {
      for (std::size_t i = 0; i < n; ++i) ++c[pick(rng)];
    }
  }
  std::vector<Eigen::Matrix4cd> outer(n);
  for (std::size_t k = 0; k < m; ++k) {
    Eigen::Matrix4cd mean = Eigen::Matrix4cd::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& e = records[i].snapshots[k].eph;
      const Eigen::Vector4cd v(e[0], e[1], e[2], e[3]);
      outer[i] = v * v.adjoint();
      mean += outer[i];
    }
    s.concurrence[k] = wootters_or_nan(mean / static_cast<double>(n));
    if (std::isnan(s.concurrence[k])) {
      s.stderr_concurrence[k] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    if (n < 2) continue;
    double sum = 0.0;
    double sum_sq = 0.0;
    int valid = 0;
    for (const auto& c : counts) {
      Eigen::Matrix4cd block = Eigen::Matrix4cd::Zero();
      for (std::size_t i = 0; i < n; ++i) {
        if (c[i] != 0) block += static_cast<double>(c[i]) * outer[i];
      }
      const double value = wootters_or_nan(block / static_cast<double>(n));
      if (std::isnan(value)) continue;
      sum += value;
      sum_sq += value * value;
      ++valid;
    }
    if (valid > 1) {
      const double mu = sum / valid;
      s.stderr_concurrence[k] = std::sqrt(std::max(0.0, (sum_sq - valid * mu * mu) / (valid - 1)));
    } else {
      s.stderr_concurrence[k] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return s;
}

}  // namespace spinphoton
