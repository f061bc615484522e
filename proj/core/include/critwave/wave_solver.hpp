#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace critwave {

enum class InitialDataKind {
  smooth_bump,                      ///< u₀ = bump, u₁ = 0
  zero_displacement_bump_velocity,  ///< u₀ = 0, u₁ = bump
};

/// Nonnegative C^∞ bump amplitude·exp(-1/(1-(r/radius)²)) supported in r < radius.
struct InitialDataSpec {
  InitialDataKind kind = InitialDataKind::smooth_bump;
  double amplitude = 1.0;
  double radius = 1.0;

  double profile(double r) const;
};

std::string to_string(InitialDataKind kind);
InitialDataKind initial_data_kind_from_string(const std::string& name);

struct SimulationConfig {
  int n = 4;
  double p = 2.0;
  double R = 1.0;                ///< support radius of the data
  double h = 1.0 / 400.0;        ///< radial step
  double cfl = 0.5;              ///< base time step is cfl·h
  double t_max = 12.0;
  double r_max = 0.0;            ///< 0 selects t_max + R + 4h
  double blowup_threshold = 1e6;
  double dt_floor = 1e-10;
  double sample_interval = 0.01; ///< observer stride in time units
  bool nonlinear = true;         ///< false drops the |u|^p source
  InitialDataSpec initial_data;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
  double domain_radius() const;
  /// Number of radial nodes; always odd so Simpson weights apply.
  std::size_t node_count() const;
};

/// One time slice on the uniform radial grid r_i = i·h.
struct RadialState {
  int n = 0;
  double t = 0.0;
  double h = 0.0;
  std::vector<double> u;
  std::vector<double> v;  ///< ∂ₜu

  std::size_t size() const { return u.size(); }
  double r(std::size_t i) const { return static_cast<double>(i) * h; }
};

RadialState make_initial_state(const SimulationConfig& config);

/// State with arbitrary radial profiles; the profiles must vanish for r >= R.
RadialState make_state_from_profiles(const SimulationConfig& config,
                                     const std::function<double(double)>& u0,
                                     const std::function<double(double)>& u1);

enum class StepStatus { ok, non_finite, dt_floor_reached };

/// Explicit velocity-Verlet integrator for
///   u_tt = u_rr + (n-1)/r u_r + |u|^p
/// with even extension at r = 0 (the Laplacian there is 2n(u₁-u₀)/h²).
/// Nodes with r > t + R + 2h are held at zero: the exact solution vanishes
/// there and the window only ever grows.
class RadialWaveSolver {
 public:
  explicit RadialWaveSolver(SimulationConfig config);
  RadialWaveSolver(SimulationConfig config, RadialState initial);

  const RadialState& state() const { return state_; }
  const SimulationConfig& config() const { return config_; }
  /// Current base step (cfl·h, halved as the solution grows).
  double dt() const { return dt_; }
  double max_abs_u() const;
  std::size_t steps_taken() const { return steps_; }

  /// One step of size min(dt(), max_dt).
  StepStatus advance(double max_dt);

 private:
  std::size_t support_limit(double t) const;
  void acceleration(const std::vector<double>& u, std::vector<double>& out,
                    std::size_t limit) const;
  double source(double u) const;

  SimulationConfig config_;
  RadialState state_;
  double dt_;
  std::size_t steps_ = 0;
  std::vector<double> plus_coeff_;
  std::vector<double> minus_coeff_;
  std::vector<double> accel_;
  std::vector<double> v_half_;
};

/// Single step from an arbitrary state with the config's step policy.
RadialState step(const RadialState& state, const SimulationConfig& config);

enum class BlowupVerdict { blew_up, survived_horizon };

std::string to_string(BlowupVerdict verdict);

struct BlowupReport {
  BlowupVerdict verdict = BlowupVerdict::survived_horizon;
  std::optional<double> t_detect;
  bool resolution_limited = false;   ///< dt floor hit before the threshold
  bool non_finite = false;
  std::vector<double> history_t;      ///< sample times
  std::vector<double> max_u_history;  ///< max|u| at the sample times
  std::optional<double> refinement_consistency;
  double t_end = 0.0;
  double min_dt = 0.0;
  std::size_t steps = 0;
};

using StateObserver = std::function<void(const RadialState&)>;

struct SimulationResult {
  BlowupReport report;
  std::vector<RadialState> snapshots;  ///< at the requested snapshot times
  RadialState final_state;
};

/// Runs to t_max, threshold crossing or the dt floor. Observers see every
/// sample (stride config.sample_interval, starting at t = 0); steps are
/// shortened to land exactly on sample and snapshot times.
SimulationResult simulate(const SimulationConfig& config,
                          const std::vector<StateObserver>& observers = {},
                          const std::vector<double>& snapshot_times = {});

SimulationResult simulate_from(const SimulationConfig& config, RadialState initial,
                               const std::vector<StateObserver>& observers = {},
                               const std::vector<double>& snapshot_times = {});

/// Runs at h and h/2 and records the relative shift of t_detect.
BlowupReport simulate_with_refinement(const SimulationConfig& config);

}  // namespace critwave
