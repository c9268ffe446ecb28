// Copyright 2026 The fieldsup Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FIELDSUP_DYNAMICS_HPP_
#define FIELDSUP_DYNAMICS_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "fieldsup/errors.hpp"

namespace fieldsup {

using Vec3 = Eigen::Vector3d;

enum class RobotKind { kUav, kUgv };

/// Position is north-east-down for the UAV (height h = -z) and planar
/// (z = 0) for UGVs. Heading and (nu, omega) are used by UGVs only.
struct RobotState {
  RobotKind kind = RobotKind::kUgv;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double heading = 0.0;   // rad
  double nu = 0.0;        // m/s
  double omega = 0.0;     // rad/s
  double mass = 1.0;      // kg

  double height() const { return -position.z(); }
};

/// Virtual point followed by a robot, plus the PID tracking state.
struct VirtualPoint {
  Vec3 d = Vec3::Zero();
  Vec3 integral_error = Vec3::Zero();
  Vec3 prev_error = Vec3::Zero();
  bool has_prev_error = false;
  Vec3 last_velocity = Vec3::Zero();   // last commanded d-dot
};

/// VP initialized at the robot position.
VirtualPoint make_vp(const RobotState& r);

struct SwarmParams {
  double D_f = 1.0;          // desired formation distance (m)
  double d_min = 0.3;        // inner asymptote (m)
  double d_max = 3.0;        // outer asymptote (m)
  double D_o = 1.5;          // obstacle threshold (m)
  double k_f = 1.0;
  double k_o = 1.0;
  double K_P = 1.0;
  double K_I = 0.0;
  double K_D = 0.0;
  double comm_radius = 2.5;  // m
  double error_max = 1.0;    // m, integral clamp is 10 * error_max per axis
  double vp_max_speed = 1.0; // m/s, saturation of the summed VP command

  /// Throws ConfigError.
  void validate() const;
};

struct UavParams {
  double mass = 1.0;         // kg
  double gravity = 9.81;     // m/s^2
  double kp = 4.0;           // 1/s^2
  double kd = 4.0;           // 1/s
  double thrust_max = 30.0;  // N

  void validate() const;
};

struct UgvParams {
  double mass = 10.0;        // kg
  double inertia = 1.0;      // kg m^2, I_z
  double k_nu = 2.0;         // 1/s
  double k_omega = 4.0;      // 1/s
  double nu_max = 1.0;       // m/s
  double omega_max = 2.0;    // rad/s

  void validate() const;
};

struct MixerParams {
  double kappa = 1.0;   // thrust coefficient
  double beta = 1.0;    // drag coefficient
  double L = 1.0;       // arm length (m)
};

/// Continuous state of a simulation at one instant.
struct WorldState {
  double time = 0.0;
  std::vector<RobotState> robots;
  std::vector<VirtualPoint> vps;
  std::vector<Vec3> obstacles;
  std::vector<Vec3> targets;      // current tracking target per robot
  std::vector<char> links;        // symmetric n x n, network link up

  std::size_t size() const { return robots.size(); }
  bool linked(std::size_t i, std::size_t j) const;
  void set_link(std::size_t i, std::size_t j, bool up);
  /// Throws InputError if the per-robot tables disagree in size.
  void check() const;
};

// ------------------------------------------------------------- potentials

double formation_potential(double d, const SwarmParams& p);
double formation_potential_derivative(double d, const SwarmParams& p);
double obstacle_potential(double d, const SwarmParams& p);
double obstacle_potential_derivative(double d, const SwarmParams& p);

/// Robots j != i whose VPs lie within the comm radius and whose link is up.
std::vector<std::size_t> neighbor_set(const WorldState& w, std::size_t i,
                                      const SwarmParams& p);

/// Formation term. Throws SimulationFault when a neighbor is outside the
/// open interval (d_min, d_max).
Vec3 formation_input(std::size_t i, const WorldState& w, const SwarmParams& p);
/// Pairwise formation contribution on a VP at `di` from one at `dj`.
Vec3 formation_pair(const Vec3& di, const Vec3& dj, const SwarmParams& p);
/// Obstacle term over all obstacles. Throws SimulationFault on coincidence.
Vec3 obstacle_input(std::size_t i, const WorldState& w, const SwarmParams& p);

struct TrackingResult {
  Vec3 u;
  VirtualPoint vp;   // with updated integral / previous error
};
/// PID on e = target - d with trapezoidal integral and backward difference.
TrackingResult tracking_input(const VirtualPoint& vp, const Vec3& target,
                              const SwarmParams& p, double dt);
TrackingResult tracking_input(std::size_t i, const WorldState& w,
                              const SwarmParams& p, double dt);

struct TermMask {
  bool formation = false;
  bool obstacle = false;
  bool tracking = false;

  friend bool operator==(const TermMask&, const TermMask&) = default;
};

/// One explicit step of the VP kinematics with the enabled terms. The summed
/// command is saturated at vp_max_speed.
VirtualPoint vp_step(std::size_t i, const WorldState& w, TermMask mask,
                     const SwarmParams& p, double dt);

/// UAV translational dynamics or UGV kinematics tracking the robot's VP.
RobotState robot_track_vp(std::size_t i, const WorldState& w,
                          const UavParams& uav, const UgvParams& ugv, double dt);

struct UavCommand {
  double thrust;   // lambda (N), saturated
  Vec3 axis;       // unit body z-axis in NED
};
UavCommand uav_command(const RobotState& r, const Vec3& vp, const UavParams& p);

struct UgvCommand {
  double nu;
  double omega;
};
UgvCommand ugv_command(const RobotState& r, const Vec3& vp, const UgvParams& p);

/// Integrates D (nu-dot, omega-dot) = mu with D = diag(m, I_z), then the
/// unicycle kinematics, by one RK4 step.
RobotState ugv_dynamics_step(const RobotState& s, const std::array<double, 2>& mu,
                             const UgvParams& p, double dt);

/// Thrust and torques (lambda, g1, g2, g3) from squared rotor speeds.
std::array<double, 4> mixer(const std::array<double, 4>& w2, const MixerParams& p);
/// Squared rotor speeds for a thrust/torque demand. Throws ActuatorInfeasible
/// naming the first negative channel.
std::array<double, 4> mixer_inverse(const std::array<double, 4>& demand,
                                    const MixerParams& p);

double wrap_angle(double a);

/// Classical fourth-order Runge-Kutta step for an autonomous field f(x).
/// Throws SimulationFault if a stage derivative is not finite.
template <typename Vec, typename Field>
Vec rk4_step(Field&& f, const Vec& x, double dt) {
  auto check = [](const auto& k) {
    if (!k.allFinite()) throw SimulationFault("non-finite derivative in RK4 step");
    return k;
  };
  const Vec k1 = check(f(x));
  const Vec k2 = check(f(Vec(x + 0.5 * dt * k1)));
  const Vec k3 = check(f(Vec(x + 0.5 * dt * k2)));
  const Vec k4 = check(f(Vec(x + dt * k3)));
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <typename Field>
double rk4_step_scalar(Field&& f, double x, double dt) {
  using V1 = Eigen::Matrix<double, 1, 1>;
  V1 v;
  v << x;
  return rk4_step([&](const V1& y) { return V1::Constant(f(y(0))); }, v, dt)(0);
}

}  // namespace fieldsup

#endif  // FIELDSUP_DYNAMICS_HPP_
