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

#include "fieldsup/dynamics.hpp"

#include <algorithm>
#include <numbers>
#include <string>

namespace fieldsup {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

VirtualPoint make_vp(const RobotState& r) {
  VirtualPoint vp;
  vp.d = r.position;
  return vp;
}

void SwarmParams::validate() const {
  require_positive(D_f, "D_f");
  require_positive(d_min, "d_min");
  require_positive(d_max, "d_max");
  require_positive(D_o, "D_o");
  require_positive(k_f, "k_f");
  require_positive(k_o, "k_o");
  require_positive(comm_radius, "comm_radius");
  require_positive(error_max, "error_max");
  require_positive(vp_max_speed, "vp_max_speed");
  if (!(d_min < D_f && D_f < d_max)) {
    throw ConfigError("formation distances must satisfy d_min < D_f < d_max");
  }
  if (K_P < 0.0 || K_I < 0.0 || K_D < 0.0) {
    throw ConfigError("PID gains must be nonnegative");
  }
}

void UavParams::validate() const {
  require_positive(mass, "uav mass");
  require_positive(gravity, "gravity");
  require_positive(kp, "uav kp");
  require_positive(kd, "uav kd");
  if (!(thrust_max > mass * gravity)) {
    throw ConfigError("uav thrust_max must exceed the weight");
  }
}

void UgvParams::validate() const {
  require_positive(mass, "ugv mass");
  require_positive(inertia, "ugv inertia");
  require_positive(k_nu, "k_nu");
  require_positive(k_omega, "k_omega");
  require_positive(nu_max, "nu_max");
  require_positive(omega_max, "omega_max");
}

bool WorldState::linked(std::size_t i, std::size_t j) const {
  const std::size_t n = size();
  if (links.size() != n * n) return false;
  return links[i * n + j] != 0;
}

void WorldState::set_link(std::size_t i, std::size_t j, bool up) {
  const std::size_t n = size();
  if (links.size() != n * n) links.assign(n * n, 0);
  links[i * n + j] = up ? 1 : 0;
  links[j * n + i] = up ? 1 : 0;
}

void WorldState::check() const {
  const std::size_t n = size();
  if (vps.size() != n || targets.size() != n) {
    throw InputError("robot, VP and target tables differ in size");
  }
  if (!links.empty() && links.size() != n * n) {
    throw InputError("link table has the wrong size");
  }
}

double formation_potential(double d, const SwarmParams& p) {
  const double n = (d - p.D_f) * (d - p.D_f);
  const double m = (d - p.d_min) * (p.d_max - d);
  return p.k_f * n / m;
}

double formation_potential_derivative(double d, const SwarmParams& p) {
  const double n = (d - p.D_f) * (d - p.D_f);
  const double dn = 2.0 * (d - p.D_f);
  const double m = (d - p.d_min) * (p.d_max - d);
  const double dm = p.d_max + p.d_min - 2.0 * d;
  return p.k_f * (dn * m - n * dm) / (m * m);
}

double obstacle_potential(double d, const SwarmParams& p) {
  if (d >= p.D_o) return 0.0;
  const double x = 1.0 / d - 1.0 / p.D_o;
  return p.k_o * x * x;
}

double obstacle_potential_derivative(double d, const SwarmParams& p) {
  if (d >= p.D_o) return 0.0;
  return -2.0 * p.k_o * (1.0 / d - 1.0 / p.D_o) / (d * d);
}

std::vector<std::size_t> neighbor_set(const WorldState& w, std::size_t i,
                                      const SwarmParams& p) {
  if (i >= w.size() || w.vps.size() != w.size()) {
    throw InputError("robot index " + std::to_string(i) + " out of range");
  }
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (j == i || !w.linked(i, j)) continue;
    if ((w.vps[i].d - w.vps[j].d).norm() <= p.comm_radius) out.push_back(j);
  }
  return out;
}

Vec3 formation_pair(const Vec3& di, const Vec3& dj, const SwarmParams& p) {
  const Vec3 diff = di - dj;
  const double r = diff.norm();
  if (!(r > p.d_min && r < p.d_max)) {
    throw SimulationFault("formation barrier violated: distance " +
                          std::to_string(r) + " outside (" +
                          std::to_string(p.d_min) + ", " +
                          std::to_string(p.d_max) + ")");
  }
  return -formation_potential_derivative(r, p) * diff / r;
}

Vec3 formation_input(std::size_t i, const WorldState& w, const SwarmParams& p) {
  Vec3 u = Vec3::Zero();
  for (std::size_t j : neighbor_set(w, i, p)) {
    u += formation_pair(w.vps[i].d, w.vps[j].d, p);
  }
  return u;
}

Vec3 obstacle_input(std::size_t i, const WorldState& w, const SwarmParams& p) {
  if (i >= w.size()) throw InputError("robot index out of range");
  Vec3 u = Vec3::Zero();
  for (const auto& o : w.obstacles) {
    const Vec3 diff = w.vps[i].d - o;
    const double r = diff.norm();
    if (r == 0.0) throw SimulationFault("virtual point coincides with an obstacle");
    if (r >= p.D_o) continue;
    u -= obstacle_potential_derivative(r, p) * diff / r;
  }
  return u;
}

TrackingResult tracking_input(const VirtualPoint& vp, const Vec3& target,
                              const SwarmParams& p, double dt) {
  TrackingResult r;
  r.vp = vp;
  const Vec3 e = target - vp.d;
  Vec3 de = Vec3::Zero();
  if (vp.has_prev_error) {
    r.vp.integral_error += 0.5 * dt * (e + vp.prev_error);
    de = (e - vp.prev_error) / dt;
  } else {
    r.vp.integral_error += dt * e;
  }
  const double lim = 10.0 * p.error_max;
  r.vp.integral_error = r.vp.integral_error.cwiseMax(-lim).cwiseMin(lim);
  r.vp.prev_error = e;
  r.vp.has_prev_error = true;
  r.u = p.K_P * e + p.K_I * r.vp.integral_error + p.K_D * de;
  return r;
}

TrackingResult tracking_input(std::size_t i, const WorldState& w,
                              const SwarmParams& p, double dt) {
  if (i >= w.size() || w.targets.size() != w.size()) {
    throw InputError("robot index out of range or target missing");
  }
  return tracking_input(w.vps[i], w.targets[i], p, dt);
}

VirtualPoint vp_step(std::size_t i, const WorldState& w, TermMask mask,
                     const SwarmParams& p, double dt) {
  if (!(dt > 0.0)) throw InputError("dt must be positive");
  if (i >= w.size()) throw InputError("robot index out of range");
  VirtualPoint next = w.vps[i];
  Vec3 u = Vec3::Zero();
  if (mask.formation) u += formation_input(i, w, p);
  if (mask.obstacle) u += obstacle_input(i, w, p);
  if (mask.tracking) {
    auto t = tracking_input(i, w, p, dt);
    u += t.u;
    next = t.vp;
  } else {
    // The PID restarts cleanly when tracking is re-enabled.
    next.has_prev_error = false;
  }
  if (!u.allFinite()) throw SimulationFault("non-finite VP command");
  const double speed = u.norm();
  if (speed > p.vp_max_speed) u *= p.vp_max_speed / speed;
  next.d += dt * u;
  next.last_velocity = u;
  return next;
}

UavCommand uav_command(const RobotState& r, const Vec3& vp, const UavParams& p) {
  const Vec3 e3(0.0, 0.0, 1.0);
  const Vec3 a_cmd = p.kp * (vp - r.position) - p.kd * r.velocity;
  const Vec3 f = p.mass * (p.gravity * e3 - a_cmd);
  const double n = f.norm();
  if (n == 0.0) return {0.0, e3};
  return {std::min(n, p.thrust_max), f / n};
}

UgvCommand ugv_command(const RobotState& r, const Vec3& vp, const UgvParams& p) {
  const double dx = vp.x() - r.position.x();
  const double dy = vp.y() - r.position.y();
  const double rho = std::hypot(dx, dy);
  if (rho < 1e-9) return {0.0, 0.0};
  const double alpha = wrap_angle(std::atan2(dy, dx) - r.heading);
  const double nu = std::clamp(p.k_nu * rho * std::cos(alpha), 0.0, p.nu_max);
  const double omega = std::clamp(p.k_omega * alpha, -p.omega_max, p.omega_max);
  return {nu, omega};
}

RobotState robot_track_vp(std::size_t i, const WorldState& w,
                          const UavParams& uav, const UgvParams& ugv, double dt) {
  if (!(dt > 0.0)) throw InputError("dt must be positive");
  if (i >= w.size()) throw InputError("robot index out of range");
  RobotState s = w.robots[i];
  const Vec3& vp = w.vps[i].d;
  if (s.kind == RobotKind::kUav) {
    const UavCommand c = uav_command(s, vp, uav);
    const Vec3 acc = Vec3(0.0, 0.0, uav.gravity) - c.thrust * c.axis / uav.mass;
    using V6 = Eigen::Matrix<double, 6, 1>;
    V6 x;
    x << s.position, s.velocity;
    x = rk4_step(
        [&](const V6& y) {
          V6 dy;
          dy << y.tail<3>(), acc;
          return dy;
        },
        x, dt);
    s.position = x.head<3>();
    s.velocity = x.tail<3>();
    if (s.position.z() > 0.0) {   // ground contact
      s.position.z() = 0.0;
      s.velocity.z() = std::min(s.velocity.z(), 0.0);
    }
    return s;
  }
  const UgvCommand c = ugv_command(s, vp, ugv);
  using V3 = Eigen::Vector3d;
  V3 x(s.position.x(), s.position.y(), s.heading);
  x = rk4_step(
      [&](const V3& y) {
        return V3(c.nu * std::cos(y(2)), c.nu * std::sin(y(2)), c.omega);
      },
      x, dt);
  s.position = Vec3(x(0), x(1), 0.0);
  s.heading = wrap_angle(x(2));
  s.nu = c.nu;
  s.omega = c.omega;
  s.velocity = Vec3(c.nu * std::cos(s.heading), c.nu * std::sin(s.heading), 0.0);
  return s;
}

RobotState ugv_dynamics_step(const RobotState& s, const std::array<double, 2>& mu,
                             const UgvParams& p, double dt) {
  if (!(p.mass > 0.0) || !(p.inertia > 0.0)) {
    throw ConfigError("UGV mass and inertia must be positive");
  }
  if (!(dt > 0.0)) throw InputError("dt must be positive");
  using V5 = Eigen::Matrix<double, 5, 1>;
  V5 x;
  x << s.position.x(), s.position.y(), s.heading, s.nu, s.omega;
  const double nu_dot = mu[0] / p.mass;
  const double omega_dot = mu[1] / p.inertia;
  x = rk4_step(
      [&](const V5& y) {
        V5 dy;
        dy << y(3) * std::cos(y(2)), y(3) * std::sin(y(2)), y(4), nu_dot, omega_dot;
        return dy;
      },
      x, dt);
  RobotState out = s;
  out.position = Vec3(x(0), x(1), 0.0);
  out.heading = x(2);
  out.nu = x(3);
  out.omega = x(4);
  out.velocity = Vec3(out.nu * std::cos(out.heading), out.nu * std::sin(out.heading), 0.0);
  return out;
}

std::array<double, 4> mixer(const std::array<double, 4>& w2, const MixerParams& p) {
  const auto& [w1, w2_, w3, w4] = w2;
  return {p.kappa * (w1 + w2_ + w3 + w4),
          p.L * (w4 - w2_),
          p.L * (w1 - w3),
          p.beta * (w1 - w2_ + w3 - w4)};
}

std::array<double, 4> mixer_inverse(const std::array<double, 4>& demand,
                                    const MixerParams& p) {
  if (!(p.kappa > 0.0 && p.beta > 0.0 && p.L > 0.0)) {
    throw ConfigError("mixer coefficients must be positive");
  }
  const double s = demand[0] / p.kappa;   // w1 + w2 + w3 + w4
  const double a = demand[1] / p.L;       // w4 - w2
  const double b = demand[2] / p.L;       // w1 - w3
  const double c = demand[3] / p.beta;    // w1 - w2 + w3 - w4
  const double odd = 0.5 * (s + c);       // w1 + w3
  const double even = 0.5 * (s - c);      // w2 + w4
  std::array<double, 4> w = {0.5 * (odd + b), 0.5 * (even - a),
                             0.5 * (odd - b), 0.5 * (even + a)};
  for (std::size_t k = 0; k < 4; ++k) {
    if (w[k] < 0.0) {
      throw ActuatorInfeasible(static_cast<int>(k + 1), "rotor " + std::to_string(k + 1) +
                                          " needs a negative squared speed");
    }
  }
  return w;
}

double wrap_angle(double a) {
  constexpr double kPi = std::numbers::pi;
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

}  // namespace fieldsup
