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

#include <gtest/gtest.h>

#include <random>

#include <Eigen/Dense>

#include "fieldsup/dynamics.hpp"

namespace fieldsup {
namespace {

constexpr double kPi = 3.14159265358979323846;

RobotState ugv_at(double x, double y, double heading = 0.0) {
  RobotState r;
  r.kind = RobotKind::kUgv;
  r.position = Vec3(x, y, 0.0);
  r.heading = heading;
  return r;
}

RobotState uav_at(const Vec3& p) {
  RobotState r;
  r.kind = RobotKind::kUav;
  r.position = p;
  return r;
}

// World with VPs at the given points, all pairs linked.
WorldState world_of(const std::vector<Vec3>& points) {
  WorldState w;
  for (const auto& p : points) {
    w.robots.push_back(ugv_at(p.x(), p.y()));
    w.vps.push_back(make_vp(w.robots.back()));
    w.vps.back().d = p;
    w.targets.push_back(p);
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) w.set_link(i, j, true);
  }
  return w;
}

// ------------------------------------------------------------- neighbors

TEST(Neighbors, InsideAndOutsideRadius) {
  SwarmParams p;
  WorldState w = world_of({Vec3(0, 0, 0), Vec3(0.5 * p.comm_radius, 0, 0)});
  EXPECT_EQ(neighbor_set(w, 0, p), std::vector<std::size_t>{1});
  EXPECT_EQ(neighbor_set(w, 1, p), std::vector<std::size_t>{0});
  w.vps[1].d = Vec3(2.0 * p.comm_radius, 0, 0);
  EXPECT_TRUE(neighbor_set(w, 0, p).empty());
  EXPECT_TRUE(neighbor_set(w, 1, p).empty());
  EXPECT_THROW(neighbor_set(w, 5, p), InputError);
}

TEST(Neighbors, LinkDownMeansNoNeighbor) {
  SwarmParams p;
  WorldState w = world_of({Vec3(0, 0, 0), Vec3(1, 0, 0)});
  w.set_link(0, 1, false);
  EXPECT_TRUE(neighbor_set(w, 0, p).empty());
}

TEST(Neighbors, MatchesAllPairsOracle) {
  SwarmParams p;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::bernoulli_distribution coin(0.8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vec3> pts;
    for (int k = 0; k < 5; ++k) pts.emplace_back(u(rng), u(rng), 0.0);
    WorldState w = world_of(pts);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = i + 1; j < 5; ++j) w.set_link(i, j, coin(rng));
    }
    for (std::size_t i = 0; i < 5; ++i) {
      std::vector<std::size_t> want;
      for (std::size_t j = 0; j < 5; ++j) {
        const double dx = pts[i].x() - pts[j].x();
        const double dy = pts[i].y() - pts[j].y();
        if (j != i && w.links[i * 5 + j] && dx * dx + dy * dy <= p.comm_radius * p.comm_radius) {
          want.push_back(j);
        }
      }
      EXPECT_EQ(neighbor_set(w, i, p), want);
    }
  }
}

// ------------------------------------------------------------- formation

TEST(Formation, NullAtDesiredDistance) {
  SwarmParams p;
  WorldState w = world_of({Vec3(0, 0, 0), Vec3(p.D_f, 0, 0)});
  EXPECT_LT(formation_input(0, w, p).norm(), 1e-12);
}

TEST(Formation, AttractiveBeyondRepulsiveInside) {
  SwarmParams p;
  WorldState w = world_of({Vec3(0, 0, 0), Vec3(0, p.D_f + 0.1, 0)});
  const Vec3 u = formation_input(0, w, p);
  EXPECT_GT(u.y(), 0.0);
  EXPECT_NEAR(u.x(), 0.0, 1e-15);
  w.vps[1].d = Vec3(0, p.D_f - 0.1, 0);
  EXPECT_LT(formation_input(0, w, p).y(), 0.0);
}

TEST(Formation, BlowsUpAtAsymptotes) {
  SwarmParams p;
  WorldState w = world_of({Vec3(0, 0, 0), Vec3(p.d_min + 1e-6, 0, 0)});
  EXPECT_GT(formation_input(0, w, p).norm(), 1e6);
  w.vps[1].d = Vec3(p.d_max - 1e-6, 0, 0);
  w.set_link(0, 1, true);
  SwarmParams wide = p;
  wide.comm_radius = 10.0;
  EXPECT_GT(formation_input(0, w, wide).norm(), 1e6);
}

TEST(Formation, BarrierViolationIsAFault) {
  SwarmParams p;
  WorldState w = world_of({Vec3(0, 0, 0), Vec3(p.d_min, 0, 0)});
  EXPECT_THROW(formation_input(0, w, p), SimulationFault);
  w.vps[1].d = Vec3(0.5 * p.d_min, 0, 0);
  EXPECT_THROW(formation_input(0, w, p), SimulationFault);
}

TEST(Formation, ActionReaction) {
  SwarmParams p;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 1000; ++n) {
    Vec3 a(u(rng), u(rng), u(rng));
    Vec3 b(u(rng), u(rng), u(rng));
    const double r = (a - b).norm();
    if (r <= p.d_min + 1e-3 || r >= p.d_max - 1e-3) continue;
    const Vec3 fab = formation_pair(a, b, p);
    const Vec3 fba = formation_pair(b, a, p);
    EXPECT_LT((fab + fba).norm(), 1e-12 * (1.0 + fab.norm()));
  }
}

double total_formation_potential(const Vec3& di, const std::vector<Vec3>& others,
                                 const SwarmParams& p) {
  double phi = 0.0;
  for (const auto& dj : others) phi += formation_potential((di - dj).norm(), p);
  return phi;
}

// Central differences of the summed potential against the input term.
TEST(Formation, GradientMatchesFiniteDifferences) {
  SwarmParams p;
  p.comm_radius = 10.0;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int checked = 0;
  while (checked < 1000) {
    std::vector<Vec3> pts = {Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng)),
                             Vec3(u(rng), u(rng), u(rng))};
    bool ok = true;
    for (std::size_t j = 1; j < 3; ++j) {
      const double r = (pts[0] - pts[j]).norm();
      ok = ok && r > p.d_min + 0.2 && r < p.d_max - 0.2;
    }
    if (!ok) continue;
    ++checked;
    WorldState w = world_of(pts);
    const Vec3 analytic = formation_input(0, w, p);
    const std::vector<Vec3> others = {pts[1], pts[2]};
    Vec3 fd;
    const double h = 1e-5;
    for (int k = 0; k < 3; ++k) {
      Vec3 hi = pts[0], lo = pts[0];
      hi[k] += h;
      lo[k] -= h;
      fd[k] = -(total_formation_potential(hi, others, p) -
                total_formation_potential(lo, others, p)) / (2.0 * h);
    }
    EXPECT_LT((fd - analytic).norm(), 1e-6 * std::max(analytic.norm(), 1.0))
        << "config " << checked;
  }
}

TEST(Formation, BarrierHoldsForTwoVps) {
  SwarmParams p;
  p.comm_radius = 10.0;
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> start(p.d_min + 1e-3, p.d_max - 1e-3);
  const double dt = 0.02;
  for (int trial = 0; trial < 5; ++trial) {
    WorldState w = world_of({Vec3(0, 0, 0), Vec3(start(rng), 0.1 * trial, 0)});
    const TermMask mask{true, false, false};
    for (int k = 0; k < 10000; ++k) {
      const VirtualPoint a = vp_step(0, w, mask, p, dt);
      const VirtualPoint b = vp_step(1, w, mask, p, dt);
      w.vps[0] = a;
      w.vps[1] = b;
      const double r = (a.d - b.d).norm();
      ASSERT_GT(r, p.d_min) << "trial " << trial << " step " << k;
      ASSERT_LT(r, p.d_max) << "trial " << trial << " step " << k;
    }
    EXPECT_NEAR((w.vps[0].d - w.vps[1].d).norm(), p.D_f, 1e-3);
  }
}

// -------------------------------------------------------------- obstacle

TEST(Obstacle, NullAtThreshold) {
  SwarmParams p;
  WorldState w = world_of({Vec3(0, 0, 0)});
  w.obstacles = {Vec3(p.D_o, 0, 0)};
  EXPECT_EQ(obstacle_input(0, w, p), Vec3::Zero());
  w.obstacles = {Vec3(0, 2.0 * p.D_o, 0)};
  EXPECT_EQ(obstacle_input(0, w, p), Vec3::Zero());
}

TEST(Obstacle, RepelsFromNorth) {
  SwarmParams p;
  WorldState w = world_of({Vec3(0, 0, 0)});
  w.obstacles = {Vec3(0.5 * p.D_o, 0, 0)};   // north is +x
  const Vec3 u = obstacle_input(0, w, p);
  EXPECT_LT(u.x(), 0.0);
  EXPECT_NEAR(u.y(), 0.0, 1e-15);
  EXPECT_NEAR(u.z(), 0.0, 1e-15);
}

TEST(Obstacle, FadesOutNearThreshold) {
  SwarmParams p;
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    const double g = std::abs(obstacle_potential_derivative(p.D_o - eps, p));
    EXPECT_LT(g, prev);
    prev = g;
    // Value and slope of the potential both vanish at the threshold.
    EXPECT_LT(obstacle_potential(p.D_o - eps, p), 10.0 * eps * eps);
  }
  EXPECT_LT(prev, 1e-5);
}

TEST(Obstacle, DerivativeMatchesFiniteDifferences) {
  SwarmParams p;
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(0.2, p.D_o - 0.01);
  for (int n = 0; n < 1000; ++n) {
    const double d = u(rng);
    const double h = 1e-6 * d;
    const double fd = (obstacle_potential(d + h, p) - obstacle_potential(d - h, p)) / (2.0 * h);
    const double an = obstacle_potential_derivative(d, p);
    EXPECT_LT(std::abs(fd - an), 1e-6 * std::max(std::abs(an), 1.0)) << d;
  }
}

TEST(Obstacle, CoincidentPointIsAFault) {
  SwarmParams p;
  WorldState w = world_of({Vec3(1, 1, 0)});
  w.obstacles = {Vec3(1, 1, 0)};
  EXPECT_THROW(obstacle_input(0, w, p), SimulationFault);
}

// -------------------------------------------------------------- tracking

TEST(Tracking, ZeroErrorGivesZero) {
  SwarmParams p;
  p.K_I = 0.5;
  p.K_D = 0.5;
  VirtualPoint vp;
  vp.d = Vec3(1, 2, 3);
  EXPECT_EQ(tracking_input(vp, vp.d, p, 0.02).u, Vec3::Zero());
}

TEST(Tracking, ProportionalOnly) {
  SwarmParams p;
  p.K_P = 2.5;
  VirtualPoint vp;
  const Vec3 target(1, -2, 0.5);
  auto r = tracking_input(vp, target, p, 0.02);
  for (int k = 0; k < 5; ++k) r = tracking_input(r.vp, target, p, 0.02);
  EXPECT_LT((r.u - p.K_P * target).norm(), 1e-15);
}

// Scalar PI loop: d' = u, u = K_P e + K_I I, with the integral advanced by
// the trapezoidal rule after a rectangular first step.
TEST(Tracking, StepResponseMatchesScalarRecurrence) {
  SwarmParams p;
  p.K_P = 1.0;
  p.K_I = 0.1;
  p.K_D = 0.0;
  p.vp_max_speed = 100.0;
  const double dt = 0.02;
  WorldState w = world_of({Vec3(0, 0, 0)});
  w.targets[0] = Vec3(1, 0, 0);
  double d = 0.0, integral = 0.0, prev = 0.0;
  bool first = true;
  double settle = -1.0;
  for (int k = 0; k < 5000; ++k) {
    const double e = 1.0 - d;
    integral += first ? dt * e : 0.5 * dt * (e + prev);
    integral = std::clamp(integral, -10.0, 10.0);
    prev = e;
    first = false;
    d += dt * (p.K_P * e + p.K_I * integral);
    w.vps[0] = vp_step(0, w, TermMask{false, false, true}, p, dt);
    ASSERT_NEAR(w.vps[0].d.x(), d, 1e-12) << "step " << k;
    EXPECT_EQ(w.vps[0].d.y(), 0.0);
    const double err = std::abs(1.0 - w.vps[0].d.x());
    if (err >= 1e-3) settle = -1.0;
    else if (settle < 0.0) settle = (k + 1) * dt;
  }
  // The slow closed-loop pole sits at about 0.113 1/s for these gains.
  ASSERT_GT(settle, 0.0);
  EXPECT_LT(settle, 60.0);
}

// --------------------------------------------------------------- vp_step

TEST(VpStep, NoTermsNoMotion) {
  SwarmParams p;
  WorldState w = world_of({Vec3(1, 2, 0)});
  const VirtualPoint v = vp_step(0, w, TermMask{}, p, 0.02);
  EXPECT_EQ(v.d, w.vps[0].d);
  EXPECT_EQ(v.last_velocity, Vec3::Zero());
  EXPECT_THROW(vp_step(0, w, TermMask{}, p, 0.0), InputError);
}

TEST(VpStep, TrackingMovesAlongTargetLine) {
  SwarmParams p;
  WorldState w = world_of({Vec3(0, 0, 0)});
  const Vec3 dir = Vec3(3, 4, 0).normalized();
  for (int k = 0; k < 200; ++k) {
    w.targets[0] = dir * (0.01 * k + 1.0);
    w.vps[0] = vp_step(0, w, TermMask{false, false, true}, p, 0.02);
    const Vec3 d = w.vps[0].d;
    EXPECT_LT((d - d.dot(dir) * dir).norm(), 1e-12);
  }
  EXPECT_GT(w.vps[0].d.norm(), 1.0);
}

TEST(VpStep, SpeedIsSaturated) {
  SwarmParams p;
  WorldState w = world_of({Vec3(0, 0, 0)});
  w.targets[0] = Vec3(50, 0, 0);
  const VirtualPoint v = vp_step(0, w, TermMask{false, false, true}, p, 0.02);
  EXPECT_NEAR(v.last_velocity.norm(), p.vp_max_speed, 1e-12);
}

TEST(VpStep, StartsAtRobotPosition) {
  const RobotState r = uav_at(Vec3(1, -2, -3));
  EXPECT_EQ(make_vp(r).d, r.position);
  EXPECT_EQ(make_vp(r).integral_error, Vec3::Zero());
}

// ---------------------------------------------------------------- robots

TEST(Robots, FixedPointAtVp) {
  UavParams uav;
  UgvParams ugv;
  WorldState w;
  w.robots = {uav_at(Vec3(1, 2, -3)), ugv_at(4, 5, 0.3)};
  for (const auto& r : w.robots) w.vps.push_back(make_vp(r));
  w.targets = {Vec3::Zero(), Vec3::Zero()};
  for (std::size_t i = 0; i < 2; ++i) {
    const RobotState s = robot_track_vp(i, w, uav, ugv, 0.02);
    EXPECT_LT((s.position - w.robots[i].position).norm(), 1e-12);
    EXPECT_LT(s.velocity.norm(), 1e-12);
  }
}

TEST(Robots, HoverThrustEqualsWeight) {
  UavParams p;
  p.mass = 1.3;
  const RobotState r = uav_at(Vec3(0, 0, -3));
  const UavCommand c = uav_command(r, r.position, p);
  EXPECT_NEAR(c.thrust, p.mass * p.gravity, 1e-12);
  EXPECT_LT((c.axis - Vec3(0, 0, 1)).norm(), 1e-15);
}

TEST(Robots, UgvAheadDrivesStraight) {
  UgvParams p;
  const RobotState r = ugv_at(0, 0, 0.7);
  const Vec3 vp(2.0 * std::cos(0.7), 2.0 * std::sin(0.7), 0.0);
  const UgvCommand c = ugv_command(r, vp, p);
  EXPECT_NEAR(c.omega, 0.0, 1e-12);
  EXPECT_GT(c.nu, 0.0);
  EXPECT_LE(c.nu, p.nu_max);
}

// Unsaturated thrust realizes the commanded acceleration exactly, held
// constant over the step.
TEST(Robots, UavStepMatchesSecondOrderRecurrence) {
  UavParams uav;
  UgvParams ugv;
  WorldState w;
  w.robots = {uav_at(Vec3(0, 0, -3))};
  w.vps = {make_vp(w.robots[0])};
  w.vps[0].d = Vec3(1, -0.5, -3.5);
  w.targets = {w.vps[0].d};
  const double dt = 0.02;
  Vec3 x = w.robots[0].position, v = Vec3::Zero();
  double last_err = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 1500; ++k) {
    for (int a = 0; a < 3; ++a) {
      const double acc = uav.kp * (w.vps[0].d[a] - x[a]) - uav.kd * v[a];
      x[a] += v[a] * dt + 0.5 * acc * dt * dt;
      v[a] += acc * dt;
    }
    w.robots[0] = robot_track_vp(0, w, uav, ugv, dt);
    ASSERT_LT((w.robots[0].position - x).norm(), 1e-9) << "step " << k;
    const double err = (w.robots[0].position - w.vps[0].d).norm();
    if (k > 10) EXPECT_LE(err, last_err + 1e-15) << "step " << k;
    last_err = err;
  }
  EXPECT_LT(last_err, 1e-6);
}

TEST(Robots, UavStaysAboveGround) {
  UavParams uav;
  UgvParams ugv;
  WorldState w;
  w.robots = {uav_at(Vec3(0, 0, -0.01))};
  w.vps = {make_vp(w.robots[0])};
  w.vps[0].d = Vec3(0, 0, 2.0);   // below ground
  w.targets = {w.vps[0].d};
  for (int k = 0; k < 500; ++k) {
    w.robots[0] = robot_track_vp(0, w, uav, ugv, 0.02);
    ASSERT_GE(w.robots[0].height(), 0.0);
  }
}

TEST(UgvDynamics, RestWithoutInput) {
  UgvParams p;
  const RobotState s = ugv_at(1, 2, 0.4);
  const RobotState n = ugv_dynamics_step(s, {0.0, 0.0}, p, 0.02);
  EXPECT_EQ(n.position, s.position);
  EXPECT_EQ(n.heading, s.heading);
}

TEST(UgvDynamics, LinearSpeedGrowsWithSlopeForceOverMass) {
  UgvParams p;
  RobotState s = ugv_at(0, 0, 0.0);
  const double mu = 3.0;
  for (int k = 1; k <= 100; ++k) {
    s = ugv_dynamics_step(s, {mu, 0.0}, p, 0.01);
    EXPECT_NEAR(s.nu, mu / p.mass * 0.01 * k, 1e-12);
    EXPECT_EQ(s.omega, 0.0);
  }
  EXPECT_NEAR(s.position.x(), 0.5 * mu / p.mass, 1e-9);
}

TEST(UgvDynamics, CircleRadiusMatchesClosedForm) {
  UgvParams p;
  RobotState s = ugv_at(0, 0, 0.0);
  s.nu = 0.8;
  s.omega = 0.4;
  const double radius = s.nu / s.omega;
  const Vec3 centre(0.0, radius, 0.0);
  double worst = 0.0;
  for (int k = 0; k < 5000; ++k) {
    s = ugv_dynamics_step(s, {0.0, 0.0}, p, 0.01);
    worst = std::max(worst, std::abs((s.position - centre).norm() - radius) / radius);
  }
  EXPECT_LT(worst, 1e-3);
}

TEST(UgvDynamics, RejectsBadInertia) {
  UgvParams p;
  p.inertia = 0.0;
  EXPECT_THROW(ugv_dynamics_step(ugv_at(0, 0), {0.0, 0.0}, p, 0.01), ConfigError);
}

// ----------------------------------------------------------------- mixer

Eigen::Matrix4d mixer_matrix(const MixerParams& p) {
  Eigen::Matrix4d m;
  m << p.kappa, p.kappa, p.kappa, p.kappa,
       0.0, -p.L, 0.0, p.L,
       p.L, 0.0, -p.L, 0.0,
       p.beta, -p.beta, p.beta, -p.beta;
  return m;
}

TEST(Mixer, SymmetricHover) {
  MixerParams p;
  const auto w = mixer_inverse({4.0, 0.0, 0.0, 0.0}, p);
  for (double v : w) EXPECT_DOUBLE_EQ(v, 1.0);
  const auto f = mixer({1.0, 1.0, 1.0, 1.0}, p);
  EXPECT_DOUBLE_EQ(f[0], 4.0);
  EXPECT_DOUBLE_EQ(f[1], 0.0);
  EXPECT_DOUBLE_EQ(f[2], 0.0);
  EXPECT_DOUBLE_EQ(f[3], 0.0);
}

TEST(Mixer, InverseRoundTripAgainstLinearSolve) {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_real_distribution<double> c(0.2, 3.0);
  for (int n = 0; n < 1000; ++n) {
    MixerParams p{c(rng), c(rng), c(rng)};
    const std::array<double, 4> w2 = {u(rng), u(rng), u(rng), u(rng)};
    const auto f = mixer(w2, p);
    const Eigen::Matrix4d m = mixer_matrix(p);
    const Eigen::Vector4d wv(w2[0], w2[1], w2[2], w2[3]);
    const Eigen::Vector4d fv = m * wv;
    const auto back = mixer_inverse(f, p);
    const Eigen::Vector4d solved = m.fullPivLu().solve(Eigen::Vector4d(f[0], f[1], f[2], f[3]));
    for (int k = 0; k < 4; ++k) {
      EXPECT_NEAR(f[k], fv[k], 1e-12 * (1.0 + std::abs(fv[k])));
      EXPECT_NEAR(back[k], w2[k], 1e-12 * 10.0);
      EXPECT_NEAR(back[k], solved[k], 1e-12 * 10.0);
    }
  }
}

TEST(Mixer, NegativeDemandNamesChannel) {
  MixerParams p;
  // Strong roll torque on the w4 - w2 axis with little thrust.
  try {
    mixer_inverse({1.0, 3.0, 0.0, 0.0}, p);
    FAIL() << "expected ActuatorInfeasible";
  } catch (const ActuatorInfeasible& e) {
    EXPECT_EQ(e.channel(), 2);
  }
  try {
    mixer_inverse({1.0, 0.0, -3.0, 0.0}, p);
    FAIL() << "expected ActuatorInfeasible";
  } catch (const ActuatorInfeasible& e) {
    EXPECT_EQ(e.channel(), 1);
  }
}

// ------------------------------------------------------------------- RK4

TEST(Rk4, ZeroFieldKeepsState) {
  EXPECT_EQ(rk4_step_scalar([](double) { return 0.0; }, 1.25, 0.1), 1.25);
}

TEST(Rk4, ExponentialGrowth) {
  double x = 1.0;
  for (int k = 0; k < 100; ++k) x = rk4_step_scalar([](double y) { return y; }, x, 0.01);
  EXPECT_NEAR(x, std::exp(1.0), 1e-8);
}

TEST(Rk4, FourthOrderConvergence) {
  auto global_error = [](int steps) {
    const double dt = 1.0 / steps;
    double x = 1.0;
    for (int k = 0; k < steps; ++k) x = rk4_step_scalar([](double y) { return -y; }, x, dt);
    return std::abs(x - std::exp(-1.0));
  };
  for (int n : {10, 20, 40}) {
    const double ratio = global_error(n) / global_error(2 * n);
    EXPECT_NEAR(ratio, 16.0, 2.0) << n;
  }
}

TEST(Rk4, NonFiniteDerivativeIsAFault) {
  EXPECT_THROW(rk4_step_scalar([](double y) { return std::log(y - 2.0); }, 1.0, 0.1),
               SimulationFault);
}

TEST(WrapAngle, StaysInRange) {
  for (double a = -20.0; a < 20.0; a += 0.37) {
    const double w = wrap_angle(a);
    EXPECT_GE(w, -kPi);
    EXPECT_LT(w, kPi);
    EXPECT_NEAR(std::remainder(w - a, 2.0 * kPi), 0.0, 1e-12);
  }
}

TEST(Params, Validation) {
  SwarmParams s;
  s.d_min = 2.0;
  EXPECT_THROW(s.validate(), ConfigError);
  UavParams u;
  u.thrust_max = 5.0;
  EXPECT_THROW(u.validate(), ConfigError);
  UgvParams g;
  g.nu_max = 0.0;
  EXPECT_THROW(g.validate(), ConfigError);
  EXPECT_NO_THROW(SwarmParams{}.validate());
}

}  // namespace
}  // namespace fieldsup
