#pragma once

// Analytic trajectory synthesis through a directed corridor sequence:
// intermediate turning circles, tangent segments and bang-bang unicycle
// primitives (rotate in place, arc, straight).

#include <string>
#include <vector>

#include "corridor/decomposition.hpp"
#include "corridor/geometry.hpp"
#include "corridor/route.hpp"

namespace corridor {

struct Limits {
  double v_max = 0.5;
  double omega_max = 2.0;
  double rho() const { return v_max / omega_max; }
};

class NarrowTransition : public PlanningError {
 public:
  explicit NarrowTransition(int j);
  int index;
};

class TangentInfeasible : public PlanningError {
 public:
  TangentInfeasible(int a, int b);
  int a, b;
};

class PlanFailed : public PlanningError {
 public:
  using PlanningError::PlanningError;
};

enum class PrimKind { T, C, S };
const char* to_string(PrimKind k);

struct Primitive {
  PrimKind kind = PrimKind::S;
  int sign = 0;  // +1 counterclockwise, -1 clockwise, 0 for S
  double duration = 0.0;
  Pose start;
  Vec2 center;        // C only
  double swept = 0.0;  // C, T: signed heading change
  double length = 0.0; // S, C: path length

  double v(const Limits& lim) const { return kind == PrimKind::T ? 0.0 : lim.v_max; }
  double omega(const Limits& lim) const { return kind == PrimKind::S ? 0.0 : sign * lim.omega_max; }
  /// Closed-form state after `t` seconds (clamped to the duration).
  Pose state_at(double t, const Limits& lim) const;
  Pose end(const Limits& lim) const { return state_at(duration, lim); }
};

struct Circle {
  Vec2 center;
  int sign = 1;                // +1 counterclockwise
  int pair = -1;               // index j of the corridor pair (s_j, s_j+1)
  std::vector<int> corridors;  // corridors whose union must hold the disk
  std::vector<int> merged_from;
};

struct Trajectory {
  std::vector<Primitive> primitives;
  double total_time = 0.0;
  Pose start, goal;
  std::vector<Circle> circles;  // circles left after elimination
  int initial_circles = 0;
  int eliminated = 0;
  int merged = 0;
  bool fallback = false;  // built by waypoint_trajectory
};

/// Directed line segment.
struct Tangent {
  Vec2 from, to;
  Vec2 dir;  // unit travel direction
  double length = 0.0;
  bool ok = true;
};

/// Common tangent leaving circle a and arriving on circle b, both of radius r.
Tangent circle_tangent(Vec2 ca, int sa, Vec2 cb, int sb, double r);
/// Straight line from point p arriving tangentially on circle (c, s).
Tangent point_to_circle(Vec2 p, Vec2 c, int s, double r);
/// Straight line leaving circle (c, s) tangentially and ending at point g.
Tangent circle_to_point(Vec2 c, int s, Vec2 g, double r);

/// True when the disk lies in the union of the rectangles (64 boundary samples plus center).
bool disk_in_union(Vec2 center, double r, const std::vector<const Rectangle*>& rects);

/// One circle per consecutive corridor pair, merged where too close.
std::vector<Circle> place_circles(const std::vector<DirectedCorridor>& seq, const CorridorGraph& cg, Pose start,
                                  Pose goal, const Limits& lim, int* merged = nullptr);

enum class EndChoice { Rotate, ArcCCW, ArcCW };

struct SynthOptions {
  bool free_goal_heading = false;
  bool eliminate = true;
  double containment_spacing = 0.01;  // meters, for choosing among candidates
};

/// Primitive sequence through fixed circles with the given start/goal maneuvers.
/// Returns an empty trajectory when a tangent is infeasible.
Trajectory assemble(const std::vector<Circle>& circles, Pose start, Pose goal, const Limits& lim, EndChoice start_choice,
                    EndChoice goal_choice, bool free_goal_heading);

/// Removes circles whose incoming and outgoing segments cross until none remain.
Trajectory eliminate_crossings(std::vector<Circle> circles, Pose start, Pose goal, const Limits& lim,
                               EndChoice start_choice, EndChoice goal_choice, bool free_goal_heading);

Trajectory synthesize(const std::vector<DirectedCorridor>& seq, const CorridorGraph& cg, Pose start, Pose goal,
                      const Limits& lim, const SynthOptions& opts = {});

/// Rotate-and-translate trajectory along a polyline: (T S)* T. Stays on the
/// polyline, so it is contained wherever the polyline is.
Trajectory waypoint_trajectory(const std::vector<Vec2>& waypoints, Pose start, Pose goal, const Limits& lim,
                               bool free_goal_heading);

struct Sample {
  double t, x, y, theta, v, omega;
};

/// Closed-form samples every `dt` seconds plus the exact final state.
std::vector<Sample> sample(const Trajectory& traj, const Limits& lim, double dt);
/// Samples at a fixed arc-length spacing; rotations contribute their endpoints.
std::vector<Sample> sample_spacing(const Trajectory& traj, const Limits& lim, double spacing);

/// Integrates the unicycle model under the primitive controls with RK4.
Pose rk4_replay(const Trajectory& traj, const Limits& lim, double dt);

struct ValidationReport {
  double max_control_violation = 0.0;
  double max_exit_distance = 0.0;   // over samples, to the corridor union
  double max_junction_residual = 0.0;
  double end_position_error = 0.0;
  double end_heading_error = 0.0;
  double rk4_error = 0.0;
  std::size_t samples = 0;
  bool ok(double tol_pos = 1e-6, double tol_heading = 1e-6) const {
    return max_control_violation == 0.0 && max_exit_distance <= 1e-9 && max_junction_residual < 1e-9 &&
           end_position_error < tol_pos && end_heading_error < tol_heading && rk4_error < tol_pos;
  }
};

struct ValidateOptions {
  double spacing = 0.01;
  double rk4_dt = 1e-4;
  bool check_heading = true;
};

ValidationReport validate(const Trajectory& traj, const std::vector<Rectangle>& corridors, const Limits& lim,
                          const ValidateOptions& opts = {});

}  // namespace corridor
