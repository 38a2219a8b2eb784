#pragma once

// Fluid-limit trajectories of the greedy algorithm on random r-regular graphs.
//
// State coordinates, all scaled by n:
//   z_1 .. z_r   vertices outside the forest with i unrevealed points
//   z_L          live forest leaves
//   z_F          full-degree vertices
//   z_M          unrevealed configuration points
// Phase 1 follows the leaf-processing derivative alone until z_L returns to
// zero. Phase 2 mixes leaf and untouched-vertex steps with the weight that
// keeps z_L at zero, and ends when z_r hits zero. f_r = z_F at that time.

#include <utility>
#include <vector>

#include "fdst/greedy.hpp"

namespace fdst {

/// Smallest z_M at which the derivatives are still evaluated.
inline constexpr double kPointFloor = 1e-6;
/// z_L must exceed this before the phase-1 end event can fire.
inline constexpr double kLeafArmThreshold = 1e-4;
/// Negative roundoff smaller than this is clipped to zero after each step.
inline constexpr double kClipThreshold = 1e-12;

struct StateVector {
    int r = 0;
    double x = 0.0;
    std::vector<double> z;  // length r + 3: z_1..z_r, z_L, z_F, z_M

    StateVector() = default;
    explicit StateVector(int degree) : r(degree), z(degree + 3, 0.0) {}
    static StateVector initial(int r);

    double& untouched(int i) { return z[i - 1]; }
    double untouched(int i) const { return z[i - 1]; }
    double& leaf() { return z[r]; }
    double leaf() const { return z[r]; }
    double& full() { return z[r + 1]; }
    double full() const { return z[r + 1]; }
    double& points() { return z[r + 2]; }
    double points() const { return z[r + 2]; }
    /// Unrevealed points held by vertices outside the forest: sum of i * z_i.
    double outside_points() const;
};

using Derivative = std::vector<double>;

/// Expected one-step change per unit scaled time when processing a leaf.
Derivative deriv_op1(int r, const StateVector& s);
/// Same when processing an untouched vertex.
Derivative deriv_op2(int r, const StateVector& s);

/// Fraction p of leaf steps in phase 2: alpha / (tau + alpha), with alpha the
/// leaf gain of an untouched step and tau the leaf loss of a leaf step.
double blend_weight(int r, const StateVector& s);
Derivative blend_phase2(int r, const StateVector& s);

struct IntegrationOptions {
    double step = 1e-5;
    double event_tol = 1e-12;
    /// Keep every k-th grid point in the returned phase solutions.
    int record_stride = 1;
};

struct PhaseSolution {
    int phase = 1;
    std::vector<StateVector> grid;
    double rho = 0.0;
    StateVector end_state;
};

struct TrajectoryResult {
    int r = 0;
    double rho1 = 0.0;
    double rho2 = 0.0;
    double f_r = 0.0;
    double u_r = 0.0;
    StateVector phase1_end_state;
    PhaseSolution phase1;
    PhaseSolution phase2;
};

/// Classical fixed-step RK4 over both phases with bisection event location.
/// Throws InvalidInput for r < 3 or a non-positive step, SingularityError when
/// z_M (or the outside point mass) falls below kPointFloor before the event,
/// BlendDegenerate when the phase-2 weight is undefined.
TrajectoryResult integrate_two_phase(int r, const IntegrationOptions& options = {});

struct Phase1ClosedForm {
    double points;     // z_M(x) = r - 2(r-1)x
    double untouched;  // z_r(x) = (1 - 2(r-1)x/r)^(r/2)
};

/// Closed forms valid while only leaves are processed; x must lie in
/// [0, r / (2(r-1))].
Phase1ClosedForm analytic_phase1(int r, double x);

/// Dense solution as a trajectory (phase recorded per row), for CSV output
/// and comparison against simulations.
Trajectory to_trajectory(const TrajectoryResult& result);

}  // namespace fdst
