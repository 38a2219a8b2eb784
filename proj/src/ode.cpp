#include "fdst/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fdst/errors.hpp"

namespace fdst {

namespace {

void check_state(int r, const StateVector& s) {
    if (r < 3 || s.r != r || s.z.size() != static_cast<std::size_t>(r + 3)) {
        throw InvalidInput("state vector does not match r=" + std::to_string(r));
    }
    if (!(s.points() > kPointFloor)) {
        throw SingularityError("z_M = " + std::to_string(s.points()) + " below floor at x = " +
                               std::to_string(s.x));
    }
}

template <class Field>
StateVector rk4_step(const Field& field, int r, const StateVector& s, double h) {
    auto shifted = [&](const Derivative& k, double scale) {
        StateVector out = s;
        out.x = s.x + scale;
        for (std::size_t i = 0; i < out.z.size(); ++i) out.z[i] += scale * k[i];
        return out;
    };
    const Derivative k1 = field(r, s);
    const Derivative k2 = field(r, shifted(k1, h / 2));
    const Derivative k3 = field(r, shifted(k2, h / 2));
    const Derivative k4 = field(r, shifted(k3, h));
    StateVector out = s;
    out.x = s.x + h;
    for (std::size_t i = 0; i < out.z.size(); ++i) {
        out.z[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        if (out.z[i] < 0 && out.z[i] > -kClipThreshold) out.z[i] = 0;
    }
    return out;
}

/// Integrates until event(state) crosses from positive to <= 0 after
/// armed(state) first holds. The end state has its event coordinate set to 0.
template <class Field, class Event, class Armed>
PhaseSolution integrate_phase(int phase, int r, const Field& field, StateVector state,
                              const IntegrationOptions& opt, const Event& event, int event_index,
                              const Armed& armed) {
    PhaseSolution sol;
    sol.phase = phase;
    sol.grid.push_back(state);
    bool is_armed = armed(state);
    long long count = 0;
    for (;;) {
        if (state.points() <= kPointFloor || state.outside_points() <= kPointFloor) {
            throw SingularityError("phase " + std::to_string(phase) +
                                   " event not reached before the point floor (x = " +
                                   std::to_string(state.x) + ")");
        }
        StateVector next = rk4_step(field, r, state, opt.step);
        if (is_armed && event(next) <= 0) {
            double lo = 0.0;
            double hi = opt.step;
            while (hi - lo > opt.event_tol) {
                const double mid = 0.5 * (lo + hi);
                if (event(rk4_step(field, r, state, mid)) > 0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            StateVector end = rk4_step(field, r, state, hi);
            end.z[event_index] = 0.0;
            sol.rho = end.x;
            sol.grid.push_back(end);
            sol.end_state = std::move(end);
            return sol;
        }
        state = std::move(next);
        is_armed = is_armed || armed(state);
        if (++count % opt.record_stride == 0) sol.grid.push_back(state);
    }
}

}  // namespace

StateVector StateVector::initial(int r) {
    StateVector s(r);
    s.untouched(r) = 1.0;
    s.points() = r;
    return s;
}

double StateVector::outside_points() const {
    double total = 0.0;
    for (int i = 1; i <= r; ++i) total += i * untouched(i);
    return total;
}

Derivative deriv_op1(int r, const StateVector& s) {
    check_state(r, s);
    const double m = s.points();
    const double q = s.outside_points() / m;
    const double all_outside = std::pow(q, r - 2);  // remaining r-2 points miss the forest
    Derivative d(r + 3, 0.0);
    for (int i = 1; i < r; ++i) {
        d[i - 1] = (r - 1) * (-i * s.untouched(i) / m +
                              (i + 1) * s.untouched(i + 1) / m * (1 - all_outside));
    }
    d[r - 1] = (r - 1) * (-r * s.untouched(r) / m);
    d[r] = -1 + (r - 1) * (-(r - 1) * s.leaf() / m + r * s.untouched(r) / m * all_outside);
    d[r + 1] = std::pow(q, r - 1);
    d[r + 2] = -2.0 * (r - 1);
    return d;
}

Derivative deriv_op2(int r, const StateVector& s) {
    check_state(r, s);
    const double m = s.points();
    const double q = s.outside_points() / m;
    // Success probability given that one revealed point already landed outside.
    const double p_success = std::pow(q, r - 1) + (r - 1) * std::pow(q, r - 2) * (1 - q);
    Derivative d(r + 3, 0.0);
    for (int i = 1; i < r; ++i) {
        d[i - 1] = r * (-i * s.untouched(i) / m + (i + 1) * s.untouched(i + 1) / m * (1 - p_success));
    }
    d[r - 1] = -1 + r * (-r * s.untouched(r) / m);
    d[r] = r * (-(r - 1) * s.leaf() / m + r * s.untouched(r) / m * p_success);
    d[r + 1] = std::pow(q, r) + r * std::pow(q, r - 1) * (1 - q);
    d[r + 2] = -2.0 * r;
    return d;
}

double blend_weight(int r, const StateVector& s) {
    const double alpha = deriv_op2(r, s)[r];
    const double tau = -deriv_op1(r, s)[r];
    if (!(tau > 0) || !(tau + alpha > 0)) {
        std::string snapshot;
        for (double v : s.z) snapshot += " " + std::to_string(v);
        throw BlendDegenerate("phase-2 weight undefined (tau=" + std::to_string(tau) +
                              ", alpha=" + std::to_string(alpha) + ") at x=" +
                              std::to_string(s.x) + ", z =" + snapshot);
    }
    return alpha / (tau + alpha);
}

Derivative blend_phase2(int r, const StateVector& s) {
    const Derivative leaf_step = deriv_op1(r, s);
    const Derivative untouched_step = deriv_op2(r, s);
    const double alpha = untouched_step[r];
    const double tau = -leaf_step[r];
    if (!(tau > 0) || !(tau + alpha > 0)) blend_weight(r, s);  // throws with snapshot
    const double p = alpha / (tau + alpha);
    Derivative d(r + 3);
    for (int i = 0; i < r + 3; ++i) d[i] = p * leaf_step[i] + (1 - p) * untouched_step[i];
    return d;
}

TrajectoryResult integrate_two_phase(int r, const IntegrationOptions& opt) {
    if (r < 3) throw InvalidInput("the trajectory system needs r >= 3, got " + std::to_string(r));
    if (!(opt.step > 0) || !(opt.event_tol > 0) || opt.record_stride < 1) {
        throw InvalidInput("step, event tolerance and record stride must be positive");
    }

    const int leaf = r;
    const int top = r - 1;
    TrajectoryResult res;
    res.r = r;
    res.u_r = 1.0 / (r - 1);

    res.phase1 = integrate_phase(
        1, r, deriv_op1, StateVector::initial(r), opt,
        [&](const StateVector& s) { return s.z[leaf]; }, leaf,
        [&](const StateVector& s) { return s.z[leaf] > kLeafArmThreshold; });
    res.rho1 = res.phase1.rho;
    res.phase1_end_state = res.phase1.end_state;

    res.phase2 = integrate_phase(
        2, r, blend_phase2, res.phase1_end_state, opt,
        [&](const StateVector& s) { return s.z[top]; }, top,
        [](const StateVector&) { return true; });
    res.rho2 = res.phase2.rho;
    res.f_r = res.phase2.end_state.full();
    return res;
}

Phase1ClosedForm analytic_phase1(int r, double x) {
    if (r < 3) throw InvalidInput("closed forms need r >= 3");
    const double x_max = r / (2.0 * (r - 1));
    if (!(x >= 0) || x > x_max) {
        throw InvalidInput("x = " + std::to_string(x) + " outside [0, " + std::to_string(x_max) + "]");
    }
    const double base = std::max(0.0, 1 - 2.0 * (r - 1) * x / r);
    return {r - 2.0 * (r - 1) * x, std::pow(base, r / 2.0)};
}

Trajectory to_trajectory(const TrajectoryResult& result) {
    Trajectory traj;
    traj.r = result.r;
    const int r = result.r;
    auto append = [&](const PhaseSolution& phase, std::size_t skip) {
        for (std::size_t k = skip; k < phase.grid.size(); ++k) {
            const StateVector& s = phase.grid[k];
            TrajectorySample row;
            row.x = s.x;
            row.z.assign(s.z.begin(), s.z.begin() + r);
            row.z_leaf = s.leaf();
            row.z_full = s.full();
            row.z_points = s.points();
            row.phase = phase.phase;
            traj.samples.push_back(std::move(row));
        }
    };
    append(result.phase1, 0);
    // Phase 2 starts at the phase-1 end point, already emitted.
    append(result.phase2, 1);
    return traj;
}

}  // namespace fdst
