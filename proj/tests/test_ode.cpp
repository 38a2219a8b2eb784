#include <doctest.h>

#include <cmath>

#include "fdst/errors.hpp"
#include "fdst/ode.hpp"
#include "fdst/published_values.hpp"

using namespace fdst;

TEST_CASE("derivatives at the initial state, r = 3") {
    const StateVector s = StateVector::initial(3);
    CHECK(s.untouched(3) == 1.0);
    CHECK(s.points() == 3.0);
    CHECK(s.outside_points() == 3.0);

    const Derivative d1 = deriv_op1(3, s);
    REQUIRE(d1.size() == 6);
    CHECK(d1[4] == doctest::Approx(1.0));   // F
    CHECK(d1[3] == doctest::Approx(1.0));   // L: -1 + 2 new leaves
    CHECK(d1[5] == doctest::Approx(-4.0));  // M
    CHECK(d1[2] == doctest::Approx(-2.0));  // z_3
    CHECK(d1[0] == doctest::Approx(0.0));
    CHECK(d1[1] == doctest::Approx(0.0));

    const Derivative d2 = deriv_op2(3, s);
    CHECK(d2[5] == doctest::Approx(-6.0));
    CHECK(d2[4] == doctest::Approx(1.0));
}

TEST_CASE("derivatives: point mass is conserved in every coordinate") {
    // dM equals the change of points held outside plus leaf/processed points.
    for (int r = 3; r <= 6; ++r) {
        StateVector s(r);
        s.x = 0.2;
        for (int i = 1; i <= r; ++i) s.untouched(i) = 0.05 * i;
        s.leaf() = 0.1;
        s.full() = 0.1;
        s.points() = s.outside_points() + (r - 1) * s.leaf() + 0.05;
        CHECK(deriv_op1(r, s)[r + 2] == doctest::Approx(-2.0 * (r - 1)));
        CHECK(deriv_op2(r, s)[r + 2] == doctest::Approx(-2.0 * r));
    }
}

TEST_CASE("singular and degenerate states") {
    StateVector s = StateVector::initial(3);
    s.points() = 0.0;
    CHECK_THROWS_AS(deriv_op1(3, s), SingularityError);
    CHECK_THROWS_AS(deriv_op2(3, s), SingularityError);
    // At x = 0 the leaf step gains leaves, so no blend keeps z_L at zero.
    CHECK_THROWS_AS(blend_weight(3, StateVector::initial(3)), BlendDegenerate);
    CHECK_THROWS_AS(blend_phase2(3, StateVector::initial(3)), BlendDegenerate);
    CHECK_THROWS_AS(integrate_two_phase(2), InvalidInput);
    IntegrationOptions bad;
    bad.step = 0.0;
    CHECK_THROWS_AS(integrate_two_phase(3, bad), InvalidInput);
}

TEST_CASE("phase-2 blend") {
    for (int r : {3, 4, 7}) {
        const TrajectoryResult t = integrate_two_phase(r);
        const StateVector& s = t.phase1_end_state;
        const double p = blend_weight(r, s);
        CHECK(p > 0.0);
        CHECK(p < 1.0);
        const Derivative a = deriv_op1(r, s);
        const Derivative b = deriv_op2(r, s);
        const Derivative m = blend_phase2(r, s);
        for (std::size_t k = 0; k < m.size(); ++k) CHECK(m[k] == doctest::Approx(p * a[k] + (1 - p) * b[k]));
        CHECK(std::abs(m[r]) < 1e-12);
        // p = alpha / (tau + alpha) with tau = -dL(op1), alpha = dL(op2).
        CHECK(p == doctest::Approx(b[r] / (b[r] - a[r])));
    }
}

TEST_CASE("two-phase integration, r = 3 and r = 4") {
    namespace c = published::cubic;
    const TrajectoryResult t3 = integrate_two_phase(3);
    CHECK(std::abs(t3.rho1 - c::rho1) <= 5e-4);
    CHECK(std::abs(t3.rho2 - c::rho2) <= 5e-4);
    const StateVector& e3 = t3.phase1_end_state;
    CHECK(std::abs(e3.untouched(1) - c::z1) <= 5e-4);
    CHECK(std::abs(e3.untouched(2) - c::z2) <= 5e-4);
    CHECK(std::abs(e3.untouched(3) - c::z3) <= 5e-4);
    CHECK(std::abs(e3.leaf() - c::zL) <= 5e-4);
    CHECK(std::abs(e3.full() - c::zF) <= 5e-4);
    CHECK(std::abs(e3.points() - c::zM) <= 5e-4);
    CHECK(std::abs(t3.f_r - 0.4591) <= 1e-3);
    CHECK(t3.phase2.end_state.untouched(3) == 0.0);

    namespace q = published::quartic;
    const TrajectoryResult t4 = integrate_two_phase(4);
    CHECK(std::abs(t4.rho1 - q::rho1) <= 5e-4);
    CHECK(std::abs(t4.rho2 - q::rho2) <= 5e-4);
    const StateVector& e4 = t4.phase1_end_state;
    CHECK(std::abs(e4.untouched(1) - q::z1) <= 5e-4);
    CHECK(std::abs(e4.untouched(2) - q::z2) <= 5e-4);
    CHECK(std::abs(e4.untouched(3) - q::z3) <= 5e-4);
    CHECK(std::abs(e4.untouched(4) - q::z4) <= 5e-4);
    CHECK(std::abs(e4.leaf() - q::zL) <= 5e-4);
    CHECK(std::abs(e4.full() - q::zF) <= 5e-4);
    CHECK(std::abs(e4.points() - q::zM) <= 5e-4);
}

TEST_CASE("f_r for r = 3..10") {
    for (const auto& row : published::kBounds) {
        const TrajectoryResult t = integrate_two_phase(row.r);
        CHECK_MESSAGE(std::abs(t.f_r - row.f_r) <= 1e-3, "r = " << row.r << " f_r = " << t.f_r);
        CHECK(t.u_r == doctest::Approx(row.u_r).epsilon(1e-3));
        CHECK(t.rho1 < t.rho2);
    }
}

TEST_CASE("closed form while only leaves are processed") {
    for (int r = 3; r <= 8; ++r) {
        const Phase1ClosedForm at0 = analytic_phase1(r, 0.0);
        CHECK(at0.points == r);
        CHECK(at0.untouched == 1.0);
    }
    const Phase1ClosedForm c = analytic_phase1(3, 0.3);
    CHECK(c.points == doctest::Approx(1.8));
    CHECK(c.untouched == doctest::Approx(std::pow(0.6, 1.5)));
    CHECK_THROWS_AS(analytic_phase1(3, -0.1), InvalidInput);
    CHECK_THROWS_AS(analytic_phase1(3, 0.8), InvalidInput);

    for (int r : {3, 4, 5}) {
        const TrajectoryResult t = integrate_two_phase(r);
        double sup = 0.0;
        for (const StateVector& s : t.phase1.grid) {
            const Phase1ClosedForm f = analytic_phase1(r, s.x);
            sup = std::max({sup, std::abs(s.points() - f.points), std::abs(s.untouched(r) - f.untouched)});
        }
        CHECK(sup <= 1e-6);
    }
}

TEST_CASE("trajectory invariants") {
    const TrajectoryResult t = integrate_two_phase(3);
    for (const PhaseSolution* ph : {&t.phase1, &t.phase2}) {
        double last_x = -1.0;
        for (const StateVector& s : ph->grid) {
            CHECK(s.x > last_x);
            last_x = s.x;
            for (double v : s.z) CHECK(v >= 0.0);
        }
    }
    CHECK(t.phase2.grid.front().x == t.phase1.end_state.x);
    CHECK(t.phase1.end_state.leaf() == 0.0);
    // Phase 2 keeps z_L pinned at zero.
    double max_leaf = 0.0;
    for (const StateVector& s : t.phase2.grid) max_leaf = std::max(max_leaf, s.leaf());
    CHECK(max_leaf <= 1e-9);
    // z_M falls at exactly 2(r-1) per unit x in phase 1.
    const StateVector& a = t.phase1.grid[10];
    const StateVector& b = t.phase1.grid[1000];
    CHECK((a.points() - b.points()) / (b.x - a.x) == doctest::Approx(4.0).epsilon(1e-9));

    const Trajectory traj = to_trajectory(t);
    CHECK(traj.r == 3);
    CHECK(traj.samples.front().phase == 1);
    CHECK(traj.samples.back().phase == 2);
    CHECK(traj.samples.back().z_full == doctest::Approx(t.f_r));
}

TEST_CASE("step-size convergence") {
    IntegrationOptions half;
    half.step = 5e-6;
    const TrajectoryResult base = integrate_two_phase(3);
    const TrajectoryResult fine = integrate_two_phase(3, half);
    CHECK(std::abs(base.rho2 - fine.rho2) < 1e-6);
    CHECK(std::abs(base.f_r - fine.f_r) < 1e-6);

    // Observed order from three coarse steps against the default solution.
    auto err = [&](double h) {
        IntegrationOptions o;
        o.step = h;
        return std::abs(integrate_two_phase(3, o).rho2 - base.rho2);
    };
    const double e1 = err(4e-3), e2 = err(2e-3), e3 = err(1e-3);
    const double order_a = std::log2(e1 / e2);
    const double order_b = std::log2(e2 / e3);
    MESSAGE("observed orders " << order_a << ", " << order_b);
    CHECK(order_a >= 3.5);
    CHECK(order_b >= 3.5);
}
