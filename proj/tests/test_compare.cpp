#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "fdst/compare.hpp"
#include "fdst/errors.hpp"
#include "fdst/ode.hpp"

using namespace fdst;

namespace {

Trajectory line(int r, double slope, int rows) {
    Trajectory t{r, 1, {}};
    for (int k = 0; k < rows; ++k) {
        const double x = 0.1 * k;
        TrajectorySample s{x, std::vector<double>(r, slope * x), slope * x, slope * x, r * slope * x, 1};
        t.samples.push_back(s);
    }
    return t;
}

}  // namespace

TEST_CASE("trajectory_deviation") {
    const Trajectory ode = to_trajectory(integrate_two_phase(3));
    const auto self = trajectory_deviation(ode, ode);
    REQUIRE(self.size() == 6);
    CHECK(self[0].name == "z1");
    CHECK(self[3].name == "zL");
    CHECK(self[4].name == "zF");
    CHECK(self[5].name == "zM/r");
    for (const auto& d : self) CHECK(d.sup == 0.0);

    // Constant offset of 0.02 in every coordinate; z_M is compared per r.
    const Trajectory a = line(3, 1.0, 6);
    Trajectory b = a;
    for (auto& s : b.samples) {
        for (double& z : s.z) z += 0.02;
        s.z_leaf += 0.02;
        s.z_full += 0.02;
        s.z_points += 0.06;
    }
    for (const auto& d : trajectory_deviation(b, a)) CHECK(d.sup == doctest::Approx(0.02));

    CHECK_THROWS_AS(trajectory_deviation(line(3, 1.0, 4), line(4, 1.0, 4)), InvalidInput);
    CHECK_THROWS_AS(trajectory_deviation(Trajectory{3, 1, {}}, a), InvalidInput);
}

TEST_CASE("interpolate") {
    const Trajectory a = line(3, 2.0, 5);  // x in [0, 0.4]
    const TrajectorySample mid = interpolate(a, 0.25);
    CHECK(mid.x == doctest::Approx(0.25));
    CHECK(mid.z_full == doctest::Approx(0.5));
    CHECK(mid.z[1] == doctest::Approx(0.5));
    CHECK(interpolate(a, -1.0).z_full == doctest::Approx(0.0));
    CHECK(interpolate(a, 9.0).z_full == doctest::Approx(0.8));
}

TEST_CASE("merged CSV") {
    const Trajectory a = line(3, 1.0, 3);
    std::ostringstream out;
    write_merged_csv(out, a, a);
    const std::string text = out.str();
    CHECK(text.rfind("x,sim_z1,sim_z2,sim_z3,sim_zL,sim_zF,sim_zM,ode_z1,ode_z2,ode_z3,ode_zL,ode_zF,ode_zM\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}
