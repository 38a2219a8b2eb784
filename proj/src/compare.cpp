#include "fdst/compare.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "fdst/errors.hpp"

namespace fdst {

namespace {

void check_pair(const Trajectory& a, const Trajectory& b) {
    if (a.r != b.r) {
        throw InvalidInput("trajectories have different r (" + std::to_string(a.r) + " vs " +
                           std::to_string(b.r) + ")");
    }
    if (a.samples.empty() || b.samples.empty()) throw InvalidInput("empty trajectory");
}

std::vector<double> columns(const TrajectorySample& s, int r) {
    std::vector<double> v(s.z.begin(), s.z.end());
    v.push_back(s.z_leaf);
    v.push_back(s.z_full);
    v.push_back(s.z_points / r);
    return v;
}

}  // namespace

TrajectorySample interpolate(const Trajectory& reference, double x) {
    const auto& rows = reference.samples;
    if (rows.empty()) throw InvalidInput("empty trajectory");
    if (x <= rows.front().x) return rows.front();
    if (x >= rows.back().x) return rows.back();
    const auto hi = std::lower_bound(rows.begin(), rows.end(), x,
                                     [](const TrajectorySample& s, double v) { return s.x < v; });
    const auto lo = hi - 1;
    const double span = hi->x - lo->x;
    const double w = span > 0 ? (x - lo->x) / span : 0.0;
    auto mix = [w](double a, double b) { return a + w * (b - a); };
    TrajectorySample out;
    out.x = x;
    out.z.resize(lo->z.size());
    for (std::size_t i = 0; i < out.z.size(); ++i) out.z[i] = mix(lo->z[i], hi->z[i]);
    out.z_leaf = mix(lo->z_leaf, hi->z_leaf);
    out.z_full = mix(lo->z_full, hi->z_full);
    out.z_points = mix(lo->z_points, hi->z_points);
    out.phase = w < 0.5 ? lo->phase : hi->phase;
    return out;
}

std::vector<VariableDeviation> trajectory_deviation(const Trajectory& empirical,
                                                    const Trajectory& reference) {
    check_pair(empirical, reference);
    const int r = empirical.r;
    std::vector<VariableDeviation> out;
    for (int i = 1; i <= r; ++i) out.push_back({"z" + std::to_string(i), 0.0});
    out.push_back({"zL", 0.0});
    out.push_back({"zF", 0.0});
    out.push_back({"zM/r", 0.0});

    const double x_end = reference.samples.back().x;
    for (const TrajectorySample& s : empirical.samples) {
        if (s.x > x_end) break;
        const auto emp = columns(s, r);
        const auto ref = columns(interpolate(reference, s.x), r);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i].sup = std::max(out[i].sup, std::abs(emp[i] - ref[i]));
        }
    }
    return out;
}

void write_merged_csv(std::ostream& out, const Trajectory& empirical, const Trajectory& reference) {
    check_pair(empirical, reference);
    const int r = empirical.r;
    std::vector<std::string> names;
    for (int i = 1; i <= r; ++i) names.push_back("z" + std::to_string(i));
    names.insert(names.end(), {"zL", "zF", "zM"});

    const auto old_precision = out.precision(12);
    out << "x";
    for (const auto& n : names) out << ",sim_" << n;
    for (const auto& n : names) out << ",ode_" << n;
    out << '\n';
    auto emit = [&](const TrajectorySample& s) {
        for (double z : s.z) out << ',' << z;
        out << ',' << s.z_leaf << ',' << s.z_full << ',' << s.z_points;
    };
    for (const TrajectorySample& s : empirical.samples) {
        out << s.x;
        emit(s);
        emit(interpolate(reference, s.x));
        out << '\n';
    }
    out.precision(old_precision);
}

}  // namespace fdst
