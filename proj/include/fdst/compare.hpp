#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fdst/greedy.hpp"

namespace fdst {

struct VariableDeviation {
    std::string name;  // z1..zr, zL, zF, zM/r
    double sup = 0.0;
};

/// Sup-norm deviation of an empirical trajectory from a reference series,
/// evaluated at the empirical sample times within the reference's range.
/// The reference is linearly interpolated. z_M is compared after dividing
/// by r. Throws InvalidInput when r differs or either series is empty.
std::vector<VariableDeviation> trajectory_deviation(const Trajectory& empirical,
                                                    const Trajectory& reference);

/// Linear interpolation of the reference at x (clamped to its range).
TrajectorySample interpolate(const Trajectory& reference, double x);

/// Rows "x,<empirical columns>,<reference columns>" at the empirical sample
/// times, for overlay plots.
void write_merged_csv(std::ostream& out, const Trajectory& empirical, const Trajectory& reference);

}  // namespace fdst
