#pragma once

#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "amalgam/grid.hpp"

namespace amalgam {

// Strictly positive density sampled at cell centers. The role flag records
// whether the weight plays the measure part ("w") or the outer part ("mu")
// of a mixed-norm computation; the numerics do not depend on it.
struct Weight {
    enum class Role { Measure, Outer };

    ScalarField density;
    Role role = Role::Measure;

    struct Cache;
    std::shared_ptr<Cache> cache;
};

Weight make_weight(ScalarField density, Weight::Role role = Weight::Role::Measure);
Weight unit_weight(const Grid& g, Weight::Role role = Weight::Role::Measure);

// |x|^a sampled at cell centers; requires a > -n so balls around the origin
// carry finite mass. Cell centers never coincide with the origin.
Weight power_weight(double a, const Grid& g, Weight::Role role = Weight::Role::Measure);

// Finite surrogate for "for every ball": centers on a cell subgrid, radii
// log-spaced. All radii lie in [2h, extent].
struct BallFamily {
    std::vector<Ball> balls;
};

BallFamily make_ball_family(const Grid& g, int center_stride = 4, int radius_count = 12,
                            double r_min = 0.0, double r_max = 0.0);

// w(B) = integral of the density over B, cached per (center, radius).
RegionSum ball_measure(const Weight& w, const Ball& B);

// A_p characteristic over the family: for p > 1 the average / reverse-average
// product (avg_B w) * (avg_B w^(-1/(p-1)))^(p-1); for p = 1 the ratio of the
// ball average to the minimum cell sample.
double ap_characteristic(const Weight& w, double p, const BallFamily& F);

// max over the family of w(2B)/w(B); balls whose double exits the box are
// skipped, and an error is raised when none survive.
double doubling_constant(const Weight& w, const BallFamily& F);

// Ratios w(2^l B) / (2^(l n) w(B)) for l = 1..L.
std::vector<double> dilation_growth_check(const Weight& w, const Ball& B, int levels);

struct DeltaFit {
    double slope = 0.0;
    double residual = 0.0;
};

// Least-squares slope of log(w(E)/w(B)) against log(|E|/|B|) over the given
// subsets of B; needs at least two subsets.
DeltaFit comparison_delta(const Weight& w, const Ball& B, const std::vector<Ball>& subsets);

// Centered Hardy-Littlewood maximal function: at each cell the supremum over
// all radii of the average of |f| over B(x, r) (balls clipped to the box).
// Computed exactly by scanning cells in order of distance from the center.
ScalarField hl_maximal(const ScalarField& f);

}  // namespace amalgam
