#pragma once

#include <vector>

#include "amalgam/grid.hpp"
#include "amalgam/norms.hpp"
#include "amalgam/weights.hpp"

namespace amalgam {

struct BallAverage {
    double value = 0.0;
    bool degenerate = false;
};

// (1/|B|) integral_B b, via the cells whose centers lie in B.
BallAverage ball_average(const ScalarField& b, const Ball& B);

struct BMOReport {
    double seminorm = 0.0;
    std::vector<double> oscillations;  // one mean oscillation per family ball
};

// max over the family of (1/|B|) integral_B |b - b_B|. A family max is a
// lower bound on the true seminorm; all oscillation checks reuse the same
// family so measured constants stay internally consistent.
BMOReport bmo_seminorm(const ScalarField& b, const BallFamily& F);

struct OscillationGrowth {
    std::vector<double> values;  // |b_{2^(l+1)B} - b_B| for l = 1..L
    double slope =
        0.0;  // least-squares fit of values against (l + 1), through the origin
};

OscillationGrowth oscillation_growth(const ScalarField& b, const Ball& B, int levels);

// ((integral_B |b - b_B|^p w) / w(B))^(1/p), the quantity Lemma-style bounds
// compare to the seminorm.
double weighted_oscillation(const ScalarField& b, const Ball& B, const Weight& w, double p);

// Weighted Luxemburg norm of b - b_B against exp(t) - 1 on B.
double exp_norm_oscillation(const ScalarField& b, const Ball& B, const Weight& w);

// Trapezoid quadrature of (1/2pi) integral_0^2pi e^(e^(i theta) s) e^(-i theta)
// d theta, which recovers s with spectral accuracy in n_theta.
double cauchy_identity(double s, int n_theta);

}  // namespace amalgam
