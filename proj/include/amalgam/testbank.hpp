#pragma once

#include <string>
#include <vector>

#include "amalgam/grid.hpp"

namespace amalgam {

// A candidate test function: samples of phi on a fine reference lattice over
// [-1,1]^n, supported in the closed unit ball, lattice mean zero, and with
// discrete Holder-gamma seminorm <= 1 (normalized to 1 - eps_margin).
struct TestFunction {
    double gamma = 1.0;
    ScalarField profile;
    std::string label;
};

struct AdmissibilityReport {
    bool support_ok = false;
    bool mean_zero_ok = false;
    bool holder_ok = false;
    double seminorm = 0.0;
    double mean = 0.0;
    bool degenerate = false;  // identically zero

    bool admissible() const { return support_ok && mean_zero_ok && holder_ok; }
};

struct FunctionBank {
    double gamma = 1.0;
    std::vector<TestFunction> members;
};

// Multilinear evaluation of the profile; zero outside the lattice box.
double eval_profile(const TestFunction& phi, const Point& p);

// Discrete Holder-gamma seminorm over a deterministic pair sample: all pairs
// within 4 lattice steps plus 10^4 seeded long-range pairs.
double holder_seminorm_sampled(const ScalarField& profile, double gamma);

AdmissibilityReport validate_admissible(const TestFunction& phi);

// Builds `size` members cycling three parametric families (radial difference
// of bumps, directional odd bumps, off-center bump pairs) with a
// low-discrepancy parameter schedule, so every prefix of the bank already
// spans all families. Members are mean-corrected, clipped to the unit ball,
// and rescaled to seminorm 1 - eps_margin.
FunctionBank build_bank(double gamma, int size, int n, int lattice_resolution = 0);

double bank_eps_margin();

// Bank files reuse the field format with a trailing gamma header entry:
// "n M extent K gamma" followed by K profiles.
void write_bank(const std::string& path, const FunctionBank& bank);
FunctionBank read_bank(const std::string& path);

}  // namespace amalgam
