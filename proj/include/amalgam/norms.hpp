#pragma once

#include <vector>

#include "amalgam/grid.hpp"
#include "amalgam/weights.hpp"

namespace amalgam {

// Young functions used by the laboratory: t^p, t(1 + log+ t) and its
// complementary partner exp(t) - 1.
struct YoungFunction {
    enum class Kind { Power, LLogL, ExpMinusOne };

    Kind kind = Kind::Power;
    double p = 1.0;

    double operator()(double t) const;
};

YoungFunction young_power(double p);
YoungFunction young_llogl();
YoungFunction young_expm1();

// Sampled second-difference convexity check on [0, t_max].
bool young_convex_on(const YoungFunction& A, double t_max, int samples = 256);

// (integral |f|^p w)^(1/p); p = infinity returns the max sample.
double lp_norm(const ScalarField& f, const Weight& w, double p);

// sup_lambda lambda * w({|f| > lambda})^(1/p), exact over the finite sample
// set via >=-level sets at the distinct values of |f|.
double weak_lp_norm(const ScalarField& f, const Weight& w, double p);
double weak_lp_norm(const ScalarField& f, const Weight& w, double p, const Ball& region);

struct LuxemburgResult {
    double value = 0.0;
    double residual = 0.0;  // |G(lambda*) - 1| at the returned root
    bool degenerate = false;
};

// Root of G(lambda) = (1/m(B)) integral_B A(|f|/lambda) dm = 1, by bracketing
// and bisection on the strictly decreasing G; m is Lebesgue or w dx.
LuxemburgResult luxemburg_norm(const ScalarField& f, const YoungFunction& A, const Ball& B);
LuxemburgResult luxemburg_norm(const ScalarField& f, const YoungFunction& A, const Ball& B,
                               const Weight& w);

// Exponent triple with the radius grid for the sup over r and the center
// subgrid for the outer norm. q = infinity encodes the sup over centers.
struct AmalgamParams {
    double p = 1.0;
    double alpha = 1.0;
    double q = 1.0;
    std::vector<double> radii;
    int center_stride = 4;
};

AmalgamParams make_amalgam_params(const Grid& g, double p, double alpha, double q,
                                  int radius_count = 16, int center_stride = 4);

enum class AmalgamKind { Strong, Weak, LLogL };

struct AmalgamNorm {
    double value = 0.0;
    std::vector<double> radii;
    std::vector<double> per_radius;
    bool clipped = false;  // some center's ball was clipped to the box
};

// Strong:  sup_r || w(B(y,r))^(1/alpha-1/p-1/q) ||f chi_B||_{L^p_w} ||_{L^q_mu}
// Weak:    same with the weak inner norm
// LLogL:   sup_r || w(B(y,r))^(1/alpha-1/q) ||f||_{LlogL(w),B} ||_{L^q_mu}
AmalgamNorm amalgam_norm(const ScalarField& f, const AmalgamParams& P, const Weight& w,
                         const Weight& mu, AmalgamKind kind);

struct HolderDefect {
    double defect = 0.0;
    bool degenerate = false;
};

// avg_B |f g| / (||f||_{LlogL,B} ||g||_{expL,B}); weighted variant uses the
// w-average and the weighted Luxemburg norms.
HolderDefect holder_defect(const ScalarField& f, const ScalarField& g, const Ball& B);
HolderDefect holder_defect(const ScalarField& f, const ScalarField& g, const Ball& B,
                           const Weight& w);

}  // namespace amalgam
