#pragma once

#include <vector>

#include "amalgam/grid.hpp"
#include "amalgam/testbank.hpp"

namespace amalgam {

// Truncated cone of aperture one: scales run over a log-spaced grid in
// [t_min, t_max]. Scales below 2h are under-resolved and rejected.
struct ConeParams {
    double t_min = 0.0;
    double t_max = 0.0;
    int n_scales = 0;
};

ConeParams make_cone_params(const Grid& g, double t_min, double t_max, int n_scales);

std::vector<double> cone_scales(const ConeParams& cone);
// Trapezoid weights for the d(log t) quadrature.
std::vector<double> cone_log_weights(const ConeParams& cone);

// A(y, t) = max over the bank of |phi_t * f(y)|, per scale.
struct MultiScaleField {
    Grid grid;
    std::vector<double> scales;
    std::vector<ScalarField> slices;
};

MultiScaleField a_gamma(const ScalarField& f, const FunctionBank& bank, const ConeParams& cone);

// S(x) = (cone integral of A(y,t)^2 dy dt / t^(n+1))^(1/2), discretized as
// sum_k w_k t_k^(-n) sum_{|x-y|<t_k} A(y,t_k)^2 h^n.
ScalarField intrinsic_square(const ScalarField& f, const FunctionBank& bank,
                             const ConeParams& cone);

ScalarField vec_intrinsic_square(const VectorField& F, const FunctionBank& bank,
                                 const ConeParams& cone);

// Commutator with a BMO symbol: the inner supremum at (y, t) for output
// point x is max over the bank of |b(x) (phi_t*f)(y) - (phi_t*(b f))(y)|,
// which equals the kernel integral of [b(x) - b(z)] by linearity.
ScalarField commutator_square(const ScalarField& b, const ScalarField& f,
                              const FunctionBank& bank, const ConeParams& cone);

ScalarField vec_commutator_square(const ScalarField& b, const VectorField& F,
                                  const FunctionBank& bank, const ConeParams& cone);

// Far-field majorant around B: sum over l = 1..L of the average over
// 2^(l+1)B of ||F||_l2 taken over the annulus 2^(l+1)B \ 2^l B. Constant in
// x; returned as a field for interface uniformity.
ScalarField farfield_majorant(const VectorField& F, const Ball& B, int levels);

}  // namespace amalgam
