#include "amalgam/bmo.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace amalgam {

BallAverage ball_average(const ScalarField& b, const Ball& B) {
    const auto cells = cells_in_ball(b.grid, B);
    BallAverage out;
    if (cells.empty()) {
        out.degenerate = true;
        return out;
    }
    double s = 0.0;
    for (std::size_t i : cells) s += b.values[i];
    out.value = s / static_cast<double>(cells.size());
    return out;
}

BMOReport bmo_seminorm(const ScalarField& b, const BallFamily& F) {
    if (F.balls.empty()) throw std::invalid_argument("bmo_seminorm: empty family");
    BMOReport rep;
    for (const Ball& B : F.balls) {
        const auto cells = cells_in_ball(b.grid, B);
        if (cells.empty()) continue;
        double avg = 0.0;
        for (std::size_t i : cells) avg += b.values[i];
        avg /= static_cast<double>(cells.size());
        double osc = 0.0;
        for (std::size_t i : cells) osc += std::abs(b.values[i] - avg);
        osc /= static_cast<double>(cells.size());
        rep.oscillations.push_back(osc);
        rep.seminorm = std::max(rep.seminorm, osc);
    }
    return rep;
}

OscillationGrowth oscillation_growth(const ScalarField& b, const Ball& B, int levels) {
    if (levels < 0) throw std::invalid_argument("oscillation_growth: negative level count");
    const Grid& g = b.grid;
    const double top = std::ldexp(B.radius, levels + 1);
    for (int k = 0; k < g.n; ++k)
        if (std::abs(B.center[k]) + top > g.extent + 1e-12 * g.extent)
            throw std::invalid_argument("oscillation_growth: 2^(L+1) B exits the box");

    OscillationGrowth out;
    const BallAverage base = ball_average(b, B);
    if (base.degenerate) throw std::invalid_argument("oscillation_growth: base ball is empty");
    double num = 0.0, den = 0.0;
    for (int l = 1; l <= levels; ++l) {
        const BallAverage lvl = ball_average(b, Ball{B.center, std::ldexp(B.radius, l + 1)});
        const double v = std::abs(lvl.value - base.value);
        out.values.push_back(v);
        num += v * (l + 1);
        den += static_cast<double>(l + 1) * (l + 1);
    }
    out.slope = den > 0.0 ? num / den : 0.0;
    return out;
}

double weighted_oscillation(const ScalarField& b, const Ball& B, const Weight& w, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("weighted_oscillation: p must be >= 1");
    if (!(b.grid == w.density.grid))
        throw std::invalid_argument("weighted_oscillation: grids disagree");
    const auto cells = cells_in_ball(b.grid, B);
    if (cells.empty()) return 0.0;
    double avg = 0.0;
    for (std::size_t i : cells) avg += b.values[i];
    avg /= static_cast<double>(cells.size());
    double s = 0.0, wB = 0.0;
    for (std::size_t i : cells) {
        s += std::pow(std::abs(b.values[i] - avg), p) * w.density.values[i];
        wB += w.density.values[i];
    }
    return std::pow(s / wB, 1.0 / p);
}

double exp_norm_oscillation(const ScalarField& b, const Ball& B, const Weight& w) {
    const BallAverage avg = ball_average(b, B);
    if (avg.degenerate) return 0.0;
    ScalarField centered = b;
    for (double& v : centered.values) v -= avg.value;
    return luxemburg_norm(centered, young_expm1(), B, w).value;
}

double cauchy_identity(double s, int n_theta) {
    if (n_theta < 16) throw std::invalid_argument("cauchy_identity: need n_theta >= 16");
    const double step = 2.0 * std::numbers::pi / n_theta;
    double acc = 0.0;
    for (int k = 0; k < n_theta; ++k) {
        const double theta = step * k;
        const std::complex<double> xi{std::cos(theta), std::sin(theta)};
        acc += std::real(std::exp(xi * s) * std::conj(xi));
    }
    return acc / n_theta;
}

}  // namespace amalgam
