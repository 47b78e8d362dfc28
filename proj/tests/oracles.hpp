// Test-only reference computations. Each oracle re-derives a quantity by the
// most direct route available (grid scans, double loops, closed forms) and
// stays independent of the library code paths it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "amalgam/grid.hpp"
#include "amalgam/norms.hpp"
#include "amalgam/testbank.hpp"
#include "amalgam/weights.hpp"

namespace oracles {

using amalgam::Ball;
using amalgam::Grid;
using amalgam::Point;
using amalgam::ScalarField;
using amalgam::Weight;

// Smallest lambda on a 10^4-point log grid whose A-average drops to one.
inline double luxemburg_grid_scan(const ScalarField& f, const amalgam::YoungFunction& A,
                                  const Ball& B, const Weight* w) {
    const auto cells = amalgam::cells_in_ball(f.grid, B);
    double maxabs = 0.0;
    for (auto i : cells) maxabs = std::max(maxabs, std::abs(f.values[i]));
    if (maxabs == 0.0) return 0.0;

    auto average = [&](double lambda) {
        double s = 0.0, m = 0.0;
        for (auto i : cells) {
            const double mass = w ? w->density.values[i] : 1.0;
            s += A(std::abs(f.values[i]) / lambda) * mass;
            m += mass;
        }
        return s / m;
    };

    const double lo = maxabs * 1e-4, hi = maxabs * 1e4;
    const int steps = 10000;
    const double step = std::log(hi / lo) / steps;
    for (int k = 0; k <= steps; ++k) {
        const double lambda = lo * std::exp(step * k);
        if (average(lambda) <= 1.0) return lambda;
    }
    return hi;
}

// inf over eta (grid scan) of eta + (eta / w(B)) integral_B Phi(|f|/eta) w.
inline double llogl_dual_scan(const ScalarField& f, const Ball& B, const Weight& w) {
    const auto cells = amalgam::cells_in_ball(f.grid, B);
    const amalgam::YoungFunction phi = amalgam::young_llogl();
    double maxabs = 0.0, wB = 0.0;
    for (auto i : cells) {
        maxabs = std::max(maxabs, std::abs(f.values[i]));
        wB += w.density.values[i];
    }
    if (maxabs == 0.0) return 0.0;

    double best = std::numeric_limits<double>::infinity();
    const double lo = maxabs * 1e-4, hi = maxabs * 1e4;
    const int steps = 2000;
    const double step = std::log(hi / lo) / steps;
    for (int k = 0; k <= steps; ++k) {
        const double eta = lo * std::exp(step * k);
        double s = 0.0;
        for (auto i : cells) s += phi(std::abs(f.values[i]) / eta) * w.density.values[i];
        best = std::min(best, eta + eta * s / wB);
    }
    return best;
}

// Weighted Morrey norm by direct double loops over centers and radii:
// sup ( w(B)^(kappa-1) ... ) expressed through raw sums, kappa = 1 - p/alpha.
inline double morrey_two_loop(const ScalarField& f, const Weight& w, double p, double alpha,
                              const std::vector<double>& radii, int stride) {
    const Grid& g = f.grid;
    const int N = g.resolution;
    const double hn = std::pow(g.spacing(), g.n);
    const double kappa = 1.0 - p / alpha;
    double best = 0.0;
    for (int iy = 0; iy < (g.n == 2 ? N : 1); iy += stride) {
        for (int ix = 0; ix < N; ix += stride) {
            const std::size_t ci =
                g.n == 1 ? static_cast<std::size_t>(ix) : static_cast<std::size_t>(iy) * N + ix;
            const Point y = g.center(ci);
            for (double r : radii) {
                double wB = 0.0, s = 0.0;
                for (std::size_t i = 0; i < g.cell_count(); ++i) {
                    if (amalgam::dist(g.center(i), y, g.n) >= r) continue;
                    wB += w.density.values[i] * hn;
                    s += std::pow(std::abs(f.values[i]), p) * w.density.values[i] * hn;
                }
                if (wB > 0.0) best = std::max(best, std::pow(s / std::pow(wB, kappa), 1.0 / p));
            }
        }
    }
    return best;
}

// Direct quadrature of phi_t * f at one output cell.
inline double direct_phi_conv(const amalgam::TestFunction& phi, double t, const ScalarField& f,
                              std::size_t cell) {
    const Grid& g = f.grid;
    const double hn = std::pow(g.spacing(), g.n);
    const Point y = g.center(cell);
    double s = 0.0;
    for (std::size_t z = 0; z < g.cell_count(); ++z) {
        const Point pz = g.center(z);
        const Point u{(y[0] - pz[0]) / t, (y[1] - pz[1]) / t};
        s += amalgam::eval_profile(phi, u) * f.values[z];
    }
    return s * hn * std::pow(t, -g.n);
}

}  // namespace oracles
