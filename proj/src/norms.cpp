#include "amalgam/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace amalgam {

double YoungFunction::operator()(double t) const {
    switch (kind) {
        case Kind::Power:
            return std::pow(t, p);
        case Kind::LLogL:
            return t <= 0.0 ? 0.0 : t * (1.0 + std::max(std::log(t), 0.0));
        case Kind::ExpMinusOne:
            return std::expm1(t);
    }
    return 0.0;
}

YoungFunction young_power(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("young_power: p must be >= 1");
    return YoungFunction{YoungFunction::Kind::Power, p};
}

YoungFunction young_llogl() { return YoungFunction{YoungFunction::Kind::LLogL, 1.0}; }

YoungFunction young_expm1() { return YoungFunction{YoungFunction::Kind::ExpMinusOne, 1.0}; }

bool young_convex_on(const YoungFunction& A, double t_max, int samples) {
    if (A(0.0) != 0.0) return false;
    const double d = t_max / samples;
    double prev = A(0.0);
    for (int i = 1; i < samples; ++i) {
        const double mid = A(i * d);
        const double next = A((i + 1) * d);
        if (next <= mid) return false;  // strict increase
        if (prev + next - 2.0 * mid < -1e-9 * (std::abs(next) + 1.0)) return false;
        prev = mid;
    }
    return true;
}

double lp_norm(const ScalarField& f, const Weight& w, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (!(f.grid == w.density.grid))
        throw std::invalid_argument("lp_norm: field and weight on different grids");
    if (std::isinf(p)) return max_abs(f);
    const double hn = std::pow(f.grid.spacing(), f.grid.n);
    double s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        s += std::pow(std::abs(f.values[i]), p) * w.density.values[i];
    return std::pow(s * hn, 1.0 / p);
}

namespace {

double weak_norm_over(const ScalarField& f, const Weight& w, double p,
                      const std::vector<std::size_t>& cells) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i : cells) m = std::max(m, std::abs(f.values[i]));
        return m;
    }
    const double hn = std::pow(f.grid.spacing(), f.grid.n);
    std::vector<std::pair<double, double>> lv;  // (|f|, cell mass)
    lv.reserve(cells.size());
    for (std::size_t i : cells)
        lv.emplace_back(std::abs(f.values[i]), w.density.values[i] * hn);
    std::sort(lv.begin(), lv.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    double best = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < lv.size(); ++i) {
        mass += lv[i].second;
        const bool last_of_level = (i + 1 == lv.size()) || (lv[i + 1].first != lv[i].first);
        if (last_of_level && lv[i].first > 0.0)
            best = std::max(best, lv[i].first * std::pow(mass, 1.0 / p));
    }
    return best;
}

std::vector<std::size_t> all_cells(const Grid& g) {
    std::vector<std::size_t> v(g.cell_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
    return v;
}

}  // namespace

double weak_lp_norm(const ScalarField& f, const Weight& w, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("weak_lp_norm: p must be >= 1");
    if (!(f.grid == w.density.grid))
        throw std::invalid_argument("weak_lp_norm: field and weight on different grids");
    return weak_norm_over(f, w, p, all_cells(f.grid));
}

double weak_lp_norm(const ScalarField& f, const Weight& w, double p, const Ball& region) {
    if (!(p >= 1.0)) throw std::invalid_argument("weak_lp_norm: p must be >= 1");
    return weak_norm_over(f, w, p, cells_in_ball(f.grid, region));
}

namespace {

LuxemburgResult luxemburg_over(const ScalarField& f, const YoungFunction& A,
                               const std::vector<std::size_t>& cells,
                               const std::vector<double>& masses) {
    LuxemburgResult res;
    if (cells.empty()) {
        res.degenerate = true;
        return res;
    }
    double maxabs = 0.0, total_mass = 0.0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        maxabs = std::max(maxabs, std::abs(f.values[cells[k]]));
        total_mass += masses[k];
    }
    if (maxabs == 0.0) {
        res.degenerate = true;
        return res;
    }

    auto G = [&](double lambda) {
        double s = 0.0;
        for (std::size_t k = 0; k < cells.size(); ++k)
            s += A(std::abs(f.values[cells[k]]) / lambda) * masses[k];
        return s / total_mass;
    };

    double hi = maxabs;
    for (int it = 0; it < 64 && G(hi) > 1.0; ++it) hi *= 2.0;
    double lo = hi;
    bool bracketed = false;
    for (int it = 0; it < 2000; ++it) {
        const double cand = lo * 0.5;
        if (G(cand) > 1.0) {
            lo = cand;
            bracketed = true;
            break;
        }
        lo = cand;
    }
    if (!bracketed) {
        res.value = lo;
        res.residual = std::abs(G(lo) - 1.0);
        res.degenerate = true;
        return res;
    }

    // keep the G <= 1 end so the returned norm never undershoots
    double g_hi = G(hi);
    for (int it = 0; it < 300 && (1.0 - g_hi) > 5e-7; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = G(mid);
        if (gm > 1.0) {
            lo = mid;
        } else {
            hi = mid;
            g_hi = gm;
        }
    }
    res.value = hi;
    res.residual = std::abs(g_hi - 1.0);
    return res;
}

}  // namespace

LuxemburgResult luxemburg_norm(const ScalarField& f, const YoungFunction& A, const Ball& B) {
    const auto cells = cells_in_ball(f.grid, B);
    const double hn = std::pow(f.grid.spacing(), f.grid.n);
    return luxemburg_over(f, A, cells, std::vector<double>(cells.size(), hn));
}

LuxemburgResult luxemburg_norm(const ScalarField& f, const YoungFunction& A, const Ball& B,
                               const Weight& w) {
    if (!(f.grid == w.density.grid))
        throw std::invalid_argument("luxemburg_norm: field and weight on different grids");
    const auto cells = cells_in_ball(f.grid, B);
    const double hn = std::pow(f.grid.spacing(), f.grid.n);
    std::vector<double> masses(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k)
        masses[k] = w.density.values[cells[k]] * hn;
    return luxemburg_over(f, A, cells, masses);
}

AmalgamParams make_amalgam_params(const Grid& g, double p, double alpha, double q,
                                  int radius_count, int center_stride) {
    if (!(p >= 1.0 && p <= alpha && alpha <= q))
        throw std::invalid_argument("amalgam: exponents must satisfy 1 <= p <= alpha <= q");
    if (radius_count < 1 || center_stride < 1)
        throw std::invalid_argument("amalgam: bad radius count or stride");
    AmalgamParams P;
    P.p = p;
    P.alpha = alpha;
    P.q = q;
    P.center_stride = center_stride;
    const double h = g.spacing();
    const double r_min = 2.0 * h, r_max = g.extent;
    if (radius_count == 1) {
        P.radii.push_back(r_max);
    } else {
        const double step = std::log(r_max / r_min) / (radius_count - 1);
        for (int k = 0; k < radius_count; ++k) P.radii.push_back(r_min * std::exp(step * k));
    }
    return P;
}

AmalgamNorm amalgam_norm(const ScalarField& f, const AmalgamParams& P, const Weight& w,
                         const Weight& mu, AmalgamKind kind) {
    const Grid& g = f.grid;
    if (!(g == w.density.grid) || !(g == mu.density.grid))
        throw std::invalid_argument("amalgam_norm: grids disagree");
    const double p = kind == AmalgamKind::LLogL ? 1.0 : P.p;
    if (!(p >= 1.0 && p <= P.alpha && P.alpha <= P.q))
        throw std::invalid_argument("amalgam_norm: exponents must satisfy 1 <= p <= alpha <= q");
    for (double r : P.radii)
        if (!(r >= 2.0 * g.spacing() && r <= g.extent * (1.0 + 1e-12)))
            throw std::invalid_argument("amalgam_norm: radius outside [2h, extent]");

    const double hn = std::pow(g.spacing(), g.n);
    const double inv_q = std::isinf(P.q) ? 0.0 : 1.0 / P.q;
    const double pre_exp = kind == AmalgamKind::LLogL ? 1.0 / P.alpha - inv_q
                                                      : 1.0 / P.alpha - 1.0 / p - inv_q;
    const double outer_cell = std::pow(P.center_stride * g.spacing(), g.n);
    const int N = g.resolution;
    const YoungFunction llogl = young_llogl();

    std::vector<std::size_t> centers;
    for (int iy = 0; iy < (g.n == 2 ? N : 1); iy += P.center_stride)
        for (int ix = 0; ix < N; ix += P.center_stride)
            centers.push_back(g.n == 1 ? static_cast<std::size_t>(ix)
                                       : static_cast<std::size_t>(iy) * N + ix);

    AmalgamNorm out;
    out.radii = P.radii;
    for (double r : P.radii) {
        double outer_sum = 0.0, outer_max = 0.0;
        for (std::size_t ci : centers) {
            const Point y = g.center(ci);
            const Ball B{y, r};
            for (int k = 0; k < g.n; ++k)
                if (std::abs(y[k]) + r > g.extent) out.clipped = true;

            const auto cells = cells_in_ball(g, B);
            if (cells.empty()) continue;
            double wB = 0.0;
            for (std::size_t i : cells) wB += w.density.values[i];
            wB *= hn;

            double inner = 0.0;
            if (kind == AmalgamKind::Strong) {
                if (std::isinf(p)) {
                    for (std::size_t i : cells) inner = std::max(inner, std::abs(f.values[i]));
                } else {
                    double s = 0.0;
                    for (std::size_t i : cells)
                        s += std::pow(std::abs(f.values[i]), p) * w.density.values[i];
                    inner = std::pow(s * hn, 1.0 / p);
                }
            } else if (kind == AmalgamKind::Weak) {
                inner = weak_lp_norm(f, w, p, B);
            } else {
                inner = luxemburg_norm(f, llogl, B, w).value;
            }

            const double val = std::pow(wB, pre_exp) * inner;
            outer_max = std::max(outer_max, val);
            if (!std::isinf(P.q))
                outer_sum += std::pow(val, P.q) * mu.density.values[ci] * outer_cell;
        }
        const double level = std::isinf(P.q) ? outer_max : std::pow(outer_sum, 1.0 / P.q);
        out.per_radius.push_back(level);
        out.value = std::max(out.value, level);
    }
    return out;
}

namespace {

HolderDefect defect_over(const ScalarField& f, const ScalarField& g, const Ball& B,
                         const Weight* w) {
    const Grid& grid = f.grid;
    if (!(grid == g.grid)) throw std::invalid_argument("holder_defect: grids disagree");
    const auto cells = cells_in_ball(grid, B);
    HolderDefect out;
    if (cells.empty()) {
        out.degenerate = true;
        return out;
    }
    double num = 0.0, mass = 0.0;
    for (std::size_t i : cells) {
        const double m = w ? w->density.values[i] : 1.0;
        num += std::abs(f.values[i] * g.values[i]) * m;
        mass += m;
    }
    num /= mass;

    const LuxemburgResult nf = w ? luxemburg_norm(f, young_llogl(), B, *w)
                                 : luxemburg_norm(f, young_llogl(), B);
    const LuxemburgResult ng = w ? luxemburg_norm(g, young_expm1(), B, *w)
                                 : luxemburg_norm(g, young_expm1(), B);
    if (nf.value <= 0.0 || ng.value <= 0.0) {
        out.degenerate = true;
        return out;
    }
    out.defect = num / (nf.value * ng.value);
    return out;
}

}  // namespace

HolderDefect holder_defect(const ScalarField& f, const ScalarField& g, const Ball& B) {
    return defect_over(f, g, B, nullptr);
}

HolderDefect holder_defect(const ScalarField& f, const ScalarField& g, const Ball& B,
                           const Weight& w) {
    if (!(f.grid == w.density.grid))
        throw std::invalid_argument("holder_defect: field and weight on different grids");
    return defect_over(f, g, B, &w);
}

}  // namespace amalgam
