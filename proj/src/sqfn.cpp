#include "amalgam/sqfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conv.hpp"

namespace amalgam {

namespace {

void check_cone(const Grid& g, const ConeParams& cone) {
    const double h = g.spacing();
    if (!(cone.t_min >= 2.0 * h))
        throw std::invalid_argument("cone: t_min below 2h, kernel under-resolved");
    if (!(cone.t_min < cone.t_max))
        throw std::invalid_argument("cone: t_min must be below t_max");
    if (!(cone.t_max <= g.extent * (1.0 + 1e-12)))
        throw std::invalid_argument("cone: t_max exceeds box extent");
    if (cone.n_scales < 4) throw std::invalid_argument("cone: need at least 4 scales");
}

// phi_t(u) = t^(-n) phi(u/t) sampled on cell offsets [-m, m]^n.
std::vector<double> scaled_kernel(const TestFunction& phi, double t, const Grid& g, int& m) {
    const double h = g.spacing();
    m = static_cast<int>(std::ceil(t / h));
    const double tn = std::pow(t, -g.n);
    const int K = 2 * m + 1;
    if (g.n == 1) {
        std::vector<double> kern(static_cast<std::size_t>(K));
        for (int d = -m; d <= m; ++d)
            kern[static_cast<std::size_t>(d + m)] =
                tn * eval_profile(phi, Point{d * h / t, 0.0});
        return kern;
    }
    std::vector<double> kern(static_cast<std::size_t>(K) * K);
    for (int dy = -m; dy <= m; ++dy)
        for (int dx = -m; dx <= m; ++dx)
            kern[static_cast<std::size_t>(dy + m) * K + (dx + m)] =
                tn * eval_profile(phi, Point{dx * h / t, dy * h / t});
    return kern;
}

// Indicator of the open ball |u| < t on cell offsets.
std::vector<double> ball_kernel(double t, const Grid& g, int& m) {
    const double h = g.spacing();
    m = static_cast<int>(std::ceil(t / h));
    const int K = 2 * m + 1;
    if (g.n == 1) {
        std::vector<double> kern(static_cast<std::size_t>(K), 0.0);
        for (int d = -m; d <= m; ++d)
            if (std::abs(d) * h < t) kern[static_cast<std::size_t>(d + m)] = 1.0;
        return kern;
    }
    std::vector<double> kern(static_cast<std::size_t>(K) * K, 0.0);
    for (int dy = -m; dy <= m; ++dy)
        for (int dx = -m; dx <= m; ++dx)
            if (std::sqrt(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) * h < t)
                kern[static_cast<std::size_t>(dy + m) * K + (dx + m)] = 1.0;
    return kern;
}

// Offsets inside the open ball of radius t, for the per-x commutator loops.
std::vector<std::pair<int, int>> cone_offsets(double t, const Grid& g) {
    const double h = g.spacing();
    const int m = static_cast<int>(std::ceil(t / h));
    std::vector<std::pair<int, int>> out;
    if (g.n == 1) {
        for (int d = -m; d <= m; ++d)
            if (std::abs(d) * h < t) out.emplace_back(d, 0);
        return out;
    }
    for (int dy = -m; dy <= m; ++dy)
        for (int dx = -m; dx <= m; ++dx)
            if (std::sqrt(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) * h < t)
                out.emplace_back(dx, dy);
    return out;
}

}  // namespace

ConeParams make_cone_params(const Grid& g, double t_min, double t_max, int n_scales) {
    ConeParams cone{t_min, t_max, n_scales};
    check_cone(g, cone);
    return cone;
}

std::vector<double> cone_scales(const ConeParams& cone) {
    std::vector<double> t(static_cast<std::size_t>(cone.n_scales));
    const double step = std::log(cone.t_max / cone.t_min) / (cone.n_scales - 1);
    for (int k = 0; k < cone.n_scales; ++k) t[static_cast<std::size_t>(k)] = cone.t_min * std::exp(step * k);
    return t;
}

std::vector<double> cone_log_weights(const ConeParams& cone) {
    const double step = std::log(cone.t_max / cone.t_min) / (cone.n_scales - 1);
    std::vector<double> w(static_cast<std::size_t>(cone.n_scales), step);
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

MultiScaleField a_gamma(const ScalarField& f, const FunctionBank& bank, const ConeParams& cone) {
    if (bank.members.empty()) throw std::invalid_argument("a_gamma: empty bank");
    const Grid& g = f.grid;
    check_cone(g, cone);
    const double hn = std::pow(g.spacing(), g.n);

    MultiScaleField A;
    A.grid = g;
    A.scales = cone_scales(cone);
    A.slices.reserve(A.scales.size());
    for (double t : A.scales) {
        ScalarField slice = make_field(g);
        for (const TestFunction& phi : bank.members) {
            int m = 0;
            const auto kern = scaled_kernel(phi, t, g, m);
            const auto conv = detail::convolve(g, f.values, kern, m);
            for (std::size_t i = 0; i < slice.values.size(); ++i)
                slice.values[i] = std::max(slice.values[i], std::abs(conv[i] * hn));
        }
        A.slices.push_back(std::move(slice));
    }
    return A;
}

ScalarField intrinsic_square(const ScalarField& f, const FunctionBank& bank,
                             const ConeParams& cone) {
    const MultiScaleField A = a_gamma(f, bank, cone);
    const Grid& g = f.grid;
    const double hn = std::pow(g.spacing(), g.n);
    const auto weights = cone_log_weights(cone);

    ScalarField acc = make_field(g);
    for (std::size_t k = 0; k < A.scales.size(); ++k) {
        const double t = A.scales[k];
        std::vector<double> sq(A.slices[k].values.size());
        for (std::size_t i = 0; i < sq.size(); ++i) {
            const double v = A.slices[k].values[i];
            sq[i] = v * v;
        }
        int m = 0;
        const auto kern = ball_kernel(t, g, m);
        const auto sums = detail::convolve(g, sq, kern, m);
        const double c = weights[k] * std::pow(t, -g.n) * hn;
        for (std::size_t i = 0; i < acc.values.size(); ++i)
            acc.values[i] += c * sums[i];
    }
    for (double& v : acc.values) v = std::sqrt(std::max(v, 0.0));
    return acc;
}

ScalarField vec_intrinsic_square(const VectorField& F, const FunctionBank& bank,
                                 const ConeParams& cone) {
    if (F.components.empty()) throw std::invalid_argument("vec_intrinsic_square: empty input");
    ScalarField acc = make_field(F.grid);
    for (const auto& comp : F.components) {
        const ScalarField s = intrinsic_square(comp, bank, cone);
        for (std::size_t i = 0; i < acc.values.size(); ++i)
            acc.values[i] += s.values[i] * s.values[i];
    }
    for (double& v : acc.values) v = std::sqrt(v);
    return acc;
}

ScalarField commutator_square(const ScalarField& b, const ScalarField& f,
                              const FunctionBank& bank, const ConeParams& cone) {
    if (!(b.grid == f.grid))
        throw std::invalid_argument("commutator_square: symbol and input on different grids");
    if (bank.members.empty()) throw std::invalid_argument("commutator_square: empty bank");
    const Grid& g = f.grid;
    check_cone(g, cone);
    const int N = g.resolution;
    const double hn = std::pow(g.spacing(), g.n);
    const auto scales = cone_scales(cone);
    const auto weights = cone_log_weights(cone);
    const std::size_t nphi = bank.members.size();

    const ScalarField bf = multiplied(b, f);

    ScalarField acc = make_field(g);
    std::vector<std::vector<double>> u(nphi), v(nphi);
    for (std::size_t k = 0; k < scales.size(); ++k) {
        const double t = scales[k];
        for (std::size_t p = 0; p < nphi; ++p) {
            int m = 0;
            const auto kern = scaled_kernel(bank.members[p], t, g, m);
            u[p] = detail::convolve(g, f.values, kern, m);
            v[p] = detail::convolve(g, bf.values, kern, m);
            for (double& x : u[p]) x *= hn;
            for (double& x : v[p]) x *= hn;
        }
        const auto offs = cone_offsets(t, g);
        const double c = weights[k] * std::pow(t, -g.n) * hn;

        if (g.n == 1) {
            for (int ix = 0; ix < N; ++ix) {
                const double bx = b.values[static_cast<std::size_t>(ix)];
                double sum = 0.0;
                for (const auto& [dx, dy] : offs) {
                    (void)dy;
                    const int jx = ix + dx;
                    if (jx < 0 || jx >= N) continue;
                    const std::size_t j = static_cast<std::size_t>(jx);
                    double inner = 0.0;
                    for (std::size_t p = 0; p < nphi; ++p)
                        inner = std::max(inner, std::abs(bx * u[p][j] - v[p][j]));
                    sum += inner * inner;
                }
                acc.values[static_cast<std::size_t>(ix)] += c * sum;
            }
        } else {
            for (int iy = 0; iy < N; ++iy) {
                for (int ix = 0; ix < N; ++ix) {
                    const std::size_t i = static_cast<std::size_t>(iy) * N + ix;
                    const double bx = b.values[i];
                    double sum = 0.0;
                    for (const auto& [dx, dy] : offs) {
                        const int jx = ix + dx, jy = iy + dy;
                        if (jx < 0 || jx >= N || jy < 0 || jy >= N) continue;
                        const std::size_t j = static_cast<std::size_t>(jy) * N + jx;
                        double inner = 0.0;
                        for (std::size_t p = 0; p < nphi; ++p)
                            inner = std::max(inner, std::abs(bx * u[p][j] - v[p][j]));
                        sum += inner * inner;
                    }
                    acc.values[i] += c * sum;
                }
            }
        }
    }
    for (double& x : acc.values) x = std::sqrt(std::max(x, 0.0));
    return acc;
}

ScalarField vec_commutator_square(const ScalarField& b, const VectorField& F,
                                  const FunctionBank& bank, const ConeParams& cone) {
    if (F.components.empty()) throw std::invalid_argument("vec_commutator_square: empty input");
    ScalarField acc = make_field(F.grid);
    for (const auto& comp : F.components) {
        const ScalarField s = commutator_square(b, comp, bank, cone);
        for (std::size_t i = 0; i < acc.values.size(); ++i)
            acc.values[i] += s.values[i] * s.values[i];
    }
    for (double& v : acc.values) v = std::sqrt(v);
    return acc;
}

ScalarField farfield_majorant(const VectorField& F, const Ball& B, int levels) {
    if (levels < 1) throw std::invalid_argument("farfield_majorant: need at least one level");
    const Grid& g = F.grid;
    const double top = std::ldexp(B.radius, levels + 1);
    for (int k = 0; k < g.n; ++k)
        if (std::abs(B.center[k]) + top > g.extent + 1e-12 * g.extent)
            throw std::invalid_argument("farfield_majorant: 2^(L+1) B exits the box");

    const ScalarField normf = l2_norm_field(F);
    double total = 0.0;
    for (int l = 1; l <= levels; ++l) {
        const double r_in = std::ldexp(B.radius, l);
        const double r_out = std::ldexp(B.radius, l + 1);
        const auto cells = cells_in_ball(g, Ball{B.center, r_out});
        if (cells.empty()) continue;
        double sum = 0.0;
        for (std::size_t i : cells) {
            if (dist(g.center(i), B.center, g.n) < r_in) continue;
            sum += normf.values[i];
        }
        total += sum / static_cast<double>(cells.size());
    }
    return make_field(g, total);
}

}  // namespace amalgam
