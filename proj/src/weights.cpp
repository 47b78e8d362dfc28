#include "amalgam/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace amalgam {

namespace {

struct BallKey {
    double cx, cy, r;
    bool operator==(const BallKey&) const = default;
};

struct BallKeyHash {
    std::size_t operator()(const BallKey& k) const {
        auto mix = [](std::size_t h, double d) {
            std::uint64_t bits;
            std::memcpy(&bits, &d, sizeof(bits));
            h ^= bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return h;
        };
        std::size_t h = 0;
        h = mix(h, k.cx);
        h = mix(h, k.cy);
        h = mix(h, k.r);
        return h;
    }
};

}  // namespace

struct Weight::Cache {
    std::mutex mtx;
    std::unordered_map<BallKey, RegionSum, BallKeyHash> measures;
};

Weight make_weight(ScalarField density, Weight::Role role) {
    ensure_finite(density, "make_weight");
    for (double v : density.values)
        if (!(v > 0.0)) throw std::invalid_argument("make_weight: density must be strictly positive");
    return Weight{std::move(density), role, std::make_shared<Weight::Cache>()};
}

Weight unit_weight(const Grid& g, Weight::Role role) {
    return make_weight(make_field(g, 1.0), role);
}

Weight power_weight(double a, const Grid& g, Weight::Role role) {
    if (!(a > -g.n))
        throw std::invalid_argument("power_weight: exponent must exceed -n for local integrability");
    const Point origin{0.0, 0.0};
    return make_weight(sample(g, [&](Point p) { return std::pow(dist(p, origin, g.n), a); }), role);
}

BallFamily make_ball_family(const Grid& g, int center_stride, int radius_count,
                            double r_min, double r_max) {
    if (center_stride < 1) throw std::invalid_argument("make_ball_family: stride must be >= 1");
    if (radius_count < 1) throw std::invalid_argument("make_ball_family: need at least one radius");
    const double h = g.spacing();
    if (r_min <= 0.0) r_min = 2.0 * h;
    if (r_max <= 0.0) r_max = g.extent;
    if (!(r_min >= 2.0 * h && r_max <= g.extent && r_min <= r_max))
        throw std::invalid_argument("make_ball_family: radii must lie in [2h, extent]");

    std::vector<double> radii;
    if (radius_count == 1) {
        radii.push_back(r_min);
    } else {
        const double step = std::log(r_max / r_min) / (radius_count - 1);
        for (int k = 0; k < radius_count; ++k) radii.push_back(r_min * std::exp(step * k));
    }

    BallFamily fam;
    const int N = g.resolution;
    for (int iy = 0; iy < (g.n == 2 ? N : 1); iy += center_stride) {
        for (int ix = 0; ix < N; ix += center_stride) {
            const std::size_t idx =
                g.n == 1 ? static_cast<std::size_t>(ix) : static_cast<std::size_t>(iy) * N + ix;
            const Point c = g.center(idx);
            for (double r : radii) fam.balls.push_back(Ball{c, r});
        }
    }
    return fam;
}

RegionSum ball_measure(const Weight& w, const Ball& B) {
    const BallKey key{B.center[0], B.center[1], B.radius};
    if (w.cache) {
        std::scoped_lock lock(w.cache->mtx);
        auto it = w.cache->measures.find(key);
        if (it != w.cache->measures.end()) return it->second;
    }
    RegionSum r = integrate(w.density, B);
    if (w.cache) {
        std::scoped_lock lock(w.cache->mtx);
        w.cache->measures.emplace(key, r);
    }
    return r;
}

double ap_characteristic(const Weight& w, double p, const BallFamily& F) {
    if (!(p >= 1.0)) throw std::invalid_argument("ap_characteristic: p must be >= 1");
    const Grid& g = w.density.grid;
    double best = 0.0;
    for (const Ball& B : F.balls) {
        const auto cells = cells_in_ball(g, B);
        if (cells.empty()) continue;
        double sum = 0.0;
        if (p == 1.0) {
            double lo = std::numeric_limits<double>::infinity();
            for (std::size_t i : cells) {
                sum += w.density.values[i];
                lo = std::min(lo, w.density.values[i]);
            }
            best = std::max(best, sum / cells.size() / lo);
        } else {
            const double e = -1.0 / (p - 1.0);
            double rev = 0.0;
            for (std::size_t i : cells) {
                sum += w.density.values[i];
                rev += std::pow(w.density.values[i], e);
            }
            const double avg = sum / cells.size();
            const double ravg = rev / cells.size();
            best = std::max(best, avg * std::pow(ravg, p - 1.0));
        }
    }
    if (best == 0.0) throw std::invalid_argument("ap_characteristic: family misses the box");
    return best;
}

namespace {

bool ball_inside_box(const Grid& g, const Ball& B) {
    for (int k = 0; k < g.n; ++k)
        if (std::abs(B.center[k]) + B.radius > g.extent + 1e-12 * g.extent) return false;
    return true;
}

}  // namespace

double doubling_constant(const Weight& w, const BallFamily& F) {
    const Grid& g = w.density.grid;
    double best = 0.0;
    bool any = false;
    for (const Ball& B : F.balls) {
        const Ball twoB{B.center, 2.0 * B.radius};
        if (!ball_inside_box(g, twoB)) continue;
        const RegionSum mB = ball_measure(w, B);
        const RegionSum m2B = ball_measure(w, twoB);
        if (mB.degenerate || !(mB.value > 0.0)) continue;
        any = true;
        best = std::max(best, m2B.value / mB.value);
    }
    if (!any)
        throw std::invalid_argument("doubling_constant: no family ball keeps 2B inside the box");
    return best;
}

std::vector<double> dilation_growth_check(const Weight& w, const Ball& B, int levels) {
    if (levels < 0) throw std::invalid_argument("dilation_growth_check: negative level count");
    const Grid& g = w.density.grid;
    if (levels > 0 && !ball_inside_box(g, Ball{B.center, std::ldexp(B.radius, levels)}))
        throw std::invalid_argument("dilation_growth_check: 2^L B exits the box");
    std::vector<double> ratios;
    const double base = ball_measure(w, B).value;
    if (levels > 0 && !(base > 0.0))
        throw std::invalid_argument("dilation_growth_check: base ball carries no mass");
    for (int l = 1; l <= levels; ++l) {
        const double m = ball_measure(w, Ball{B.center, std::ldexp(B.radius, l)}).value;
        ratios.push_back(m / (std::pow(2.0, l * g.n) * base));
    }
    return ratios;
}

DeltaFit comparison_delta(const Weight& w, const Ball& B, const std::vector<Ball>& subsets) {
    if (subsets.size() < 2)
        throw std::invalid_argument("comparison_delta: need at least two subsets");
    const Grid& g = w.density.grid;
    for (const Ball& E : subsets)
        if (dist(E.center, B.center, g.n) + E.radius > B.radius + 1e-12)
            throw std::invalid_argument("comparison_delta: subset exits the ball");

    const double cellsB = static_cast<double>(cells_in_ball(g, B).size());
    const double wB = ball_measure(w, B).value;
    std::vector<double> xs, ys;
    for (const Ball& E : subsets) {
        const double cellsE = static_cast<double>(cells_in_ball(g, E).size());
        const double wE = ball_measure(w, E).value;
        if (!(cellsE > 0.0) || !(wE > 0.0)) continue;
        xs.push_back(std::log(cellsE / cellsB));
        ys.push_back(std::log(wE / wB));
    }
    if (xs.size() < 2) throw std::invalid_argument("comparison_delta: subsets carry no cells");

    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("comparison_delta: subsets have equal size");
    DeltaFit fit;
    fit.slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - my - fit.slope * (xs[i] - mx);
        rss += e * e;
    }
    fit.residual = std::sqrt(rss / xs.size());
    return fit;
}

// Offsets grouped by equal distance; cells at the same distance enter a
// growing ball together.
ScalarField hl_maximal(const ScalarField& f) {
    const Grid& g = f.grid;
    const int N = g.resolution;
    ScalarField out = make_field(g);

    if (g.n == 1) {
        for (int i = 0; i < N; ++i) {
            double sum = std::abs(f.values[static_cast<std::size_t>(i)]);
            int count = 1;
            double best = sum;
            for (int d = 1; d < N; ++d) {
                bool grew = false;
                if (i - d >= 0) {
                    sum += std::abs(f.values[static_cast<std::size_t>(i - d)]);
                    ++count;
                    grew = true;
                }
                if (i + d < N) {
                    sum += std::abs(f.values[static_cast<std::size_t>(i + d)]);
                    ++count;
                    grew = true;
                }
                if (grew) best = std::max(best, sum / count);
            }
            out.values[static_cast<std::size_t>(i)] = best;
        }
        return out;
    }

    // n == 2: precompute offsets sorted by squared distance, grouped by ties.
    struct Offset {
        int d2, dx, dy;
    };
    std::vector<Offset> offsets;
    offsets.reserve(static_cast<std::size_t>(2 * N - 1) * (2 * N - 1));
    for (int dy = -(N - 1); dy <= N - 1; ++dy)
        for (int dx = -(N - 1); dx <= N - 1; ++dx)
            offsets.push_back({dx * dx + dy * dy, dx, dy});
    std::sort(offsets.begin(), offsets.end(),
              [](const Offset& a, const Offset& b) { return a.d2 < b.d2; });

    std::vector<double> absf(f.values.size());
    for (std::size_t i = 0; i < absf.size(); ++i) absf[i] = std::abs(f.values[i]);

    for (int iy = 0; iy < N; ++iy) {
        for (int ix = 0; ix < N; ++ix) {
            double sum = 0.0;
            int count = 0;
            double best = 0.0;
            std::size_t k = 0;
            while (k < offsets.size()) {
                const int d2 = offsets[k].d2;
                bool grew = false;
                while (k < offsets.size() && offsets[k].d2 == d2) {
                    const int x = ix + offsets[k].dx;
                    const int y = iy + offsets[k].dy;
                    if (x >= 0 && x < N && y >= 0 && y < N) {
                        sum += absf[static_cast<std::size_t>(y) * N + x];
                        ++count;
                        grew = true;
                    }
                    ++k;
                }
                if (grew) best = std::max(best, sum / count);
            }
            out.values[static_cast<std::size_t>(iy) * N + ix] = best;
        }
    }
    return out;
}

}  // namespace amalgam
