#include "amalgam/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace amalgam {

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

double dist(const Point& a, const Point& b, int n) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

std::size_t Grid::cell_count() const {
    std::size_t c = 1;
    for (int k = 0; k < n; ++k) c *= static_cast<std::size_t>(resolution);
    return c;
}

Point Grid::center(std::size_t idx) const {
    const double h = spacing();
    if (n == 1) {
        return {-extent + (static_cast<double>(idx) + 0.5) * h, 0.0};
    }
    const std::size_t ix = idx % static_cast<std::size_t>(resolution);
    const std::size_t iy = idx / static_cast<std::size_t>(resolution);
    return {-extent + (static_cast<double>(ix) + 0.5) * h,
            -extent + (static_cast<double>(iy) + 0.5) * h};
}

Grid make_grid(int n, double extent, int resolution) {
    if (n != 1 && n != 2)
        throw std::invalid_argument("make_grid: dimension must be 1 or 2");
    if (!(extent > 0.0))
        throw std::invalid_argument("make_grid: extent must be positive");
    if (resolution < 8 || !is_pow2(resolution))
        throw std::invalid_argument(
            "make_grid: resolution must be a power of two >= 8, got " +
            std::to_string(resolution));
    return Grid{n, extent, resolution};
}

VectorField make_vector_field(std::vector<ScalarField> components) {
    if (components.empty())
        throw std::invalid_argument("make_vector_field: needs J >= 1 components");
    const Grid& g = components.front().grid;
    for (const auto& c : components)
        if (!(c.grid == g))
            throw std::invalid_argument("make_vector_field: components on different grids");
    return VectorField{g, std::move(components)};
}

bool Ball::contains(const Point& p, int n) const {
    return dist(p, center, n) < radius;
}

ScalarField make_field(const Grid& g, double fill) {
    return ScalarField{g, std::vector<double>(g.cell_count(), fill)};
}

ScalarField sample(const Grid& g, const std::function<double(Point)>& fn) {
    ScalarField f = make_field(g);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = fn(g.center(i));
    ensure_finite(f, "sample");
    return f;
}

std::vector<std::size_t> cells_in_ball(const Grid& g, const Ball& B) {
    std::vector<std::size_t> out;
    const double h = g.spacing();
    const int N = g.resolution;
    auto axis_range = [&](double c, double halfwidth, int& lo, int& hi) {
        lo = std::max(0, static_cast<int>(std::floor((c - halfwidth + g.extent) / h - 0.5)));
        hi = std::min(N - 1, static_cast<int>(std::ceil((c + halfwidth + g.extent) / h - 0.5)));
    };
    if (g.n == 1) {
        int lo, hi;
        axis_range(B.center[0], B.radius, lo, hi);
        for (int i = lo; i <= hi; ++i) {
            const double x = -g.extent + (i + 0.5) * h;
            if (std::abs(x - B.center[0]) < B.radius) out.push_back(static_cast<std::size_t>(i));
        }
        return out;
    }
    int ylo, yhi;
    axis_range(B.center[1], B.radius, ylo, yhi);
    for (int iy = ylo; iy <= yhi; ++iy) {
        const double y = -g.extent + (iy + 0.5) * h;
        const double dy = y - B.center[1];
        const double rem = B.radius * B.radius - dy * dy;
        if (rem <= 0.0) continue;
        int xlo, xhi;
        axis_range(B.center[0], std::sqrt(rem), xlo, xhi);
        for (int ix = xlo; ix <= xhi; ++ix) {
            const double x = -g.extent + (ix + 0.5) * h;
            const double dx = x - B.center[0];
            if (dx * dx + dy * dy < B.radius * B.radius)
                out.push_back(static_cast<std::size_t>(iy) * N + ix);
        }
    }
    return out;
}

double integrate(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * std::pow(f.grid.spacing(), f.grid.n);
}

RegionSum integrate(const ScalarField& f, const Ball& B) {
    if (!(B.radius > 0.0)) throw std::invalid_argument("integrate: ball radius must be positive");
    const auto cells = cells_in_ball(f.grid, B);
    RegionSum r;
    if (cells.empty()) {
        r.degenerate = true;
        return r;
    }
    double s = 0.0;
    for (std::size_t i : cells) s += f.values[i];
    r.value = s * std::pow(f.grid.spacing(), f.grid.n);
    return r;
}

double interp(const ScalarField& f, const Point& p) {
    const Grid& g = f.grid;
    const double h = g.spacing();
    const int N = g.resolution;
    auto sample1d = [&](double c, int& i0, double& frac) {
        const double u = (c + g.extent) / h - 0.5;
        i0 = static_cast<int>(std::floor(u));
        frac = u - i0;
    };
    auto at = [&](int ix, int iy) -> double {
        if (ix < 0 || ix >= N) return 0.0;
        if (g.n == 1) return f.values[static_cast<std::size_t>(ix)];
        if (iy < 0 || iy >= N) return 0.0;
        return f.values[static_cast<std::size_t>(iy) * N + ix];
    };
    for (int k = 0; k < g.n; ++k)
        if (std::abs(p[k]) > g.extent) return 0.0;
    int ix0, iy0 = 0;
    double fx, fy = 0.0;
    sample1d(p[0], ix0, fx);
    if (g.n == 2) sample1d(p[1], iy0, fy);
    if (g.n == 1) return (1.0 - fx) * at(ix0, 0) + fx * at(ix0 + 1, 0);
    return (1.0 - fy) * ((1.0 - fx) * at(ix0, iy0) + fx * at(ix0 + 1, iy0)) +
           fy * ((1.0 - fx) * at(ix0, iy0 + 1) + fx * at(ix0 + 1, iy0 + 1));
}

ScalarField dilate_translate(const ScalarField& f, double lambda, Point shift) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("dilate_translate: lambda must be positive");
    ScalarField out = make_field(f.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        Point x = f.grid.center(i);
        Point p{lambda * (x[0] - shift[0]), lambda * (x[1] - shift[1])};
        out.values[i] = interp(f, p);
    }
    return out;
}

ScalarField scaled(const ScalarField& f, double c) {
    ScalarField out = f;
    for (double& v : out.values) v *= c;
    return out;
}

namespace {
void check_same_grid(const ScalarField& f, const ScalarField& g, const char* op) {
    if (!(f.grid == g.grid))
        throw std::invalid_argument(std::string(op) + ": fields on different grids");
}
}  // namespace

ScalarField added(const ScalarField& f, const ScalarField& g) {
    check_same_grid(f, g, "added");
    ScalarField out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += g.values[i];
    return out;
}

ScalarField subtracted(const ScalarField& f, const ScalarField& g) {
    check_same_grid(f, g, "subtracted");
    ScalarField out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= g.values[i];
    return out;
}

ScalarField multiplied(const ScalarField& f, const ScalarField& g) {
    check_same_grid(f, g, "multiplied");
    ScalarField out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= g.values[i];
    return out;
}

ScalarField abs_field(const ScalarField& f) {
    ScalarField out = f;
    for (double& v : out.values) v = std::abs(v);
    return out;
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

ScalarField l2_norm_field(const VectorField& F) {
    if (F.components.empty())
        throw std::invalid_argument("l2_norm_field: empty vector field");
    ScalarField out = make_field(F.grid);
    for (const auto& comp : F.components)
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] += comp.values[i] * comp.values[i];
    for (double& v : out.values) v = std::sqrt(v);
    return out;
}

void ensure_finite(const ScalarField& f, const char* what) {
    for (double v : f.values)
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string(what) + ": non-finite sample");
}

}  // namespace amalgam
