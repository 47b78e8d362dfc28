#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace amalgam {

// Points in R^n with n <= 2; component [1] is zero when n == 1.
using Point = std::array<double, 2>;

double dist(const Point& a, const Point& b, int n);

// Uniform grid over the box [-extent, extent]^n with `resolution` cells per
// axis. Cell centers sit at -extent + (k + 1/2) * spacing, so no center ever
// coincides with the origin. Functions are extended by zero outside the box.
struct Grid {
    int n = 1;
    double extent = 1.0;
    int resolution = 8;

    double spacing() const { return 2.0 * extent / resolution; }
    std::size_t cell_count() const;
    Point center(std::size_t idx) const;

    bool operator==(const Grid&) const = default;
};

// resolution must be a power of two >= 8 (dyadic mesh), n in {1, 2}.
Grid make_grid(int n, double extent, int resolution);

struct ScalarField {
    Grid grid;
    std::vector<double> values;
};

struct VectorField {
    Grid grid;
    std::vector<ScalarField> components;  // all share `grid`

    std::size_t size() const { return components.size(); }
};

VectorField make_vector_field(std::vector<ScalarField> components);

// Open ball B(center, radius); membership is strict: |x - center| < radius.
struct Ball {
    Point center{0.0, 0.0};
    double radius = 0.0;

    bool contains(const Point& p, int n) const;
};

ScalarField make_field(const Grid& g, double fill = 0.0);
ScalarField sample(const Grid& g, const std::function<double(Point)>& fn);

// Indices of cells whose center lies in B (clipped to the box).
std::vector<std::size_t> cells_in_ball(const Grid& g, const Ball& B);

struct RegionSum {
    double value = 0.0;
    bool degenerate = false;  // no cell center fell inside the region
};

// Midpoint quadrature: sum of values over cell centers times spacing^n.
double integrate(const ScalarField& f);
RegionSum integrate(const ScalarField& f, const Ball& B);

// Multilinear interpolation of the samples at an arbitrary point; the field
// fades to zero across the half-cell rim of the box and is zero outside.
double interp(const ScalarField& f, const Point& p);

// x -> f(lambda * (x - shift)) resampled on f's grid. lambda > 0 required.
ScalarField dilate_translate(const ScalarField& f, double lambda, Point shift);

// Small field algebra used throughout the operator modules.
ScalarField scaled(const ScalarField& f, double c);
ScalarField added(const ScalarField& f, const ScalarField& g);
ScalarField subtracted(const ScalarField& f, const ScalarField& g);
ScalarField multiplied(const ScalarField& f, const ScalarField& g);
ScalarField abs_field(const ScalarField& f);
double max_abs(const ScalarField& f);

// Pointwise l2 norm across components: x -> (sum_j f_j(x)^2)^(1/2).
ScalarField l2_norm_field(const VectorField& F);

// Throws if any sample is non-finite.
void ensure_finite(const ScalarField& f, const char* what);

}  // namespace amalgam
