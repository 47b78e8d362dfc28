#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "amalgam/harness.hpp"
#include "amalgam/sqfn.hpp"
#include "oracles.hpp"

using namespace amalgam;

namespace {

// Independent cone integration: direct per-cell convolution, direct
// membership loops, no FFT and no shared window logic.
ScalarField intrinsic_square_direct(const ScalarField& f, const FunctionBank& bank,
                                    const ConeParams& cone) {
    const Grid& g = f.grid;
    const auto scales = cone_scales(cone);
    const auto weights = cone_log_weights(cone);
    const double hn = std::pow(g.spacing(), g.n);

    std::vector<std::vector<double>> A(scales.size(),
                                       std::vector<double>(g.cell_count(), 0.0));
    for (std::size_t k = 0; k < scales.size(); ++k)
        for (std::size_t y = 0; y < g.cell_count(); ++y)
            for (const auto& phi : bank.members)
                A[k][y] = std::max(A[k][y],
                                   std::abs(oracles::direct_phi_conv(phi, scales[k], f, y)));

    ScalarField out = make_field(g);
    for (std::size_t x = 0; x < g.cell_count(); ++x) {
        double acc = 0.0;
        for (std::size_t k = 0; k < scales.size(); ++k) {
            double s = 0.0;
            for (std::size_t y = 0; y < g.cell_count(); ++y)
                if (dist(g.center(x), g.center(y), g.n) < scales[k]) s += A[k][y] * A[k][y];
            acc += weights[k] * std::pow(scales[k], -g.n) * s * hn;
        }
        out.values[x] = std::sqrt(acc);
    }
    return out;
}

ScalarField commutator_square_direct(const ScalarField& b, const ScalarField& f,
                                     const FunctionBank& bank, const ConeParams& cone) {
    const Grid& g = f.grid;
    const auto scales = cone_scales(cone);
    const auto weights = cone_log_weights(cone);
    const double hn = std::pow(g.spacing(), g.n);

    ScalarField out = make_field(g);
    for (std::size_t x = 0; x < g.cell_count(); ++x) {
        double acc = 0.0;
        for (std::size_t k = 0; k < scales.size(); ++k) {
            const double t = scales[k];
            double s = 0.0;
            for (std::size_t y = 0; y < g.cell_count(); ++y) {
                if (!(dist(g.center(x), g.center(y), g.n) < t)) continue;
                double inner = 0.0;
                for (const auto& phi : bank.members) {
                    // direct kernel integral of [b(x) - b(z)] phi_t(y - z) f(z)
                    double v = 0.0;
                    const Point py = g.center(y);
                    for (std::size_t z = 0; z < g.cell_count(); ++z) {
                        const Point pz = g.center(z);
                        const Point u{(py[0] - pz[0]) / t, (py[1] - pz[1]) / t};
                        v += (b.values[x] - b.values[z]) * eval_profile(phi, u) * f.values[z];
                    }
                    inner = std::max(inner, std::abs(v * hn * std::pow(t, -g.n)));
                }
                s += inner * inner;
            }
            acc += weights[k] * std::pow(t, -g.n) * s * hn;
        }
        out.values[x] = std::sqrt(acc);
    }
    return out;
}

double rel_max_diff(const ScalarField& a, const ScalarField& b) {
    double scale = std::max(max_abs(a), max_abs(b));
    if (scale == 0.0) return 0.0;
    double d = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        d = std::max(d, std::abs(a.values[i] - b.values[i]));
    return d / scale;
}

ScalarField centered_bump(const Grid& g, double center, double width) {
    return sample(g, [&](Point p) {
        const double u = (p[0] - center) / width;
        return std::exp(-0.5 * u * u);
    });
}

}  // namespace

TEST_CASE("cone parameter validation") {
    const Grid g = make_grid(1, 1.0, 64);
    const double h = g.spacing();
    CHECK_THROWS_AS(make_cone_params(g, 0.5 * h, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_cone_params(g, 4.0 * h, 2.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_cone_params(g, 4.0 * h, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(make_cone_params(g, 0.5, 0.25, 8), std::invalid_argument);
    const ConeParams cone = make_cone_params(g, 2.0 * h, 1.0, 8);
    CHECK(cone_scales(cone).size() == 8);
    CHECK(cone_scales(cone).front() == doctest::Approx(2.0 * h));
    CHECK(cone_scales(cone).back() == doctest::Approx(1.0));
}

TEST_CASE("a_gamma: zero input, positivity, exact homogeneity") {
    const Grid g = make_grid(1, 1.0, 64);
    const FunctionBank bank = build_bank(0.5, 3, 1);
    const ConeParams cone = make_cone_params(g, 2.0 * g.spacing(), 1.0, 6);

    const MultiScaleField zero = a_gamma(make_field(g), bank, cone);
    for (const auto& slice : zero.slices)
        for (double v : slice.values) CHECK(v == 0.0);

    Rng rng(5);
    const ScalarField f = random_input(g, "bumps", rng);
    const MultiScaleField A = a_gamma(f, bank, cone);
    const MultiScaleField A2 = a_gamma(scaled(f, 2.0), bank, cone);
    for (std::size_t k = 0; k < A.slices.size(); ++k)
        for (std::size_t i = 0; i < A.slices[k].values.size(); ++i) {
            CHECK(A.slices[k].values[i] >= 0.0);
            CHECK(A2.slices[k].values[i] == 2.0 * A.slices[k].values[i]);
        }

    CHECK_THROWS_AS(a_gamma(f, FunctionBank{0.5, {}}, cone), std::invalid_argument);
}

TEST_CASE("single member convolution matches the direct quadrature oracle") {
    const Grid g = make_grid(1, 1.0, 64);
    const FunctionBank bank = build_bank(0.5, 1, 1);
    const ConeParams cone = make_cone_params(g, 2.0 * g.spacing(), 0.5, 4);
    const ScalarField f = centered_bump(g, 0.0, 0.15);

    const MultiScaleField A = a_gamma(f, bank, cone);
    const auto scales = cone_scales(cone);
    for (std::size_t k = 0; k < scales.size(); ++k) {
        double worst = 0.0, scale = 0.0;
        for (std::size_t y = 0; y < g.cell_count(); ++y) {
            const double direct =
                std::abs(oracles::direct_phi_conv(bank.members[0], scales[k], f, y));
            worst = std::max(worst, std::abs(direct - A.slices[k].values[y]));
            scale = std::max(scale, direct);
        }
        CHECK(worst <= 1e-8 * std::max(scale, 1e-30));
    }
}

TEST_CASE("intrinsic square function matches the direct cone oracle") {
    const Grid g = make_grid(1, 1.0, 64);
    const FunctionBank bank = build_bank(0.5, 2, 1);
    const ConeParams cone = make_cone_params(g, 2.0 * g.spacing(), 0.5, 4);
    const ScalarField f = centered_bump(g, 0.1, 0.12);

    const ScalarField S = intrinsic_square(f, bank, cone);
    const ScalarField S0 = intrinsic_square_direct(f, bank, cone);
    CHECK(rel_max_diff(S, S0) <= 1e-8);
}

TEST_CASE("intrinsic square: zero input, homogeneity, translation covariance") {
    const Grid g = make_grid(1, 2.0, 256);
    const FunctionBank bank = build_bank(0.5, 3, 1);
    const ConeParams cone = make_cone_params(g, 2.0 * g.spacing(), 0.5, 8);

    const ScalarField Szero = intrinsic_square(make_field(g), bank, cone);
    for (double v : Szero.values) CHECK(v == 0.0);

    const ScalarField f = centered_bump(g, 0.0, 0.1);
    const ScalarField S = intrinsic_square(f, bank, cone);
    const ScalarField S2 = intrinsic_square(scaled(f, 2.0), bank, cone);
    for (std::size_t i = 0; i < S.values.size(); ++i)
        CHECK(S2.values[i] == 2.0 * S.values[i]);

    // shift by a whole number of cells; compare interior cells
    const int cells = 32;
    const double shift = cells * g.spacing();
    const ScalarField fs = dilate_translate(f, 1.0, {shift, 0.0});
    const ScalarField Ss = intrinsic_square(fs, bank, cone);
    const double smax = max_abs(S);
    for (std::size_t i = cells; i < g.cell_count(); ++i) {
        if (std::abs(g.center(i)[0]) > 1.0) continue;
        CHECK(std::abs(Ss.values[i] - S.values[i - cells]) <= 1e-6 * smax);
    }
}

TEST_CASE("intrinsic square is pointwise subadditive") {
    const Grid g = make_grid(1, 1.0, 128);
    const FunctionBank bank = build_bank(0.5, 3, 1);
    const ConeParams cone = make_cone_params(g, 2.0 * g.spacing(), 0.5, 6);
    for (std::uint64_t s : {3u, 4u}) {
        Rng rng(s);
        Rng rng2(s + 100);
        const ScalarField f = random_input(g, "bumps", rng);
        const ScalarField q = random_input(g, "bumps", rng2);
        const ScalarField Sf = intrinsic_square(f, bank, cone);
        const ScalarField Sq = intrinsic_square(q, bank, cone);
        const ScalarField Sfq = intrinsic_square(added(f, q), bank, cone);
        for (std::size_t i = 0; i < Sf.values.size(); ++i)
            CHECK(Sfq.values[i] <= Sf.values[i] + Sq.values[i] + 1e-10);
    }
}

TEST_CASE("enlarging the bank never decreases the square function") {
    const Grid g = make_grid(1, 1.0, 128);
    const FunctionBank small = build_bank(0.5, 3, 1);
    const FunctionBank large = build_bank(0.5, 9, 1);
    const ConeParams cone = make_cone_params(g, 2.0 * g.spacing(), 0.5, 6);
    Rng rng(17);
    const ScalarField f = random_input(g, "bumps", rng);
    const ScalarField Ss = intrinsic_square(f, small, cone);
    const ScalarField Sl = intrinsic_square(f, large, cone);
    for (std::size_t i = 0; i < Ss.values.size(); ++i)
        CHECK(Sl.values[i] >= Ss.values[i] - 1e-12);
}

TEST_CASE("vector extension: consistency, duplication, permutation") {
    const Grid g = make_grid(1, 1.0, 128);
    const FunctionBank bank = build_bank(0.5, 2, 1);
    const ConeParams cone = make_cone_params(g, 2.0 * g.spacing(), 0.5, 6);
    Rng rng(23);
    const ScalarField f = random_input(g, "bumps", rng);
    const ScalarField zero = make_field(g);

    const ScalarField S = intrinsic_square(f, bank, cone);
    const ScalarField Sv = vec_intrinsic_square(make_vector_field({f, zero, zero}), bank, cone);
    for (std::size_t i = 0; i < S.values.size(); ++i) CHECK(Sv.values[i] == S.values[i]);

    const ScalarField Sd = vec_intrinsic_square(make_vector_field({f, f}), bank, cone);
    for (std::size_t i = 0; i < S.values.size(); ++i)
        CHECK(Sd.values[i] == doctest::Approx(std::sqrt(2.0) * S.values[i]).epsilon(1e-12));

    Rng rng2(29);
    const ScalarField q = random_input(g, "bumps", rng2);
    const ScalarField Sp = vec_intrinsic_square(make_vector_field({f, q}), bank, cone);
    const ScalarField Sq = vec_intrinsic_square(make_vector_field({q, f}), bank, cone);
    for (std::size_t i = 0; i < Sp.values.size(); ++i)
        CHECK(Sp.values[i] == doctest::Approx(Sq.values[i]).epsilon(1e-13));
}

TEST_CASE("commutator with a constant symbol vanishes") {
    const Grid g = make_grid(1, 1.0, 128);
    const FunctionBank bank = build_bank(0.5, 2, 1);
    const ConeParams cone = make_cone_params(g, 2.0 * g.spacing(), 0.5, 6);
    Rng rng(31);
    const ScalarField f = random_input(g, "bumps", rng);
    const ScalarField C = commutator_square(make_field(g, 1.5), f, bank, cone);
    for (double v : C.values) CHECK(v <= 1e-12);

    const VectorField F = make_vector_field({f, scaled(f, -0.5)});
    const ScalarField Cv = vec_commutator_square(make_field(g, -2.5), F, bank, cone);
    for (double v : Cv.values) CHECK(v <= 1e-12);
}

TEST_CASE("commutator matches the direct per-point oracle") {
    const Grid g = make_grid(1, 1.0, 64);
    const FunctionBank bank = build_bank(0.5, 1, 1);
    const ConeParams cone = make_cone_params(g, 2.0 * g.spacing(), 0.5, 4);
    const ScalarField f = centered_bump(g, -0.1, 0.15);
    const ScalarField b = sample(g, [](Point p) { return std::log(std::abs(p[0])); });

    const ScalarField C = commutator_square(b, f, bank, cone);
    const ScalarField C0 = commutator_square_direct(b, f, bank, cone);
    CHECK(rel_max_diff(C, C0) <= 1e-8);
}

TEST_CASE("commutator ignores constant shifts of the symbol") {
    const Grid g = make_grid(1, 1.0, 128);
    const FunctionBank bank = build_bank(0.5, 2, 1);
    const ConeParams cone = make_cone_params(g, 2.0 * g.spacing(), 0.5, 6);
    Rng rng(37);
    const ScalarField f = random_input(g, "bumps", rng);
    const ScalarField b = sample(g, [](Point p) { return std::log(std::abs(p[0])); });
    ScalarField bc = b;
    for (double& v : bc.values) v += 7.25;

    const ScalarField C = commutator_square(b, f, bank, cone);
    const ScalarField Cc = commutator_square(bc, f, bank, cone);
    CHECK(rel_max_diff(C, Cc) <= 1e-12);
}

TEST_CASE("vector commutator: single component and duplication identities") {
    const Grid g = make_grid(1, 1.0, 128);
    const FunctionBank bank = build_bank(0.5, 2, 1);
    const ConeParams cone = make_cone_params(g, 2.0 * g.spacing(), 0.5, 6);
    Rng rng(41);
    const ScalarField f = random_input(g, "bumps", rng);
    const ScalarField b = sample(g, [](Point p) { return std::log(std::abs(p[0])); });

    const ScalarField C = commutator_square(b, f, bank, cone);
    const ScalarField C1 =
        vec_commutator_square(b, make_vector_field({f, make_field(g)}), bank, cone);
    for (std::size_t i = 0; i < C.values.size(); ++i) CHECK(C1.values[i] == C.values[i]);

    const ScalarField C2 = vec_commutator_square(b, make_vector_field({f, f}), bank, cone);
    for (std::size_t i = 0; i < C.values.size(); ++i)
        CHECK(C2.values[i] == doctest::Approx(std::sqrt(2.0) * C.values[i]).epsilon(1e-12));
}

TEST_CASE("far field part of a locally supported input vanishes") {
    const Grid g = make_grid(1, 2.0, 256);
    const Ball B{{0.3, 0.0}, 0.05};
    const ScalarField f = centered_bump(g, 0.3, 0.02);  // inside 2B
    ScalarField far = f;
    for (std::size_t i = 0; i < far.values.size(); ++i)
        if (dist(g.center(i), B.center, g.n) < 2.0 * B.radius) far.values[i] = 0.0;
    for (double v : far.values) CHECK(v <= 1e-4);  // Gaussian tail only

    far = make_field(g);  // exact far-field of a compactly supported input
    const VectorField F = make_vector_field({far});
    const ScalarField M = farfield_majorant(F, B, 4);
    for (double v : M.values) CHECK(v == 0.0);
    const ConeParams cone = make_cone_params(g, 2.0 * g.spacing(), 1.0, 6);
    const ScalarField S = vec_intrinsic_square(F, build_bank(0.5, 2, 1), cone);
    for (double v : S.values) CHECK(v == 0.0);
}

TEST_CASE("annulus indicators light up exactly one majorant term") {
    const Grid g = make_grid(1, 2.0, 512);
    const Ball B{{0.0, 0.0}, 0.05};
    const int level = 2;
    const double rin = B.radius * (1 << level);
    const double rout = B.radius * (1 << (level + 1));
    const ScalarField ann = sample(g, [&](Point p) {
        const double d = std::abs(p[0]);
        return (d >= rin && d < rout) ? 1.0 : 0.0;
    });
    const VectorField F = make_vector_field({ann});
    const ScalarField M = farfield_majorant(F, B, 4);

    const auto outer = cells_in_ball(g, Ball{B.center, rout});
    double cnt = 0.0;
    for (std::size_t i : outer)
        if (dist(g.center(i), B.center, 1) >= rin) cnt += 1.0;
    const double expected = cnt / static_cast<double>(outer.size());
    CHECK(M.values[0] == doctest::Approx(expected).epsilon(1e-12));

    CHECK_THROWS_AS(farfield_majorant(F, Ball{{0.0, 0.0}, 0.5}, 4), std::invalid_argument);
}

TEST_CASE("far field domination ratio is stable across dilations") {
    const Grid g = make_grid(1, 2.0, 256);
    const FunctionBank bank = build_bank(0.5, 2, 1);
    const ConeParams cone = make_cone_params(g, 2.0 * g.spacing(), 1.0, 8);
    const Ball B{{0.0, 0.0}, 0.05};
    const ScalarField base = added(centered_bump(g, 0.5, 0.06), centered_bump(g, -0.45, 0.05));

    std::vector<double> ratios;
    for (double lambda : {1.0, 1.2, 1.5, 1.9}) {
        ScalarField f = dilate_translate(base, lambda, {0.0, 0.0});
        for (std::size_t i = 0; i < f.values.size(); ++i)
            if (dist(g.center(i), B.center, 1) < 2.0 * B.radius) f.values[i] = 0.0;
        const VectorField F = make_vector_field({f});
        const ScalarField M = farfield_majorant(F, B, 4);
        REQUIRE(M.values[0] > 0.0);
        const ScalarField S = vec_intrinsic_square(F, bank, cone);
        double worst = 0.0;
        for (std::size_t i : cells_in_ball(g, B))
            worst = std::max(worst, S.values[i] / M.values[0]);
        ratios.push_back(worst);
    }
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const double med = 0.5 * (sorted[1] + sorted[2]);
    for (double r : ratios) CHECK(r <= 10.0 * med);
}
