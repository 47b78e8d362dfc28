#include "amalgam/czd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace amalgam {

namespace {

int floor_level(const Grid& g) {
    int K = 0;
    while ((1 << K) < g.resolution) ++K;
    return K;
}

// Inclusive-exclusive cell ranges of a cube along each axis.
void cube_cell_range(const Grid& g, const DyadicCube& q, int axis, int& lo, int& hi) {
    const int width = g.resolution >> q.level;
    lo = q.index[static_cast<std::size_t>(axis)] * width;
    hi = lo + width;
}

}  // namespace

double cube_side(const Grid& g, const DyadicCube& q) {
    return 2.0 * g.extent / static_cast<double>(1 << q.level);
}

Point cube_center(const Grid& g, const DyadicCube& q) {
    const double side = cube_side(g, q);
    Point c{0.0, 0.0};
    for (int k = 0; k < g.n; ++k)
        c[static_cast<std::size_t>(k)] =
            -g.extent + (q.index[static_cast<std::size_t>(k)] + 0.5) * side;
    return c;
}

std::string cube_path(const DyadicCube& q, int n) {
    if (q.level == 0) return "-";
    std::string path;
    for (int l = q.level - 1; l >= 0; --l) {
        int digit = (q.index[0] >> l) & 1;
        if (n == 2) digit += 2 * ((q.index[1] >> l) & 1);
        path.push_back(static_cast<char>('0' + digit));
    }
    return path;
}

std::vector<std::size_t> cube_cells(const Grid& g, const DyadicCube& q) {
    std::vector<std::size_t> out;
    int xlo, xhi;
    cube_cell_range(g, q, 0, xlo, xhi);
    if (g.n == 1) {
        for (int i = xlo; i < xhi; ++i) out.push_back(static_cast<std::size_t>(i));
        return out;
    }
    int ylo, yhi;
    cube_cell_range(g, q, 1, ylo, yhi);
    for (int iy = ylo; iy < yhi; ++iy)
        for (int ix = xlo; ix < xhi; ++ix)
            out.push_back(static_cast<std::size_t>(iy) * g.resolution + ix);
    return out;
}

CZDecomposition cz_decompose(const VectorField& F, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("cz_decompose: sigma must be positive");
    if (F.components.empty()) throw std::invalid_argument("cz_decompose: empty input");
    const Grid& g = F.grid;
    const ScalarField s = l2_norm_field(F);

    double root_sum = 0.0;
    for (double v : s.values) root_sum += v;
    const double root_avg = root_sum / static_cast<double>(s.values.size());
    if (root_avg > sigma)
        throw std::invalid_argument("cz_decompose: height below root average");

    const int K = floor_level(g);

    CZDecomposition d;
    d.sigma = sigma;
    d.cube_of_cell.assign(g.cell_count(), -1);

    auto cube_sum = [&](const DyadicCube& q) {
        double sum = 0.0;
        for (std::size_t i : cube_cells(g, q)) sum += s.values[i];
        return sum;
    };

    // Depth-first subdivision in fixed child order keeps the cube list
    // deterministic.
    std::vector<DyadicCube> stack{DyadicCube{0, {0, 0}, root_avg}};
    while (!stack.empty()) {
        const DyadicCube q = stack.back();
        stack.pop_back();
        if (q.level == K) continue;
        const int children = g.n == 1 ? 2 : 4;
        for (int c = children - 1; c >= 0; --c) {
            DyadicCube child;
            child.level = q.level + 1;
            child.index[0] = 2 * q.index[0] + (c & 1);
            child.index[1] = g.n == 2 ? 2 * q.index[1] + ((c >> 1) & 1) : 0;
            const auto cells = cube_cells(g, child);
            const double avg = cube_sum(child) / static_cast<double>(cells.size());
            if (avg > sigma) {
                child.avg = avg;
                for (std::size_t i : cells)
                    d.cube_of_cell[i] = static_cast<int>(d.cubes.size());
                d.cubes.push_back(child);
            } else {
                stack.push_back(child);
            }
        }
    }
    // stack order pushed children reversed; re-sort cubes for a stable listing
    std::sort(d.cubes.begin(), d.cubes.end(), [&](const DyadicCube& a, const DyadicCube& b) {
        if (a.level != b.level) return a.level < b.level;
        if (a.index[1] != b.index[1]) return a.index[1] < b.index[1];
        return a.index[0] < b.index[0];
    });
    for (std::size_t ci = 0; ci < d.cubes.size(); ++ci)
        for (std::size_t i : cube_cells(g, d.cubes[ci]))
            d.cube_of_cell[i] = static_cast<int>(ci);

    d.good.grid = g;
    d.bad.grid = g;
    for (const ScalarField& f : F.components) {
        ScalarField gj = f;
        for (const DyadicCube& q : d.cubes) {
            const auto cells = cube_cells(g, q);
            double avg = 0.0;
            for (std::size_t i : cells) avg += f.values[i];
            avg /= static_cast<double>(cells.size());
            for (std::size_t i : cells) gj.values[i] = avg;
        }
        ScalarField hj = subtracted(f, gj);
        d.good.components.push_back(std::move(gj));
        d.bad.components.push_back(std::move(hj));
    }
    return d;
}

ScalarField bad_part(const CZDecomposition& d, std::size_t cube, std::size_t component) {
    if (cube >= d.cubes.size() || component >= d.bad.components.size())
        throw std::invalid_argument("bad_part: index out of range");
    ScalarField out = make_field(d.bad.grid);
    for (std::size_t i : cube_cells(d.bad.grid, d.cubes[cube]))
        out.values[i] = d.bad.components[component].values[i];
    return out;
}

CZReport verify_cz(const CZDecomposition& d, const VectorField& F) {
    const Grid& g = F.grid;
    if (!(d.good.grid == g) || d.good.components.size() != F.components.size())
        throw std::invalid_argument("verify_cz: decomposition does not match the input field");
    if (!(d.sigma > 0.0)) throw std::invalid_argument("verify_cz: bad sigma");

    const ScalarField s = l2_norm_field(F);
    const double hn = std::pow(g.spacing(), g.n);
    const double twon = std::pow(2.0, g.n);
    const double slack = 1.0 + 1e-12;

    CZReport rep;

    // ownership / disjointness
    std::vector<int> owner(g.cell_count(), -1);
    rep.disjoint = true;
    for (std::size_t ci = 0; ci < d.cubes.size(); ++ci) {
        for (std::size_t i : cube_cells(g, d.cubes[ci])) {
            if (owner[i] != -1) rep.disjoint = false;
            owner[i] = static_cast<int>(ci);
        }
    }

    rep.heights_ok = true;
    rep.maximal_ok = true;
    rep.floor_flag = false;
    double cube_measure = 0.0;
    for (const DyadicCube& q : d.cubes) {
        const auto cells = cube_cells(g, q);
        double avg = 0.0;
        for (std::size_t i : cells) avg += s.values[i];
        avg /= static_cast<double>(cells.size());
        if (!(avg > d.sigma && avg <= twon * d.sigma * slack)) rep.heights_ok = false;
        if (cells.size() == 1 && avg > twon * d.sigma * slack) rep.floor_flag = true;
        cube_measure += static_cast<double>(cells.size()) * hn;
        if (q.level > 0) {
            DyadicCube parent{q.level - 1, {q.index[0] / 2, q.index[1] / 2}, 0.0};
            const auto pcells = cube_cells(g, parent);
            double pavg = 0.0;
            for (std::size_t i : pcells) pavg += s.values[i];
            pavg /= static_cast<double>(pcells.size());
            if (pavg > d.sigma * slack) rep.maximal_ok = false;
        }
    }
    double total_mass = 0.0;
    for (double v : s.values) total_mass += v;
    total_mass *= hn;
    rep.measure_ratio = total_mass > 0.0 ? d.sigma * cube_measure / total_mass : 0.0;

    const ScalarField gn = l2_norm_field(d.good);
    rep.good_bound_ok = true;
    rep.off_e_bound_ok = true;
    rep.cube_avg_bound_ok = true;
    for (std::size_t i = 0; i < gn.values.size(); ++i) {
        if (gn.values[i] > twon * d.sigma * slack) rep.good_bound_ok = false;
        if (owner[i] == -1) {
            if (s.values[i] > d.sigma * slack) rep.off_e_bound_ok = false;
        } else {
            const double avg = d.cubes[static_cast<std::size_t>(owner[i])].avg;
            if (gn.values[i] > avg * slack + 1e-14) rep.cube_avg_bound_ok = false;
        }
    }

    rep.cancellation_ok = true;
    rep.l1_bound_ok = true;
    for (std::size_t j = 0; j < F.components.size(); ++j) {
        const ScalarField& fj = F.components[j];
        const ScalarField& hj = d.bad.components[j];
        double l1_fj = 0.0;
        for (double v : fj.values) l1_fj += std::abs(v);
        l1_fj *= hn;
        for (const DyadicCube& q : d.cubes) {
            double hsum = 0.0, habs = 0.0, fabs_cube = 0.0;
            for (std::size_t i : cube_cells(g, q)) {
                hsum += hj.values[i];
                habs += std::abs(hj.values[i]);
                fabs_cube += std::abs(fj.values[i]);
            }
            if (std::abs(hsum * hn) > 1e-10 * std::max(l1_fj, 1e-300))
                rep.cancellation_ok = false;
            if (habs * hn > 2.0 * fabs_cube * hn + 1e-12) rep.l1_bound_ok = false;
        }
    }

    double max_f = 0.0;
    for (const auto& fj : F.components) max_f = std::max(max_f, max_abs(fj));
    const double rec_tol = 1e-15 * std::max(1.0, max_f);
    rep.reconstruction_ok = true;
    for (std::size_t j = 0; j < F.components.size(); ++j)
        for (std::size_t i = 0; i < F.components[j].values.size(); ++i) {
            const double rec = d.good.components[j].values[i] + d.bad.components[j].values[i];
            if (std::abs(rec - F.components[j].values[i]) > rec_tol)
                rep.reconstruction_ok = false;
        }

    return rep;
}

}  // namespace amalgam
