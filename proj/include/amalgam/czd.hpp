#pragma once

#include <array>
#include <string>
#include <vector>

#include "amalgam/grid.hpp"

namespace amalgam {

// Axis-aligned dyadic descendant of the root box: side = 2 extent / 2^level,
// per-axis index in [0, 2^level). Level floors at single cells.
struct DyadicCube {
    int level = 0;
    std::array<int, 2> index{0, 0};
    double avg = 0.0;  // ||f||_l2 average over the cube at selection time
};

double cube_side(const Grid& g, const DyadicCube& q);
Point cube_center(const Grid& g, const DyadicCube& q);
// Child digits from the root, e.g. "021"; "-" for the root itself.
std::string cube_path(const DyadicCube& q, int n);
std::vector<std::size_t> cube_cells(const Grid& g, const DyadicCube& q);

// f = g + h with g bounded by 2^n sigma and h cancellative on disjoint
// maximal dyadic cubes selected at height sigma.
struct CZDecomposition {
    double sigma = 0.0;
    std::vector<DyadicCube> cubes;
    VectorField good;
    VectorField bad;                // f - g, supported on the union of cubes
    std::vector<int> cube_of_cell;  // -1 off E, else index into `cubes`
};

// Requires sigma > 0 and root average of ||f||_l2 at most sigma.
CZDecomposition cz_decompose(const VectorField& F, double sigma);

// h_ij = (f_j - g_j) restricted to cube i, materialized on the full grid.
ScalarField bad_part(const CZDecomposition& d, std::size_t cube, std::size_t component);

struct CZReport {
    bool disjoint = false;
    bool heights_ok = false;       // sigma < avg <= 2^n sigma per cube
    bool maximal_ok = false;       // parent average <= sigma
    bool good_bound_ok = false;    // ||g|| <= 2^n sigma everywhere
    bool off_e_bound_ok = false;   // ||f|| <= sigma off the union of cubes
    bool cube_avg_bound_ok = false;  // ||g|| <= avg of ||f|| on each cube
    bool cancellation_ok = false;  // integral of each h_ij vanishes
    bool l1_bound_ok = false;      // ||h_ij||_1 <= 2 integral_{Q_i} |f_j|
    bool reconstruction_ok = false;
    bool floor_flag = false;       // single-cell cube exceeded 2^n sigma
    double measure_ratio = 0.0;    // sigma sum|Q_i| / integral ||f||

    bool pass() const {
        return disjoint && heights_ok && maximal_ok && good_bound_ok && off_e_bound_ok &&
               cube_avg_bound_ok && cancellation_ok && l1_bound_ok && reconstruction_ok;
    }
};

CZReport verify_cz(const CZDecomposition& d, const VectorField& F);

}  // namespace amalgam
