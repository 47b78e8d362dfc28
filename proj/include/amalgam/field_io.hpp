#pragma once

#include <string>

#include "amalgam/grid.hpp"

namespace amalgam {

// Field file format: one ASCII header line "n N extent J" followed by
// J * N^n little-endian 64-bit floats, row-major, one component after another.
void write_field(const std::string& path, const VectorField& F);
void write_field(const std::string& path, const ScalarField& f);
VectorField read_field(const std::string& path);
ScalarField read_scalar_field(const std::string& path);

// CSV import for n = 1: one value per line; N is the line count and must be
// a power of two >= 8.
ScalarField read_csv_field(const std::string& path, double extent);

}  // namespace amalgam
