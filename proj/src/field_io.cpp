#include "amalgam/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace amalgam {

namespace {

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; byte swapping not implemented");

void write_doubles(std::ofstream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

}  // namespace

void write_field(const std::string& path, const VectorField& F) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_field: cannot open " + path);
    out << F.grid.n << ' ' << F.grid.resolution << ' ';
    out.precision(17);
    out << F.grid.extent << ' ' << F.components.size() << '\n';
    for (const auto& comp : F.components) write_doubles(out, comp.values);
    if (!out) throw std::runtime_error("write_field: write failed for " + path);
}

void write_field(const std::string& path, const ScalarField& f) {
    write_field(path, VectorField{f.grid, {f}});
}

VectorField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_field: cannot open " + path);
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    int n = 0, N = 0;
    double extent = 0.0;
    std::size_t J = 0;
    if (!(hs >> n >> N >> extent >> J))
        throw std::runtime_error("read_field: malformed header in " + path);
    Grid g = make_grid(n, extent, N);
    std::vector<ScalarField> comps;
    comps.reserve(J);
    for (std::size_t j = 0; j < J; ++j) {
        ScalarField f = make_field(g);
        in.read(reinterpret_cast<char*>(f.values.data()),
                static_cast<std::streamsize>(f.values.size() * sizeof(double)));
        if (!in) throw std::runtime_error("read_field: truncated payload in " + path);
        ensure_finite(f, "read_field");
        comps.push_back(std::move(f));
    }
    return make_vector_field(std::move(comps));
}

ScalarField read_scalar_field(const std::string& path) {
    VectorField F = read_field(path);
    if (F.components.size() != 1)
        throw std::runtime_error("read_scalar_field: " + path + " holds J != 1 components");
    return F.components.front();
}

ScalarField read_csv_field(const std::string& path, double extent) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv_field: cannot open " + path);
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        values.push_back(std::stod(line));
    }
    Grid g = make_grid(1, extent, static_cast<int>(values.size()));
    ScalarField f{g, std::move(values)};
    ensure_finite(f, "read_csv_field");
    return f;
}

}  // namespace amalgam
