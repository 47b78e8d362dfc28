#include "amalgam/testbank.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace amalgam {

namespace {

constexpr double kEpsMargin = 0.02;
constexpr double kMeanTol = 1e-12;

// Smooth bump supported in the closed unit ball.
double mollifier(double r2) {
    if (r2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2));
}

double norm2(const Point& p, int n) {
    double s = p[0] * p[0];
    if (n == 2) s += p[1] * p[1];
    return s;
}

// Van der Corput base-2 radicals: any prefix spreads evenly over [0,1).
double vdc2(unsigned v) {
    double x = 0.0, base = 0.5;
    for (; v; v >>= 1, base *= 0.5)
        if (v & 1u) x += base;
    return x;
}

int default_lattice(int n) { return n == 1 ? 512 : 128; }

void clip_to_unit_ball(ScalarField& f) {
    const Grid& g = f.grid;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        if (norm2(g.center(i), g.n) > 1.0) f.values[i] = 0.0;
}

// Zero the lattice sum by spreading the defect over the in-ball cells.
void mean_correct(ScalarField& f) {
    const Grid& g = f.grid;
    double sum = 0.0;
    std::size_t inball = 0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        sum += f.values[i];
        if (norm2(g.center(i), g.n) <= 1.0) ++inball;
    }
    if (inball == 0) return;
    const double corr = sum / static_cast<double>(inball);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        if (norm2(g.center(i), g.n) <= 1.0) f.values[i] -= corr;
}

}  // namespace

double bank_eps_margin() { return kEpsMargin; }

double eval_profile(const TestFunction& phi, const Point& p) {
    return interp(phi.profile, p);
}

double holder_seminorm_sampled(const ScalarField& profile, double gamma) {
    const Grid& g = profile.grid;
    const int N = g.resolution;
    double best = 0.0;

    auto consider = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        const double dv = std::abs(profile.values[i] - profile.values[j]);
        if (dv == 0.0) return;
        const double d = dist(g.center(i), g.center(j), g.n);
        best = std::max(best, dv / std::pow(d, gamma));
    };

    if (g.n == 1) {
        for (int i = 0; i < N; ++i)
            for (int d = 1; d <= 4 && i + d < N; ++d)
                consider(static_cast<std::size_t>(i), static_cast<std::size_t>(i + d));
    } else {
        for (int iy = 0; iy < N; ++iy)
            for (int ix = 0; ix < N; ++ix)
                for (int dy = 0; dy <= 4; ++dy)
                    for (int dx = -4; dx <= 4; ++dx) {
                        if (dy == 0 && dx <= 0) continue;
                        const int jx = ix + dx, jy = iy + dy;
                        if (jx < 0 || jx >= N || jy >= N) continue;
                        consider(static_cast<std::size_t>(iy) * N + ix,
                                 static_cast<std::size_t>(jy) * N + jx);
                    }
    }

    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    const std::size_t cells = g.cell_count();
    for (int k = 0; k < 10000; ++k) {
        const std::size_t i = static_cast<std::size_t>(rng() % cells);
        const std::size_t j = static_cast<std::size_t>(rng() % cells);
        consider(i, j);
    }
    return best;
}

AdmissibilityReport validate_admissible(const TestFunction& phi) {
    AdmissibilityReport rep;
    const Grid& g = phi.profile.grid;

    rep.support_ok = true;
    bool all_zero = true;
    double sum = 0.0;
    for (std::size_t i = 0; i < phi.profile.values.size(); ++i) {
        const double v = phi.profile.values[i];
        sum += v;
        if (v != 0.0) all_zero = false;
        if (norm2(g.center(i), g.n) > 1.0 && v != 0.0) rep.support_ok = false;
    }
    rep.degenerate = all_zero;
    rep.mean = sum / static_cast<double>(phi.profile.values.size());
    rep.mean_zero_ok = std::abs(rep.mean) <= kMeanTol;
    rep.seminorm = holder_seminorm_sampled(phi.profile, phi.gamma);
    rep.holder_ok = rep.seminorm <= 1.0;
    return rep;
}

FunctionBank build_bank(double gamma, int size, int n, int lattice_resolution) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("build_bank: gamma must lie in (0, 1]");
    if (size < 1) throw std::invalid_argument("build_bank: size must be >= 1");
    if (n != 1 && n != 2) throw std::invalid_argument("build_bank: dimension must be 1 or 2");
    const int M = lattice_resolution > 0 ? lattice_resolution : default_lattice(n);
    const Grid lattice = make_grid(n, 1.0, M);

    FunctionBank bank;
    bank.gamma = gamma;

    for (int i = 0; i < size; ++i) {
        const int family = i % 3;
        const unsigned variant = static_cast<unsigned>(i / 3);
        ScalarField prof = make_field(lattice);
        std::ostringstream label;

        if (family == 0) {
            const double a = 1.5 + 1.5 * vdc2(variant);
            for (std::size_t c = 0; c < prof.values.size(); ++c) {
                const Point p = lattice.center(c);
                prof.values[c] = mollifier(a * a * norm2(p, n)) -
                                 std::pow(a, -n) * mollifier(norm2(p, n));
            }
            label << "radial:a=" << a;
        } else if (family == 1) {
            // widest admissible support first: the family sup sits at the
            // boundary, later members only refine the interior
            const int axis = static_cast<int>(variant) % n;
            const double s = 0.98 - 0.48 * vdc2(variant / static_cast<unsigned>(n));
            for (std::size_t c = 0; c < prof.values.size(); ++c) {
                const Point p = lattice.center(c);
                prof.values[c] = p[axis] * mollifier(norm2(p, n) / (s * s));
            }
            label << "odd:axis=" << axis << ",s=" << s;
        } else {
            const int axis = static_cast<int>(variant) % n;
            const double u = 0.5 - 0.35 * vdc2(variant / static_cast<unsigned>(n));
            const double s = 1.0 - u - 0.02;
            for (std::size_t c = 0; c < prof.values.size(); ++c) {
                Point p = lattice.center(c);
                Point pm = p, pp = p;
                pm[axis] -= u;
                pp[axis] += u;
                prof.values[c] = mollifier(norm2(pm, n) / (s * s)) -
                                 mollifier(norm2(pp, n) / (s * s));
            }
            label << "pair:axis=" << axis << ",u=" << u << ",s=" << s;
        }

        clip_to_unit_ball(prof);
        mean_correct(prof);
        const double s0 = holder_seminorm_sampled(prof, gamma);
        if (!(s0 > 0.0)) continue;
        TestFunction phi{gamma, scaled(prof, (1.0 - kEpsMargin) / s0), label.str()};
        if (validate_admissible(phi).admissible()) bank.members.push_back(std::move(phi));
    }

    if (bank.members.empty()) throw std::runtime_error("build_bank: no admissible members");
    return bank;
}

void write_bank(const std::string& path, const FunctionBank& bank) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_bank: cannot open " + path);
    const Grid& g = bank.members.front().profile.grid;
    out << g.n << ' ' << g.resolution << ' ';
    out.precision(17);
    out << g.extent << ' ' << bank.members.size() << ' ' << bank.gamma << '\n';
    for (const auto& m : bank.members)
        out.write(reinterpret_cast<const char*>(m.profile.values.data()),
                  static_cast<std::streamsize>(m.profile.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_bank: write failed for " + path);
}

FunctionBank read_bank(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_bank: cannot open " + path);
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    int n = 0, M = 0;
    double extent = 0.0, gamma = 0.0;
    std::size_t K = 0;
    if (!(hs >> n >> M >> extent >> K >> gamma))
        throw std::runtime_error("read_bank: malformed header in " + path);
    const Grid g = make_grid(n, extent, M);
    FunctionBank bank;
    bank.gamma = gamma;
    for (std::size_t k = 0; k < K; ++k) {
        ScalarField prof = make_field(g);
        in.read(reinterpret_cast<char*>(prof.values.data()),
                static_cast<std::streamsize>(prof.values.size() * sizeof(double)));
        if (!in) throw std::runtime_error("read_bank: truncated payload in " + path);
        std::ostringstream label;
        label << "member:" << k;
        bank.members.push_back(TestFunction{gamma, std::move(prof), label.str()});
    }
    if (bank.members.empty()) throw std::runtime_error("read_bank: empty bank");
    return bank;
}

}  // namespace amalgam
