#include "amalgam/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "amalgam/field_io.hpp"

namespace amalgam {

namespace {

using ordered_json = nlohmann::ordered_json;

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double parse_exponent(const std::string& value) {
    if (value == "inf" || value == "infinity") return std::numeric_limits<double>::infinity();
    return std::stod(value);
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

void validate_scenario(const Scenario& s) {
    if (!(s.gamma > 0.0 && s.gamma <= 1.0))
        throw std::invalid_argument("scenario: gamma must lie in (0, 1]");
    if (s.J < 1 || s.input_count < 1 || s.bank_size < 1)
        throw std::invalid_argument("scenario: counts must be positive");
    if (!(s.ceiling > 0.0)) throw std::invalid_argument("scenario: ceiling must be set");
    switch (s.tag) {
        case TheoremTag::Strong:
        case TheoremTag::CommutatorStrong:
            if (!(s.p > 1.0 && s.p <= s.alpha && s.alpha < s.q))
                throw std::invalid_argument("scenario: strong mode needs 1 < p <= alpha < q");
            break;
        case TheoremTag::Weak:
        case TheoremTag::CommutatorEndpoint:
            if (!(s.p == 1.0 && s.alpha >= 1.0 && s.alpha < s.q))
                throw std::invalid_argument("scenario: weak/endpoint mode needs p = 1 <= alpha < q");
            break;
        case TheoremTag::WilsonWeakMw:
            if (s.p != 1.0) throw std::invalid_argument("scenario: wilson mode needs p = 1");
            break;
    }
}

struct Assembled {
    Grid g;
    Weight w;
    Weight mu;
    FunctionBank bank;
    ConeParams cone;
    AmalgamParams P;
    ScalarField symbol;
};

Assembled assemble(const Scenario& s) {
    validate_scenario(s);
    Assembled a;
    a.g = make_grid(s.n, s.extent, s.N);
    a.w = weight_from_spec(s.w_spec, a.g, Weight::Role::Measure);
    a.mu = weight_from_spec(s.mu_spec, a.g, Weight::Role::Outer);
    a.bank = build_bank(s.gamma, s.bank_size, s.n);
    const double h = a.g.spacing();
    a.cone = make_cone_params(a.g, s.cone_tmin > 0.0 ? s.cone_tmin : 2.0 * h,
                              s.cone_tmax > 0.0 ? s.cone_tmax : s.extent, s.cone_scales);
    a.P = make_amalgam_params(a.g, s.p, s.alpha, s.q, s.radius_count, s.center_stride);
    if (s.tag == TheoremTag::CommutatorStrong || s.tag == TheoremTag::CommutatorEndpoint)
        a.symbol = symbol_from_spec(s.b_spec, a.g);
    return a;
}

VectorField dilated(const VectorField& F, double lambda) {
    std::vector<ScalarField> comps;
    comps.reserve(F.components.size());
    for (const auto& f : F.components)
        comps.push_back(dilate_translate(f, lambda, Point{0.0, 0.0}));
    return make_vector_field(std::move(comps));
}

ScalarField phi_of(const ScalarField& normf, double sigma) {
    const YoungFunction phi = young_llogl();
    ScalarField out = normf;
    for (double& v : out.values) v = phi(v / sigma);
    return out;
}

// Left side of the endpoint display: the outer L^q_mu norm over centers of
// w(B)^(1/alpha - 1 - 1/q) * w({x in B : field > sigma}), maximized over the
// radius grid.
double superlevel_amalgam_lhs(const ScalarField& field, double sigma, const AmalgamParams& P,
                              const Weight& w, const Weight& mu) {
    const Grid& g = field.grid;
    const double hn = std::pow(g.spacing(), g.n);
    const double inv_q = std::isinf(P.q) ? 0.0 : 1.0 / P.q;
    const double pre_exp = 1.0 / P.alpha - 1.0 - inv_q;
    const double outer_cell = std::pow(P.center_stride * g.spacing(), g.n);
    const int N = g.resolution;

    std::vector<std::size_t> centers;
    for (int iy = 0; iy < (g.n == 2 ? N : 1); iy += P.center_stride)
        for (int ix = 0; ix < N; ix += P.center_stride)
            centers.push_back(g.n == 1 ? static_cast<std::size_t>(ix)
                                       : static_cast<std::size_t>(iy) * N + ix);

    double best = 0.0;
    for (double r : P.radii) {
        double outer_sum = 0.0, outer_max = 0.0;
        for (std::size_t ci : centers) {
            const auto cells = cells_in_ball(g, Ball{g.center(ci), r});
            if (cells.empty()) continue;
            double wB = 0.0, mass = 0.0;
            for (std::size_t i : cells) {
                wB += w.density.values[i];
                if (field.values[i] > sigma) mass += w.density.values[i];
            }
            wB *= hn;
            mass *= hn;
            const double val = std::pow(wB, pre_exp) * mass;
            outer_max = std::max(outer_max, val);
            if (!std::isinf(P.q))
                outer_sum += std::pow(val, P.q) * mu.density.values[ci] * outer_cell;
        }
        best = std::max(best, std::isinf(P.q) ? outer_max : std::pow(outer_sum, 1.0 / P.q));
    }
    return best;
}

void finalize_stats(Report& rep, const Scenario& s, const std::vector<double>& ratios,
                    const std::vector<double>& ratios_check) {
    rep.max_ratio = 0.0;
    for (double r : ratios) rep.max_ratio = std::max(rep.max_ratio, r);
    rep.median_ratio = median_of(ratios);
    rep.stability = 0.0;
    for (const auto& row : rep.rows) {
        if (row.skipped || row.dilation_ratios.empty()) continue;
        const auto [lo, hi] =
            std::minmax_element(row.dilation_ratios.begin(), row.dilation_ratios.end());
        if (*lo > 0.0) rep.stability = std::max(rep.stability, *hi / *lo);
    }
    rep.saturation_change = 0.0;
    if (!ratios_check.empty() && rep.median_ratio > 0.0)
        rep.saturation_change =
            std::abs(median_of(ratios_check) - rep.median_ratio) / rep.median_ratio;

    rep.ceiling = s.ceiling;
    rep.stability_limit = s.stability_factor;
    rep.saturation_tol = s.saturation_tol;

    bool ok = true;
    for (double r : ratios)
        if (!std::isfinite(r)) ok = false;
    if (rep.max_ratio > s.ceiling) ok = false;
    if (rep.stability > s.stability_factor) ok = false;
    if (!ratios_check.empty() && rep.saturation_change > s.saturation_tol) ok = false;
    if (rep.joint_scaling_error > 1e-8) ok = false;
    for (double r : rep.per_sigma_ratio_amalgam)
        if (!(r <= s.ceiling)) ok = false;
    for (double r : rep.per_sigma_ratio_global)
        if (!(r <= s.ceiling)) ok = false;
    rep.pass = ok;
}

const std::vector<double> kLadder{1.0, std::pow(2.0, 1.0 / 3.0), std::pow(2.0, 2.0 / 3.0), 2.0};

}  // namespace

std::string tag_name(TheoremTag tag) {
    switch (tag) {
        case TheoremTag::Strong: return "strong";
        case TheoremTag::Weak: return "weak";
        case TheoremTag::CommutatorStrong: return "commutator-strong";
        case TheoremTag::CommutatorEndpoint: return "commutator-endpoint";
        case TheoremTag::WilsonWeakMw: return "wilson-weak-mw";
    }
    return "strong";
}

TheoremTag tag_from_name(const std::string& name) {
    if (name == "strong") return TheoremTag::Strong;
    if (name == "weak") return TheoremTag::Weak;
    if (name == "commutator-strong") return TheoremTag::CommutatorStrong;
    if (name == "commutator-endpoint") return TheoremTag::CommutatorEndpoint;
    if (name == "wilson-weak-mw") return TheoremTag::WilsonWeakMw;
    throw std::invalid_argument("unknown theorem tag: " + name);
}

Scenario parse_scenario_text(const std::string& text) {
    Scenario s;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("scenario: expected 'key = value', got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "name") s.name = value;
        else if (key == "tag") s.tag = tag_from_name(value);
        else if (key == "n") s.n = std::stoi(value);
        else if (key == "N") s.N = std::stoi(value);
        else if (key == "extent") s.extent = std::stod(value);
        else if (key == "p") s.p = parse_exponent(value);
        else if (key == "q") s.q = parse_exponent(value);
        else if (key == "alpha") s.alpha = parse_exponent(value);
        else if (key == "gamma") s.gamma = std::stod(value);
        else if (key == "J") s.J = std::stoi(value);
        else if (key == "w") s.w_spec = value;
        else if (key == "mu") s.mu_spec = value;
        else if (key == "b") s.b_spec = value;
        else if (key == "bank.size") s.bank_size = std::stoi(value);
        else if (key == "bank.check") s.bank_size_check = std::stoi(value);
        else if (key == "cone.tmin") s.cone_tmin = std::stod(value);
        else if (key == "cone.tmax") s.cone_tmax = std::stod(value);
        else if (key == "cone.scales") s.cone_scales = std::stoi(value);
        else if (key == "family") s.family = value;
        else if (key == "family.count") s.input_count = std::stoi(value);
        else if (key == "seed") s.seed = std::stoull(value);
        else if (key == "ceiling") s.ceiling = std::stod(value);
        else if (key == "stability.factor") s.stability_factor = std::stod(value);
        else if (key == "saturation.tol") s.saturation_tol = std::stod(value);
        else if (key == "radius.count") s.radius_count = std::stoi(value);
        else if (key == "center.stride") s.center_stride = std::stoi(value);
        else if (key == "sigma.factors") {
            s.sigma_factors.clear();
            std::istringstream vs(value);
            std::string tok;
            while (std::getline(vs, tok, ',')) s.sigma_factors.push_back(std::stod(trim(tok)));
        } else {
            throw std::invalid_argument("scenario: unknown key: " + key);
        }
    }
    validate_scenario(s);
    return s;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_scenario: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

Weight weight_from_spec(const std::string& spec, const Grid& g, Weight::Role role) {
    if (spec.rfind("const:", 0) == 0)
        return make_weight(make_field(g, std::stod(spec.substr(6))), role);
    if (spec.rfind("power:", 0) == 0) return power_weight(std::stod(spec.substr(6)), g, role);
    ScalarField f = read_scalar_field(spec);
    if (!(f.grid == g)) throw std::invalid_argument("weight file grid mismatch: " + spec);
    return make_weight(std::move(f), role);
}

ScalarField symbol_from_spec(const std::string& spec, const Grid& g) {
    if (spec == "logabs") {
        const Point origin{0.0, 0.0};
        return sample(g, [&](Point p) { return std::log(dist(p, origin, g.n)); });
    }
    if (spec.rfind("const:", 0) == 0) return make_field(g, std::stod(spec.substr(6)));
    ScalarField f = read_scalar_field(spec);
    if (!(f.grid == g)) throw std::invalid_argument("symbol file grid mismatch: " + spec);
    return f;
}

ScalarField random_input(const Grid& g, const std::string& family, Rng& rng) {
    const double E = g.extent;
    if (family == "zero") return make_field(g);

    if (family == "indicators") {
        ScalarField f = make_field(g);
        for (int m = 0; m < 4; ++m) {
            const double amp = rng.uniform(0.5, 2.0);
            Point lo{0.0, 0.0}, hi{0.0, 0.0};
            for (int k = 0; k < g.n; ++k) {
                const double a = rng.uniform(-E / 2.0, E / 4.0);
                const double wdt = rng.uniform(E / 16.0, E / 4.0);
                lo[k] = a;
                hi[k] = std::min(a + wdt, E / 2.0);
            }
            for (std::size_t i = 0; i < f.values.size(); ++i) {
                const Point x = g.center(i);
                bool inside = true;
                for (int k = 0; k < g.n; ++k)
                    if (x[k] < lo[k] || x[k] > hi[k]) inside = false;
                if (inside) f.values[i] += amp;
            }
        }
        return f;
    }

    if (family != "bumps") throw std::invalid_argument("unknown input family: " + family);

    struct Bump {
        double amp, sx, cx, cy;
    };
    std::vector<Bump> bumps;
    for (int m = 0; m < 5; ++m) {
        Bump b;
        b.amp = rng.uniform(-1.0, 1.0);
        b.sx = rng.uniform(E / 32.0, E / 8.0);
        b.cx = rng.uniform(-E / 4.0, E / 4.0);
        b.cy = g.n == 2 ? rng.uniform(-E / 4.0, E / 4.0) : 0.0;
        bumps.push_back(b);
    }
    auto window1d = [&](double x) {
        const double a = std::abs(x);
        if (a <= 3.0 * E / 8.0) return 1.0;
        if (a >= E / 2.0) return 0.0;
        const double t = (a - 3.0 * E / 8.0) / (E / 8.0);
        const double c = std::cos(0.5 * std::numbers::pi * t);
        return c * c;
    };
    ScalarField f = make_field(g);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const Point x = g.center(i);
        double v = 0.0;
        for (const Bump& b : bumps) {
            double d2 = (x[0] - b.cx) * (x[0] - b.cx);
            if (g.n == 2) d2 += (x[1] - b.cy) * (x[1] - b.cy);
            v += b.amp * std::exp(-d2 / (2.0 * b.sx * b.sx));
        }
        double win = window1d(x[0]);
        if (g.n == 2) win *= window1d(x[1]);
        f.values[i] = v * win;
    }
    return f;
}

VectorField random_vector_input(const Grid& g, int J, const std::string& family,
                                std::uint64_t seed) {
    std::vector<ScalarField> comps;
    comps.reserve(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) {
        Rng rng(seed * 1000003ULL + static_cast<std::uint64_t>(j));
        comps.push_back(random_input(g, family, rng));
    }
    return make_vector_field(std::move(comps));
}

Report run_strong(const Scenario& s) {
    if (s.tag != TheoremTag::Strong && s.tag != TheoremTag::CommutatorStrong)
        throw std::invalid_argument("run_strong: scenario tag mismatch");
    Assembled a = assemble(s);
    FunctionBank bank_check;
    if (s.bank_size_check > s.bank_size)
        bank_check = build_bank(s.gamma, s.bank_size_check, s.n);

    auto op = [&](const VectorField& F, const FunctionBank& bank) {
        return s.tag == TheoremTag::CommutatorStrong
                   ? vec_commutator_square(a.symbol, F, bank, a.cone)
                   : vec_intrinsic_square(F, bank, a.cone);
    };

    Report rep;
    rep.scenario_name = s.name;
    rep.tag = tag_name(s.tag);
    std::vector<double> ratios, ratios_check;

    for (int i = 0; i < s.input_count; ++i) {
        ReportRow row;
        row.input_id = i;
        row.seed = s.seed + static_cast<std::uint64_t>(i);
        const VectorField F = random_vector_input(a.g, s.J, s.family, row.seed);
        const double den =
            amalgam_norm(l2_norm_field(F), a.P, a.w, a.mu, AmalgamKind::Strong).value;
        if (!(den > 0.0)) {
            row.skipped = true;
            rep.rows.push_back(row);
            continue;
        }
        row.denominator = den;
        row.numerator = amalgam_norm(op(F, a.bank), a.P, a.w, a.mu, AmalgamKind::Strong).value;
        row.ratio = row.numerator / row.denominator;
        ratios.push_back(row.ratio);

        for (double lambda : kLadder) {
            if (lambda == 1.0) {
                row.dilation_ratios.push_back(row.ratio);
                continue;
            }
            const VectorField Fl = dilated(F, lambda);
            const double dl =
                amalgam_norm(l2_norm_field(Fl), a.P, a.w, a.mu, AmalgamKind::Strong).value;
            if (!(dl > 0.0)) continue;
            const double nl =
                amalgam_norm(op(Fl, a.bank), a.P, a.w, a.mu, AmalgamKind::Strong).value;
            row.dilation_ratios.push_back(nl / dl);
        }

        if (!bank_check.members.empty()) {
            const double n2 =
                amalgam_norm(op(F, bank_check), a.P, a.w, a.mu, AmalgamKind::Strong).value;
            ratios_check.push_back(n2 / den);
        }
        rep.rows.push_back(std::move(row));
    }

    finalize_stats(rep, s, ratios, ratios_check);
    return rep;
}

Report run_weak(const Scenario& s) {
    if (s.tag != TheoremTag::Weak && s.tag != TheoremTag::WilsonWeakMw)
        throw std::invalid_argument("run_weak: scenario tag mismatch");
    Assembled a = assemble(s);

    Report rep;
    rep.scenario_name = s.name;
    rep.tag = tag_name(s.tag);
    std::vector<double> ratios;
    const double hn = std::pow(a.g.spacing(), a.g.n);

    ScalarField maximal_w = make_field(a.g);
    if (s.tag == TheoremTag::WilsonWeakMw) maximal_w = hl_maximal(a.w.density);
    rep.per_sigma_ratio_global.assign(s.sigma_factors.size(), 0.0);
    rep.sigma_grid.assign(s.sigma_factors.size(), 0.0);

    for (int i = 0; i < s.input_count; ++i) {
        ReportRow row;
        row.input_id = i;
        row.seed = s.seed + static_cast<std::uint64_t>(i);
        const VectorField F = random_vector_input(a.g, s.J, s.family, row.seed);
        const ScalarField normF = l2_norm_field(F);

        if (s.tag == TheoremTag::Weak) {
            const double den = amalgam_norm(normF, a.P, a.w, a.mu, AmalgamKind::Strong).value;
            if (!(den > 0.0)) {
                row.skipped = true;
                rep.rows.push_back(row);
                continue;
            }
            const ScalarField S = vec_intrinsic_square(F, a.bank, a.cone);
            row.denominator = den;
            row.numerator = amalgam_norm(S, a.P, a.w, a.mu, AmalgamKind::Weak).value;
            row.ratio = row.numerator / row.denominator;
            ratios.push_back(row.ratio);
            for (double lambda : kLadder) {
                if (lambda == 1.0) {
                    row.dilation_ratios.push_back(row.ratio);
                    continue;
                }
                const VectorField Fl = dilated(F, lambda);
                const double dl =
                    amalgam_norm(l2_norm_field(Fl), a.P, a.w, a.mu, AmalgamKind::Strong).value;
                if (!(dl > 0.0)) continue;
                const ScalarField Sl = vec_intrinsic_square(Fl, a.bank, a.cone);
                row.dilation_ratios.push_back(
                    amalgam_norm(Sl, a.P, a.w, a.mu, AmalgamKind::Weak).value / dl);
            }
        } else {
            // sigma w({S > sigma}) against the integral of ||f|| M(w).
            const ScalarField S = vec_intrinsic_square(F, a.bank, a.cone);
            double rhs = 0.0;
            for (std::size_t c = 0; c < normF.values.size(); ++c)
                rhs += normF.values[c] * maximal_w.values[c];
            rhs *= hn;
            if (!(rhs > 0.0)) {
                row.skipped = true;
                rep.rows.push_back(row);
                continue;
            }
            std::vector<double> positive;
            for (double v : S.values)
                if (v > 0.0) positive.push_back(v);
            const double s0 = median_of(positive);
            if (!(s0 > 0.0)) {
                row.skipped = true;
                rep.rows.push_back(row);
                continue;
            }
            double worst = 0.0;
            for (std::size_t k = 0; k < s.sigma_factors.size(); ++k) {
                const double sigma = s.sigma_factors[k] * s0;
                rep.sigma_grid[k] = sigma;
                double mass = 0.0;
                for (std::size_t c = 0; c < S.values.size(); ++c)
                    if (S.values[c] > sigma) mass += a.w.density.values[c];
                const double ratio = sigma * mass * hn / rhs;
                rep.per_sigma_ratio_global[k] = std::max(rep.per_sigma_ratio_global[k], ratio);
                worst = std::max(worst, ratio);
            }
            row.numerator = worst;
            row.denominator = 1.0;
            row.ratio = worst;
            ratios.push_back(worst);
        }
        rep.rows.push_back(std::move(row));
    }

    finalize_stats(rep, s, ratios, {});
    return rep;
}

Report run_endpoint(const Scenario& s) {
    if (s.tag != TheoremTag::CommutatorEndpoint)
        throw std::invalid_argument("run_endpoint: scenario tag mismatch");
    Assembled a = assemble(s);

    Report rep;
    rep.scenario_name = s.name;
    rep.tag = tag_name(s.tag);
    rep.sigma_grid.assign(s.sigma_factors.size(), 0.0);
    rep.per_sigma_ratio_amalgam.assign(s.sigma_factors.size(), 0.0);
    rep.per_sigma_ratio_global.assign(s.sigma_factors.size(), 0.0);
    std::vector<double> ratios;
    const double hn = std::pow(a.g.spacing(), a.g.n);

    auto global_sides = [&](const ScalarField& C, const ScalarField& normF, double sigma) {
        double lhs = 0.0, rhs = 0.0;
        const ScalarField phi = phi_of(normF, sigma);
        for (std::size_t c = 0; c < C.values.size(); ++c) {
            if (C.values[c] > sigma) lhs += a.w.density.values[c];
            rhs += phi.values[c] * a.w.density.values[c];
        }
        return std::pair{lhs * hn, rhs * hn};
    };

    for (int i = 0; i < s.input_count; ++i) {
        ReportRow row;
        row.input_id = i;
        row.seed = s.seed + static_cast<std::uint64_t>(i);
        const VectorField F = random_vector_input(a.g, s.J, s.family, row.seed);
        const ScalarField normF = l2_norm_field(F);
        const ScalarField C = vec_commutator_square(a.symbol, F, a.bank, a.cone);
        const double s0 = median_of(C.values);
        if (!(s0 > 0.0)) {
            row.skipped = true;
            rep.rows.push_back(row);
            continue;
        }

        double worst = 0.0;
        for (std::size_t k = 0; k < s.sigma_factors.size(); ++k) {
            const double sigma = s.sigma_factors[k] * s0;
            rep.sigma_grid[k] = sigma;

            const auto [lhs_g, rhs_g] = global_sides(C, normF, sigma);
            const double ratio_g = rhs_g > 0.0 ? lhs_g / rhs_g : 0.0;
            rep.per_sigma_ratio_global[k] = std::max(rep.per_sigma_ratio_global[k], ratio_g);

            const double lhs_a = superlevel_amalgam_lhs(C, sigma, a.P, a.w, a.mu);
            const double rhs_a =
                amalgam_norm(phi_of(normF, sigma), a.P, a.w, a.mu, AmalgamKind::LLogL).value;
            const double ratio_a = rhs_a > 0.0 ? lhs_a / rhs_a : 0.0;
            rep.per_sigma_ratio_amalgam[k] = std::max(rep.per_sigma_ratio_amalgam[k], ratio_a);

            worst = std::max(worst, std::max(ratio_g, ratio_a));
        }
        row.numerator = worst;
        row.denominator = 1.0;
        row.ratio = worst;
        ratios.push_back(worst);

        // joint rescaling (sigma, f) -> (2 sigma, 2 f): both sides must agree
        if (i == 0) {
            const double sigma = s0;
            const auto [lhs_g, rhs_g] = global_sides(C, normF, sigma);
            std::vector<ScalarField> doubled;
            for (const auto& f : F.components) doubled.push_back(scaled(f, 2.0));
            const VectorField F2 = make_vector_field(std::move(doubled));
            const ScalarField C2 = vec_commutator_square(a.symbol, F2, a.bank, a.cone);
            const auto [lhs_g2, rhs_g2] = global_sides(C2, l2_norm_field(F2), 2.0 * sigma);
            const double r1 = rhs_g > 0.0 ? lhs_g / rhs_g : 0.0;
            const double r2 = rhs_g2 > 0.0 ? lhs_g2 / rhs_g2 : 0.0;
            rep.joint_scaling_error = std::abs(r1 - r2) / std::max(1.0, std::abs(r1));
        }
        rep.rows.push_back(std::move(row));
    }

    finalize_stats(rep, s, ratios, {});
    return rep;
}

Report run_scenario(const Scenario& s) {
    switch (s.tag) {
        case TheoremTag::Strong:
        case TheoremTag::CommutatorStrong:
            return run_strong(s);
        case TheoremTag::Weak:
        case TheoremTag::WilsonWeakMw:
            return run_weak(s);
        case TheoremTag::CommutatorEndpoint:
            return run_endpoint(s);
    }
    throw std::invalid_argument("run_scenario: unknown tag");
}

std::string emit_report(const Report& r, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    ordered_json j;
    j["scenario"] = r.scenario_name;
    j["tag"] = r.tag;
    j["ceiling"] = r.ceiling;
    j["stability_limit"] = r.stability_limit;
    j["saturation_tol"] = r.saturation_tol;
    j["stats"] = ordered_json{{"max_ratio", r.max_ratio},
                              {"median_ratio", r.median_ratio},
                              {"stability", r.stability},
                              {"saturation_change", r.saturation_change},
                              {"joint_scaling_error", r.joint_scaling_error}};
    j["sigma_grid"] = r.sigma_grid;
    j["per_sigma_ratio_amalgam"] = r.per_sigma_ratio_amalgam;
    j["per_sigma_ratio_global"] = r.per_sigma_ratio_global;
    j["pass"] = r.pass;
    j["rows"] = ordered_json::array();
    for (const auto& row : r.rows) {
        j["rows"].push_back(ordered_json{{"input_id", row.input_id},
                                         {"seed", row.seed},
                                         {"numerator", row.numerator},
                                         {"denominator", row.denominator},
                                         {"ratio", row.ratio},
                                         {"dilation_ratios", row.dilation_ratios},
                                         {"skipped", row.skipped}});
    }

    const std::string base = out_dir + "/" + r.scenario_name;
    {
        std::ofstream out(base + ".json");
        if (!out) throw std::runtime_error("emit_report: cannot open " + base + ".json");
        out << j.dump(2) << '\n';
    }
    {
        std::ofstream out(base + ".csv");
        if (!out) throw std::runtime_error("emit_report: cannot open " + base + ".csv");
        out << "input_id,seed,numerator,denominator,ratio,skipped\n";
        out.precision(17);
        for (const auto& row : r.rows)
            out << row.input_id << ',' << row.seed << ',' << row.numerator << ','
                << row.denominator << ',' << row.ratio << ',' << (row.skipped ? 1 : 0) << '\n';
    }
    return base + ".json";
}

Report read_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_report_json: cannot open " + path);
    ordered_json j;
    in >> j;
    Report r;
    r.scenario_name = j.at("scenario").get<std::string>();
    r.tag = j.at("tag").get<std::string>();
    r.ceiling = j.at("ceiling").get<double>();
    r.stability_limit = j.at("stability_limit").get<double>();
    r.saturation_tol = j.at("saturation_tol").get<double>();
    r.max_ratio = j.at("stats").at("max_ratio").get<double>();
    r.median_ratio = j.at("stats").at("median_ratio").get<double>();
    r.stability = j.at("stats").at("stability").get<double>();
    r.saturation_change = j.at("stats").at("saturation_change").get<double>();
    r.joint_scaling_error = j.at("stats").at("joint_scaling_error").get<double>();
    r.sigma_grid = j.at("sigma_grid").get<std::vector<double>>();
    r.per_sigma_ratio_amalgam = j.at("per_sigma_ratio_amalgam").get<std::vector<double>>();
    r.per_sigma_ratio_global = j.at("per_sigma_ratio_global").get<std::vector<double>>();
    r.pass = j.at("pass").get<bool>();
    for (const auto& row : j.at("rows")) {
        ReportRow rr;
        rr.input_id = row.at("input_id").get<int>();
        rr.seed = row.at("seed").get<std::uint64_t>();
        rr.numerator = row.at("numerator").get<double>();
        rr.denominator = row.at("denominator").get<double>();
        rr.ratio = row.at("ratio").get<double>();
        rr.dilation_ratios = row.at("dilation_ratios").get<std::vector<double>>();
        rr.skipped = row.at("skipped").get<bool>();
        r.rows.push_back(std::move(rr));
    }
    return r;
}

}  // namespace amalgam
