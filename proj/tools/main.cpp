// Command line front end: field generation, banks, weight diagnostics,
// square functions, norms, BMO diagnostics, CZ decompositions, and the
// theorem verification harness.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>

#include "amalgam/bmo.hpp"
#include "amalgam/czd.hpp"
#include "amalgam/field_io.hpp"
#include "amalgam/harness.hpp"
#include "amalgam/norms.hpp"
#include "amalgam/sqfn.hpp"
#include "amalgam/testbank.hpp"
#include "amalgam/weights.hpp"

using namespace amalgam;
using ordered_json = nlohmann::ordered_json;

namespace {

struct FamilySpec {
    int stride = 4;
    int radii = 12;
};

// family spec format: centers:<stride>,radii:<k>
FamilySpec parse_family(const std::string& text) {
    FamilySpec spec;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("family", "expected centers:<stride>,radii:<k>");
        const std::string key = tok.substr(0, colon);
        const int value = std::stoi(tok.substr(colon + 1));
        if (key == "centers")
            spec.stride = value;
        else if (key == "radii")
            spec.radii = value;
        else
            throw CLI::ValidationError("family", "unknown family key: " + key);
    }
    return spec;
}

int run_field_gen(const std::string& kind, int n, int N, double extent, int J,
                  std::uint64_t seed, double param, const std::string& out) {
    const Grid g = make_grid(n, extent, N);
    if (kind == "const" || kind == "power" || kind == "logabs") {
        ScalarField f = kind == "logabs"
                            ? symbol_from_spec("logabs", g)
                            : (kind == "const" ? make_field(g, param)
                                               : power_weight(param, g).density);
        write_field(out, f);
    } else {
        write_field(out, random_vector_input(g, J, kind, seed));
    }
    std::cout << "wrote " << out << "\n";
    return 0;
}

ordered_json young_json(const LuxemburgResult& r) {
    return ordered_json{{"value", r.value}, {"residual", r.residual}, {"degenerate", r.degenerate}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for intrinsic square functions on weighted amalgam spaces"};
    app.require_subcommand(1);

    // field gen
    auto* field = app.add_subcommand("field", "generate and inspect field files");
    auto* gen = field->add_subcommand("gen", "generate a field file");
    std::string gen_kind = "bumps", gen_out = "field.bin";
    int gen_n = 1, gen_N = 512, gen_J = 1;
    double gen_extent = 1.0, gen_param = 0.0;
    std::uint64_t gen_seed = 1;
    gen->add_option("--kind", gen_kind, "bumps | indicators | zero | const | power | logabs");
    gen->add_option("--n", gen_n);
    gen->add_option("--N", gen_N);
    gen->add_option("--extent", gen_extent);
    gen->add_option("--J", gen_J);
    gen->add_option("--seed", gen_seed);
    gen->add_option("--param", gen_param, "constant value or power exponent");
    gen->add_option("--out", gen_out)->required();

    auto* info = field->add_subcommand("info", "print a field file header");
    std::string info_path;
    info->add_option("file", info_path)->required();

    // bank build
    auto* bank_cmd = app.add_subcommand("bank", "test function banks");
    auto* bank_build = bank_cmd->add_subcommand("build", "build and validate a bank");
    double bank_gamma = 0.5;
    int bank_size = 12, bank_n = 1, bank_lattice = 0;
    std::string bank_out;
    bank_build->add_option("--gamma", bank_gamma)->required();
    bank_build->add_option("--size", bank_size)->required();
    bank_build->add_option("--n", bank_n);
    bank_build->add_option("--lattice", bank_lattice);
    bank_build->add_option("--out", bank_out);

    // weights
    auto* weights_cmd = app.add_subcommand("weights", "Muckenhoupt diagnostics");
    auto* ap_cmd = weights_cmd->add_subcommand("ap", "A_p characteristic over a ball family");
    double ap_p = 2.0;
    std::string ap_weight, ap_family = "centers:4,radii:12";
    int ap_n = 1, ap_N = 512;
    double ap_extent = 1.0;
    ap_cmd->add_option("--p", ap_p)->required();
    ap_cmd->add_option("--weight", ap_weight)->required();
    ap_cmd->add_option("--family", ap_family);
    ap_cmd->add_option("--n", ap_n);
    ap_cmd->add_option("--N", ap_N);
    ap_cmd->add_option("--extent", ap_extent);

    auto* doubling_cmd = weights_cmd->add_subcommand("doubling", "doubling constant over a family");
    doubling_cmd->add_option("--weight", ap_weight)->required();
    doubling_cmd->add_option("--family", ap_family);
    doubling_cmd->add_option("--n", ap_n);
    doubling_cmd->add_option("--N", ap_N);
    doubling_cmd->add_option("--extent", ap_extent);

    // sqfn
    auto* sqfn_cmd = app.add_subcommand("sqfn", "intrinsic square functions");
    std::string sq_input, sq_bank, sq_out = "sqfn.bin", sq_b;
    double sq_tmin = 0.0, sq_tmax = 0.0, sq_gamma = 0.5;
    int sq_scales = 24, sq_banksize = 12;
    sqfn_cmd->add_option("--input", sq_input)->required();
    sqfn_cmd->add_option("--bank", sq_bank, "bank file; omitted -> built from --gamma/--bank-size");
    sqfn_cmd->add_option("--gamma", sq_gamma);
    sqfn_cmd->add_option("--bank-size", sq_banksize);
    sqfn_cmd->add_option("--tmin", sq_tmin);
    sqfn_cmd->add_option("--tmax", sq_tmax);
    sqfn_cmd->add_option("--scales", sq_scales);
    sqfn_cmd->add_option("--out", sq_out);
    auto* comm_cmd = sqfn_cmd->add_subcommand("commutator", "commutator square function");
    comm_cmd->add_option("--b", sq_b)->required();

    // norm
    auto* norm_cmd = app.add_subcommand("norm", "function space norms");
    std::string norm_kind = "lp", norm_w = "const:1", norm_mu = "const:1", norm_input;
    double norm_p = 2.0, norm_q = 4.0, norm_alpha = 2.0;
    double ball_cx = 0.0, ball_cy = 0.0, ball_r = 0.0;
    int norm_radii = 16, norm_stride = 4;
    norm_cmd->add_option("--kind", norm_kind,
                         "lp | weak | luxemburg | amalgam | amalgam-weak | amalgam-llogl");
    norm_cmd->add_option("--p", norm_p);
    norm_cmd->add_option("--q", norm_q);
    norm_cmd->add_option("--alpha", norm_alpha);
    norm_cmd->add_option("--w", norm_w);
    norm_cmd->add_option("--mu", norm_mu);
    norm_cmd->add_option("--input", norm_input)->required();
    norm_cmd->add_option("--ball-cx", ball_cx);
    norm_cmd->add_option("--ball-cy", ball_cy);
    norm_cmd->add_option("--ball-r", ball_r);
    norm_cmd->add_option("--radius-count", norm_radii);
    norm_cmd->add_option("--center-stride", norm_stride);

    // bmo
    auto* bmo_cmd = app.add_subcommand("bmo", "bounded mean oscillation diagnostics");
    std::string bmo_mode, bmo_b, bmo_w = "const:1";
    double bmo_cx = 0.0, bmo_cy = 0.0, bmo_r = 0.1, bmo_s = 1.0;
    int bmo_levels = 4, bmo_ntheta = 64, bmo_stride = 4, bmo_radii = 12;
    bmo_cmd->add_option("mode", bmo_mode, "seminorm | growth | expnorm | cauchy")->required();
    bmo_cmd->add_option("--b", bmo_b);
    bmo_cmd->add_option("--w", bmo_w);
    bmo_cmd->add_option("--cx", bmo_cx);
    bmo_cmd->add_option("--cy", bmo_cy);
    bmo_cmd->add_option("--r", bmo_r);
    bmo_cmd->add_option("--levels", bmo_levels);
    bmo_cmd->add_option("--s", bmo_s);
    bmo_cmd->add_option("--ntheta", bmo_ntheta);
    bmo_cmd->add_option("--centers", bmo_stride);
    bmo_cmd->add_option("--radii", bmo_radii);

    // czd
    auto* czd_cmd = app.add_subcommand("czd", "dyadic decomposition at a height");
    std::string czd_input;
    double czd_sigma = 1.0;
    bool czd_verify = false;
    czd_cmd->add_option("--input", czd_input)->required();
    czd_cmd->add_option("--sigma", czd_sigma)->required();
    czd_cmd->add_flag("--verify", czd_verify);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run a scenario and emit reports");
    std::string verify_scenario, verify_out = "reports";
    verify_cmd->add_option("--scenario", verify_scenario)->required();
    verify_cmd->add_option("--out", verify_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return run_field_gen(gen_kind, gen_n, gen_N, gen_extent, gen_J, gen_seed, gen_param,
                                 gen_out);
        if (info->parsed()) {
            const VectorField F = read_field(info_path);
            ordered_json j{{"n", F.grid.n},
                           {"N", F.grid.resolution},
                           {"extent", F.grid.extent},
                           {"J", F.components.size()}};
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (bank_build->parsed()) {
            const FunctionBank bank = build_bank(bank_gamma, bank_size, bank_n, bank_lattice);
            ordered_json members = ordered_json::array();
            for (const auto& m : bank.members) {
                const auto rep = validate_admissible(m);
                members.push_back(ordered_json{{"label", m.label},
                                               {"seminorm", rep.seminorm},
                                               {"admissible", rep.admissible()}});
            }
            ordered_json j{{"gamma", bank.gamma}, {"size", bank.members.size()},
                           {"members", members}};
            std::cout << j.dump(2) << "\n";
            if (!bank_out.empty()) write_bank(bank_out, bank);
            return 0;
        }
        if (ap_cmd->parsed() || doubling_cmd->parsed()) {
            const Grid g = make_grid(ap_n, ap_extent, ap_N);
            const Weight w = weight_from_spec(ap_weight, g, Weight::Role::Measure);
            const FamilySpec fam = parse_family(ap_family);
            const BallFamily F = make_ball_family(g, fam.stride, fam.radii);
            ordered_json j;
            if (ap_cmd->parsed()) {
                const double value = ap_characteristic(w, ap_p, F);
                j = ordered_json{{"ap_characteristic", value},
                                 {"p", ap_p},
                                 {"balls", F.balls.size()},
                                 {"flagged_large", value > 100.0}};
            } else {
                j = ordered_json{{"doubling_constant", doubling_constant(w, F)},
                                 {"balls", F.balls.size()}};
            }
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (sqfn_cmd->parsed()) {
            const VectorField F = read_field(sq_input);
            const Grid& g = F.grid;
            const FunctionBank bank =
                sq_bank.empty() ? build_bank(sq_gamma, sq_banksize, g.n) : read_bank(sq_bank);
            const ConeParams cone =
                make_cone_params(g, sq_tmin > 0.0 ? sq_tmin : 2.0 * g.spacing(),
                                 sq_tmax > 0.0 ? sq_tmax : g.extent, sq_scales);
            ScalarField out;
            if (comm_cmd->parsed()) {
                ScalarField b = symbol_from_spec(sq_b, g);
                out = vec_commutator_square(b, F, bank, cone);
            } else {
                out = vec_intrinsic_square(F, bank, cone);
            }
            write_field(sq_out, out);
            ordered_json j{{"out", sq_out}, {"max", max_abs(out)},
                           {"scales", cone.n_scales}, {"bank", bank.members.size()}};
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (norm_cmd->parsed()) {
            const ScalarField f = read_scalar_field(norm_input);
            const Grid& g = f.grid;
            const Weight w = weight_from_spec(norm_w, g, Weight::Role::Measure);
            ordered_json j;
            if (norm_kind == "lp") {
                j = ordered_json{{"kind", norm_kind}, {"value", lp_norm(f, w, norm_p)}};
            } else if (norm_kind == "weak") {
                j = ordered_json{{"kind", norm_kind}, {"value", weak_lp_norm(f, w, norm_p)}};
            } else if (norm_kind == "luxemburg") {
                if (!(ball_r > 0.0)) throw CLI::ValidationError("--ball-r", "required");
                const Ball B{{ball_cx, ball_cy}, ball_r};
                const auto r = luxemburg_norm(f, young_llogl(), B, w);
                j = ordered_json{{"kind", norm_kind}, {"young", "llogl"}, {"result", young_json(r)}};
            } else {
                const Weight mu = weight_from_spec(norm_mu, g, Weight::Role::Outer);
                const AmalgamKind kind = norm_kind == "amalgam"
                                             ? AmalgamKind::Strong
                                             : (norm_kind == "amalgam-weak"
                                                    ? AmalgamKind::Weak
                                                    : AmalgamKind::LLogL);
                if (norm_kind != "amalgam" && norm_kind != "amalgam-weak" &&
                    norm_kind != "amalgam-llogl")
                    throw CLI::ValidationError("--kind", "unknown norm kind " + norm_kind);
                const AmalgamParams P = make_amalgam_params(
                    g, kind == AmalgamKind::LLogL ? 1.0 : norm_p, norm_alpha, norm_q, norm_radii,
                    norm_stride);
                const AmalgamNorm r = amalgam_norm(f, P, w, mu, kind);
                j = ordered_json{{"kind", norm_kind},      {"value", r.value},
                                 {"radii", r.radii},       {"per_radius", r.per_radius},
                                 {"clipped", r.clipped}};
            }
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (bmo_cmd->parsed()) {
            ordered_json j;
            if (bmo_mode == "cauchy") {
                j = ordered_json{{"s", bmo_s},
                                 {"ntheta", bmo_ntheta},
                                 {"value", cauchy_identity(bmo_s, bmo_ntheta)}};
            } else {
                if (bmo_b.empty()) throw CLI::ValidationError("--b", "required");
                const ScalarField b = read_scalar_field(bmo_b);
                const Grid& g = b.grid;
                if (bmo_mode == "seminorm") {
                    const auto rep = bmo_seminorm(b, make_ball_family(g, bmo_stride, bmo_radii));
                    j = ordered_json{{"seminorm", rep.seminorm},
                                     {"balls", rep.oscillations.size()}};
                } else if (bmo_mode == "growth") {
                    const auto growth =
                        oscillation_growth(b, Ball{{bmo_cx, bmo_cy}, bmo_r}, bmo_levels);
                    j = ordered_json{{"values", growth.values}, {"slope", growth.slope}};
                } else if (bmo_mode == "expnorm") {
                    const Weight w = weight_from_spec(bmo_w, g, Weight::Role::Measure);
                    j = ordered_json{
                        {"value", exp_norm_oscillation(b, Ball{{bmo_cx, bmo_cy}, bmo_r}, w)}};
                } else {
                    throw CLI::ValidationError("mode", "unknown bmo mode " + bmo_mode);
                }
            }
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (czd_cmd->parsed()) {
            const VectorField F = read_field(czd_input);
            const CZDecomposition d = cz_decompose(F, czd_sigma);
            ordered_json cubes = ordered_json::array();
            for (const auto& q : d.cubes)
                cubes.push_back(ordered_json{{"level", q.level},
                                             {"path", cube_path(q, F.grid.n)},
                                             {"avg", q.avg}});
            ordered_json j{{"sigma", d.sigma}, {"cubes", cubes}};
            if (czd_verify) {
                const CZReport rep = verify_cz(d, F);
                j["report"] = ordered_json{{"disjoint", rep.disjoint},
                                           {"heights_ok", rep.heights_ok},
                                           {"maximal_ok", rep.maximal_ok},
                                           {"good_bound_ok", rep.good_bound_ok},
                                           {"off_e_bound_ok", rep.off_e_bound_ok},
                                           {"cube_avg_bound_ok", rep.cube_avg_bound_ok},
                                           {"cancellation_ok", rep.cancellation_ok},
                                           {"l1_bound_ok", rep.l1_bound_ok},
                                           {"reconstruction_ok", rep.reconstruction_ok},
                                           {"floor_flag", rep.floor_flag},
                                           {"measure_ratio", rep.measure_ratio},
                                           {"pass", rep.pass()}};
                std::cout << j.dump(2) << "\n";
                return rep.pass() ? 0 : 1;
            }
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (verify_cmd->parsed()) {
            const Scenario s = parse_scenario(verify_scenario);
            const Report rep = run_scenario(s);
            const std::string path = emit_report(rep, verify_out);
            std::cout << "report: " << path << "\n"
                      << "max_ratio=" << rep.max_ratio << " median=" << rep.median_ratio
                      << " stability=" << rep.stability << " pass=" << (rep.pass ? "yes" : "no")
                      << "\n";
            return rep.pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
