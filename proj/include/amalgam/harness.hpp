#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "amalgam/grid.hpp"
#include "amalgam/norms.hpp"
#include "amalgam/sqfn.hpp"
#include "amalgam/testbank.hpp"
#include "amalgam/weights.hpp"

namespace amalgam {

// Seeded generator mapping raw mt19937_64 bits to doubles, so streams are
// reproducible across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double a, double b) {
        const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return a + (b - a) * u;
    }

    int integer(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

  private:
    std::mt19937_64 eng_;
};

enum class TheoremTag { Strong, Weak, CommutatorStrong, CommutatorEndpoint, WilsonWeakMw };

std::string tag_name(TheoremTag tag);
TheoremTag tag_from_name(const std::string& name);

// One bounded-ratio experiment: exponents, weight/bank/cone specs, the input
// family, and the configured ceilings.
struct Scenario {
    std::string name = "scenario";
    TheoremTag tag = TheoremTag::Strong;
    int n = 1;
    int N = 512;
    double extent = 1.0;
    double p = 2.0;
    double alpha = 2.0;
    double q = 4.0;
    double gamma = 0.5;
    int J = 3;
    std::string w_spec = "const:1";
    std::string mu_spec = "const:1";
    std::string b_spec = "logabs";
    int bank_size = 12;
    int bank_size_check = 0;  // 0 disables the saturation pass
    double cone_tmin = 0.0;   // 0 means 2h
    double cone_tmax = 0.0;   // 0 means extent
    int cone_scales = 24;
    std::string family = "bumps";
    int input_count = 20;
    std::uint64_t seed = 1;
    double ceiling = 0.0;
    double stability_factor = 4.0;
    double saturation_tol = 0.05;
    std::vector<double> sigma_factors{0.5, 1.0, 2.0, 4.0};
    int radius_count = 16;
    int center_stride = 4;
};

// Key-value scenario files: "key = value" lines, '#' comments.
Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario(const std::string& path);

// "const:<c>", "power:<a>", or a field file path.
Weight weight_from_spec(const std::string& spec, const Grid& g, Weight::Role role);
// "logabs", "const:<c>", or a field file path.
ScalarField symbol_from_spec(const std::string& spec, const Grid& g);

// Input families: "bumps" (seeded band-limited sums of Gaussians windowed to
// half the box), "indicators" (stacked boxes in half the box), "zero".
ScalarField random_input(const Grid& g, const std::string& family, Rng& rng);
VectorField random_vector_input(const Grid& g, int J, const std::string& family,
                                std::uint64_t seed);

struct ReportRow {
    int input_id = 0;
    std::uint64_t seed = 0;
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
    std::vector<double> dilation_ratios;
    bool skipped = false;
};

struct Report {
    std::string scenario_name;
    std::string tag;
    std::vector<ReportRow> rows;
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    double stability = 0.0;          // worst max/min over each input's ladder
    double saturation_change = 0.0;  // relative drift when the bank doubles
    double joint_scaling_error = 0.0;
    std::vector<double> sigma_grid;
    std::vector<double> per_sigma_ratio_amalgam;
    std::vector<double> per_sigma_ratio_global;
    double ceiling = 0.0;
    double stability_limit = 0.0;
    double saturation_tol = 0.0;
    bool pass = false;
};

Report run_strong(const Scenario& s);
Report run_weak(const Scenario& s);
Report run_endpoint(const Scenario& s);
Report run_scenario(const Scenario& s);

// Writes <dir>/<name>.json and <dir>/<name>.csv with deterministic field
// order; returns the JSON path.
std::string emit_report(const Report& r, const std::string& out_dir);
Report read_report_json(const std::string& path);

}  // namespace amalgam
