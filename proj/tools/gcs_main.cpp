// Command-line front end. Talks to the library only through the C API.
#include "gcs/gcs.h"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;

struct CStringDeleter {
    void operator()(char *p) const { gcs_string_free(p); }
};
using CString = std::unique_ptr<char, CStringDeleter>;

// Accepts "RE", "RE,IM" or "(RE,IM)".
std::optional<gcs_complex> parse_complex(std::string text) {
    if (text.size() >= 2 && text.front() == '(' && text.back() == ')')
        text = text.substr(1, text.size() - 2);
    gcs_complex z{0.0, 0.0};
    char *end = nullptr;
    z.re = std::strtod(text.c_str(), &end);
    if (end == text.c_str())
        return std::nullopt;
    if (*end == ',') {
        const char *start = end + 1;
        z.im = std::strtod(start, &end);
        if (end == start)
            return std::nullopt;
    }
    if (*end != '\0')
        return std::nullopt;
    return z;
}

int fail(const std::string &what) {
    std::cerr << "gcs: " << what << ": " << gcs_last_error() << "\n";
    return kExitUsage;
}

bool emit(const std::string &path, const char *text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "gcs: cannot write '" << path << "'\n";
        return false;
    }
    out << text;
    return true;
}

const char *opt(const std::string &s) { return s.empty() ? nullptr : s.c_str(); }

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Cauchy-Schwarz and uncertainty-relation verification toolkit"};
    app.require_subcommand(1);
    app.footer(std::string("Environment:\n  ") + gcs_tolerance_env_name() +
               "  default residual tolerance when --tolerance is not given\n"
               "Exit codes: 0 success, 1 usage or input error, 2 an inequality was violated");

    // check
    auto *check = app.add_subcommand("check", "Run a seeded inequality verification campaign");
    std::string inequality = "cs";
    std::size_t dim = 4, trials = 100;
    std::uint64_t seed = 0;
    std::string state, op_a, op_b, m_path, vec_a, vec_b, output, format = "csv";
    std::string m_mode = "orthogonal";
    std::optional<double> tolerance;
    bool no_timestamp = false;
    check->add_option("--inequality", inequality, "cs|gcs|hr|hrs|gur|qform|all")
        ->check(CLI::IsMember({"cs", "gcs", "hr", "hrs", "gur", "qform", "all"}));
    check->add_option("--dim", dim, "Hilbert-space dimension for random inputs")
        ->check(CLI::PositiveNumber);
    check->add_option("--trials", trials, "Number of trials");
    check->add_option("--seed", seed, "Campaign seed");
    check->add_option("--state", state, "State file for psi");
    check->add_option("--op-a", op_a, "Operator file for A");
    check->add_option("--op-b", op_b, "Operator file for B");
    check->add_option("--m", m_path, "State file for the distinguished unit vector m");
    check->add_option("--vec-a", vec_a, "State file for the vector a (cs, gcs)");
    check->add_option("--vec-b", vec_b, "State file for the vector b (cs, gcs)");
    check->add_option("--m-mode", m_mode, "How m is drawn when --m is absent")
        ->check(CLI::IsMember({"orthogonal", "any"}));
    check->add_option("--output", output, "Report path (default stdout)");
    check->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    check->add_option("--tolerance", tolerance, "Base residual tolerance (>= 0)")
        ->check(CLI::NonNegativeNumber);
    check->add_flag("--no-timestamp", no_timestamp, "Omit the generated-at comment line");
    check->footer(std::string(gcs_columns_help("check")) + "\nEnvironment:\n  " +
                  gcs_tolerance_env_name() + "  default for --tolerance\n");

    // packet
    auto *packet = app.add_subcommand("packet", "Build the Gaussian minimum-uncertainty packet");
    double delta_x = 1.0, hbar = 1.0, x_max = 0.0;
    std::size_t grid_n = 2048;
    std::string packet_output, summary_path;
    packet->add_option("--delta-x", delta_x, "Position uncertainty");
    packet->add_option("--grid-n", grid_n, "Number of grid points (>= 64)");
    packet->add_option("--x-max", x_max, "Grid half-width (default 10 * delta-x)");
    packet->add_option("--hbar", hbar, "Reduced Planck constant");
    packet->add_option("--output", packet_output,
                       "Sample CSV path; when absent samples go to stdout and the "
                       "summary to stderr");
    packet->add_option("--summary", summary_path, "Summary JSON path");
    packet->add_flag("--no-timestamp", no_timestamp, "Omit the generated-at comment line");
    packet->footer(gcs_columns_help("packet"));

    // modified
    auto *modified = app.add_subcommand("modified", "Construct and sweep modified packets");
    double alpha = 1.0;
    std::string sweep, a_sq_text = "1", a1_text, c_seed_text = "1", modified_output;
    bool solve = false;
    std::size_t modified_n = 2048;
    double modified_x_max = 16.0, modified_hbar = 1.0;
    auto *alpha_opt = modified->add_option("--alpha", alpha, "Width of the odd basis function");
    auto *sweep_opt = modified->add_option("--sweep", sweep, "alpha=LO:HI:STEPS");
    alpha_opt->excludes(sweep_opt);
    modified->add_option("--a-sq", a_sq_text, "Gaussian width parameter a^2 (RE or RE,IM)");
    auto *a1_opt = modified->add_option("--a1", a1_text, "Fix a1 (RE or RE,IM); |C| from normalization");
    auto *solve_opt = modified->add_flag("--solve", solve, "Use the pure-Gaussian branch for a1");
    a1_opt->excludes(solve_opt);
    modified->add_option("--c-seed", c_seed_text, "Seed for C; its phase is kept");
    modified->add_option("--grid-n", modified_n, "Number of grid points (>= 64)");
    modified->add_option("--x-max", modified_x_max, "Grid half-width");
    modified->add_option("--hbar", modified_hbar, "Reduced Planck constant");
    modified->add_option("--output", modified_output, "Report path (default stdout)");
    modified->add_flag("--no-timestamp", no_timestamp, "Omit the generated-at comment line");
    modified->footer(gcs_columns_help("modified"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    if (check->parsed()) {
        gcs_check_options o{};
        o.inequality = inequality.c_str();
        o.dim = dim;
        o.trials = trials;
        o.seed = seed;
        o.tolerance = tolerance ? *tolerance : -1.0;
        o.m_mode_any = m_mode == "any" ? 1 : 0;
        o.state_path = opt(state);
        o.op_a_path = opt(op_a);
        o.op_b_path = opt(op_b);
        o.m_path = opt(m_path);
        o.vec_a_path = opt(vec_a);
        o.vec_b_path = opt(vec_b);
        o.format = format == "json" ? GCS_FORMAT_JSON : GCS_FORMAT_CSV;
        o.timestamp = no_timestamp ? 0 : 1;
        char *raw = nullptr;
        int all = 0;
        if (gcs_run_check(&o, &raw, &all) != GCS_OK)
            return fail("check");
        CString report(raw);
        if (!emit(output, report.get()))
            return kExitUsage;
        return all ? kExitOk : kExitViolation;
    }

    if (packet->parsed()) {
        gcs_packet_options o{};
        o.delta_x = delta_x;
        o.grid_n = grid_n;
        o.x_max = x_max;
        o.hbar = hbar;
        o.timestamp = no_timestamp ? 0 : 1;
        char *samples_raw = nullptr, *summary_raw = nullptr;
        if (gcs_run_packet(&o, &samples_raw, &summary_raw) != GCS_OK)
            return fail("packet");
        CString samples(samples_raw), summary(summary_raw);
        if (!emit(packet_output, samples.get()))
            return kExitUsage;
        if (!summary_path.empty()) {
            if (!emit(summary_path, summary.get()))
                return kExitUsage;
        } else if (packet_output.empty() || packet_output == "-") {
            std::cerr << summary.get();
        } else {
            std::cout << summary.get();
        }
        return kExitOk;
    }

    if (modified->parsed()) {
        const auto a_sq = parse_complex(a_sq_text);
        const auto c_seed = parse_complex(c_seed_text);
        std::optional<gcs_complex> a1;
        if (!a1_text.empty())
            a1 = parse_complex(a1_text);
        if (!a_sq || !c_seed || (!a1_text.empty() && !a1)) {
            std::cerr << "gcs: modified: complex values must look like RE or RE,IM\n";
            return kExitUsage;
        }
        double *alphas = nullptr;
        std::size_t count = 1;
        std::unique_ptr<double, void (*)(double *)> owned(nullptr, gcs_doubles_free);
        if (!sweep.empty()) {
            if (gcs_parse_sweep(sweep.c_str(), &alphas, &count) != GCS_OK)
                return fail("modified");
            owned.reset(alphas);
        } else {
            alphas = &alpha;
        }
        gcs_modified_options o{};
        o.alphas = alphas;
        o.alpha_count = count;
        o.a_sq = *a_sq;
        o.a1 = a1 ? &*a1 : nullptr;
        o.c_seed = *c_seed;
        o.grid_n = modified_n;
        o.x_max = modified_x_max;
        o.hbar = modified_hbar;
        o.timestamp = no_timestamp ? 0 : 1;
        char *raw = nullptr;
        if (gcs_run_modified(&o, &raw) != GCS_OK)
            return fail("modified");
        CString report(raw);
        return emit(modified_output, report.get()) ? kExitOk : kExitUsage;
    }
    return kExitUsage;
}
