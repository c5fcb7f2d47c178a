#pragma once

#include "gcs/hilbert.hpp"
#include "gcs/inequalities.hpp"
#include "gcs/wavepacket.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gcs::io {

// State files:    {"dim": N, "re": [...], "im": [...], "units": "..."}
// Operator files: {"dim": N, "re": [[...]], "im": [[...]], "units": "..."}
// `im` and `units` are optional.

StateVector parse_state(const std::string &json_text);
HermitianOperator parse_operator(const std::string &json_text);
StateVector load_state(const std::filesystem::path &path);
HermitianOperator load_operator(const std::filesystem::path &path);

std::string serialize_state(const StateVector &v);
std::string serialize_operator(const HermitianOperator &op);
void save_text(const std::filesystem::path &path, const std::string &text);

/// Environment variable consulted for the default residual tolerance.
inline constexpr const char *kToleranceEnv = "GCS_TOLERANCE";
double default_tolerance();

enum class ReportFormat { Csv, Json };
enum class MMode { Orthogonal, Any };

struct ReportRow {
    InequalityLabel label = InequalityLabel::CS;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    bool satisfied = false;
    std::optional<Complex> lambda;
    std::uint64_t seed = 0;
    std::size_t trial_index = 0;
};

ReportRow to_row(const InequalityReport &r, std::uint64_t seed, std::size_t trial);

struct CheckOptions {
    std::vector<InequalityLabel> inequalities{InequalityLabel::CS};
    std::size_t dim = 4;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    double tolerance = kDefaultResidualTolerance;
    MMode m_mode = MMode::Orthogonal;
    std::optional<std::filesystem::path> state;
    std::optional<std::filesystem::path> op_a;
    std::optional<std::filesystem::path> op_b;
    std::optional<std::filesystem::path> m;
    std::optional<std::filesystem::path> vec_a;
    std::optional<std::filesystem::path> vec_b;
};

/// Expands "cs", "gcs", "hr", "hrs", "gur", "qform" or "all".
std::vector<InequalityLabel> parse_inequality_selector(const std::string &text);

struct CheckResult {
    std::vector<ReportRow> rows;
    bool all_satisfied = true;
};

/// Runs a seeded verification campaign. Each trial draws from its own
/// generator seeded by (seed, trial index), so rows do not depend on the
/// order in which trials run.
CheckResult run_check(const CheckOptions &options);

std::string format_check_report(const CheckResult &result,
                                const CheckOptions &options, ReportFormat format,
                                bool timestamp);

struct PacketOptions {
    double delta_x = 1.0;
    std::size_t grid_n = 2048;
    std::optional<double> x_max;  // default 10·Δx
    double hbar = 1.0;
};

struct PacketResult {
    std::vector<double> x;
    std::vector<Complex> psi;
    double norm = 0.0;
    double mean_x = 0.0;
    double mean_p = 0.0;
    double delta_x = 0.0;
    double delta_p = 0.0;
    double ratio = 0.0;  // Δx Δp / (ħ/2)
    double epsilon = 0.0;
    double residual = 0.0;
};

PacketResult run_packet(const PacketOptions &options);
std::string format_packet_samples(const PacketResult &r, const PacketOptions &o,
                                  bool timestamp);
std::string format_packet_summary(const PacketResult &r, const PacketOptions &o);

struct ModifiedOptions {
    std::vector<double> alphas{1.0};
    Complex a_sq = 1.0;
    std::optional<Complex> a1;  // absent: pure-Gaussian branch
    Complex c_seed = 1.0;
    std::size_t grid_n = 2048;
    double x_max = 16.0;
    double hbar = 1.0;
};

/// "LO:HI:STEPS" -> STEPS evenly spaced values including both ends.
std::vector<double> parse_sweep(const std::string &spec);

struct ModifiedPoint {
    double alpha = 0.0;
    bool ok = false;
    std::string status;
    ModifiedPacketParams params;
    double delta_x_sq = 0.0;
    double width_deviation = 0.0;
    double width_deviation_derived = 0.0;
    double residual = 0.0;           // defining relation, relative to max|ψ|
    double dual_path_gap = 0.0;
    double squeeze_factor = 0.0;
    bool one_parameter_family = false;
};

std::vector<ModifiedPoint> run_modified(const ModifiedOptions &options);
std::string format_modified_report(const std::vector<ModifiedPoint> &points,
                                   const ModifiedOptions &options, bool timestamp);

/// Column documentation shared by the CLI help text.
extern const char *const kCheckColumnsHelp;
extern const char *const kPacketColumnsHelp;
extern const char *const kModifiedColumnsHelp;

} // namespace gcs::io
