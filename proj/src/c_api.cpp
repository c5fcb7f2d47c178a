#include "gcs/gcs.h"

#include "gcs/error.hpp"
#include "gcs/hilbert.hpp"
#include "gcs/inequalities.hpp"
#include "gcs/io.hpp"
#include "gcs/wavepacket.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct gcs_state_s {
    gcs::StateVector value;
};
struct gcs_operator_s {
    gcs::HermitianOperator value;
};
struct gcs_grid_s {
    gcs::Grid value;
};
struct gcs_wave_s {
    gcs::GridWaveFunction value;
};

namespace {

thread_local std::string last_error;

gcs_status to_status(gcs::ErrorCode code) {
    using gcs::ErrorCode;
    switch (code) {
    case ErrorCode::DimensionMismatch: return GCS_ERR_DIMENSION;
    case ErrorCode::NotHermitian: return GCS_ERR_NOT_HERMITIAN;
    case ErrorCode::NotNormalized: return GCS_ERR_NOT_NORMALIZED;
    case ErrorCode::Degenerate: return GCS_ERR_DEGENERATE;
    case ErrorCode::Singular: return GCS_ERR_SINGULAR;
    case ErrorCode::InvalidGrid: return GCS_ERR_GRID;
    case ErrorCode::Parse: return GCS_ERR_PARSE;
    case ErrorCode::Io: return GCS_ERR_IO;
    case ErrorCode::InvalidArgument: return GCS_ERR_INVALID_ARGUMENT;
    case ErrorCode::NoSolution: return GCS_ERR_NO_SOLUTION;
    }
    return GCS_ERR_INTERNAL;
}

template <class Fn> gcs_status guarded(Fn &&fn) {
    try {
        fn();
        last_error.clear();
        return GCS_OK;
    } catch (const gcs::Error &e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
    } catch (const std::exception &e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown error";
    }
    return GCS_ERR_INTERNAL;
}

void require(const void *p, const char *what) {
    if (!p)
        throw gcs::Error(gcs::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

gcs::Complex from_c(gcs_complex z) { return {z.re, z.im}; }
gcs_complex to_c(gcs::Complex z) { return {z.real(), z.imag()}; }

double tol_or_default(double t) {
    return t < 0.0 ? gcs::kDefaultResidualTolerance : t;
}

gcs_report to_c(const gcs::InequalityReport &r) {
    gcs_report out{};
    out.label = static_cast<gcs_label>(static_cast<int>(r.label));
    out.lhs = r.lhs;
    out.rhs = r.rhs;
    out.residual = r.residual;
    out.tolerance = r.tolerance;
    out.satisfied = r.satisfied ? 1 : 0;
    out.has_lambda = r.lambda_used ? 1 : 0;
    if (r.lambda_used)
        out.lambda = to_c(*r.lambda_used);
    return out;
}

gcs_modified_params to_c(const gcs::ModifiedPacketParams &p) {
    return {to_c(p.c_norm), to_c(p.a1), to_c(p.a2),      p.alpha,
            to_c(p.a_sq),   p.delta_sq_A, to_c(p.abar_sq), to_c(p.x_m)};
}

gcs::ModifiedPacketParams from_c(const gcs_modified_params &p) {
    gcs::ModifiedPacketParams out;
    out.c_norm = from_c(p.c_norm);
    out.a1 = from_c(p.a1);
    out.a2 = from_c(p.a2);
    out.alpha = p.alpha;
    out.a_sq = from_c(p.a_sq);
    out.delta_sq_A = p.delta_sq_A;
    out.abar_sq = from_c(p.abar_sq);
    out.x_m = from_c(p.x_m);
    return out;
}

std::optional<std::string> units_from(const char *units) {
    return units ? std::optional<std::string>(units) : std::nullopt;
}

char *copy_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

gcs_wave new_wave(gcs::GridWaveFunction w) { return new gcs_wave_s{std::move(w)}; }

struct HandlerState {
    gcs_warning_handler fn = nullptr;
    void *user = nullptr;
};

} // namespace

extern "C" {

const char *gcs_version(void) { return "1.0.0"; }

const char *gcs_last_error(void) { return last_error.c_str(); }

const char *gcs_status_string(gcs_status status) {
    switch (status) {
    case GCS_OK: return "ok";
    case GCS_ERR_DIMENSION: return "dimension mismatch";
    case GCS_ERR_NOT_HERMITIAN: return "operator not Hermitian";
    case GCS_ERR_NOT_NORMALIZED: return "not normalized";
    case GCS_ERR_DEGENERATE: return "degenerate input";
    case GCS_ERR_SINGULAR: return "singular width combination";
    case GCS_ERR_GRID: return "invalid grid";
    case GCS_ERR_PARSE: return "parse error";
    case GCS_ERR_IO: return "i/o error";
    case GCS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GCS_ERR_NO_SOLUTION: return "no solution";
    case GCS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void gcs_set_warning_handler(gcs_warning_handler handler, void *user_data) {
    if (!handler) {
        gcs::set_warning_handler({});
        return;
    }
    HandlerState state{handler, user_data};
    gcs::set_warning_handler([state](std::string_view msg) {
        const std::string text(msg);
        state.fn(text.c_str(), state.user);
    });
}

gcs_status gcs_state_create(size_t dim, const double *re, const double *im,
                            const char *units, gcs_state *out) {
    return guarded([&] {
        require(re, "re");
        require(out, "out");
        std::vector<gcs::Complex> amps(dim);
        for (size_t i = 0; i < dim; ++i)
            amps[i] = {re[i], im ? im[i] : 0.0};
        *out = new gcs_state_s{gcs::StateVector(std::move(amps), units_from(units))};
    });
}

gcs_status gcs_state_load(const char *path, gcs_state *out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new gcs_state_s{gcs::io::load_state(path)};
    });
}

gcs_status gcs_state_save(gcs_state state, const char *path) {
    return guarded([&] {
        require(state, "state");
        require(path, "path");
        gcs::io::save_text(path, gcs::io::serialize_state(state->value));
    });
}

void gcs_state_destroy(gcs_state state) { delete state; }

size_t gcs_state_dim(gcs_state state) { return state ? state->value.dim() : 0; }

gcs_status gcs_state_get(gcs_state state, double *re, double *im) {
    return guarded([&] {
        require(state, "state");
        const auto amps = state->value.amplitudes();
        for (size_t i = 0; i < amps.size(); ++i) {
            if (re) re[i] = amps[i].real();
            if (im) im[i] = amps[i].imag();
        }
    });
}

gcs_status gcs_operator_create(size_t dim, const double *re, const double *im,
                               const char *units, gcs_operator *out) {
    return guarded([&] {
        require(re, "re");
        require(out, "out");
        std::vector<gcs::Complex> e(dim * dim);
        for (size_t i = 0; i < e.size(); ++i)
            e[i] = {re[i], im ? im[i] : 0.0};
        *out = new gcs_operator_s{gcs::HermitianOperator(dim, std::move(e), units_from(units))};
    });
}

gcs_status gcs_operator_load(const char *path, gcs_operator *out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new gcs_operator_s{gcs::io::load_operator(path)};
    });
}

gcs_status gcs_operator_save(gcs_operator op, const char *path) {
    return guarded([&] {
        require(op, "operator");
        require(path, "path");
        gcs::io::save_text(path, gcs::io::serialize_operator(op->value));
    });
}

void gcs_operator_destroy(gcs_operator op) { delete op; }

size_t gcs_operator_dim(gcs_operator op) { return op ? op->value.dim() : 0; }

gcs_status gcs_inner_product(gcs_state a, gcs_state b, gcs_complex *out) {
    return guarded([&] {
        require(a, "a"); require(b, "b"); require(out, "out");
        *out = to_c(gcs::inner_product(a->value, b->value));
    });
}

gcs_status gcs_norm(gcs_state a, double *out) {
    return guarded([&] {
        require(a, "a"); require(out, "out");
        *out = gcs::norm(a->value);
    });
}

gcs_status gcs_expectation(gcs_operator op, gcs_state psi, gcs_complex *out) {
    return guarded([&] {
        require(op, "op"); require(psi, "psi"); require(out, "out");
        *out = to_c(gcs::expectation(op->value, psi->value));
    });
}

gcs_status gcs_variance(gcs_operator op, gcs_state psi, double *out) {
    return guarded([&] {
        require(op, "op"); require(psi, "psi"); require(out, "out");
        *out = gcs::variance(op->value, psi->value);
    });
}

gcs_status gcs_deviation_vector(gcs_operator op, gcs_state psi, gcs_state *out) {
    return guarded([&] {
        require(op, "op"); require(psi, "psi"); require(out, "out");
        *out = new gcs_state_s{gcs::deviation_vector(op->value, psi->value)};
    });
}

gcs_status gcs_commutator_expectation(gcs_operator a, gcs_operator b, gcs_state psi,
                                      gcs_complex *out) {
    return guarded([&] {
        require(a, "a"); require(b, "b"); require(psi, "psi"); require(out, "out");
        *out = to_c(gcs::commutator_expectation(a->value, b->value, psi->value));
    });
}

gcs_status gcs_anticommutator_expectation(gcs_operator a, gcs_operator b, gcs_state psi,
                                          gcs_complex *out) {
    return guarded([&] {
        require(a, "a"); require(b, "b"); require(psi, "psi"); require(out, "out");
        *out = to_c(gcs::anticommutator_expectation(a->value, b->value, psi->value));
    });
}

gcs_status gcs_quadratic_form(gcs_state a, gcs_state b, gcs_complex lambda, double *out) {
    return guarded([&] {
        require(a, "a"); require(b, "b"); require(out, "out");
        *out = gcs::quadratic_form(a->value, b->value, from_c(lambda));
    });
}

gcs_status gcs_optimal_lambda(gcs_state a, gcs_state b, gcs_complex *out) {
    return guarded([&] {
        require(a, "a"); require(b, "b"); require(out, "out");
        *out = to_c(gcs::optimal_lambda(a->value, b->value));
    });
}

gcs_status gcs_cs_check(gcs_state a, gcs_state b, double tolerance, gcs_report *out) {
    return guarded([&] {
        require(a, "a"); require(b, "b"); require(out, "out");
        *out = to_c(gcs::cs_check(a->value, b->value, tol_or_default(tolerance)));
    });
}

gcs_status gcs_generalized_quadratic_form(gcs_state a, gcs_state b, gcs_state m,
                                          gcs_complex lambda, double *out) {
    return guarded([&] {
        require(a, "a"); require(b, "b"); require(m, "m"); require(out, "out");
        *out = gcs::generalized_quadratic_form(a->value, b->value, m->value, from_c(lambda));
    });
}

gcs_status gcs_generalized_lambda(gcs_state a, gcs_state b, gcs_state m, gcs_complex *out) {
    return guarded([&] {
        require(a, "a"); require(b, "b"); require(m, "m"); require(out, "out");
        *out = to_c(gcs::generalized_lambda(a->value, b->value, m->value));
    });
}

gcs_status gcs_generalized_cs_check(gcs_state a, gcs_state b, gcs_state m,
                                    double tolerance, gcs_report *out) {
    return guarded([&] {
        require(a, "a"); require(b, "b"); require(m, "m"); require(out, "out");
        *out = to_c(gcs::generalized_cs_check(a->value, b->value, m->value,
                                              tol_or_default(tolerance)));
    });
}

gcs_status gcs_hr_bound(gcs_operator a, gcs_operator b, gcs_state psi, double tolerance,
                        gcs_report *out) {
    return guarded([&] {
        require(a, "a"); require(b, "b"); require(psi, "psi"); require(out, "out");
        *out = to_c(gcs::hr_bound(a->value, b->value, psi->value, tol_or_default(tolerance)));
    });
}

gcs_status gcs_hrs_bound(gcs_operator a, gcs_operator b, gcs_state psi, double tolerance,
                         gcs_report *out) {
    return guarded([&] {
        require(a, "a"); require(b, "b"); require(psi, "psi"); require(out, "out");
        *out = to_c(gcs::hrs_bound(a->value, b->value, psi->value, tol_or_default(tolerance)));
    });
}

gcs_status gcs_generalized_uncertainty_check(gcs_operator a, gcs_operator b, gcs_state psi,
                                             gcs_state m, double tolerance, gcs_report *out) {
    return guarded([&] {
        require(a, "a"); require(b, "b"); require(psi, "psi"); require(m, "m");
        require(out, "out");
        *out = to_c(gcs::generalized_uncertainty_check(a->value, b->value, psi->value,
                                                       m->value, tol_or_default(tolerance)));
    });
}

gcs_status gcs_grid_create(size_t n, double x_max, gcs_grid *out) {
    return guarded([&] {
        require(out, "out");
        *out = new gcs_grid_s{gcs::make_grid(n, x_max)};
    });
}

void gcs_grid_destroy(gcs_grid grid) { delete grid; }

size_t gcs_grid_size(gcs_grid grid) { return grid ? grid->value.size() : 0; }

double gcs_grid_spacing(gcs_grid grid) { return grid ? grid->value.spacing() : 0.0; }

gcs_status gcs_grid_points(gcs_grid grid, double *x) {
    return guarded([&] {
        require(grid, "grid"); require(x, "x");
        for (size_t i = 0; i < grid->value.size(); ++i)
            x[i] = grid->value.point(i);
    });
}

gcs_status gcs_wave_create(gcs_grid grid, const double *re, const double *im, gcs_wave *out) {
    return guarded([&] {
        require(grid, "grid"); require(re, "re"); require(out, "out");
        std::vector<gcs::Complex> s(grid->value.size());
        for (size_t i = 0; i < s.size(); ++i)
            s[i] = {re[i], im ? im[i] : 0.0};
        *out = new_wave(gcs::GridWaveFunction(grid->value, std::move(s)));
    });
}

void gcs_wave_destroy(gcs_wave wave) { delete wave; }

size_t gcs_wave_size(gcs_wave wave) { return wave ? wave->value.size() : 0; }

gcs_status gcs_wave_samples(gcs_wave wave, double *re, double *im) {
    return guarded([&] {
        require(wave, "wave");
        for (size_t i = 0; i < wave->value.size(); ++i) {
            if (re) re[i] = wave->value[i].real();
            if (im) im[i] = wave->value[i].imag();
        }
    });
}

gcs_status gcs_quadrature(gcs_wave f, gcs_complex *out) {
    return guarded([&] {
        require(f, "f"); require(out, "out");
        *out = to_c(gcs::quadrature(f->value));
    });
}

gcs_status gcs_derivative(gcs_wave psi, int method, gcs_wave *out) {
    return guarded([&] {
        require(psi, "psi"); require(out, "out");
        if (method != 0 && method != 1)
            throw gcs::Error(gcs::ErrorCode::InvalidArgument, "unknown derivative method");
        *out = new_wave(gcs::derivative(psi->value, method == 0
                                                        ? gcs::DerivativeMethod::Spectral
                                                        : gcs::DerivativeMethod::CentralDifference4));
    });
}

gcs_status gcs_position_moments(gcs_wave psi, double *mean, double *variance) {
    return guarded([&] {
        require(psi, "psi");
        const gcs::Moments m = gcs::position_moments(psi->value);
        if (mean) *mean = m.mean.real();
        if (variance) *variance = m.variance;
    });
}

gcs_status gcs_momentum_moments(gcs_wave psi, double hbar, double *mean, double *variance) {
    return guarded([&] {
        require(psi, "psi");
        const gcs::Moments m = gcs::momentum_moments(psi->value, {hbar});
        if (mean) *mean = m.mean.real();
        if (variance) *variance = m.variance;
    });
}

gcs_status gcs_gaussian_min_packet(double delta_x, gcs_grid grid, gcs_wave *out) {
    return guarded([&] {
        require(grid, "grid"); require(out, "out");
        *out = new_wave(gcs::gaussian_min_packet(delta_x, grid->value));
    });
}

gcs_status gcs_epsilon_functional(gcs_wave psi, gcs_complex *out) {
    return guarded([&] {
        require(psi, "psi"); require(out, "out");
        *out = to_c(gcs::epsilon_functional(psi->value));
    });
}

gcs_status gcs_lambda_min_packet(double delta_p_sq, double hbar, gcs_complex *lambda,
                                 gcs_complex *a_sq) {
    return guarded([&] {
        const gcs::MinPacketLambda r = gcs::lambda_min_packet(delta_p_sq, {hbar});
        if (lambda) *lambda = to_c(r.lambda);
        if (a_sq) *a_sq = to_c(r.a_sq);
    });
}

gcs_status gcs_make_um(double alpha, gcs_grid grid, gcs_wave *out) {
    return guarded([&] {
        require(grid, "grid"); require(out, "out");
        *out = new_wave(gcs::make_um(alpha, grid->value));
    });
}

gcs_status gcs_f_integral(double alpha, gcs_complex a_sq, gcs_grid grid, gcs_wave *out) {
    return guarded([&] {
        require(grid, "grid"); require(out, "out");
        *out = new_wave(gcs::f_integral(alpha, from_c(a_sq), grid->value));
    });
}

gcs_status gcs_modified_packet_general(gcs_complex c, gcs_complex a1, gcs_complex a2,
                                       gcs_complex a_sq, double alpha, gcs_grid grid,
                                       gcs_wave *out) {
    return guarded([&] {
        require(grid, "grid"); require(out, "out");
        *out = new_wave(gcs::modified_packet_general(from_c(c), from_c(a1), from_c(a2),
                                                     from_c(a_sq), alpha, grid->value));
    });
}

gcs_status gcs_modified_packet_explicit(gcs_complex c, gcs_complex a1, double alpha,
                                        gcs_complex a_sq, gcs_grid grid, gcs_wave *out) {
    return guarded([&] {
        require(grid, "grid"); require(out, "out");
        *out = new_wave(gcs::modified_packet_explicit(from_c(c), from_c(a1), alpha,
                                                      from_c(a_sq), grid->value));
    });
}

gcs_status gcs_residual_check(gcs_wave psi, gcs_complex lambda, gcs_complex x_m_coeff,
                              double alpha, double hbar, double *out) {
    return guarded([&] {
        require(psi, "psi"); require(out, "out");
        *out = gcs::residual_check(psi->value, from_c(lambda), from_c(x_m_coeff), alpha,
                                   {hbar});
    });
}

gcs_status gcs_solve_self_consistent(gcs_complex c_seed, double alpha, gcs_complex a_sq,
                                     gcs_grid grid, const gcs_complex *a1,
                                     gcs_solution *out, gcs_wave *psi_out) {
    return guarded([&] {
        require(grid, "grid"); require(out, "out");
        std::optional<gcs::Complex> branch;
        if (a1)
            branch = from_c(*a1);
        gcs::SelfConsistentSolution s = gcs::solve_self_consistent(
            from_c(c_seed), alpha, from_c(a_sq), grid->value, branch);
        gcs_solution r{};
        r.params = to_c(s.params);
        r.constraint_offset = to_c(s.constraint.offset);
        r.constraint_slope_residual = to_c(s.constraint.slope_residual);
        r.one_parameter_family = s.one_parameter_family ? 1 : 0;
        r.a1_closure = s.a1_closure;
        r.a2_closure = s.a2_closure;
        if (psi_out)
            *psi_out = new_wave(std::move(s.psi));
        *out = r;
    });
}

gcs_status gcs_width_relation_check(const gcs_modified_params *params, gcs_wave psi,
                                    gcs_width_report *out) {
    return guarded([&] {
        require(params, "params"); require(psi, "psi"); require(out, "out");
        const gcs::WidthRelationReport w = gcs::width_relation_check(from_c(*params), psi->value);
        gcs_width_report r{};
        r.report = to_c(w.report);
        r.relative_deviation = w.relative_deviation;
        r.relative_deviation_derived = w.relative_deviation_derived;
        r.predicted_a_sq = to_c(w.predicted_a_sq);
        r.predicted_a_sq_derived = to_c(w.predicted_a_sq_derived);
        *out = r;
    });
}

void gcs_string_free(char *text) { std::free(text); }

gcs_status gcs_run_check(const gcs_check_options *options, char **report,
                         int *all_satisfied) {
    return guarded([&] {
        require(options, "options"); require(report, "report");
        require(options->inequality, "inequality");
        gcs::io::CheckOptions o;
        o.inequalities = gcs::io::parse_inequality_selector(options->inequality);
        o.dim = options->dim;
        o.trials = options->trials;
        o.seed = options->seed;
        o.tolerance = options->tolerance < 0.0 ? gcs::io::default_tolerance()
                                               : options->tolerance;
        o.m_mode = options->m_mode_any ? gcs::io::MMode::Any : gcs::io::MMode::Orthogonal;
        auto path = [](const char *p) {
            return p ? std::optional<std::filesystem::path>(p) : std::nullopt;
        };
        o.state = path(options->state_path);
        o.op_a = path(options->op_a_path);
        o.op_b = path(options->op_b_path);
        o.m = path(options->m_path);
        o.vec_a = path(options->vec_a_path);
        o.vec_b = path(options->vec_b_path);
        const gcs::io::CheckResult result = gcs::io::run_check(o);
        const std::string text = gcs::io::format_check_report(
            result, o,
            options->format == GCS_FORMAT_JSON ? gcs::io::ReportFormat::Json
                                               : gcs::io::ReportFormat::Csv,
            options->timestamp != 0);
        *report = copy_string(text);
        if (all_satisfied)
            *all_satisfied = result.all_satisfied ? 1 : 0;
    });
}

gcs_status gcs_run_packet(const gcs_packet_options *options, char **samples_csv,
                          char **summary_json) {
    return guarded([&] {
        require(options, "options");
        gcs::io::PacketOptions o;
        o.delta_x = options->delta_x;
        o.grid_n = options->grid_n;
        if (options->x_max > 0.0)
            o.x_max = options->x_max;
        o.hbar = options->hbar;
        const gcs::io::PacketResult r = gcs::io::run_packet(o);
        std::string samples = samples_csv
                                  ? gcs::io::format_packet_samples(r, o, options->timestamp != 0)
                                  : std::string();
        std::string summary = gcs::io::format_packet_summary(r, o);
        char *s1 = samples_csv ? copy_string(samples) : nullptr;
        char *s2 = nullptr;
        if (summary_json) {
            try {
                s2 = copy_string(summary);
            } catch (...) {
                std::free(s1);
                throw;
            }
        }
        if (samples_csv) *samples_csv = s1;
        if (summary_json) *summary_json = s2;
    });
}

gcs_status gcs_run_modified(const gcs_modified_options *options, char **report) {
    return guarded([&] {
        require(options, "options"); require(report, "report");
        require(options->alphas, "alphas");
        gcs::io::ModifiedOptions o;
        o.alphas.assign(options->alphas, options->alphas + options->alpha_count);
        o.a_sq = from_c(options->a_sq);
        if (options->a1)
            o.a1 = from_c(*options->a1);
        o.c_seed = from_c(options->c_seed);
        o.grid_n = options->grid_n;
        o.x_max = options->x_max;
        o.hbar = options->hbar;
        const auto points = gcs::io::run_modified(o);
        *report = copy_string(gcs::io::format_modified_report(points, o, options->timestamp != 0));
    });
}

gcs_status gcs_parse_sweep(const char *spec, double **values, size_t *count) {
    return guarded([&] {
        require(spec, "spec"); require(values, "values"); require(count, "count");
        const auto v = gcs::io::parse_sweep(spec);
        auto *out = static_cast<double *>(std::malloc(sizeof(double) * v.size()));
        if (!out)
            throw std::bad_alloc();
        std::copy(v.begin(), v.end(), out);
        *values = out;
        *count = v.size();
    });
}

void gcs_doubles_free(double *values) { std::free(values); }

double gcs_default_tolerance(void) { return gcs::io::default_tolerance(); }

const char *gcs_tolerance_env_name(void) { return gcs::io::kToleranceEnv; }

const char *gcs_columns_help(const char *command) {
    const std::string c = command ? command : "";
    if (c == "check") return gcs::io::kCheckColumnsHelp;
    if (c == "packet") return gcs::io::kPacketColumnsHelp;
    if (c == "modified") return gcs::io::kModifiedColumnsHelp;
    return "";
}

} // extern "C"
