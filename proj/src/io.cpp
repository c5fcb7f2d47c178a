#include "gcs/io.hpp"

#include "gcs/error.hpp"
#include "gcs/wavepacket.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

namespace gcs::io {

using nlohmann::json;

namespace {

json parse_json(const std::string &text, const char *what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        std::ostringstream os;
        os << what << ": JSON parse error at byte " << e.byte << ": " << e.what();
        throw Error(ErrorCode::Parse, os.str());
    }
}

std::size_t read_dim(const json &j, const char *what) {
    if (!j.is_object())
        throw Error(ErrorCode::Parse, std::string(what) + ": top level must be an object");
    if (!j.contains("dim"))
        throw Error(ErrorCode::Parse, std::string(what) + ": missing field 'dim'");
    const json &d = j.at("dim");
    if (!d.is_number_integer() || d.get<long long>() < 1)
        throw Error(ErrorCode::Parse,
                    std::string(what) + ": field 'dim' must be a positive integer");
    return d.get<std::size_t>();
}

double read_number(const json &v, const std::string &where) {
    if (!v.is_number())
        throw Error(ErrorCode::Parse, where + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw Error(ErrorCode::Parse, where + ": value is not finite");
    return x;
}

std::vector<double> read_array(const json &j, const char *field, std::size_t dim,
                               const std::string &what, bool optional) {
    if (!j.contains(field)) {
        if (optional)
            return std::vector<double>(dim, 0.0);
        throw Error(ErrorCode::Parse, what + ": missing field '" + field + "'");
    }
    const json &a = j.at(field);
    if (!a.is_array() || a.size() != dim) {
        std::ostringstream os;
        os << what << ": field '" << field << "' must be an array of length " << dim;
        throw Error(ErrorCode::Parse, os.str());
    }
    std::vector<double> out(dim);
    for (std::size_t i = 0; i < dim; ++i)
        out[i] = read_number(a[i], what + ": field '" + field + "'[" + std::to_string(i) + "]");
    return out;
}

std::vector<double> read_matrix(const json &j, const char *field, std::size_t dim,
                                const std::string &what, bool optional) {
    if (!j.contains(field)) {
        if (optional)
            return std::vector<double>(dim * dim, 0.0);
        throw Error(ErrorCode::Parse, what + ": missing field '" + field + "'");
    }
    const json &rows = j.at(field);
    if (!rows.is_array() || rows.size() != dim) {
        std::ostringstream os;
        os << what << ": field '" << field << "' must have " << dim << " rows";
        throw Error(ErrorCode::Parse, os.str());
    }
    std::vector<double> out(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        const json &row = rows[r];
        if (!row.is_array() || row.size() != dim) {
            std::ostringstream os;
            os << what << ": field '" << field << "' row " << r << " must have " << dim
               << " entries";
            throw Error(ErrorCode::Parse, os.str());
        }
        for (std::size_t c = 0; c < dim; ++c)
            out[r * dim + c] = read_number(
                row[c], what + ": field '" + field + "'[" + std::to_string(r) + "][" +
                            std::to_string(c) + "]");
    }
    return out;
}

std::optional<std::string> read_units(const json &j, const std::string &what) {
    if (!j.contains("units") || j.at("units").is_null())
        return std::nullopt;
    if (!j.at("units").is_string())
        throw Error(ErrorCode::Parse, what + ": field 'units' must be a string");
    return j.at("units").get<std::string>();
}

std::string read_text(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string num(double x) {
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string timestamp_line() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[64];
    std::strftime(buf, sizeof buf, "# generated: %Y-%m-%dT%H:%M:%SZ\n", &tm);
    return buf;
}

std::string complex_text(Complex z) {
    return "(" + num(z.real()) + "," + num(z.imag()) + ")";
}

} // namespace

StateVector parse_state(const std::string &json_text) {
    const json j = parse_json(json_text, "state file");
    const std::size_t dim = read_dim(j, "state file");
    const auto re = read_array(j, "re", dim, "state file", false);
    const auto im = read_array(j, "im", dim, "state file", true);
    std::vector<Complex> amps(dim);
    for (std::size_t i = 0; i < dim; ++i)
        amps[i] = {re[i], im[i]};
    return StateVector(std::move(amps), read_units(j, "state file"));
}

HermitianOperator parse_operator(const std::string &json_text) {
    const json j = parse_json(json_text, "operator file");
    const std::size_t dim = read_dim(j, "operator file");
    const auto re = read_matrix(j, "re", dim, "operator file", false);
    const auto im = read_matrix(j, "im", dim, "operator file", true);
    std::vector<Complex> entries(dim * dim);
    for (std::size_t i = 0; i < entries.size(); ++i)
        entries[i] = {re[i], im[i]};
    return HermitianOperator(dim, std::move(entries), read_units(j, "operator file"));
}

StateVector load_state(const std::filesystem::path &path) {
    try {
        return parse_state(read_text(path));
    } catch (const Error &e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

HermitianOperator load_operator(const std::filesystem::path &path) {
    try {
        return parse_operator(read_text(path));
    } catch (const Error &e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

std::string serialize_state(const StateVector &v) {
    json j;
    j["dim"] = v.dim();
    json re = json::array(), im = json::array();
    for (const auto &z : v.amplitudes()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    j["re"] = re;
    j["im"] = im;
    if (v.units())
        j["units"] = *v.units();
    return j.dump(2) + "\n";
}

std::string serialize_operator(const HermitianOperator &op) {
    json j;
    j["dim"] = op.dim();
    json re = json::array(), im = json::array();
    for (std::size_t r = 0; r < op.dim(); ++r) {
        json rr = json::array(), ri = json::array();
        for (std::size_t c = 0; c < op.dim(); ++c) {
            rr.push_back(op(r, c).real());
            ri.push_back(op(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    j["re"] = re;
    j["im"] = im;
    if (op.units())
        j["units"] = *op.units();
    return j.dump(2) + "\n";
}

void save_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << text;
}

double default_tolerance() {
    if (const char *env = std::getenv(kToleranceEnv)) {
        char *end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && *end == '\0' && std::isfinite(v) && v >= 0.0)
            return v;
        warn(std::string(kToleranceEnv) + " is not a nonnegative number; ignoring it");
    }
    return kDefaultResidualTolerance;
}

ReportRow to_row(const InequalityReport &r, std::uint64_t seed, std::size_t trial) {
    return {r.label, r.lhs, r.rhs, r.residual, r.satisfied, r.lambda_used, seed, trial};
}

std::vector<InequalityLabel> parse_inequality_selector(const std::string &text) {
    if (text == "all")
        return {InequalityLabel::CS, InequalityLabel::GCS, InequalityLabel::HR,
                InequalityLabel::HRS, InequalityLabel::GUR};
    const auto label = parse_label(text);
    if (!label || *label == InequalityLabel::WIDTH)
        throw Error(ErrorCode::InvalidArgument, "unknown inequality '" + text + "'");
    return {*label};
}

namespace {

struct TrialInputs {
    std::optional<StateVector> psi, m, vec_a, vec_b;
    std::optional<HermitianOperator> op_a, op_b;
};

TrialInputs load_inputs(const CheckOptions &o) {
    TrialInputs in;
    if (o.state) in.psi = load_state(*o.state);
    if (o.m) in.m = load_state(*o.m);
    if (o.vec_a) in.vec_a = load_state(*o.vec_a);
    if (o.vec_b) in.vec_b = load_state(*o.vec_b);
    if (o.op_a) in.op_a = load_operator(*o.op_a);
    if (o.op_b) in.op_b = load_operator(*o.op_b);
    return in;
}

std::size_t campaign_dim(const CheckOptions &o, const TrialInputs &in) {
    std::optional<std::size_t> dim;
    auto merge = [&](std::size_t d, const char *what) {
        if (dim && *dim != d) {
            std::ostringstream os;
            os << "input files disagree on dimension (" << what << " has " << d
               << ", expected " << *dim << ")";
            throw Error(ErrorCode::DimensionMismatch, os.str());
        }
        dim = d;
    };
    if (in.psi) merge(in.psi->dim(), "--state");
    if (in.m) merge(in.m->dim(), "--m");
    if (in.vec_a) merge(in.vec_a->dim(), "--vec-a");
    if (in.vec_b) merge(in.vec_b->dim(), "--vec-b");
    if (in.op_a) merge(in.op_a->dim(), "--op-a");
    if (in.op_b) merge(in.op_b->dim(), "--op-b");
    if (dim)
        return *dim;
    if (o.dim < 1)
        throw Error(ErrorCode::InvalidArgument, "--dim must be >= 1");
    return o.dim;
}

bool needs_m(InequalityLabel l) {
    return l == InequalityLabel::GCS || l == InequalityLabel::GUR ||
           l == InequalityLabel::QFORM;
}

} // namespace

CheckResult run_check(const CheckOptions &o) {
    const TrialInputs in = load_inputs(o);
    const std::size_t dim = campaign_dim(o, in);
    bool want_m = false;
    for (auto l : o.inequalities)
        want_m = want_m || needs_m(l);
    if (want_m && !in.m && dim < 2)
        throw Error(ErrorCode::InvalidArgument,
                    "a distinguished vector needs dimension >= 2");

    CheckResult result;
    for (std::size_t t = 0; t < o.trials; ++t) {
        std::seed_seq seq{static_cast<std::uint32_t>(o.seed),
                          static_cast<std::uint32_t>(o.seed >> 32),
                          static_cast<std::uint32_t>(t),
                          static_cast<std::uint32_t>(static_cast<std::uint64_t>(t) >> 32)};
        std::mt19937_64 rng(seq);
        // Draw everything in a fixed order so a trial's inputs do not depend
        // on which inequalities were requested.
        const StateVector psi = in.psi ? *in.psi : random_state(dim, rng);
        const StateVector va = in.vec_a ? *in.vec_a : random_vector(dim, rng);
        const StateVector vb = in.vec_b ? *in.vec_b : random_vector(dim, rng);
        const HermitianOperator oa = in.op_a ? *in.op_a : random_hermitian(dim, rng);
        const HermitianOperator ob = in.op_b ? *in.op_b : random_hermitian(dim, rng);
        std::optional<StateVector> m = in.m;
        if (!m && dim >= 2)
            m = o.m_mode == MMode::Orthogonal ? random_state_orthogonal_to(psi, rng)
                                              : random_state(dim, rng);

        for (auto label : o.inequalities) {
            switch (label) {
            case InequalityLabel::CS:
                result.rows.push_back(to_row(cs_check(va, vb, o.tolerance), o.seed, t));
                break;
            case InequalityLabel::GCS:
                result.rows.push_back(
                    to_row(generalized_cs_check(va, vb, *m, o.tolerance), o.seed, t));
                break;
            case InequalityLabel::HR:
                result.rows.push_back(to_row(hr_bound(oa, ob, psi, o.tolerance), o.seed, t));
                break;
            case InequalityLabel::HRS:
                result.rows.push_back(to_row(hrs_bound(oa, ob, psi, o.tolerance), o.seed, t));
                break;
            case InequalityLabel::GUR:
                result.rows.push_back(to_row(
                    generalized_uncertainty_check(oa, ob, psi, *m, o.tolerance), o.seed, t));
                break;
            case InequalityLabel::QFORM: {
                const StateVector pa = deviation_vector(oa, psi);
                const StateVector pb = deviation_vector(ob, psi);
                for (Complex lambda : {Complex(1, 0), Complex(-1, 0), Complex(0, 1),
                                       Complex(0, -1)}) {
                    const double value = generalized_quadratic_form(pa, pb, *m, lambda);
                    result.rows.push_back(to_row(
                        make_report(InequalityLabel::QFORM, value, 0.0, o.tolerance, lambda),
                        o.seed, t));
                }
                break;
            }
            case InequalityLabel::WIDTH:
                throw Error(ErrorCode::InvalidArgument,
                            "the width relation is checked by the 'modified' command");
            }
        }
    }
    for (const auto &r : result.rows)
        result.all_satisfied = result.all_satisfied && r.satisfied;
    return result;
}

const char *const kCheckColumnsHelp =
    "CSV columns (check):\n"
    "  label        inequality: CS, GCS, HR, HRS, GUR or QFORM\n"
    "  lhs          left-hand side\n"
    "  rhs          right-hand side (0 for QFORM)\n"
    "  residual     lhs - rhs\n"
    "  satisfied    1 if residual >= -tolerance * max(1, |lhs|), else 0\n"
    "  lambda_re    real part of the minimizing (or fixed) lambda; empty if undefined\n"
    "  lambda_im    imaginary part of lambda; empty if undefined\n"
    "  seed         campaign seed\n"
    "  trial_index  zero-based trial number\n";

const char *const kPacketColumnsHelp =
    "CSV columns (packet):\n"
    "  x            grid point\n"
    "  re_psi       real part of psi(x)\n"
    "  im_psi       imaginary part of psi(x)\n"
    "  abs2_psi     |psi(x)|^2\n";

const char *const kModifiedColumnsHelp =
    "CSV columns (modified):\n"
    "  alpha               width of the odd basis function u_m\n"
    "  c_re, c_im          normalized Gaussian coefficient C\n"
    "  a1_re, a1_im        a1 = integral of x u_m psi\n"
    "  a2_re, a2_im        a2 = integral of u_m dpsi/dx\n"
    "  a_sq_re, a_sq_im    Gaussian width parameter a^2\n"
    "  delta_x_sq          position variance of the packet\n"
    "  width_dev           |a^2 - D/(1/2 - a1 a2)| / |a^2|, D = delta_x_sq - |a1|^2\n"
    "  width_dev_derived   |a^2 - D/(-eps + conj(a1) a2)| / |a^2|, eps = integral psi* x psi'\n"
    "  residual            sup|x psi - i hbar lambda psi' - x_m u_m| / max|psi|\n"
    "  dual_path_gap       sup-norm gap between the integral and closed-form packets\n"
    "  squeeze_factor      re(a^2) / (2 delta_x_sq)\n"
    "  family              1 if a1/C is a free parameter on this grid\n"
    "  status              ok, or the reason the point was skipped\n";

std::string format_check_report(const CheckResult &result, const CheckOptions &o,
                                ReportFormat format, bool timestamp) {
    std::string labels;
    for (auto l : o.inequalities)
        labels += (labels.empty() ? "" : "+") + std::string(to_string(l));
    if (format == ReportFormat::Json) {
        json j;
        j["command"] = "check";
        j["parameters"] = {{"inequality", labels}, {"dim", o.dim},
                           {"trials", o.trials},  {"seed", o.seed},
                           {"tolerance", o.tolerance},
                           {"m_mode", o.m_mode == MMode::Orthogonal ? "orthogonal" : "any"}};
        json rows = json::array();
        for (const auto &r : result.rows) {
            json row = {{"label", std::string(to_string(r.label))},
                        {"lhs", r.lhs},
                        {"rhs", r.rhs},
                        {"residual", r.residual},
                        {"satisfied", r.satisfied},
                        {"seed", r.seed},
                        {"trial_index", r.trial_index}};
            row["lambda_re"] = r.lambda ? json(r.lambda->real()) : json(nullptr);
            row["lambda_im"] = r.lambda ? json(r.lambda->imag()) : json(nullptr);
            rows.push_back(row);
        }
        j["rows"] = rows;
        j["all_satisfied"] = result.all_satisfied;
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "# gcs check report\n";
    if (timestamp)
        os << timestamp_line();
    os << "# inequality=" << labels << " dim=" << o.dim << " trials=" << o.trials
       << " seed=" << o.seed << " tolerance=" << num(o.tolerance)
       << " m_mode=" << (o.m_mode == MMode::Orthogonal ? "orthogonal" : "any") << "\n";
    os << "label,lhs,rhs,residual,satisfied,lambda_re,lambda_im,seed,trial_index\n";
    for (const auto &r : result.rows) {
        os << to_string(r.label) << ',' << num(r.lhs) << ',' << num(r.rhs) << ','
           << num(r.residual) << ',' << (r.satisfied ? 1 : 0) << ',';
        if (r.lambda)
            os << num(r.lambda->real()) << ',' << num(r.lambda->imag());
        else
            os << ',';
        os << ',' << r.seed << ',' << r.trial_index << '\n';
    }
    return os.str();
}

PacketResult run_packet(const PacketOptions &o) {
    if (!(o.hbar > 0.0))
        throw Error(ErrorCode::InvalidArgument, "--hbar must be positive");
    const Grid grid(o.grid_n, o.x_max.value_or(10.0 * o.delta_x));
    const GridWaveFunction psi = gaussian_min_packet(o.delta_x, grid);
    const PhysicalConstants k{o.hbar};
    const Moments mx = position_moments(psi);
    const Moments mp = momentum_moments(psi, k);

    PacketResult r;
    r.x = grid.points();
    r.psi.assign(psi.samples().begin(), psi.samples().end());
    r.norm = norm_squared(psi);
    r.mean_x = mx.mean.real();
    r.mean_p = mp.mean.real();
    r.delta_x = std::sqrt(mx.variance);
    r.delta_p = std::sqrt(mp.variance);
    r.ratio = r.delta_x * r.delta_p / (0.5 * o.hbar);
    r.epsilon = epsilon_functional(psi).real();
    const MinPacketLambda lm = lambda_min_packet(mp.variance, k);
    // u_m does not enter when x_m = 0; any admissible width serves
    r.residual = residual_check(psi, lm.lambda, 0.0, 1.0, k) / psi.max_abs();
    return r;
}

std::string format_packet_samples(const PacketResult &r, const PacketOptions &o,
                                  bool timestamp) {
    std::ostringstream os;
    os << "# gcs packet samples\n";
    if (timestamp)
        os << timestamp_line();
    os << "# delta_x=" << num(o.delta_x) << " grid_n=" << o.grid_n
       << " x_max=" << num(o.x_max.value_or(10.0 * o.delta_x)) << " hbar=" << num(o.hbar)
       << "\n";
    os << "x,re_psi,im_psi,abs2_psi\n";
    for (std::size_t i = 0; i < r.x.size(); ++i)
        os << num(r.x[i]) << ',' << num(r.psi[i].real()) << ',' << num(r.psi[i].imag())
           << ',' << num(std::norm(r.psi[i])) << '\n';
    return os.str();
}

std::string format_packet_summary(const PacketResult &r, const PacketOptions &o) {
    json j = {{"delta_x_input", o.delta_x},
              {"grid_n", o.grid_n},
              {"x_max", o.x_max.value_or(10.0 * o.delta_x)},
              {"hbar", o.hbar},
              {"norm", r.norm},
              {"mean_x", r.mean_x},
              {"mean_p", r.mean_p},
              {"delta_x", r.delta_x},
              {"delta_p", r.delta_p},
              {"uncertainty_ratio", r.ratio},
              {"epsilon", r.epsilon},
              {"defining_relation_residual", r.residual}};
    return j.dump(2) + "\n";
}

std::vector<double> parse_sweep(const std::string &spec) {
    std::string body = spec;
    if (body.rfind("alpha=", 0) == 0)
        body = body.substr(6);
    double lo = 0, hi = 0;
    long steps = 0;
    char tail = 0;
    if (std::sscanf(body.c_str(), "%lf:%lf:%ld%c", &lo, &hi, &steps, &tail) != 3 ||
        steps < 1)
        throw Error(ErrorCode::InvalidArgument,
                    "sweep must look like alpha=LO:HI:STEPS with STEPS >= 1 (got '" +
                        spec + "')");
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (long i = 0; i < steps; ++i)
        out[static_cast<std::size_t>(i)] =
            steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) /
                                       static_cast<double>(steps - 1);
    return out;
}

std::vector<ModifiedPoint> run_modified(const ModifiedOptions &o) {
    const Grid grid(o.grid_n, o.x_max);
    const PhysicalConstants k{o.hbar};
    std::vector<ModifiedPoint> points;
    for (double alpha : o.alphas) {
        ModifiedPoint pt;
        pt.alpha = alpha;
        try {
            const SelfConsistentSolution sol =
                solve_self_consistent(o.c_seed, alpha, o.a_sq, grid, o.a1);
            const ModifiedPacketParams &p = sol.params;
            pt.params = p;
            pt.one_parameter_family = sol.one_parameter_family;
            pt.delta_x_sq = position_moments(sol.psi).variance;
            const WidthRelationReport w = width_relation_check(p, sol.psi);
            pt.width_deviation = w.relative_deviation;
            pt.width_deviation_derived = w.relative_deviation_derived;
            pt.residual = residual_check(sol.psi, lambda_from_a_sq(p.a_sq, k), p.x_m,
                                         alpha, k) /
                          sol.psi.max_abs();
            const GridWaveFunction general =
                modified_packet_general(p.c_norm, p.a1, p.a2, p.a_sq, alpha, grid);
            pt.dual_path_gap = sup_norm_distance(general, sol.psi);
            pt.squeeze_factor = p.a_sq.real() / (2.0 * pt.delta_x_sq);
            pt.ok = true;
            pt.status = "ok";
        } catch (const Error &e) {
            pt.status = std::string("skipped: ") + e.what();
            warn("alpha=" + num(alpha) + " " + pt.status);
        }
        points.push_back(std::move(pt));
    }
    return points;
}

std::string format_modified_report(const std::vector<ModifiedPoint> &points,
                                   const ModifiedOptions &o, bool timestamp) {
    std::ostringstream os;
    os << "# gcs modified-packet report\n";
    if (timestamp)
        os << timestamp_line();
    os << "# a_sq=" << complex_text(o.a_sq) << " c_seed=" << complex_text(o.c_seed)
       << " branch=" << (o.a1 ? "a1=" + complex_text(*o.a1) : std::string("gaussian"))
       << " grid_n=" << o.grid_n << " x_max=" << num(o.x_max) << " hbar=" << num(o.hbar)
       << "\n";
    for (const auto &p : points)
        if (!p.ok)
            os << "# alpha=" << num(p.alpha) << " " << p.status << "\n";
    os << "alpha,c_re,c_im,a1_re,a1_im,a2_re,a2_im,a_sq_re,a_sq_im,delta_x_sq,"
          "width_dev,width_dev_derived,residual,dual_path_gap,squeeze_factor,family,status\n";
    for (const auto &p : points) {
        if (!p.ok) {
            os << num(p.alpha) << ",,,,,,,,,,,,,,,,skipped\n";
            continue;
        }
        const auto &q = p.params;
        os << num(p.alpha) << ',' << num(q.c_norm.real()) << ',' << num(q.c_norm.imag())
           << ',' << num(q.a1.real()) << ',' << num(q.a1.imag()) << ','
           << num(q.a2.real()) << ',' << num(q.a2.imag()) << ',' << num(q.a_sq.real())
           << ',' << num(q.a_sq.imag()) << ',' << num(p.delta_x_sq) << ','
           << num(p.width_deviation) << ',' << num(p.width_deviation_derived) << ','
           << num(p.residual) << ',' << num(p.dual_path_gap) << ','
           << num(p.squeeze_factor) << ',' << (p.one_parameter_family ? 1 : 0) << ",ok\n";
    }
    return os.str();
}

} // namespace gcs::io
