#include "gcs/wavepacket.hpp"

#include "gcs/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace gcs {

namespace {

constexpr double kNormTolerance = 1e-8;
constexpr double kClosureTolerance = 1e-8;
constexpr double kAffineDegenerate = 1e-8;

std::mutex &fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex *p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

struct FftwPlanDeleter {
    void operator()(fftw_plan p) const {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(p);
    }
};
using FftwPlan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, FftwPlanDeleter>;

FftwBuffer fftw_buffer(std::size_t n) {
    return FftwBuffer(static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * n)));
}

FftwPlan make_plan(std::size_t n, fftw_complex *in, fftw_complex *out, int sign) {
    std::lock_guard lock(fftw_planner_mutex());
    return FftwPlan(fftw_plan_dft_1d(static_cast<int>(n), in, out, sign, FFTW_ESTIMATE));
}

std::vector<Complex> spectral_derivative(std::span<const Complex> f, double h) {
    const std::size_t n = f.size();
    auto in = fftw_buffer(n);
    auto out = fftw_buffer(n);
    auto forward = make_plan(n, in.get(), out.get(), FFTW_FORWARD);
    auto backward = make_plan(n, out.get(), in.get(), FFTW_BACKWARD);
    for (std::size_t i = 0; i < n; ++i) {
        in[i][0] = f[i].real();
        in[i][1] = f[i].imag();
    }
    fftw_execute(forward.get());
    const double period = static_cast<double>(n) * h;
    const double dk = 2.0 * std::numbers::pi / period;
    for (std::size_t j = 0; j < n; ++j) {
        double k;
        if (2 * j < n)
            k = dk * static_cast<double>(j);
        else if (2 * j == n)
            k = 0.0;  // Nyquist mode has no odd-symmetric derivative
        else
            k = dk * (static_cast<double>(j) - static_cast<double>(n));
        const double re = out[j][0];
        const double im = out[j][1];
        // multiply by i k / n
        out[j][0] = -k * im / static_cast<double>(n);
        out[j][1] = k * re / static_cast<double>(n);
    }
    fftw_execute(backward.get());
    std::vector<Complex> d(n);
    for (std::size_t i = 0; i < n; ++i)
        d[i] = {in[i][0], in[i][1]};
    return d;
}

std::vector<Complex> central_difference4(std::span<const Complex> f, double h) {
    const std::size_t n = f.size();
    std::vector<Complex> d(n);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
    // one-sided fourth-order stencils at the two points next to each edge
    auto forward = [&](std::size_t i) {
        return (-25.0 * f[i] + 48.0 * f[i + 1] - 36.0 * f[i + 2] + 16.0 * f[i + 3] -
                3.0 * f[i + 4]) / (12.0 * h);
    };
    auto backward = [&](std::size_t i) {
        return (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] - 16.0 * f[i - 3] +
                3.0 * f[i - 4]) / (12.0 * h);
    };
    auto shifted_forward = [&](std::size_t i) {
        return (-3.0 * f[i - 1] - 10.0 * f[i] + 18.0 * f[i + 1] - 6.0 * f[i + 2] +
                f[i + 3]) / (12.0 * h);
    };
    auto shifted_backward = [&](std::size_t i) {
        return (3.0 * f[i + 1] + 10.0 * f[i] - 18.0 * f[i - 1] + 6.0 * f[i - 2] -
                f[i - 3]) / (12.0 * h);
    };
    d[0] = forward(0);
    d[1] = shifted_forward(1);
    d[n - 1] = backward(n - 1);
    d[n - 2] = shifted_backward(n - 2);
    return d;
}

void warn_if_complex_width(Complex a_sq, const char *what) {
    if (a_sq.imag() != 0.0) {
        std::ostringstream os;
        os << what << ": complex a^2 = (" << a_sq.real() << "," << a_sq.imag()
           << ") is outside the real-width branch";
        warn(os.str());
    }
}

void require_alpha(double alpha, const char *what) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        std::ostringstream os;
        os << what << ": alpha must be positive (got " << alpha << ")";
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
}

void require_um_fits(double alpha, const Grid &grid, const char *what) {
    const double need = 8.0 / std::sqrt(2.0 * alpha);
    if (grid.x_max() < need) {
        std::ostringstream os;
        os << what << ": grid too small for u_m (x_max = " << grid.x_max()
           << " < " << need << ")";
        throw Error(ErrorCode::InvalidGrid, os.str());
    }
}

void require_decaying_beta(double alpha, Complex a_sq) {
    if (a_sq == Complex(0.0))
        throw Error(ErrorCode::InvalidArgument, "a^2 must be nonzero");
    const Complex beta = width_beta(alpha, a_sq);
    if (beta.real() <= 1e-8 || std::abs(beta) < 1e-8) {
        std::ostringstream os;
        os << "singular width combination: beta = alpha - 1/(2a^2) = ("
           << beta.real() << "," << beta.imag() << ")";
        throw Error(ErrorCode::Singular, os.str());
    }
}

std::vector<Complex> sample(const Grid &grid, auto &&fn) {
    std::vector<Complex> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out[i] = fn(grid.point(i));
    return out;
}

Complex integrate_product(const Grid &grid, auto &&fn) {
    return quadrature(grid, sample(grid, fn));
}

} // namespace

Grid::Grid(std::size_t n, double x_max, std::size_t min_points)
    : n_(n), x_max_(x_max), spacing_(0.0) {
    const std::size_t floor = std::max<std::size_t>(min_points, 2);
    if (n < floor) {
        std::ostringstream os;
        os << "grid needs at least " << floor << " points (got " << n << ")";
        throw Error(ErrorCode::InvalidGrid, os.str());
    }
    if (!(x_max > 0.0) || !std::isfinite(x_max)) {
        std::ostringstream os;
        os << "grid half-width must be positive (got " << x_max << ")";
        throw Error(ErrorCode::InvalidGrid, os.str());
    }
    spacing_ = 2.0 * x_max / static_cast<double>(n - 1);
}

double Grid::point(std::size_t i) const {
    const double offset = 2.0 * static_cast<double>(i) - static_cast<double>(n_ - 1);
    return x_max_ * offset / static_cast<double>(n_ - 1);
}

std::vector<double> Grid::points() const {
    std::vector<double> xs(n_);
    for (std::size_t i = 0; i < n_; ++i)
        xs[i] = point(i);
    return xs;
}

Grid make_grid(std::size_t n, double x_max) { return Grid(n, x_max); }

GridWaveFunction::GridWaveFunction(Grid grid, std::vector<Complex> samples)
    : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size()) {
        std::ostringstream os;
        os << "wave function has " << samples_.size() << " samples for a grid of "
           << grid_.size() << " points";
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
}

double GridWaveFunction::max_abs() const {
    double m = 0.0;
    for (const auto &z : samples_)
        m = std::max(m, std::abs(z));
    return m;
}

double GridWaveFunction::edge_abs() const {
    return std::max(std::abs(samples_.front()), std::abs(samples_.back()));
}

Complex quadrature(const Grid &grid, std::span<const Complex> samples) {
    if (samples.size() != grid.size())
        throw Error(ErrorCode::DimensionMismatch,
                    "quadrature: sample count does not match grid");
    Complex acc = 0.5 * (samples.front() + samples.back());
    for (std::size_t i = 1; i + 1 < samples.size(); ++i)
        acc += samples[i];
    return acc * grid.spacing();
}

Complex quadrature(const GridWaveFunction &f) {
    return quadrature(f.grid(), f.samples());
}

double norm_squared(const GridWaveFunction &psi) {
    std::vector<Complex> density(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        density[i] = std::norm(psi[i]);
    return quadrature(psi.grid(), density).real();
}

GridWaveFunction derivative(const GridWaveFunction &psi, DerivativeMethod method,
                            double decay_tolerance) {
    const double h = psi.grid().spacing();
    if (method == DerivativeMethod::Spectral) {
        if (psi.edge_abs() > decay_tolerance * std::max(1.0, psi.max_abs())) {
            std::ostringstream os;
            os << "spectral derivative: boundary samples have not decayed (|psi| = "
               << psi.edge_abs() << " at the grid edge)";
            warn(os.str());
        }
        return GridWaveFunction(psi.grid(), spectral_derivative(psi.samples(), h));
    }
    return GridWaveFunction(psi.grid(), central_difference4(psi.samples(), h));
}

namespace {

void require_normalized(const GridWaveFunction &psi, const char *what) {
    const double dev = std::abs(norm_squared(psi) - 1.0);
    if (dev > kNormTolerance) {
        std::ostringstream os;
        os << what << ": wave function is not normalized (|∫|psi|^2 - 1| = " << dev
           << ")";
        throw Error(ErrorCode::NotNormalized, os.str());
    }
}

} // namespace

Moments position_moments(const GridWaveFunction &psi) {
    require_normalized(psi, "position moments");
    const Grid &g = psi.grid();
    std::vector<Complex> first(psi.size()), second(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double x = g.point(i);
        const double rho = std::norm(psi[i]);
        first[i] = x * rho;
        second[i] = x * x * rho;
    }
    const double mean = quadrature(g, first).real();
    const double var = std::max(0.0, quadrature(g, second).real() - mean * mean);
    return {mean, var};
}

Moments momentum_moments(const GridWaveFunction &psi, const PhysicalConstants &k,
                         DerivativeMethod method) {
    require_normalized(psi, "momentum moments");
    const GridWaveFunction d = derivative(psi, method);
    std::vector<Complex> first(psi.size()), second(psi.size());
    const Complex minus_i_hbar(0.0, -k.hbar);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        first[i] = std::conj(psi[i]) * minus_i_hbar * d[i];
        second[i] = std::norm(d[i]);
    }
    const Complex mean = quadrature(psi.grid(), first);
    // ⟨p²⟩ = ħ² ∫ |ψ'|² after integrating by parts
    const double p2 = k.hbar * k.hbar * quadrature(psi.grid(), second).real();
    return {mean, std::max(0.0, p2 - std::norm(mean))};
}

GridWaveFunction gaussian_min_packet(double delta_x, const Grid &grid) {
    if (!(delta_x > 0.0) || !std::isfinite(delta_x)) {
        std::ostringstream os;
        os << "Gaussian packet width must be positive (got " << delta_x << ")";
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
    if (grid.x_max() < 8.0 * delta_x) {
        std::ostringstream os;
        os << "grid too small for the packet: x_max = " << grid.x_max()
           << " < 8 * delta_x = " << 8.0 * delta_x;
        throw Error(ErrorCode::InvalidGrid, os.str());
    }
    const double var = delta_x * delta_x;
    const double amp = std::pow(2.0 * std::numbers::pi * var, -0.25);
    return GridWaveFunction(
        grid, sample(grid, [&](double x) { return Complex(amp * std::exp(-x * x / (4.0 * var))); }));
}

Complex epsilon_functional(const GridWaveFunction &psi) {
    const double peak = psi.max_abs();
    if (peak == 0.0 || psi.edge_abs() > 1e-6 * peak) {
        std::ostringstream os;
        os << "epsilon functional: boundary decay violated (edge |psi| = "
           << psi.edge_abs() << ", peak " << peak << ")";
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
    const GridWaveFunction d = derivative(psi, DerivativeMethod::Spectral,
                                          std::numeric_limits<double>::infinity());
    std::vector<Complex> integrand(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        integrand[i] = std::conj(psi[i]) * psi.grid().point(i) * d[i];
    return quadrature(psi.grid(), integrand);
}

MinPacketLambda lambda_min_packet(double delta_p_sq, const PhysicalConstants &k) {
    if (!(delta_p_sq > 0.0)) {
        std::ostringstream os;
        os << "momentum variance must be positive (got " << delta_p_sq << ")";
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
    const Complex lambda(0.0, k.hbar / (2.0 * delta_p_sq));
    return {lambda, Complex(0.0, -k.hbar) * lambda};
}

double um_normalization(double alpha) {
    return std::pow(32.0 * alpha * alpha * alpha / std::numbers::pi, 0.25);
}

GridWaveFunction make_um(double alpha, const Grid &grid) {
    require_alpha(alpha, "u_m");
    require_um_fits(alpha, grid, "u_m");
    const double n = um_normalization(alpha);
    return GridWaveFunction(
        grid, sample(grid, [&](double x) { return Complex(n * x * std::exp(-alpha * x * x)); }));
}

Complex width_beta(double alpha, Complex a_sq) { return alpha - 1.0 / (2.0 * a_sq); }

GridWaveFunction f_integral_closed_form(double alpha, Complex a_sq, const Grid &grid) {
    require_alpha(alpha, "f(x)");
    require_decaying_beta(alpha, a_sq);
    const Complex beta = width_beta(alpha, a_sq);
    const Complex coeff = -um_normalization(alpha) / (2.0 * beta);
    return GridWaveFunction(
        grid, sample(grid, [&](double x) { return coeff * std::exp(-beta * x * x); }));
}

GridWaveFunction f_integral(double alpha, Complex a_sq, const Grid &grid) {
    require_alpha(alpha, "f(x)");
    require_decaying_beta(alpha, a_sq);
    warn_if_complex_width(a_sq, "f(x)");
    const double n = um_normalization(alpha);
    const GridWaveFunction integrand(grid, sample(grid, [&](double y) {
        return n * y * std::exp(-alpha * y * y) * std::exp(y * y / (2.0 * a_sq));
    }));
    // Trapezoid with the leading Euler-Maclaurin end correction, which lifts
    // the cumulative rule from O(h²) to O(h⁴).
    const GridWaveFunction slope = derivative(integrand, DerivativeMethod::CentralDifference4);
    const double h = grid.spacing();
    const Complex anchor = f_integral_closed_form(alpha, a_sq, grid)[0];
    std::vector<Complex> f(grid.size());
    Complex running = 0.0;
    f[0] = anchor;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        running += 0.5 * h * (integrand[i - 1] + integrand[i]);
        f[i] = anchor + running - h * h / 12.0 * (slope[i] - slope[0]);
    }
    return GridWaveFunction(grid, std::move(f));
}

GridWaveFunction modified_packet_general(Complex c, Complex a1, Complex a2,
                                         Complex a_sq, double alpha,
                                         const Grid &grid) {
    const GridWaveFunction f = f_integral(alpha, a_sq, grid);
    const Complex coeff = a2 + a1 / a_sq;
    std::vector<Complex> psi(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.point(i);
        const Complex gauss = std::exp(-x * x / (2.0 * a_sq));
        psi[i] = c * gauss + coeff * gauss * f[i];
    }
    return GridWaveFunction(grid, std::move(psi));
}

Complex explicit_bracket(Complex c, Complex a1, double alpha, Complex a_sq) {
    const Complex r = 1.0 + 1.0 / (2.0 * a_sq * alpha);
    return a1 * um_normalization(alpha) - c * std::sqrt(8.0 / (r * r * r));
}

Complex bracket_zero_a1(Complex c, double alpha, Complex a_sq) {
    const Complex r = 1.0 + 1.0 / (2.0 * a_sq * alpha);
    return c * std::sqrt(8.0 / (r * r * r)) / um_normalization(alpha);
}

GridWaveFunction modified_packet_explicit(Complex c, Complex a1, double alpha,
                                          Complex a_sq, const Grid &grid) {
    require_alpha(alpha, "modified packet");
    require_decaying_beta(alpha, a_sq);
    warn_if_complex_width(a_sq, "modified packet");
    const Complex bracket = explicit_bracket(c, a1, alpha, a_sq);
    return GridWaveFunction(grid, sample(grid, [&](double x) {
        return c * std::exp(-x * x / (2.0 * a_sq)) + bracket * std::exp(-alpha * x * x);
    }));
}

Complex lambda_from_a_sq(Complex a_sq, const PhysicalConstants &k) {
    return a_sq / Complex(0.0, -k.hbar);
}

double residual_check(const GridWaveFunction &psi, Complex lambda,
                      Complex x_m_coeff, double alpha, const PhysicalConstants &k) {
    require_alpha(alpha, "residual check");
    const GridWaveFunction d = derivative(psi, DerivativeMethod::Spectral,
                                          std::numeric_limits<double>::infinity());
    const double n = um_normalization(alpha);
    const Complex minus_i_hbar_lambda = Complex(0.0, -k.hbar) * lambda;
    double sup = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double x = psi.grid().point(i);
        const double um = n * x * std::exp(-alpha * x * x);
        const Complex r = x * psi[i] + minus_i_hbar_lambda * d[i] - x_m_coeff * um;
        sup = std::max(sup, std::abs(r));
    }
    return sup;
}

double sup_norm_distance(const GridWaveFunction &a, const GridWaveFunction &b) {
    if (!(a.grid() == b.grid()))
        throw Error(ErrorCode::DimensionMismatch, "wave functions live on different grids");
    double sup = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        sup = std::max(sup, std::abs(a[i] - b[i]));
    return sup;
}

SelfConsistentSolution solve_self_consistent(Complex c_seed, double alpha,
                                             Complex a_sq, const Grid &grid,
                                             std::optional<Complex> a1) {
    require_alpha(alpha, "self-consistent solve");
    require_decaying_beta(alpha, a_sq);
    require_um_fits(alpha, grid, "self-consistent solve");
    if (c_seed == Complex(0.0))
        throw Error(ErrorCode::InvalidArgument, "C seed must be nonzero (it fixes C's phase)");

    const double n = um_normalization(alpha);
    const Complex r = 1.0 + 1.0 / (2.0 * a_sq * alpha);
    const Complex s = std::sqrt(8.0 / (r * r * r));
    auto um = [&](double x) { return n * x * std::exp(-alpha * x * x); };
    auto wide = [&](double x) { return std::exp(-x * x / (2.0 * a_sq)); };
    auto narrow = [&](double x) { return Complex(std::exp(-alpha * x * x)); };

    // ψ = C (wide - s narrow) + a₁ N narrow, so ∫ x u_m ψ = C (p - s q) + a₁ N q
    const Complex p = integrate_product(grid, [&](double x) { return x * um(x) * wide(x); });
    const Complex q = integrate_product(grid, [&](double x) { return x * um(x) * narrow(x); });
    AffineConstraint constraint{p - s * q, 1.0 - n * q};

    const Complex phase = c_seed / std::abs(c_seed);
    const bool family = std::abs(constraint.slope_residual) <= kAffineDegenerate;
    Complex c_value;
    Complex a1_value;

    auto normalize_ratio = [&](Complex ratio) {
        // ψ ∝ c_seed · [(wide - s narrow) + ratio N narrow]
        const GridWaveFunction unit = modified_packet_explicit(c_seed, ratio * c_seed,
                                                               alpha, a_sq, grid);
        const double scale = 1.0 / std::sqrt(norm_squared(unit));
        c_value = c_seed * scale;
        a1_value = ratio * c_seed * scale;
    };

    if (!family) {
        if (a1)
            warn("self-consistent solve: a1 is fixed by the affine constraint; "
                 "ignoring the requested branch");
        normalize_ratio(constraint.offset / constraint.slope_residual);
    } else if (std::abs(constraint.offset) > kAffineDegenerate) {
        std::ostringstream os;
        os << "no self-consistent solution on this branch: affine constraint "
           << "(1 - Nq) a1 = (p - s q) C has coefficients (" << constraint.slope_residual.real()
           << "," << constraint.slope_residual.imag() << ") and (" << constraint.offset.real()
           << "," << constraint.offset.imag() << ")";
        throw Error(ErrorCode::NoSolution, os.str());
    } else if (a1) {
        // |C| from ‖t·u + v‖² = 1 with u = phase (wide - s narrow), v = a₁ N narrow
        const GridWaveFunction u = modified_packet_explicit(phase, 0.0, alpha, a_sq, grid);
        const GridWaveFunction v(grid, sample(grid, [&](double x) { return *a1 * n * narrow(x); }));
        std::vector<Complex> uv(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            uv[i] = std::conj(u[i]) * v[i];
        const double uu = norm_squared(u);
        const double vv = norm_squared(v);
        const double cross = quadrature(grid, uv).real();
        const double disc = cross * cross - uu * (vv - 1.0);
        const double root = disc >= 0.0 ? (-cross + std::sqrt(disc)) / uu : -1.0;
        if (!(root >= 0.0)) {
            std::ostringstream os;
            os << "no self-consistent solution on this branch: normalization "
               << "quadratic t^2 " << uu << " + 2t " << cross << " + " << vv - 1.0
               << " = 0 has no nonnegative root for a1 = (" << a1->real() << ","
               << a1->imag() << ")";
            throw Error(ErrorCode::NoSolution, os.str());
        }
        c_value = phase * root;
        a1_value = *a1;
    } else {
        normalize_ratio(s / n);
    }

    GridWaveFunction psi = modified_packet_explicit(c_value, a1_value, alpha, a_sq, grid);
    const double norm_dev = std::abs(norm_squared(psi) - 1.0);
    if (norm_dev > kNormTolerance) {
        std::ostringstream os;
        os << "self-consistent solve: normalization failed (deviation " << norm_dev << ")";
        throw Error(ErrorCode::NoSolution, os.str());
    }

    // Matching the general form's coefficient -(a₂ + a₁/a²) N / (2β) to the
    // closed-form bracket gives a₂ without touching ψ'.
    const Complex beta = width_beta(alpha, a_sq);
    const Complex bracket = explicit_bracket(c_value, a1_value, alpha, a_sq);
    const Complex a2_value = -2.0 * beta * bracket / n - a1_value / a_sq;

    const GridWaveFunction dpsi = derivative(psi, DerivativeMethod::Spectral,
                                             std::numeric_limits<double>::infinity());
    std::vector<Complex> a1_integrand(grid.size()), a2_integrand(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.point(i);
        a1_integrand[i] = x * um(x) * psi[i];
        a2_integrand[i] = um(x) * dpsi[i];
    }
    const Complex a1_recomputed = quadrature(grid, a1_integrand);
    const Complex a2_recomputed = quadrature(grid, a2_integrand);

    SelfConsistentSolution out{
        {}, psi, constraint, family,
        std::abs(a1_recomputed - a1_value), std::abs(a2_recomputed - a2_value)};
    if (out.a1_closure > kClosureTolerance || out.a2_closure > kClosureTolerance) {
        std::ostringstream os;
        os << "self-consistent solve: closure failed (|da1| = " << out.a1_closure
           << ", |da2| = " << out.a2_closure << ")";
        throw Error(ErrorCode::NoSolution, os.str());
    }

    ModifiedPacketParams &pp = out.params;
    pp.c_norm = c_value;
    pp.a1 = a1_value;
    pp.a2 = a2_value;
    pp.alpha = alpha;
    pp.a_sq = a_sq;
    pp.delta_sq_A = position_moments(psi).variance - std::norm(a1_value);
    pp.abar_sq = 0.5 - a1_value * a2_value;
    pp.x_m = a1_value + a_sq * a2_value;
    return out;
}

WidthRelationReport width_relation_check(const ModifiedPacketParams &params,
                                         const GridWaveFunction &psi, double tolerance) {
    const Moments m = position_moments(psi);
    WidthRelationReport w;
    w.a_sq = params.a_sq;
    w.delta_sq_A = m.variance - std::norm(params.a1);
    w.abar_sq = 0.5 - params.a1 * params.a2;
    if (std::abs(w.abar_sq) < 1e-10)
        throw Error(ErrorCode::Degenerate, "degenerate width denominator");
    w.predicted_a_sq = w.delta_sq_A / w.abar_sq;
    w.relative_deviation = std::abs(w.a_sq - w.predicted_a_sq) / std::abs(w.a_sq);

    w.abar_sq_derived = -epsilon_functional(psi) + std::conj(params.a1) * params.a2;
    if (std::abs(w.abar_sq_derived) < 1e-10) {
        w.predicted_a_sq_derived = std::numeric_limits<double>::infinity();
        w.relative_deviation_derived = std::numeric_limits<double>::infinity();
    } else {
        w.predicted_a_sq_derived = w.delta_sq_A / w.abar_sq_derived;
        w.relative_deviation_derived =
            std::abs(w.a_sq - w.predicted_a_sq_derived) / std::abs(w.a_sq);
    }

    InequalityReport &r = w.report;
    r.label = InequalityLabel::WIDTH;
    r.lhs = w.a_sq.real();
    r.rhs = w.predicted_a_sq.real();
    r.residual = r.lhs - r.rhs;
    r.tolerance = tolerance;
    r.satisfied = w.relative_deviation <= tolerance;
    return w;
}

} // namespace gcs
