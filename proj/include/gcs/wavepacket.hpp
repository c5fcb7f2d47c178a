#pragma once

#include "gcs/hilbert.hpp"
#include "gcs/inequalities.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace gcs {

inline constexpr std::size_t kMinGridPoints = 64;

/// Uniform grid on [-x_max, x_max] including both end points. Points are
/// generated so that x[n-1-i] == -x[i] exactly.
class Grid {
  public:
    Grid(std::size_t n, double x_max, std::size_t min_points = kMinGridPoints);

    std::size_t size() const noexcept { return n_; }
    double x_max() const noexcept { return x_max_; }
    double spacing() const noexcept { return spacing_; }
    double point(std::size_t i) const;
    std::vector<double> points() const;

    friend bool operator==(const Grid &, const Grid &) = default;

  private:
    std::size_t n_;
    double x_max_;
    double spacing_;
};

Grid make_grid(std::size_t n, double x_max);

class GridWaveFunction {
  public:
    GridWaveFunction(Grid grid, std::vector<Complex> samples);

    const Grid &grid() const noexcept { return grid_; }
    std::span<const Complex> samples() const noexcept { return samples_; }
    const Complex &operator[](std::size_t i) const { return samples_[i]; }
    std::size_t size() const noexcept { return samples_.size(); }

    double max_abs() const;
    /// Largest |ψ| over the two end points.
    double edge_abs() const;

  private:
    Grid grid_;
    std::vector<Complex> samples_;
};

struct PhysicalConstants {
    double hbar = 1.0;
};

enum class DerivativeMethod { Spectral, CentralDifference4 };

/// Composite trapezoid over the whole grid.
Complex quadrature(const Grid &grid, std::span<const Complex> samples);
Complex quadrature(const GridWaveFunction &f);

/// ∫ |ψ|² dx
double norm_squared(const GridWaveFunction &psi);

/// dψ/dx on the same grid. The spectral method treats the samples as one
/// period of a periodic function and warns when the end points exceed
/// `decay_tolerance` · max(1, max|ψ|).
GridWaveFunction derivative(const GridWaveFunction &psi,
                            DerivativeMethod method = DerivativeMethod::Spectral,
                            double decay_tolerance = 1e-10);

Moments position_moments(const GridWaveFunction &psi);
Moments momentum_moments(const GridWaveFunction &psi,
                         const PhysicalConstants &k = {},
                         DerivativeMethod method = DerivativeMethod::Spectral);

/// (2πΔx²)^(-1/4) exp(-x²/4Δx²)
GridWaveFunction gaussian_min_packet(double delta_x, const Grid &grid);

/// ∫ ψ* x dψ/dx dx
Complex epsilon_functional(const GridWaveFunction &psi);

struct MinPacketLambda {
    Complex lambda;  // iħ / (2Δp²)
    Complex a_sq;    // -iħλ
};

MinPacketLambda lambda_min_packet(double delta_p_sq,
                                  const PhysicalConstants &k = {});

/// Normalization constant (32α³/π)^(1/4) of the odd basis function.
double um_normalization(double alpha);

/// (32α³/π)^(1/4) x exp(-αx²)
GridWaveFunction make_um(double alpha, const Grid &grid);

/// α - 1/(2a²); f(x) decays only when its real part is positive.
Complex width_beta(double alpha, Complex a_sq);

/// Cumulative integral of u_m(y) exp(y²/2a²) from -x_max, anchored to the
/// decaying antiderivative at the left end point.
GridWaveFunction f_integral(double alpha, Complex a_sq, const Grid &grid);

/// -N/(2β) exp(-βx²): the decaying antiderivative used to anchor f_integral.
GridWaveFunction f_integral_closed_form(double alpha, Complex a_sq,
                                        const Grid &grid);

/// C e^{-x²/2a²} + (a₂ + a₁/a²) e^{-x²/2a²} f(x), with f from `f_integral`.
GridWaveFunction modified_packet_general(Complex c, Complex a1, Complex a2,
                                         Complex a_sq, double alpha,
                                         const Grid &grid);

/// Coefficient of e^{-αx²} in the closed-form modified packet:
/// a₁N - C √(8 / (1 + 1/(2a²α))³).
Complex explicit_bracket(Complex c, Complex a1, double alpha, Complex a_sq);

/// C e^{-x²/2a²} + explicit_bracket(...) e^{-αx²}
GridWaveFunction modified_packet_explicit(Complex c, Complex a1, double alpha,
                                          Complex a_sq, const Grid &grid);

/// The a₁ that zeroes `explicit_bracket`, reducing the packet to a Gaussian.
Complex bracket_zero_a1(Complex c, double alpha, Complex a_sq);

/// λ such that a² = -iħλ.
Complex lambda_from_a_sq(Complex a_sq, const PhysicalConstants &k = {});

/// sup |x ψ - iħλ ψ' - x_m u_m| over the grid.
double residual_check(const GridWaveFunction &psi, Complex lambda,
                      Complex x_m_coeff, double alpha,
                      const PhysicalConstants &k = {});

struct ModifiedPacketParams {
    Complex c_norm;
    Complex a1;
    Complex a2;
    double alpha = 0.0;
    Complex a_sq;
    double delta_sq_A = 0.0;  // Δx² - |a₁|²
    Complex abar_sq;          // ½ - a₁a₂
    Complex x_m;              // a₁ + a² a₂  (= a₁ + λ b_m)
};

/// Substituting the closed-form packet into a₁ = ∫ x u_m ψ dx gives
/// slope_residual·a₁ = offset·C. When both coefficients vanish the
/// constraint is an identity and the packets form a one-parameter family
/// in a₁/C.
struct AffineConstraint {
    Complex offset;
    Complex slope_residual;
};

struct SelfConsistentSolution {
    ModifiedPacketParams params;
    GridWaveFunction psi;
    AffineConstraint constraint;
    bool one_parameter_family = false;
    double a1_closure = 0.0;  // |a₁(stored) - ∫ x u_m ψ|
    double a2_closure = 0.0;  // |a₂(stored) - ∫ u_m ψ'|
};

/// Builds a normalized modified packet and its self-consistent (a₁, a₂).
///
/// C's phase is taken from `c_seed`. When the affine constraint pins a₁/C
/// it is used directly. Otherwise (the generic case: the two defining
/// integrals are dependent) the branch is chosen by `a1`: when given it is
/// the post-normalization value of a₁ and |C| is solved from normalization;
/// when absent the pure-Gaussian branch a₁ = bracket_zero_a1 is used.
SelfConsistentSolution solve_self_consistent(Complex c_seed, double alpha,
                                             Complex a_sq, const Grid &grid,
                                             std::optional<Complex> a1 = {});

struct WidthRelationReport {
    InequalityReport report;  // lhs = re a², rhs = re(Δ²_A / ā²)
    Complex a_sq;
    double delta_sq_A = 0.0;
    Complex abar_sq;          // ½ - a₁a₂
    Complex predicted_a_sq;   // Δ²_A / ā²
    double relative_deviation = 0.0;
    /// Same relation with ā² = -ε + a₁* a₂, ε = ∫ψ* x ψ'. This is what the
    /// overlap of x ψ + a² ψ' = x_m u_m with x ψ gives; for ψ real up to a
    /// global phase ε = -½ and ā² = ½ + a₁* a₂.
    Complex abar_sq_derived;
    Complex predicted_a_sq_derived;
    double relative_deviation_derived = 0.0;
};

inline constexpr double kWidthRelationTolerance = 1e-4;

WidthRelationReport width_relation_check(
    const ModifiedPacketParams &params, const GridWaveFunction &psi,
    double tolerance = kWidthRelationTolerance);

/// sup |a - b| over the grid.
double sup_norm_distance(const GridWaveFunction &a, const GridWaveFunction &b);

} // namespace gcs
