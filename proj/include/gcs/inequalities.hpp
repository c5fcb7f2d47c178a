#pragma once

#include "gcs/hilbert.hpp"

#include <optional>
#include <string_view>

namespace gcs {

enum class InequalityLabel { CS, GCS, HR, HRS, GUR, QFORM, WIDTH };

std::string_view to_string(InequalityLabel label);
std::optional<InequalityLabel> parse_label(std::string_view text);

/// Outcome of comparing the two sides of an inequality. `satisfied` is
/// residual >= -tolerance, where the tolerance already includes the
/// magnitude scaling applied by `acceptance_tolerance`.
struct InequalityReport {
    InequalityLabel label = InequalityLabel::CS;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool satisfied = false;
    std::optional<Complex> lambda_used;
};

/// Base residual tolerance for unit-scale inputs.
inline constexpr double kDefaultResidualTolerance = 1e-10;

/// base · max(1, |lhs|)
double acceptance_tolerance(double lhs, double base);

InequalityReport make_report(InequalityLabel label, double lhs, double rhs,
                             double base_tolerance,
                             std::optional<Complex> lambda = std::nullopt);

/// Components of two vectors along the distinguished unit vector |m⟩.
struct ProjectionData {
    Complex a_m;
    Complex b_m;
};

ProjectionData project(const StateVector &a, const StateVector &b,
                       const StateVector &m);

/// v - ⟨m|v⟩ m
StateVector remove_component(const StateVector &v, const StateVector &m);

/// ‖a‖² + |λ|²‖b‖² + λ⟨a|b⟩ + λ*⟨b|a⟩, i.e. ‖a + λ b‖² in expanded form.
double quadratic_form(const StateVector &a, const StateVector &b, Complex lambda);

/// Minimizer of `quadratic_form` over λ: -⟨b|a⟩ / ‖b‖².
Complex optimal_lambda(const StateVector &a, const StateVector &b);

InequalityReport cs_check(const StateVector &a, const StateVector &b,
                          double tolerance = kDefaultResidualTolerance);

/// The quadratic form with the |m⟩ components of a and b removed from every
/// coefficient. Evaluating it at λ ∈ {±1, ±i} with a and b carrying
/// different declared units emits a dimensional-consistency warning.
double generalized_quadratic_form(const StateVector &a, const StateVector &b,
                                  const StateVector &m, Complex lambda);

Complex generalized_lambda(const StateVector &a, const StateVector &b,
                           const StateVector &m);

InequalityReport generalized_cs_check(const StateVector &a,
                                      const StateVector &b,
                                      const StateVector &m,
                                      double tolerance = kDefaultResidualTolerance);

/// ΔA²ΔB² >= ¼|⟨[A,B]⟩|²
InequalityReport hr_bound(const HermitianOperator &a, const HermitianOperator &b,
                          const StateVector &psi,
                          double tolerance = kDefaultResidualTolerance);

/// ΔA²ΔB² >= ¼|⟨[A,B]⟩|² + ¼|⟨{A,B}⟩ - 2⟨A⟩⟨B⟩|²
InequalityReport hrs_bound(const HermitianOperator &a, const HermitianOperator &b,
                           const StateVector &psi,
                           double tolerance = kDefaultResidualTolerance);

/// Generalized CS applied to the deviation vectors ψ_A, ψ_B with
/// a_m = ⟨m|ψ_A⟩, b_m = ⟨m|ψ_B⟩.
InequalityReport generalized_uncertainty_check(
    const HermitianOperator &a, const HermitianOperator &b,
    const StateVector &psi, const StateVector &m,
    double tolerance = kDefaultResidualTolerance);

} // namespace gcs
