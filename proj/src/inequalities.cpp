#include "gcs/inequalities.hpp"

#include "gcs/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

namespace gcs {

namespace {

constexpr double kNullVector = 1e-12;
constexpr double kUnitTolerance = 1e-10;

void require_same_dim(const StateVector &a, const StateVector &b,
                      const char *what) {
    if (a.dim() != b.dim()) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << a.dim() << " vs " << b.dim()
           << ")";
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
}

void require_unit(const StateVector &m, const char *what) {
    const double dev = std::abs(norm(m) - 1.0);
    if (dev > kUnitTolerance) {
        std::ostringstream os;
        os << what << ": distinguished vector m is not normalized (|‖m‖ - 1| = "
           << dev << ")";
        throw Error(ErrorCode::NotNormalized, os.str());
    }
}

void warn_if_dimensionally_inconsistent(const StateVector &a,
                                        const StateVector &b, Complex lambda) {
    static constexpr std::array<Complex, 4> fixed = {
        Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)};
    if (std::find(fixed.begin(), fixed.end(), lambda) == fixed.end())
        return;
    if (!a.units() || !b.units() || *a.units() == *b.units())
        return;
    std::ostringstream os;
    os << "quadratic form at fixed lambda = (" << lambda.real() << ","
       << lambda.imag() << ") adds quantities with units '" << *a.units()
       << "' and '" << *b.units()
       << "'; the result is dimensionally inconsistent outside natural units";
    warn(os.str());
}

// Coefficients of the form ‖A‖² + |λ|²‖B‖² + λ c + λ* c*, where c = ⟨A|B⟩
// possibly with |m⟩ components removed.
double expand(double aa, double bb, Complex ab, Complex lambda) {
    return aa + std::norm(lambda) * bb + 2.0 * (lambda * ab).real();
}

} // namespace

std::string_view to_string(InequalityLabel label) {
    switch (label) {
    case InequalityLabel::CS: return "CS";
    case InequalityLabel::GCS: return "GCS";
    case InequalityLabel::HR: return "HR";
    case InequalityLabel::HRS: return "HRS";
    case InequalityLabel::GUR: return "GUR";
    case InequalityLabel::QFORM: return "QFORM";
    case InequalityLabel::WIDTH: return "WIDTH";
    }
    return "?";
}

std::optional<InequalityLabel> parse_label(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    for (auto l : {InequalityLabel::CS, InequalityLabel::GCS, InequalityLabel::HR,
                   InequalityLabel::HRS, InequalityLabel::GUR,
                   InequalityLabel::QFORM, InequalityLabel::WIDTH})
        if (to_string(l) == upper)
            return l;
    return std::nullopt;
}

double acceptance_tolerance(double lhs, double base) {
    return base * std::max(1.0, std::abs(lhs));
}

InequalityReport make_report(InequalityLabel label, double lhs, double rhs,
                             double base_tolerance,
                             std::optional<Complex> lambda) {
    InequalityReport r;
    r.label = label;
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = lhs - rhs;
    r.tolerance = acceptance_tolerance(lhs, base_tolerance);
    r.satisfied = r.residual >= -r.tolerance;
    r.lambda_used = lambda;
    return r;
}

ProjectionData project(const StateVector &a, const StateVector &b,
                       const StateVector &m) {
    require_same_dim(a, m, "projection");
    require_same_dim(b, m, "projection");
    return {inner_product(m, a), inner_product(m, b)};
}

StateVector remove_component(const StateVector &v, const StateVector &m) {
    return v - m * inner_product(m, v);
}

double quadratic_form(const StateVector &a, const StateVector &b,
                      Complex lambda) {
    require_same_dim(a, b, "quadratic form");
    warn_if_dimensionally_inconsistent(a, b, lambda);
    return expand(norm_squared(a), norm_squared(b), inner_product(a, b), lambda);
}

Complex optimal_lambda(const StateVector &a, const StateVector &b) {
    require_same_dim(a, b, "optimal lambda");
    const double bb = norm_squared(b);
    if (bb <= kNullVector * kNullVector)
        throw Error(ErrorCode::Degenerate, "null second vector");
    return -inner_product(b, a) / bb;
}

InequalityReport cs_check(const StateVector &a, const StateVector &b,
                          double tolerance) {
    require_same_dim(a, b, "CS check");
    const double aa = norm_squared(a);
    const double bb = norm_squared(b);
    const Complex ab = inner_product(a, b);
    std::optional<Complex> lambda;
    if (bb > kNullVector * kNullVector)
        lambda = -std::conj(ab) / bb;
    return make_report(InequalityLabel::CS, aa * bb, std::norm(ab), tolerance,
                       lambda);
}

double generalized_quadratic_form(const StateVector &a, const StateVector &b,
                                  const StateVector &m, Complex lambda) {
    require_same_dim(a, b, "generalized quadratic form");
    require_unit(m, "generalized quadratic form");
    warn_if_dimensionally_inconsistent(a, b, lambda);
    const auto [a_m, b_m] = project(a, b, m);
    return expand(norm_squared(a) - std::norm(a_m),
                  norm_squared(b) - std::norm(b_m),
                  inner_product(a, b) - b_m * std::conj(a_m), lambda);
}

Complex generalized_lambda(const StateVector &a, const StateVector &b,
                           const StateVector &m) {
    require_same_dim(a, b, "generalized lambda");
    require_unit(m, "generalized lambda");
    const auto [a_m, b_m] = project(a, b, m);
    const double denom = norm_squared(b) - std::norm(b_m);
    if (denom <= kNullVector)
        throw Error(ErrorCode::Degenerate, "second vector spanned by m");
    return -(inner_product(b, a) - std::conj(b_m) * a_m) / denom;
}

InequalityReport generalized_cs_check(const StateVector &a,
                                      const StateVector &b,
                                      const StateVector &m, double tolerance) {
    require_same_dim(a, b, "generalized CS check");
    require_unit(m, "generalized CS check");
    const auto [a_m, b_m] = project(a, b, m);
    const double aa = norm_squared(a) - std::norm(a_m);
    const double bb = norm_squared(b) - std::norm(b_m);
    const Complex ab = inner_product(a, b) - b_m * std::conj(a_m);
    std::optional<Complex> lambda;
    if (bb > kNullVector)
        lambda = -std::conj(ab) / bb;
    return make_report(InequalityLabel::GCS, aa * bb, std::norm(ab), tolerance,
                       lambda);
}

namespace {

struct UncertaintyTerms {
    double var_a;
    double var_b;
    Complex mean_a;
    Complex mean_b;
    Complex commutator;
    Complex anticommutator;
};

UncertaintyTerms uncertainty_terms(const HermitianOperator &a,
                                   const HermitianOperator &b,
                                   const StateVector &psi) {
    const Moments ma = moments(a, psi);
    const Moments mb = moments(b, psi);
    const StateVector s = psi.is_normalized() ? psi : psi.normalized();
    return {ma.variance,
            mb.variance,
            ma.mean,
            mb.mean,
            commutator_expectation(a, b, s),
            anticommutator_expectation(a, b, s)};
}

void cross_check_hr(const HermitianOperator &a, const HermitianOperator &b,
                    const StateVector &psi, double rhs, double scale) {
    const Complex overlap =
        inner_product(deviation_vector(a, psi), deviation_vector(b, psi));
    const double im_sq = overlap.imag() * overlap.imag();
    const double gap = std::abs(im_sq - rhs);
    if (gap > kDefaultResidualTolerance * std::max(1.0, scale)) {
        std::ostringstream os;
        os << "HR bound: |Im<psi_A|psi_B>|^2 and |<[A,B]>|^2/4 differ by "
           << gap;
        warn(os.str());
    }
}

} // namespace

InequalityReport hr_bound(const HermitianOperator &a, const HermitianOperator &b,
                          const StateVector &psi, double tolerance) {
    const UncertaintyTerms t = uncertainty_terms(a, b, psi);
    const double lhs = t.var_a * t.var_b;
    const double rhs = 0.25 * std::norm(t.commutator);
    cross_check_hr(a, b, psi, rhs, lhs);
    return make_report(InequalityLabel::HR, lhs, rhs, tolerance);
}

InequalityReport hrs_bound(const HermitianOperator &a, const HermitianOperator &b,
                           const StateVector &psi, double tolerance) {
    const UncertaintyTerms t = uncertainty_terms(a, b, psi);
    const double lhs = t.var_a * t.var_b;
    const double rhs =
        0.25 * std::norm(t.commutator) +
        0.25 * std::norm(t.anticommutator - 2.0 * t.mean_a * t.mean_b);
    return make_report(InequalityLabel::HRS, lhs, rhs, tolerance);
}

InequalityReport generalized_uncertainty_check(const HermitianOperator &a,
                                               const HermitianOperator &b,
                                               const StateVector &psi,
                                               const StateVector &m,
                                               double tolerance) {
    const StateVector psi_a = deviation_vector(a, psi);
    const StateVector psi_b = deviation_vector(b, psi);
    InequalityReport r = generalized_cs_check(psi_a, psi_b, m, tolerance);
    r.label = InequalityLabel::GUR;
    return r;
}

} // namespace gcs
