#include "gcs/hilbert.hpp"

#include "gcs/error.hpp"

#include <cmath>
#include <sstream>

namespace gcs {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << a << " vs " << b << ")";
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Applies the normalization policy: accept, renormalize with a warning, or
// reject, depending on how far ‖ψ‖ is from one.
StateVector checked_state(const StateVector &psi, const HilbertTolerances &tol,
                          const char *what) {
    const double dev = std::abs(norm(psi) - 1.0);
    if (dev <= tol.normalized)
        return psi;
    if (dev <= tol.renormalize) {
        std::ostringstream os;
        os << what << ": state norm deviates from 1 by " << dev
           << "; renormalizing";
        warn(os.str());
        return psi.normalized();
    }
    std::ostringstream os;
    os << what << ": state is not normalized (|‖ψ‖ - 1| = " << dev << ")";
    throw Error(ErrorCode::NotNormalized, os.str());
}

} // namespace

StateVector::StateVector(std::vector<Complex> amplitudes,
                         std::optional<std::string> units)
    : amps_(std::move(amplitudes)), units_(std::move(units)) {
    if (amps_.empty())
        throw Error(ErrorCode::InvalidArgument, "state dimension must be >= 1");
    for (std::size_t i = 0; i < amps_.size(); ++i)
        if (!finite(amps_[i])) {
            std::ostringstream os;
            os << "state amplitude " << i << " is not finite";
            throw Error(ErrorCode::InvalidArgument, os.str());
        }
}

StateVector StateVector::zero(std::size_t dim) {
    return StateVector(std::vector<Complex>(dim));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim)
        throw Error(ErrorCode::InvalidArgument, "basis index out of range");
    std::vector<Complex> v(dim);
    v[index] = 1.0;
    return StateVector(std::move(v));
}

StateVector StateVector::with_units(std::optional<std::string> units) const {
    StateVector out = *this;
    out.units_ = std::move(units);
    return out;
}

bool StateVector::is_normalized(double tol) const {
    return std::abs(norm(*this) - 1.0) <= tol;
}

StateVector StateVector::normalized() const {
    const double n = norm(*this);
    if (n == 0.0)
        throw Error(ErrorCode::Degenerate, "cannot normalize the zero vector");
    return *this * Complex(1.0 / n);
}

StateVector StateVector::operator+(const StateVector &rhs) const {
    require_same_dim(dim(), rhs.dim(), "vector sum");
    std::vector<Complex> out(dim());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = amps_[i] + rhs.amps_[i];
    return StateVector(std::move(out), units_);
}

StateVector StateVector::operator-(const StateVector &rhs) const {
    require_same_dim(dim(), rhs.dim(), "vector difference");
    std::vector<Complex> out(dim());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = amps_[i] - rhs.amps_[i];
    return StateVector(std::move(out), units_);
}

StateVector StateVector::operator*(Complex s) const {
    std::vector<Complex> out(amps_);
    for (auto &z : out)
        z *= s;
    return StateVector(std::move(out), units_);
}

HermitianOperator::HermitianOperator(std::size_t dim,
                                     std::vector<Complex> entries,
                                     std::optional<std::string> units,
                                     double tol)
    : dim_(dim), entries_(std::move(entries)), units_(std::move(units)) {
    if (dim_ == 0)
        throw Error(ErrorCode::InvalidArgument, "operator dimension must be >= 1");
    if (entries_.size() != dim_ * dim_) {
        std::ostringstream os;
        os << "operator needs " << dim_ * dim_ << " entries, got "
           << entries_.size();
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j) {
            const Complex aij = (*this)(i, j);
            const Complex aji = (*this)(j, i);
            if (!finite(aij) || !finite(aji))
                throw Error(ErrorCode::InvalidArgument,
                            "operator entries must be finite");
            const double gap = std::abs(aij - std::conj(aji));
            if (gap > tol) {
                std::ostringstream os;
                os << "operator is not Hermitian: entries (" << i << "," << j
                   << ") and (" << j << "," << i << ") differ from conjugate "
                   << "symmetry by " << gap;
                throw Error(ErrorCode::NotHermitian, os.str());
            }
        }
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
    std::vector<Complex> e(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        e[i * dim + i] = 1.0;
    return HermitianOperator(dim, std::move(e));
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> values) {
    const std::size_t dim = values.size();
    std::vector<Complex> e(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        e[i * dim + i] = values[i];
    return HermitianOperator(dim, std::move(e));
}

StateVector HermitianOperator::apply(const StateVector &v) const {
    require_same_dim(dim_, v.dim(), "operator application");
    std::vector<Complex> out(dim_);
    const auto amps = v.amplitudes();
    for (std::size_t i = 0; i < dim_; ++i) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < dim_; ++j)
            acc += entries_[i * dim_ + j] * amps[j];
        out[i] = acc;
    }
    return StateVector(std::move(out), units_);
}

HermitianOperator HermitianOperator::shifted(double shift) const {
    std::vector<Complex> e(entries_);
    for (std::size_t i = 0; i < dim_; ++i)
        e[i * dim_ + i] += shift;
    return HermitianOperator(dim_, std::move(e), units_);
}

Complex inner_product(const StateVector &a, const StateVector &b) {
    require_same_dim(a.dim(), b.dim(), "inner product");
    Complex acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        acc += std::conj(a[i]) * b[i];
    return acc;
}

double norm_squared(const StateVector &a) {
    double acc = 0.0;
    for (const auto &z : a.amplitudes())
        acc += std::norm(z);
    return acc;
}

double norm(const StateVector &a) { return std::sqrt(norm_squared(a)); }

Complex expectation(const HermitianOperator &op, const StateVector &psi,
                    const HilbertTolerances &tol) {
    require_same_dim(op.dim(), psi.dim(), "expectation");
    const StateVector s = checked_state(psi, tol, "expectation");
    return inner_product(s, op.apply(s));
}

Moments moments(const HermitianOperator &op, const StateVector &psi,
                const HilbertTolerances &tol) {
    require_same_dim(op.dim(), psi.dim(), "variance");
    const StateVector s = checked_state(psi, tol, "variance");
    const StateVector as = op.apply(s);
    const Complex mean = inner_product(s, as);
    // ⟨A²⟩ = ‖A ψ‖² for Hermitian A
    double var = norm_squared(as) - std::norm(mean);
    if (var < 0.0) {
        if (var < -tol.variance_clamp * std::max(1.0, norm_squared(as))) {
            std::ostringstream os;
            os << "variance is negative beyond tolerance (" << var << ")";
            warn(os.str());
        }
        var = 0.0;
    }
    return {mean, var};
}

double variance(const HermitianOperator &op, const StateVector &psi,
                const HilbertTolerances &tol) {
    return moments(op, psi, tol).variance;
}

StateVector deviation_vector(const HermitianOperator &op,
                             const StateVector &psi,
                             const HilbertTolerances &tol) {
    require_same_dim(op.dim(), psi.dim(), "deviation vector");
    const StateVector s = checked_state(psi, tol, "deviation vector");
    const StateVector as = op.apply(s);
    const Complex mean = inner_product(s, as);
    return (as - s * mean).with_units(op.units());
}

Complex commutator_expectation(const HermitianOperator &a,
                               const HermitianOperator &b,
                               const StateVector &psi) {
    require_same_dim(a.dim(), b.dim(), "commutator");
    require_same_dim(a.dim(), psi.dim(), "commutator");
    // ⟨ψ|AB|ψ⟩ - ⟨ψ|BA|ψ⟩ = ⟨Aψ|Bψ⟩ - ⟨Bψ|Aψ⟩
    const StateVector ap = a.apply(psi);
    const StateVector bp = b.apply(psi);
    return inner_product(ap, bp) - inner_product(bp, ap);
}

Complex anticommutator_expectation(const HermitianOperator &a,
                                   const HermitianOperator &b,
                                   const StateVector &psi) {
    require_same_dim(a.dim(), b.dim(), "anticommutator");
    require_same_dim(a.dim(), psi.dim(), "anticommutator");
    const StateVector ap = a.apply(psi);
    const StateVector bp = b.apply(psi);
    return inner_product(ap, bp) + inner_product(bp, ap);
}

StateVector random_vector(std::size_t dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Complex> v(dim);
    for (auto &z : v) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        z = {re, im};
    }
    return StateVector(std::move(v));
}

StateVector random_state(std::size_t dim, std::mt19937_64 &rng) {
    return random_vector(dim, rng).normalized();
}

StateVector random_state_orthogonal_to(const StateVector &psi,
                                       std::mt19937_64 &rng) {
    if (psi.dim() < 2)
        throw Error(ErrorCode::InvalidArgument,
                    "no orthogonal complement in dimension 1");
    const StateVector unit = psi.normalized();
    for (;;) {
        const StateVector v = random_vector(psi.dim(), rng);
        const StateVector w = v - unit * inner_product(unit, v);
        if (norm(w) > 1e-6) {
            // one re-orthogonalization pass
            const StateVector u = w.normalized();
            return (u - unit * inner_product(unit, u)).normalized();
        }
    }
}

HermitianOperator random_hermitian(std::size_t dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Complex> g(dim * dim);
    for (auto &z : g) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        z = {re, im};
    }
    std::vector<Complex> h(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            h[i * dim + j] = 0.5 * (g[i * dim + j] + std::conj(g[j * dim + i]));
    return HermitianOperator(dim, std::move(h));
}

} // namespace gcs
