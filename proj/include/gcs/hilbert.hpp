#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace gcs {

using Complex = std::complex<double>;

/// Numerical thresholds shared by the Hilbert-space primitives.
struct HilbertTolerances {
    double hermitian = 1e-12;   // elementwise |A_ij - conj(A_ji)|
    double normalized = 1e-12;  // |‖ψ‖ - 1| accepted silently
    double renormalize = 1e-6;  // |‖ψ‖ - 1| repaired with a warning
    double variance_clamp = 1e-12;
};

/// A vector in a finite-dimensional Hilbert space, expressed in a fixed
/// orthonormal basis. Carries an optional units label that is propagated to
/// deviation vectors and consulted by the fixed-λ quadratic form.
class StateVector {
  public:
    StateVector() = default;
    explicit StateVector(std::vector<Complex> amplitudes,
                         std::optional<std::string> units = std::nullopt);

    static StateVector zero(std::size_t dim);
    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const noexcept { return amps_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amps_; }
    const Complex &operator[](std::size_t i) const { return amps_[i]; }

    const std::optional<std::string> &units() const noexcept { return units_; }
    StateVector with_units(std::optional<std::string> units) const;

    bool is_normalized(double tol = 1e-12) const;
    StateVector normalized() const;

    StateVector operator+(const StateVector &rhs) const;
    StateVector operator-(const StateVector &rhs) const;
    StateVector operator*(Complex s) const;

  private:
    std::vector<Complex> amps_;
    std::optional<std::string> units_;
};

inline StateVector operator*(Complex s, const StateVector &v) { return v * s; }

/// Square complex matrix with Hermitian symmetry checked at construction.
/// Entries are stored row-major.
class HermitianOperator {
  public:
    HermitianOperator(std::size_t dim, std::vector<Complex> entries,
                      std::optional<std::string> units = std::nullopt,
                      double tol = HilbertTolerances{}.hermitian);

    static HermitianOperator identity(std::size_t dim);
    static HermitianOperator diagonal(std::span<const double> values);

    std::size_t dim() const noexcept { return dim_; }
    const Complex &operator()(std::size_t row, std::size_t col) const {
        return entries_[row * dim_ + col];
    }
    std::span<const Complex> entries() const noexcept { return entries_; }
    const std::optional<std::string> &units() const noexcept { return units_; }

    StateVector apply(const StateVector &v) const;
    /// A + shift·I, still Hermitian for real shift.
    HermitianOperator shifted(double shift) const;

  private:
    std::size_t dim_;
    std::vector<Complex> entries_;
    std::optional<std::string> units_;
};

struct Moments {
    Complex mean;
    double variance = 0.0;
};

Complex inner_product(const StateVector &a, const StateVector &b);
double norm(const StateVector &a);
double norm_squared(const StateVector &a);

Complex expectation(const HermitianOperator &op, const StateVector &psi,
                    const HilbertTolerances &tol = {});
double variance(const HermitianOperator &op, const StateVector &psi,
                const HilbertTolerances &tol = {});
Moments moments(const HermitianOperator &op, const StateVector &psi,
                const HilbertTolerances &tol = {});

/// (A - ⟨A⟩)|ψ⟩. The result inherits the operator's units label.
StateVector deviation_vector(const HermitianOperator &op,
                             const StateVector &psi,
                             const HilbertTolerances &tol = {});

/// ⟨ψ|(AB - BA)|ψ⟩
Complex commutator_expectation(const HermitianOperator &a,
                               const HermitianOperator &b,
                               const StateVector &psi);
/// ⟨ψ|(AB + BA)|ψ⟩
Complex anticommutator_expectation(const HermitianOperator &a,
                                   const HermitianOperator &b,
                                   const StateVector &psi);

// Sampling helpers shared by tests and the CLI campaigns. Amplitudes are
// independent standard complex Gaussians; states are then normalized, which
// makes them uniform on the unit sphere.
StateVector random_vector(std::size_t dim, std::mt19937_64 &rng);
StateVector random_state(std::size_t dim, std::mt19937_64 &rng);
/// Unit vector drawn uniformly from the orthogonal complement of `psi`.
StateVector random_state_orthogonal_to(const StateVector &psi,
                                       std::mt19937_64 &rng);
HermitianOperator random_hermitian(std::size_t dim, std::mt19937_64 &rng);

} // namespace gcs
