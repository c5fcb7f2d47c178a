#include "gcs/error.hpp"
#include "gcs/inequalities.hpp"
#include "gcs/wavepacket.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace gcs;
using testing::state;

namespace {

// Position and spectral momentum matrices on a periodic grid of n points.
struct PhaseSpace {
    HermitianOperator x;
    HermitianOperator p;
    std::vector<double> points;
    double h;
};

PhaseSpace phase_space(std::size_t n, double x_max, double hbar) {
    const Grid grid(n, x_max);
    const double h = grid.spacing();
    const double period = static_cast<double>(n) * h;
    std::vector<Complex> xe(n * n), pe(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        xe[j * n + j] = grid.point(j);
        for (std::size_t k = 0; k < j; ++k) {
            const double diff = static_cast<double>(j - k);
            const double sign = ((j - k) % 2 == 0) ? 1.0 : -1.0;
            const double d =
                std::numbers::pi / period * sign / std::tan(std::numbers::pi * diff / n);
            pe[j * n + k] = Complex(0, -hbar) * d;
            pe[k * n + j] = Complex(0, hbar) * d;
        }
    }
    return {HermitianOperator(n, xe), HermitianOperator(n, pe), grid.points(), h};
}

StateVector sampled_gaussian(const PhaseSpace &ps, double delta_x) {
    std::vector<Complex> v(ps.points.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = std::sqrt(ps.h) * std::exp(-ps.points[i] * ps.points[i] / (4 * delta_x * delta_x));
    return StateVector(v).normalized();
}

} // namespace

TEST_SUITE("inequalities") {

TEST_CASE("quadratic form") {
    std::mt19937_64 rng(1);
    const auto a = random_vector(5, rng);
    const auto b = random_vector(5, rng);
    CHECK(quadratic_form(a, b, 0.0) == doctest::Approx(norm_squared(a)).epsilon(1e-15));
    CHECK(std::abs(quadratic_form(a, a, -1.0)) < 1e-12);

    for (int t = 0; t < 200; ++t) {
        const std::size_t dim = 1 + rng() % 16;
        const auto u = random_vector(dim, rng);
        const auto v = random_vector(dim, rng);
        std::normal_distribution<double> g(0.0, 2.0);
        const Complex lambda(g(rng), g(rng));
        CHECK(std::abs(quadratic_form(u, v, lambda) -
                       oracle::norm_of_sum(oracle::amps(u), oracle::amps(v), lambda)) <= 1e-10);
    }
    CHECK_THROWS_AS(quadratic_form(a, random_vector(4, rng), 1.0), gcs::Error);
}

TEST_CASE("optimal lambda") {
    CHECK(optimal_lambda(StateVector::basis(3, 0), StateVector::basis(3, 1)) == Complex(0.0));
    std::mt19937_64 rng(2);
    const auto a = random_vector(4, rng);
    CHECK(std::abs(optimal_lambda(a, a) + 1.0) < 1e-15);

    try {
        optimal_lambda(a, StateVector::zero(4));
        FAIL("expected degenerate error");
    } catch (const gcs::Error &e) {
        CHECK(e.code() == ErrorCode::Degenerate);
        CHECK(std::string(e.what()) == "null second vector");
    }

    // Brute-force grid over [-3, 3]² at step 0.01 never beats the minimizer.
    for (int t = 0; t < 4; ++t) {
        const std::size_t dim = 2 + rng() % 6;
        const auto u = random_vector(dim, rng);
        const auto v = random_vector(dim, rng);
        const auto ua = oracle::amps(u), va = oracle::amps(v);
        const double at_opt = quadratic_form(u, v, optimal_lambda(u, v));
        const double grid = oracle::grid_min(
            [&](oracle::C l) { return oracle::norm_of_sum(ua, va, l); }, -3.0, 3.0, 601);
        CHECK(at_opt <= grid + 1e-6);
    }
}

TEST_CASE("CS check") {
    std::mt19937_64 rng(3);
    const auto a = random_vector(6, rng);
    const auto eq = cs_check(a, a);
    CHECK(std::abs(eq.residual) <= 1e-10 * std::max(1.0, eq.lhs));
    CHECK(eq.satisfied);
    CHECK(eq.label == InequalityLabel::CS);

    const auto orth = cs_check(StateVector::basis(2, 0), StateVector::basis(2, 1));
    CHECK(orth.lhs == 1.0);
    CHECK(orth.rhs == 0.0);
    CHECK(orth.residual == orth.lhs - orth.rhs);

    for (int t = 0; t < 1000; ++t) {
        const std::size_t dim = 1 + rng() % 16;
        const auto r = cs_check(random_vector(dim, rng), random_vector(dim, rng));
        CHECK(r.residual >= -1e-10);
        CHECK(r.satisfied);
    }
}

TEST_CASE("property: CS residual scales as s²t²") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int t = 0; t < 200; ++t) {
        const std::size_t dim = 2 + rng() % 15;
        const auto a = random_vector(dim, rng);
        const auto b = random_vector(dim, rng);
        const double s = scale(rng), u = scale(rng);
        const double base = cs_check(a, b).residual;
        const double scaled = cs_check(a * Complex(s), b * Complex(u)).residual;
        CHECK(std::abs(scaled - s * s * u * u * base) <=
              1e-10 * std::abs(s * s * u * u * base));
    }
}

TEST_CASE("generalized quadratic form") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 300; ++t) {
        const std::size_t dim = 2 + rng() % 15;
        const auto a = random_vector(dim, rng);
        const auto b = random_vector(dim, rng);
        const auto m = random_state(dim, rng);
        for (Complex lambda : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)})
            CHECK(generalized_quadratic_form(a, b, m, lambda) >= -1e-10);
        CHECK(generalized_quadratic_form(a, b, m, 0.0) ==
              doctest::Approx(norm_squared(a) - std::norm(inner_product(m, a))).epsilon(1e-12));

        std::normal_distribution<double> g(0.0, 2.0);
        const Complex lambda(g(rng), g(rng));
        const auto ma = oracle::amps(m);
        const double projected = oracle::norm_of_sum(oracle::project_off(oracle::amps(a), ma),
                                                     oracle::project_off(oracle::amps(b), ma),
                                                     lambda);
        CHECK(std::abs(generalized_quadratic_form(a, b, m, lambda) - projected) <= 1e-10);
    }
    CHECK_THROWS_AS(generalized_quadratic_form(StateVector::basis(2, 0), StateVector::basis(2, 1),
                                               state({1.0, 1.0}), 1.0),
                    gcs::Error);
}

TEST_CASE("generalized lambda") {
    std::mt19937_64 rng(6);
    // m orthogonal to a and b: reduces to the ordinary minimizer
    const auto m = StateVector::basis(5, 4);
    auto pad = [&](std::size_t dim) {
        auto v = oracle::amps(random_vector(dim, rng));
        v[dim - 1] = 0.0;
        return StateVector(v);
    };
    const auto a = pad(5), b = pad(5);
    CHECK(std::abs(generalized_lambda(a, b, m) - optimal_lambda(a, b)) < 1e-15);

    CHECK(generalized_lambda(StateVector::basis(3, 0), StateVector::basis(3, 1),
                             StateVector::basis(3, 2)) == Complex(0.0));

    try {
        generalized_lambda(random_vector(3, rng), StateVector::basis(3, 1) * Complex(0, 2),
                           StateVector::basis(3, 1));
        FAIL("expected degenerate error");
    } catch (const gcs::Error &e) {
        CHECK(e.code() == ErrorCode::Degenerate);
        CHECK(std::string(e.what()) == "second vector spanned by m");
    }

    for (int t = 0; t < 3; ++t) {
        const std::size_t dim = 2 + rng() % 6;
        const auto u = random_vector(dim, rng);
        const auto v = random_vector(dim, rng);
        const auto w = random_state(dim, rng);
        const auto wa = oracle::amps(w);
        const auto up = oracle::project_off(oracle::amps(u), wa);
        const auto vp = oracle::project_off(oracle::amps(v), wa);
        const double at_opt = generalized_quadratic_form(u, v, w, generalized_lambda(u, v, w));
        const double grid = oracle::grid_min(
            [&](oracle::C l) { return oracle::norm_of_sum(up, vp, l); }, -3.0, 3.0, 601);
        CHECK(at_opt <= grid + 1e-6);
    }
}

TEST_CASE("generalized CS check") {
    std::mt19937_64 rng(7);
    // reduction: a_m = b_m = 0 reproduces the standard report exactly
    const auto m = StateVector::basis(4, 0);
    auto without_first = [&] {
        auto v = oracle::amps(random_vector(4, rng));
        v[0] = 0.0;
        return StateVector(v);
    };
    const auto a = without_first(), b = without_first();
    const auto g = generalized_cs_check(a, b, m);
    const auto s = cs_check(a, b);
    CHECK(g.lhs == s.lhs);
    CHECK(g.rhs == s.rhs);
    CHECK(g.residual == s.residual);
    CHECK(g.satisfied == s.satisfied);
    REQUIRE(g.lambda_used);
    CHECK(*g.lambda_used == *s.lambda_used);
    CHECK(g.label == InequalityLabel::GCS);

    // b = m: both sides vanish and the minimizer is undefined
    const auto bm = generalized_cs_check(random_vector(4, rng), m, m);
    CHECK(std::abs(bm.lhs) < 1e-15);
    CHECK(std::abs(bm.rhs) < 1e-15);
    CHECK(bm.satisfied);
    CHECK_FALSE(bm.lambda_used);

    // projection oracle
    for (int t = 0; t < 500; ++t) {
        const std::size_t dim = 2 + rng() % 15;
        const auto u = random_vector(dim, rng);
        const auto v = random_vector(dim, rng);
        const auto w = random_state(dim, rng);
        const auto r = generalized_cs_check(u, v, w);
        const auto wa = oracle::amps(w);
        const auto up = oracle::project_off(oracle::amps(u), wa);
        const auto vp = oracle::project_off(oracle::amps(v), wa);
        const double lhs = oracle::norm_sq(up) * oracle::norm_sq(vp);
        const double rhs = std::norm(oracle::dot(up, vp));
        CHECK(std::abs(r.lhs - lhs) <= 1e-12 * std::max(std::abs(lhs), 1e-300));
        CHECK(std::abs(r.rhs - rhs) <= 1e-12 * std::max(std::abs(rhs), 1e-300));
        CHECK(r.residual >= -1e-10);
    }

    CHECK_THROWS_AS(generalized_cs_check(a, b, state({1.0, 0.0, 0.0, 1.0})), gcs::Error);
}

TEST_CASE("HR bound") {
    const double diag_a[] = {1.0, -2.0, 0.5};
    const double diag_b[] = {3.0, 1.0, -1.0};
    std::mt19937_64 rng(8);
    const auto commuting = hr_bound(HermitianOperator::diagonal(diag_a),
                                    HermitianOperator::diagonal(diag_b), random_state(3, rng));
    CHECK(std::abs(commuting.rhs) < 1e-15);
    CHECK(commuting.satisfied);

    const auto pauli = hr_bound(testing::pauli_x(), testing::pauli_y(), StateVector::basis(2, 0));
    CHECK(pauli.lhs == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pauli.rhs == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(pauli.residual) < 1e-15);
    CHECK(pauli.label == InequalityLabel::HR);
}

TEST_CASE("HR bound on discretized position and momentum reaches hbar²/4") {
    for (double hbar : {1.0, 2.0}) {
        const PhaseSpace ps = phase_space(128, 10.0, hbar);
        const auto psi = sampled_gaussian(ps, 1.0);
        const auto r = hr_bound(ps.x, ps.p, psi);
        CHECK(r.rhs == doctest::Approx(hbar * hbar / 4.0).epsilon(1e-8));
        // the Gaussian saturates the bound
        CHECK(r.lhs == doctest::Approx(hbar * hbar / 4.0).epsilon(1e-8));
        CHECK(r.satisfied);
    }
}

TEST_CASE("HRS bound") {
    std::mt19937_64 rng(9);
    const auto pauli_hr = hr_bound(testing::pauli_x(), testing::pauli_y(), StateVector::basis(2, 0));
    const auto pauli_hrs = hrs_bound(testing::pauli_x(), testing::pauli_y(), StateVector::basis(2, 0));
    CHECK(pauli_hrs.rhs == doctest::Approx(pauli_hr.rhs).epsilon(1e-15));
    CHECK(pauli_hrs.lhs == pauli_hr.lhs);

    for (int t = 0; t < 1000; ++t) {
        const std::size_t dim = 1 + rng() % 16;
        const auto a = random_hermitian(dim, rng);
        const auto b = random_hermitian(dim, rng);
        const auto psi = random_state(dim, rng);
        const auto hr = hr_bound(a, b, psi);
        const auto hrs = hrs_bound(a, b, psi);
        CHECK(hrs.rhs - hr.rhs >= 0.0);
        CHECK(hrs.residual >= -1e-10 * std::max(1.0, hrs.lhs));
    }

    // A = B: rhs = (ΔA²)², saturating the bound; ΔA² from explicit A²
    for (int t = 0; t < 50; ++t) {
        const std::size_t dim = 2 + rng() % 4;
        const auto a = random_hermitian(dim, rng);
        const auto psi = random_state(dim, rng);
        const double var = oracle::variance(oracle::entries(a), oracle::amps(psi));
        const auto r = hrs_bound(a, a, psi);
        CHECK(std::abs(r.rhs - var * var) <= 1e-10 * std::max(1.0, var * var));
        CHECK(std::abs(r.residual) <= 1e-10 * std::max(1.0, r.lhs));
    }
}

TEST_CASE("generalized uncertainty relation") {
    std::mt19937_64 rng(10);
    // m = ψ: deviation vectors are orthogonal to ψ so a_m = b_m = 0
    for (int t = 0; t < 50; ++t) {
        const std::size_t dim = 2 + rng() % 15;
        const auto a = random_hermitian(dim, rng);
        const auto b = random_hermitian(dim, rng);
        const auto psi = random_state(dim, rng);
        const auto pa = deviation_vector(a, psi);
        const auto pb = deviation_vector(b, psi);
        CHECK(std::abs(inner_product(psi, pa)) < 1e-12);
        CHECK(std::abs(inner_product(psi, pb)) < 1e-12);
        const auto r = generalized_uncertainty_check(a, b, psi, psi);
        const double lhs_dev = norm_squared(pa) * norm_squared(pb);
        const double rhs_dev = std::norm(inner_product(pa, pb));
        CHECK(std::abs(r.lhs - lhs_dev) <= 1e-12 * std::max(1.0, lhs_dev));
        CHECK(std::abs(r.rhs - rhs_dev) <= 1e-12 * std::max(1.0, rhs_dev));
        CHECK(r.label == InequalityLabel::GUR);
    }

    // m orthogonal to both deviation vectors (possible once dim ≥ 4)
    for (int t = 0; t < 50; ++t) {
        const std::size_t dim = 4 + rng() % 8;
        const auto a = random_hermitian(dim, rng);
        const auto b = random_hermitian(dim, rng);
        const auto psi = random_state(dim, rng);
        const auto pa = deviation_vector(a, psi);
        const auto pb = deviation_vector(b, psi);
        auto m = random_vector(dim, rng);
        for (const auto &q : {psi, pa.normalized()}) {
            m = remove_component(m, q);
        }
        const auto pb_perp = remove_component(pb, pa.normalized()).normalized();
        m = remove_component(m, pb_perp).normalized();
        const auto r = generalized_uncertainty_check(a, b, psi, m);
        const double lhs_dev = norm_squared(pa) * norm_squared(pb);
        const double rhs_dev = std::norm(inner_product(pa, pb));
        CHECK(std::abs(r.lhs - lhs_dev) <= 1e-10 * std::max(1.0, lhs_dev));
        CHECK(std::abs(r.rhs - rhs_dev) <= 1e-10 * std::max(1.0, rhs_dev));
    }

    for (int t = 0; t < 1000; ++t) {
        const std::size_t dim = 2 + rng() % 15;
        const auto a = random_hermitian(dim, rng);
        const auto b = random_hermitian(dim, rng);
        const auto psi = random_state(dim, rng);
        const auto m = random_state_orthogonal_to(psi, rng);
        const auto r = generalized_uncertainty_check(a, b, psi, m);
        CHECK(r.residual >= -1e-10 * std::max(1.0, r.lhs));
    }
}

TEST_CASE("property: variance product >= HRS bound >= HR bound") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 500; ++t) {
        const std::size_t dim = 1 + rng() % 16;
        const auto a = random_hermitian(dim, rng);
        const auto b = random_hermitian(dim, rng);
        const auto psi = random_state(dim, rng);
        const auto hr = hr_bound(a, b, psi);
        const auto hrs = hrs_bound(a, b, psi);
        const double tol = 1e-10 * std::max(1.0, hr.lhs);
        CHECK(hrs.lhs - hrs.rhs >= -tol);
        CHECK(hrs.rhs - hr.rhs >= -tol);
    }
}

TEST_CASE("fixed-lambda quadratic form warns about mixed units") {
    testing::WarningCapture capture;
    const StateVector a(std::vector<Complex>{1.0, 0.0}, std::string("m"));
    const StateVector b(std::vector<Complex>{0.0, 1.0}, std::string("kg m/s"));
    const auto m = StateVector::basis(2, 0);
    generalized_quadratic_form(a, b, m, Complex(0, 1));
    CHECK(capture.contains("dimensionally inconsistent"));

    capture.messages.clear();
    generalized_quadratic_form(a, b, m, Complex(0.5, 0));  // not a fixed case
    quadratic_form(a, a, 1.0);                            // same units
    generalized_quadratic_form(a.with_units(std::nullopt), b, m, 1.0);  // unlabeled
    CHECK(capture.messages.empty());

    quadratic_form(a, b, -1.0);
    CHECK(capture.contains("dimensionally inconsistent"));
}

TEST_CASE("report tolerance scales with the magnitude of lhs") {
    const auto small = make_report(InequalityLabel::CS, 0.5, 0.5 + 5e-11, 1e-10);
    CHECK(small.satisfied);
    CHECK(small.tolerance == 1e-10);
    const auto large = make_report(InequalityLabel::CS, 1e6, 1e6 + 1e-5, 1e-10);
    CHECK(large.tolerance == doctest::Approx(1e-4));
    CHECK(large.satisfied);
    const auto violated = make_report(InequalityLabel::CS, 1.0, 1.0 + 1e-9, 1e-10);
    CHECK_FALSE(violated.satisfied);
}

TEST_CASE("labels round-trip through text") {
    for (auto l : {InequalityLabel::CS, InequalityLabel::GCS, InequalityLabel::HR,
                   InequalityLabel::HRS, InequalityLabel::GUR, InequalityLabel::QFORM,
                   InequalityLabel::WIDTH})
        CHECK(parse_label(to_string(l)) == l);
    CHECK(parse_label("gcs") == InequalityLabel::GCS);
    CHECK_FALSE(parse_label("nope"));
}

} // TEST_SUITE
