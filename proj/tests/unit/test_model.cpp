#include <doctest.h>

#include <cmath>
#include <functional>

#include <mapfunc/error.hpp>
#include <mapfunc/map_model.hpp>

#include "test_models.hpp"

using namespace mapfunc;
using namespace mapfunc::testing;

namespace {

//! Composite Simpson rule on [a, b].
double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000)
{
    double const h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

//! exp(tM) by scaling and squaring of a long Taylor series.
Matrix2 expm_oracle(const Matrix2& m, double t)
{
    int squarings = 0;
    double norm = 0.0;
    for (auto const& row : m)
        for (double v : row)
            norm = std::max(norm, std::fabs(v * t));
    while (norm > 0.25) {
        norm /= 2.0;
        ++squarings;
    }
    double const s = t / std::ldexp(1.0, squarings);
    Matrix2 term{{{1.0, 0.0}, {0.0, 1.0}}};
    Matrix2 sum = term;
    for (int k = 1; k < 30; ++k) {
        Matrix2 next{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                next[i][j] = s / k * (term[i][0] * m[0][j] + term[i][1] * m[1][j]);
        term = next;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                sum[i][j] += term[i][j];
    }
    for (int q = 0; q < squarings; ++q) {
        Matrix2 sq{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                sq[i][j] = sum[i][0] * sum[0][j] + sum[i][1] * sum[1][j];
        sum = sq;
    }
    return sum;
}

}  // namespace

TEST_CASE("jump mgf closed forms")
{
    CHECK(*JumpLaw::exp_positive(3.0).mgf(1.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(*JumpLaw::gaussian(0.5, 2.0).mgf(0.3) == doctest::Approx(std::exp(0.15 + 0.18)).epsilon(1e-14));
    CHECK(*JumpLaw::laplace(2.0).mgf(1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(*JumpLaw::deterministic(-1.0).mgf(2.0) == doctest::Approx(std::exp(-2.0)));
    CHECK_FALSE(JumpLaw::exp_positive(3.0).mgf(3.0).has_value());
    CHECK_FALSE(JumpLaw::pareto(2.0, 1.0).mgf(0.1).has_value());
    CHECK(*JumpLaw::exp_positive(3.0).negated().mgf(-1.0) == doctest::Approx(1.5));
}

TEST_CASE("quadrature mgf for heavy laws matches an independent density integral")
{
    // Pareto(index 3, scale 1) has density 3 (1 + x)^-4 on x > 0.
    auto const pareto = JumpLaw::pareto(3.0, 1.0);
    for (double z : {-0.5, -2.0}) {
        // substitution x = u / (1 - u) maps (0, inf) to (0, 1)
        double const oracle = simpson(
            [z](double u) {
                if (u >= 1.0)
                    return 0.0;
                double const x = u / (1.0 - u);
                return std::exp(z * x) * 3.0 * std::pow(1.0 + x, -4.0) / ((1.0 - u) * (1.0 - u));
            },
            0.0, 1.0);
        CHECK(*pareto.mgf(z) == doctest::Approx(oracle).epsilon(1e-8));
    }
    auto const ln = JumpLaw::lognormal(0.2, 0.7);
    double const z = -0.8;
    double const oracle = simpson(
        [z](double y) {
            double const x = std::exp(y);
            return std::exp(z * x) * std::exp(-0.5 * std::pow((y - 0.2) / 0.7, 2)) / (0.7 * std::sqrt(2 * M_PI));
        },
        -12.0, 12.0);
    CHECK(*ln.mgf(z) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("integrated tails")
{
    auto const e = JumpLaw::exp_positive(1.0);
    for (double x : {0.0, 0.5, 3.0})
        CHECK(e.integrated_tail(x) == doctest::Approx(std::exp(-x)));
    auto const p = JumpLaw::pareto(3.0, 1.0);
    for (double x : {0.0, 1.0, 10.0})
        CHECK(p.integrated_tail(x) == doctest::Approx(0.5 * std::pow(1.0 + x, -2.0)));
    CHECK(std::isinf(JumpLaw::pareto(1.0, 1.0).integrated_tail(1.0)));
    auto const g = JumpLaw::gaussian(0.3, 1.2);
    double const oracle = simpson([&](double u) { return g.survival(u); }, 1.0, 20.0);
    CHECK(g.integrated_tail(1.0) == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("jump law validation")
{
    CHECK_THROWS_AS(JumpLaw::exp_positive(-1.0), Error);
    CHECK_THROWS_AS(JumpLaw::pareto(0.0, 1.0), Error);
    CHECK_THROWS_AS(JumpLaw::gaussian(0.0, -1.0), Error);
}

TEST_CASE("Laplace exponent of one regime")
{
    auto const l = levy(-0.5, 2.0, 0.7, JumpLaw::exp_positive(4.0));
    double const z = 1.3;
    double const oracle = -0.5 * z + 0.5 * 4.0 * z * z + 0.7 * (4.0 / (4.0 - z) - 1.0);
    CHECK(*l.laplace_exponent(z) == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(*l.laplace_exponent(0.0) == 0.0);
    CHECK_FALSE(l.laplace_exponent(4.0).has_value());
}

TEST_CASE("drift K")
{
    SUBCASE("pure drift example")
    {
        auto const m = pure_drift(-2.0, -1.0);
        auto const k = drift_K(m);
        REQUIRE(k.finite());
        CHECK(k.value == doctest::Approx(-1.5));
        CHECK(mean_xi_t2(m).value == doctest::Approx(-3.0));
    }
    SUBCASE("switch jumps and unequal rates")
    {
        auto const m = two_state(levy(1.0), levy(-3.0), JumpLaw::gaussian(0.5, 1.0), JumpLaw::exp_positive(2.0), 2.0,
                                 0.5);
        // q-/(q+ + q-) (a+ + q+ E U+) + q+/(q+ + q-) (a- + q- E U-)
        double const oracle = 0.5 / 2.5 * (1.0 + 2.0 * 0.5) + 2.0 / 2.5 * (-3.0 + 0.5 * 0.5);
        CHECK(drift_K(m).value == doctest::Approx(oracle));
        CHECK(mean_xi_t2(m).value == doctest::Approx(oracle * m.mean_t2()));
    }
    SUBCASE("degenerate")
    {
        auto const m = two_state(levy(0.0), levy(0.0), JumpLaw::deterministic(1.0), JumpLaw::deterministic(-1.0));
        CHECK(is_degenerate(m));
        CHECK(drift_K(m).value == 0.0);
        CHECK_FALSE(is_degenerate(brownian(0.0)));
    }
    SUBCASE("infinite and undefined")
    {
        auto const up = two_state(levy(-1.0), levy(-1.0), JumpLaw::pareto(0.8, 1.0));
        CHECK(drift_K(up).kind == Drift::Kind::PlusInfinity);
        auto const both = two_state(levy(-1.0), levy(-1.0), JumpLaw::pareto(0.8, 1.0), JumpLaw::pareto(0.5, 1.0).negated());
        CHECK(drift_K(both).kind == Drift::Kind::Undefined);
    }
}

TEST_CASE("eigenvalues against the quadratic formula")
{
    for (auto const& m : {Matrix2{{{-1.0, 0.5}, {2.0, -3.0}}}, Matrix2{{{-1e6, 1.0}, {1.0, -1e6}}}}) {
        long double const tr = static_cast<long double>(m[0][0]) + m[1][1];
        long double const det = static_cast<long double>(m[0][0]) * m[1][1] - static_cast<long double>(m[0][1]) * m[1][0];
        long double const disc = std::sqrt(tr * tr / 4 - det);
        auto const [l1, l2] = eigenvalues(m);
        CHECK(l1 == doctest::Approx(static_cast<double>(tr / 2 + disc)).epsilon(1e-12));
        CHECK(l2 == doctest::Approx(static_cast<double>(tr / 2 - disc)).epsilon(1e-12));
    }
    // Near-cancelling leading root: second-order perturbation a + bc / (a - d).
    Matrix2 const m{{{1e-9, 1.0}, {1e-12, -4.0}}};
    auto const [l1, l2] = eigenvalues(m);
    CHECK(l1 == doctest::Approx(1e-9 + 1e-12 / (4.0 + 1e-9)).epsilon(1e-12));
    CHECK(l2 == doctest::Approx(-4.0 - 1e-12 / (4.0 + 1e-9)).epsilon(1e-14));
}

TEST_CASE("leading eigenvalue properties")
{
    auto const m = two_state(levy(-1.0, 0.5), levy(0.3, 1.0, 1.0, JumpLaw::laplace(3.0)), JumpLaw::gaussian(-0.2, 0.4),
                             JumpLaw::exp_positive(5.0), 1.5, 0.7);
    CHECK(std::fabs(*leading_eigenvalue(m, 0.0)) <= 1e-15);
    double const h = 1e-5;
    double const deriv = (*leading_eigenvalue(m, h) - *leading_eigenvalue(m, -h)) / (2 * h);
    CHECK(deriv == doctest::Approx(drift_K(m).value).epsilon(1e-6));
    // convexity
    double const a = *leading_eigenvalue(m, 0.4), b = *leading_eigenvalue(m, 1.2), c = *leading_eigenvalue(m, 0.8);
    CHECK(c <= 0.5 * (a + b));
    CHECK_FALSE(leading_eigenvalue(m, 3.5).has_value());
}

TEST_CASE("semigroup against an independent matrix exponential")
{
    auto const m = two_state(levy(-1.0, 0.5), levy(0.3, 1.0), JumpLaw::gaussian(-0.2, 0.4), JumpLaw::exp_positive(5.0),
                             1.5, 0.7);
    for (double z : {0.0, 0.7, -1.1}) {
        auto const f = matrix_exponent(m, z);
        REQUIRE(f.has_value());
        for (double t : {0.1, 1.0, 5.0}) {
            auto const got = semigroup(m, t, z);
            auto const want = expm_oracle(f->entries, t);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    CHECK(got->at(i).at(j) == doctest::Approx(want[i][j]).epsilon(1e-10));
        }
    }
    // z = 0 gives the switching chain: rows sum to one
    auto const p = semigroup(m, 2.0, 0.0);
    CHECK((*p)[0][0] + (*p)[0][1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("killing guards")
{
    auto const m = two_state(levy(1.0), levy(1.0), {}, {}, 1.0, 1.0, 0.5);
    CHECK(is_degenerate(m));
    CHECK_THROWS_AS(matrix_exponent(m, 0.5), Error);
    try {
        matrix_exponent(m, 0.5);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::KillingUnsupported);
    }
}

TEST_CASE("model validation")
{
    ModelParams p;
    p.qPlus = 0.0;
    CHECK_THROWS_AS(MapModel{p}, Error);
    p.qPlus = 1.0;
    p.startValue = 0.0;
    CHECK_THROWS_AS(MapModel{p}, Error);
}
