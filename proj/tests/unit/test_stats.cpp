#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>
#include <vector>

#include <mapfunc/error.hpp>
#include <mapfunc/sample_set.hpp>
#include <mapfunc/stats.hpp>

using namespace mapfunc;

namespace {

//! sup |F_a - F_b| evaluated at every sample point, O(n m).
double brute_ks(const std::vector<double>& a, const std::vector<double>& b)
{
    auto cdf = [](const std::vector<double>& s, double x) {
        return static_cast<double>(std::count_if(s.begin(), s.end(), [x](double v) { return v <= x; })) / s.size();
    };
    double d = 0.0;
    for (auto const* s : {&a, &b})
        for (double x : *s)
            d = std::max(d, std::fabs(cdf(a, x) - cdf(b, x)));
    return d;
}

//! Pareto(alpha) on [1, inf) by inversion.
std::vector<double> pareto_sample(double alpha, std::size_t n, unsigned seed)
{
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v)
        x = std::pow(1.0 - u(g), -1.0 / alpha);
    return v;
}

}  // namespace

TEST_CASE("survival and quantiles")
{
    SampleSet s({3.0, 1.0, 2.0, 2.0, 5.0});
    CHECK(empirical_survival(s, 2.0) == doctest::Approx(0.4));
    CHECK(empirical_survival(s, 0.0) == 1.0);
    CHECK(empirical_survival(s, 5.0) == 0.0);
    CHECK(survival_sorted(s.sorted(), 2.5) == doctest::Approx(0.4));
    CHECK(median({4.0, 1.0, 3.0}) == 3.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK_THROWS_AS(empirical_survival(SampleSet{}, 1.0), Error);
}

TEST_CASE("Kolmogorov survival function")
{
    // Classical critical values: Q(1.3581) = 0.05, Q(1.6276) = 0.01.
    CHECK(kolmogorov_q(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(kolmogorov_q(1.6276) == doctest::Approx(0.01).epsilon(2e-3));
    CHECK(kolmogorov_q(0.0) == 1.0);
    CHECK(kolmogorov_q(1e-3) == 1.0);
    CHECK(kolmogorov_q(5.0) < 1e-20);
}

TEST_CASE("two-sample KS statistic against a brute-force oracle")
{
    std::mt19937_64 g(5);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<double> a(300), b(200);
    for (auto& v : a)
        v = n01(g);
    for (auto& v : b)
        v = std::round(4.0 * n01(g) + 0.5) / 4.0;  // ties
    for (std::size_t i = 0; i < 40; ++i)
        a[i] = b[i];
    CHECK(ks_two_sample(a, b).statistic == doctest::Approx(brute_ks(a, b)).epsilon(1e-14));
    CHECK(ks_two_sample(a, a).statistic == 0.0);
    CHECK(ks_two_sample(a, a).pValue == 1.0);
    std::vector<double> tiny(10, 1.0);
    CHECK_THROWS_AS(ks_two_sample(tiny, a), Error);
}

TEST_CASE("KS level is honest under the null")
{
    std::mt19937_64 g(7);
    std::exponential_distribution<double> e(1.0);
    int rejections = 0;
    constexpr int trials = 400;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> a(500), b(700);
        for (auto& v : a)
            v = e(g);
        for (auto& v : b)
            v = e(g);
        rejections += ks_two_sample(a, b).rejects(0.05);
    }
    // binomial(400, 0.05): mean 20, sd 4.4
    CHECK(rejections >= 5);
    CHECK(rejections <= 38);
}

TEST_CASE("Hill estimator and tail slope on exact Pareto draws")
{
    SampleSet const s(pareto_sample(2.5, 200000, 11));
    auto const h = hill_estimator(s, 2000);
    CHECK(std::fabs(h.value - 2.5) < 4.0 * h.stdError);
    auto const slope = loglog_tail_slope(s, SurvivalWindow{1e-2, 1e-3});
    CHECK(slope.value == doctest::Approx(-2.5).epsilon(0.04));
    CHECK_THROWS_AS(hill_estimator(s, 5), Error);
    CHECK_THROWS_AS(loglog_tail_slope(SampleSet(pareto_sample(2.5, 1000, 1))), Error);
}

TEST_CASE("line fit")
{
    std::vector<double> const x{0, 1, 2, 3}, y{1, 3, 5, 7};
    auto const f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.slopeStderr == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("bootstrap interval covers the mean and is deterministic")
{
    std::mt19937_64 g(13);
    std::normal_distribution<double> n(10.0, 2.0);
    std::vector<double> v(2000);
    for (auto& x : v)
        x = n(g);
    SampleSet const s(v);
    auto mean = [](std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0) / x.size(); };
    auto const ci = bootstrap_ci(mean, s, 400, 0.95, 3);
    double const m = mean(v);
    CHECK(ci.lo < m);
    CHECK(ci.hi > m);
    // width close to 2 * 1.96 * 2 / sqrt(2000)
    CHECK(ci.hi - ci.lo == doctest::Approx(2 * 1.96 * 2.0 / std::sqrt(2000.0)).epsilon(0.2));
    auto const again = bootstrap_ci(mean, s, 400, 0.95, 3, 2);
    CHECK(again.lo == ci.lo);
    CHECK(again.hi == ci.hi);
    CHECK_THROWS_AS(bootstrap_ci(mean, s, 10, 0.95, 3), Error);
}

TEST_CASE("sample set persistence")
{
    auto const dir = std::filesystem::temp_directory_path() / "mapfunc_test_stats";
    std::filesystem::create_directories(dir);
    SampleSet const s({1.5, -2.25, 1e-300, 3e200, 0.1}, "A_inf", "0123456789abcdef", 77);
    s.write_csv(dir / "s.csv");
    s.write_binary(dir / "s.bin");
    for (auto const& back : {SampleSet::read(dir / "s.csv"), SampleSet::read(dir / "s.bin")}) {
        CHECK(back.values() == s.values());
        CHECK(back.model_hash() == s.model_hash());
        CHECK(back.master_seed() == 77);
    }
    CHECK(std::vector<double>(s.sorted().begin(), s.sorted().end()) ==
          std::vector<double>{-2.25, 1e-300, 0.1, 1.5, 3e200});
    std::filesystem::remove_all(dir);
}
