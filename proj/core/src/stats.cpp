#include "mapfunc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "mapfunc/error.hpp"
#include "mapfunc/parallel.hpp"
#include "mapfunc/random.hpp"

namespace mapfunc {

int resolve_threads(int requested) noexcept
{
    if (requested > 0)
        return requested;
    if (char const* env = std::getenv("MAPFUNC_THREADS")) {
        int const v = std::atoi(env);
        if (v > 0)
            return v;
    }
    return 1;
}

void SurvivalWindow::validate() const
{
    require(deep > 0.0 && shallow < 1.0 && deep < shallow, ErrorCode::InvalidArgument,
            "survival window must satisfy 0 < deep < shallow < 1");
}

double survival_sorted(std::span<const double> sorted, double x) noexcept
{
    if (sorted.empty())
        return 0.0;
    auto const it = std::upper_bound(sorted.begin(), sorted.end(), x);
    return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

double empirical_survival(const SampleSet& s, double x)
{
    require(!s.empty(), ErrorCode::EmptySample, "empirical_survival on an empty sample");
    return survival_sorted(s.sorted(), x);
}

double survival_quantile(std::span<const double> sorted, double p) noexcept
{
    auto const n = static_cast<double>(sorted.size());
    auto k = static_cast<std::ptrdiff_t>(std::llround(p * n));
    k = std::clamp<std::ptrdiff_t>(k, 1, static_cast<std::ptrdiff_t>(sorted.size()));
    // k values lie at or above the returned order statistic
    return sorted[sorted.size() - static_cast<std::size_t>(k)];
}

LineFit fit_line(std::span<const double> x, std::span<const double> y)
{
    require(x.size() == y.size() && x.size() >= 2, ErrorCode::InvalidArgument, "fit_line needs two or more points");
    auto const n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0.0, ErrorCode::InvalidArgument, "fit_line needs distinct abscissae");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (x.size() > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double const r = y[i] - fit.intercept - fit.slope * x[i];
            ssr += r * r;
        }
        fit.slopeStderr = std::sqrt(ssr / (n - 2.0) / sxx);
    }
    return fit;
}

Estimate loglog_tail_slope(const SampleSet& s, SurvivalWindow window, int levels)
{
    window.validate();
    require(!s.empty(), ErrorCode::EmptySample, "loglog_tail_slope on an empty sample");
    require(levels >= 3, ErrorCode::InvalidArgument, "loglog_tail_slope needs at least 3 levels");
    auto const sorted = s.sorted();
    double const n = static_cast<double>(sorted.size());
    if (window.deep * n < 100.0)
        fail(ErrorCode::TooFewExceedances, "deepest window level has " + std::to_string(window.deep * n)
                                               + " expected exceedances; need 100");
    std::vector<double> lx, ly;
    double const l0 = std::log(window.shallow), l1 = std::log(window.deep);
    for (int k = 0; k < levels; ++k) {
        double const p = std::exp(l0 + (l1 - l0) * k / (levels - 1));
        double const t = survival_quantile(sorted, p);
        double const sv = survival_sorted(sorted, t);
        require(t > 0.0 && sv > 0.0, ErrorCode::InvalidArgument, "tail window must lie in the positive range");
        if (!lx.empty() && std::log(t) == lx.back())
            continue;
        lx.push_back(std::log(t));
        ly.push_back(std::log(sv));
    }
    auto const fit = fit_line(lx, ly);
    return {fit.slope, fit.slopeStderr};
}

Estimate hill_estimator(const SampleSet& s, std::size_t k)
{
    require(!s.empty(), ErrorCode::EmptySample, "hill_estimator on an empty sample");
    if (k < 10 || 2 * k >= s.count())
        fail(ErrorCode::KOutOfRange, "k must satisfy 10 <= k < n/2");
    auto const sorted = s.sorted();
    std::size_t const n = sorted.size();
    double const threshold = sorted[n - k - 1];
    require(threshold > 0.0, ErrorCode::InvalidArgument, "Hill estimator needs positive top order statistics");
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        sum += std::log(sorted[n - 1 - i] / threshold);
    double const alpha = static_cast<double>(k) / sum;
    return {alpha, alpha / std::sqrt(static_cast<double>(k))};
}

double kolmogorov_q(double lambda) noexcept
{
    if (lambda <= 0.0)
        return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        double const term = sign * 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
        sum += term;
        if (std::fabs(term) < 1e-10)
            return std::clamp(sum, 0.0, 1.0);
        sign = -sign;
    }
    // series has not converged: lambda is tiny and the tail probability is 1
    return 1.0;
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b)
{
    require(!a.empty() && !b.empty(), ErrorCode::EmptySample, "ks_two_sample needs nonempty samples");
    require(a.size() >= 50 && b.size() >= 50, ErrorCode::SampleTooSmall, "ks_two_sample needs n >= 50 per sample");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double const na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        double const x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] == x)
            ++i;
        while (j < sb.size() && sb[j] == x)
            ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    double const ne = std::sqrt(na * nb / (na + nb));
    KsResult r;
    r.statistic = d;
    r.pValue = kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
    return r;
}

KsResult ks_two_sample(const SampleSet& a, const SampleSet& b) { return ks_two_sample(a.values(), b.values()); }

double median(std::vector<double> v)
{
    require(!v.empty(), ErrorCode::EmptySample, "median of an empty vector");
    auto const mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    double const upper = *mid;
    if (v.size() % 2 == 1)
        return upper;
    double const lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

Interval bootstrap_ci(const Estimator& estimator, const SampleSet& s, int replicates, double level,
                      std::uint64_t seed, int threads)
{
    require(replicates >= 100, ErrorCode::InvalidArgument, "bootstrap needs at least 100 replicates");
    require(level > 0.0 && level < 1.0, ErrorCode::InvalidArgument, "bootstrap level must lie in (0, 1)");
    require(!s.empty(), ErrorCode::EmptySample, "bootstrap on an empty sample");
    auto const& values = s.values();
    std::size_t const n = values.size();
    std::vector<double> stats(static_cast<std::size_t>(replicates));
    parallel_for(stats.size(), threads, [&](std::size_t r) {
        RandomStream rng(seed, r);
        std::vector<double> resample(n);
        for (auto& v : resample)
            v = values[static_cast<std::size_t>(rng.uniform() * static_cast<double>(n))];
        stats[r] = estimator(resample);
    });
    std::sort(stats.begin(), stats.end());
    auto pick = [&](double q) {
        auto const idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(stats.size() - 1) + 0.5));
        return stats[std::min(idx, stats.size() - 1)];
    };
    return {pick(0.5 * (1.0 - level)), pick(0.5 * (1.0 + level))};
}

}  // namespace mapfunc
