#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sample_set.hpp"

namespace mapfunc {

//! Survival-probability window [deep, shallow], e.g. {1e-4, 1e-2}.
struct SurvivalWindow {
    double shallow = 1e-2;
    double deep = 1e-4;
    void validate() const;
};

struct Estimate {
    double value = 0.0;
    double stdError = 0.0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

//! Fraction of sorted values strictly greater than x.
double survival_sorted(std::span<const double> sorted, double x) noexcept;

//! Fraction of values > x.
double empirical_survival(const SampleSet& s, double x);

//! Value t with empirical survival approximately p (order statistic n(1-p)).
double survival_quantile(std::span<const double> sorted, double p) noexcept;

//! Least-squares slope of log survival vs log t, on log-spaced levels in the window.
Estimate loglog_tail_slope(const SampleSet& s, SurvivalWindow window = {}, int levels = 20);

//! Hill estimate of the tail index over the top k order statistics.
Estimate hill_estimator(const SampleSet& s, std::size_t k);

struct KsResult {
    double statistic = 0.0;
    double pValue = 1.0;
    bool rejects(double level) const noexcept { return pValue < level; }
};

//! Kolmogorov limiting survival Q(lambda) = 2 sum (-1)^(j-1) exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda) noexcept;

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);
KsResult ks_two_sample(const SampleSet& a, const SampleSet& b);

using Estimator = std::function<double(std::span<const double>)>;

//! Percentile bootstrap; replicate r resamples with stream (seed, r).
Interval bootstrap_ci(const Estimator& estimator, const SampleSet& s, int replicates, double level,
                      std::uint64_t seed, int threads = 1);

//! Simple least squares fit y = a + b x.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double slopeStderr = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> v);

}  // namespace mapfunc
