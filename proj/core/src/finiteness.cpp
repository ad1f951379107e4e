#include "mapfunc/finiteness.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "mapfunc/error.hpp"
#include "mapfunc/stats.hpp"

namespace mapfunc {

namespace {

using Tag = ConvergenceVerdict::Tag;

std::pair<double, Growth> growth_of(const std::vector<double>& ladder, const std::vector<double>& values)
{
    std::vector<double> lx, ly;
    for (std::size_t k = ladder.size() / 2; k < ladder.size(); ++k) {
        if (values[k] > 0.0) {
            lx.push_back(std::log(ladder[k]));
            ly.push_back(std::log(values[k]));
        }
    }
    if (lx.size() < 2)
        return {0.0, lx.empty() ? Growth::Converging : Growth::Inconclusive};
    double const slope = fit_line(lx, ly).slope;
    if (slope < converging_slope)
        return {slope, Growth::Converging};
    if (slope > growing_slope)
        return {slope, Growth::Growing};
    return {slope, Growth::Inconclusive};
}

}  // namespace

std::string_view to_string(Growth g) noexcept
{
    switch (g) {
        case Growth::Converging: return "Converging";
        case Growth::Growing: return "Growing";
        case Growth::Inconclusive: return "Inconclusive";
    }
    return "Unknown";
}

std::string_view to_string(ConvergenceVerdict::Tag tag) noexcept
{
    switch (tag) {
        case Tag::FiniteLifetime: return "FiniteLifetime";
        case Tag::ConvergentKNegative: return "ConvergentKNegative";
        case Tag::DivergentKZero: return "DivergentKZero";
        case Tag::DivergentKPositive: return "DivergentKPositive";
        case Tag::ConvergentUndefinedK: return "ConvergentUndefinedK";
        case Tag::DivergentUndefinedK: return "DivergentUndefinedK";
        case Tag::DegenerateZeroK: return "DegenerateZeroK";
        case Tag::InconclusiveUndefinedK: return "InconclusiveUndefinedK";
    }
    return "Unknown";
}

bool is_convergent(Tag tag) noexcept
{
    return tag == Tag::FiniteLifetime || tag == Tag::ConvergentKNegative || tag == Tag::ConvergentUndefinedK;
}

bool is_divergent(Tag tag) noexcept
{
    return tag == Tag::DivergentKZero || tag == Tag::DivergentKPositive || tag == Tag::DivergentUndefinedK
           || tag == Tag::DegenerateZeroK;
}

double empirical_m(std::span<const double> sorted_magnitudes, std::size_t n_total, double x) noexcept
{
    // E[min(W, x)]: magnitudes <= x count fully, the rest contribute x each.
    auto const it = std::upper_bound(sorted_magnitudes.begin(), sorted_magnitudes.end(), x);
    double below = 0.0;
    for (auto p = sorted_magnitudes.begin(); p != it; ++p)
        below += *p;
    auto const above = static_cast<double>(sorted_magnitudes.end() - it);
    return (below + x * above) / static_cast<double>(n_total);
}

std::vector<double> default_ladder(const SampleSet& samples, int levels)
{
    require(!samples.empty(), ErrorCode::EmptySample, "ladder from an empty sample");
    std::vector<double> mags;
    mags.reserve(samples.count());
    for (double v : samples.values())
        if (v != 0.0)
            mags.push_back(std::fabs(v));
    require(!mags.empty(), ErrorCode::OneSidedSample, "all samples are zero");
    std::sort(mags.begin(), mags.end());
    double const lo = mags[mags.size() / 2];
    double const hi = mags.back();
    std::vector<double> ladder(static_cast<std::size_t>(levels));
    for (int k = 0; k < levels; ++k)
        ladder[static_cast<std::size_t>(k)]
            = hi > lo ? lo * std::pow(hi / lo, static_cast<double>(k) / (levels - 1)) : lo * (1.0 + k);
    return ladder;
}

EricksonEstimate erickson_integrals(const SampleSet& samples, const std::vector<double>& ladder)
{
    require(!samples.empty(), ErrorCode::EmptySample, "erickson_integrals on an empty sample");
    require(ladder.size() >= 2, ErrorCode::InvalidArgument, "ladder needs at least two levels");
    for (std::size_t k = 0; k < ladder.size(); ++k)
        require(ladder[k] > 0.0 && (k == 0 || ladder[k] > ladder[k - 1]), ErrorCode::InvalidArgument,
                "ladder must be positive and strictly increasing");
    std::vector<double> pos, neg;
    for (double v : samples.sorted()) {
        if (v > 0.0)
            pos.push_back(v);
        else if (v < 0.0)
            neg.push_back(-v);
    }
    if (pos.empty() || neg.empty())
        fail(ErrorCode::OneSidedSample, "erickson_integrals needs samples of both signs");
    std::reverse(neg.begin(), neg.end());

    // Prefix sums make each m evaluation logarithmic.
    auto const n = samples.count();
    auto integral = [&](const std::vector<double>& atoms, const std::vector<double>& mags) {
        std::vector<double> prefix(mags.size() + 1, 0.0);
        for (std::size_t i = 0; i < mags.size(); ++i)
            prefix[i + 1] = prefix[i] + mags[i];
        std::vector<double> out(ladder.size(), 0.0);
        double cum = 0.0;
        std::size_t j = 0;
        for (std::size_t k = 0; k < ladder.size(); ++k) {
            while (j < atoms.size() && atoms[j] <= ladder[k]) {
                double const x = atoms[j];
                auto const idx = static_cast<std::size_t>(std::upper_bound(mags.begin(), mags.end(), x) - mags.begin());
                double const m = (prefix[idx] + x * static_cast<double>(mags.size() - idx)) / static_cast<double>(n);
                cum += x / m;
                ++j;
            }
            out[k] = cum / static_cast<double>(n);
        }
        return out;
    };

    EricksonEstimate est;
    est.ladder = ladder;
    est.iPlus = integral(pos, neg);
    est.iMinus = integral(neg, pos);
    std::tie(est.slopePlus, est.plus) = growth_of(ladder, est.iPlus);
    std::tie(est.slopeMinus, est.minus) = growth_of(ladder, est.iMinus);
    return est;
}

ConvergenceVerdict classify_convergence(const MapModel& model, const SimConfig& cfg, const ClassifyOptions& opt)
{
    ConvergenceVerdict v;
    v.k = drift_K(model);
    if (model.killing() > 0.0) {
        v.tag = Tag::FiniteLifetime;
        return v;
    }
    switch (v.k.kind) {
        case Drift::Kind::MinusInfinity: v.tag = Tag::ConvergentKNegative; return v;
        case Drift::Kind::PlusInfinity: v.tag = Tag::DivergentKPositive; return v;
        case Drift::Kind::Finite:
            if (v.k.value < 0.0)
                v.tag = Tag::ConvergentKNegative;
            else if (v.k.value > 0.0)
                v.tag = Tag::DivergentKPositive;
            else
                v.tag = is_degenerate(model) ? Tag::DegenerateZeroK : Tag::DivergentKZero;
            return v;
        case Drift::Kind::Undefined: break;
    }
    auto const xi = sample_xi_T2(model, cfg, opt.samples, opt.threads);
    auto est = erickson_integrals(xi, default_ladder(xi, opt.ladderLevels));
    switch (est.plus) {
        case Growth::Converging: v.tag = Tag::ConvergentUndefinedK; break;
        case Growth::Growing: v.tag = Tag::DivergentUndefinedK; break;
        case Growth::Inconclusive: v.tag = Tag::InconclusiveUndefinedK; break;
    }
    v.evidence = std::move(est);
    return v;
}

AbReport ab_equivalence_check(const MapModel& model, const SimConfig& cfg, std::size_t n, int threads)
{
    auto const s = sample_functionals_set(model, cfg, n, threads);
    AbReport r;
    r.n = n;
    r.divergedA = s.divergedA;
    r.divergedB = s.divergedB;
    r.disagreements = s.disagreements;
    return r;
}

}  // namespace mapfunc
