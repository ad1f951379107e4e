#include "mapfunc/heavytail.hpp"

#include <algorithm>
#include <cmath>

#include "mapfunc/error.hpp"
#include "mapfunc/model_io.hpp"
#include "mapfunc/parallel.hpp"
#include "mapfunc/stats.hpp"

namespace mapfunc {

namespace {

using Family = TailRank::Family;

constexpr std::array<Component, 4> all_components{Component::XiPlusAtZeta, Component::XiMinusAtZeta, Component::UPlus,
                                                  Component::UMinus};

double member_tail(const ComponentTail& m, double x) noexcept
{
    return std::min(1.0, m.weight * m.law.integrated_tail(x));
}

//! Finite negative K or throw.
double require_negative_k(const MapModel& model)
{
    auto const k = drift_K(model);
    require(k.defined() && k.sign() < 0, ErrorCode::PositiveDrift, "needs K < 0, got K = " + k.describe());
    require(k.finite(), ErrorCode::InvalidArgument, "needs finite K, got K = " + k.describe());
    return k.value;
}

}  // namespace

std::string_view to_string(Provenance p) noexcept
{
    return p == Provenance::Analytic ? "Analytic" : "Empirical";
}

std::string_view to_string(Component c) noexcept
{
    switch (c) {
        case Component::XiPlusAtZeta: return "xiPlusAtZeta";
        case Component::XiMinusAtZeta: return "xiMinusAtZeta";
        case Component::UPlus: return "uPlus";
        case Component::UMinus: return "uMinus";
    }
    return "unknown";
}

IntegratedTail integrated_tail(const JumpLaw& law, const std::vector<double>& grid)
{
    IntegratedTail out;
    out.x = grid;
    out.h.reserve(grid.size());
    for (double x : grid)
        out.h.push_back(std::min(1.0, law.integrated_tail(x)));
    return out;
}

IntegratedTail integrated_tail(const SampleSet& samples, const std::vector<double>& grid)
{
    require(!samples.empty(), ErrorCode::EmptySample, "integrated tail of an empty sample");
    auto const sorted = samples.sorted();
    std::vector<double> suffix(sorted.size() + 1, 0.0);
    for (std::size_t i = sorted.size(); i-- > 0;)
        suffix[i] = suffix[i + 1] + sorted[i];
    double const n = static_cast<double>(sorted.size());
    IntegratedTail out;
    out.x = grid;
    out.provenance = Provenance::Empirical;
    out.h.reserve(grid.size());
    for (double x : grid) {
        auto const idx = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
        double const above = static_cast<double>(sorted.size() - idx);
        out.h.push_back(std::min(1.0, std::max(0.0, (suffix[idx] - x * above) / n)));
    }
    return out;
}

TailRank TailRank::of(const JumpLaw& law) noexcept
{
    if (law.is_negated())
        return {};
    if (auto const* p = std::get_if<law::ParetoPositive>(&law.params()))
        return {Family::Pareto, p->index, 0.0};
    if (auto const* p = std::get_if<law::LogNormal>(&law.params()))
        return {Family::LogNormal, p->logStdev, p->logMean};
    return {};
}

int compare(const TailRank& x, const TailRank& y) noexcept
{
    if (x.family != y.family)
        return x.family > y.family ? 1 : -1;
    switch (x.family) {
        case Family::Light: return 0;
        case Family::Pareto: return x.a < y.a ? 1 : (x.a > y.a ? -1 : 0);
        case Family::LogNormal:
            if (x.a != y.a)
                return x.a > y.a ? 1 : -1;
            return x.b > y.b ? 1 : (x.b < y.b ? -1 : 0);
    }
    return 0;
}

std::array<Component, 2> SubexpClass::phase_members(State beta) noexcept
{
    if (beta == State::Plus)
        return {Component::XiPlusAtZeta, Component::UMinus};
    return {Component::XiMinusAtZeta, Component::UPlus};
}

SubexpClass strong_subexp_classify(const MapModel& model)
{
    require_negative_k(model);
    SubexpClass cls;
    for (std::size_t i = 0; i < all_components.size(); ++i) {
        auto& m = cls.members[i];
        m.which = all_components[i];
        switch (m.which) {
            case Component::XiPlusAtZeta:
            case Component::XiMinusAtZeta: {
                auto const s = m.which == Component::XiPlusAtZeta ? State::Plus : State::Minus;
                auto const& levy = model.levy(s);
                if (levy.has_jumps()) {
                    m.law = levy.cppJump;
                    m.weight = levy.cppRate / model.rate(s);
                    m.rank = TailRank::of(m.law);
                }
                break;
            }
            case Component::UPlus:
            case Component::UMinus:
                m.law = model.switch_jump(m.which == Component::UPlus ? State::Plus : State::Minus);
                m.rank = TailRank::of(m.law);
                break;
        }
        m.tailClass = m.heavy() ? m.law.tail_class() : TailClass::Light;
    }

    auto const top = std::max_element(cls.members.begin(), cls.members.end(),
                                      [](const auto& a, const auto& b) { return compare(a.rank, b.rank) < 0; });
    if (!top->heavy() || top->tailClass != TailClass::StrongSubexponential)
        fail(ErrorCode::NotOfType, "no strong-subexponential member dominates the increments");
    cls.dominant = top->which;
    for (auto beta : {State::Plus, State::Minus}) {
        for (auto c : SubexpClass::phase_members(beta)) {
            if (compare(cls.members[static_cast<std::size_t>(c)].rank, top->rank) == 0)
                cls.inB[static_cast<std::size_t>(index(beta))] = true;
        }
    }
    return cls;
}

double model_integrated_tail(const SubexpClass& cls, double x) noexcept
{
    double h = 0.0;
    for (auto beta : {State::Plus, State::Minus}) {
        if (!cls.inB[static_cast<std::size_t>(index(beta))])
            continue;
        for (auto c : SubexpClass::phase_members(beta)) {
            auto const& m = cls.members[static_cast<std::size_t>(c)];
            if (m.heavy())
                h += member_tail(m, x);
        }
    }
    return std::min(1.0, h);
}

double total_integrated_tail(const SubexpClass& cls, double x) noexcept
{
    double h = 0.0;
    for (auto const& m : cls.members)
        if (m.heavy())
            h += member_tail(m, x);
    return std::min(1.0, h);
}

std::vector<double> subexp_prediction(const MapModel& model, const std::vector<double>& x_grid)
{
    double const k = require_negative_k(model);
    auto const cls = strong_subexp_classify(model);
    double const scale = model.mean_t2() * std::fabs(k);
    std::vector<double> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        require(x > 0.0, ErrorCode::InvalidArgument, "prediction grid must be positive");
        out.push_back(model_integrated_tail(cls, std::log(x)) / scale);
    }
    return out;
}

std::vector<double> default_subexp_grid()
{
    std::vector<double> g;
    for (double y : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0, 15.0, 20.0, 25.0, 30.0, 40.0})
        g.push_back(std::exp(y));
    return g;
}

SubexpReport subexp_compare_samples(const MapModel& model, const SampleSet& a, std::size_t diverged,
                                    const SubexpOptions& opt)
{
    SubexpReport r;
    r.k = require_negative_k(model);
    r.cls = strong_subexp_classify(model);
    r.meanT2 = model.mean_t2();
    r.n = a.count() + diverged;
    r.diverged = diverged;
    require(r.n > 0, ErrorCode::EmptySample, "ratio curve from an empty sample");
    auto const grid = opt.xGrid.empty() ? default_subexp_grid() : opt.xGrid;
    auto const pred = subexp_prediction(model, grid);
    auto const sorted = a.sorted();
    std::vector<double> ly, lr;
    bool band = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        RatioPoint p;
        p.x = grid[i];
        auto const it = std::upper_bound(sorted.begin(), sorted.end(), p.x);
        p.exceedances = static_cast<std::size_t>(sorted.end() - it) + diverged;
        p.empirical = static_cast<double>(p.exceedances) / static_cast<double>(r.n);
        p.predicted = pred[i];
        p.ratio = p.predicted > 0.0 ? p.empirical / p.predicted : 0.0;
        p.central = p.empirical >= opt.deep && p.empirical <= opt.shallow && p.exceedances >= opt.minExceedances;
        if (p.central) {
            band = band && p.ratio >= 0.5 && p.ratio <= 2.0;
            ly.push_back(std::log(p.x));
            lr.push_back(std::fabs(std::log(p.ratio)));
        }
        r.points.push_back(p);
    }
    r.inBand = band && ly.size() >= 2;
    if (ly.size() >= 2) {
        r.trendSlope = fit_line(ly, lr).slope;
        r.trending = r.trendSlope <= 0.0;
    }
    r.pass = r.inBand && r.trending;
    return r;
}

SubexpReport subexp_compare(const MapModel& model, const SimConfig& cfg, std::size_t n, const SubexpOptions& opt)
{
    require_negative_k(model);
    strong_subexp_classify(model);
    // Valid heavy-tailed draws reach far above the light-tail divergence threshold.
    SimConfig c = cfg;
    c.divergeThreshold = std::max(cfg.divergeThreshold, 1e300);
    c.validate();
    std::vector<FunctionalDraw> draws(n);
    parallel_for(n, opt.threads, [&](std::size_t i) {
        auto rng = family_stream(c.masterSeed, StreamFamily::Functionals, i);
        draws[i] = sample_A_inf(model, c, rng);
    });
    std::vector<double> finite;
    finite.reserve(n);
    std::size_t diverged = 0;
    for (auto const& d : draws) {
        if (d.diverged)
            ++diverged;
        else
            finite.push_back(d.value);
    }
    return subexp_compare_samples(model, SampleSet(std::move(finite), "A_inf", model_hash_hex(model), c.masterSeed),
                                  diverged, opt);
}

//---------------------------------------------------------------------------//
// Lemma-level checks
//---------------------------------------------------------------------------//

namespace {

struct SupVisitor : PathVisitor {
    double sup = 0.0;
    bool piece(const Piece& p, State)
    {
        sup = std::max(sup, p.x1);
        return true;
    }
    bool jump(double, double, double after, State, bool)
    {
        sup = std::max(sup, after);
        return true;
    }
};

}  // namespace

WillekensResult willekens_check(const LevyLaw& levy, double q, double u, double u0, std::size_t n,
                                std::uint64_t seed, double grid_step, int threads)
{
    levy.validate();
    require(q > 0.0, ErrorCode::InvalidArgument, "rate q must be positive");
    require(u0 > 0.0 && u0 < u, ErrorCode::InvalidArgument, "needs 0 < u0 < u");
    require(n > 0, ErrorCode::InvalidArgument, "needs n > 0");
    require(grid_step > 0.0, ErrorCode::InvalidArgument, "grid step must be positive");
    std::vector<double> sup(n), end(n);
    parallel_for(n, threads, [&](std::size_t i) {
        auto rng = family_stream(seed, StreamFamily::Paths, i);
        double const tau = rng.exponential(q);
        double x = 0.0, ex = 1.0;
        SupVisitor vis;
        walk_segment(levy, State::Plus, tau, grid_step, rng, 0.0, x, ex, vis);
        sup[i] = vis.sup;
        end[i] = x;
    });
    double hits = 0.0, num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        hits += sup[i] > u;
        num += end[i] >= u - u0;
        den += end[i] >= -u0;
    }
    double const nn = static_cast<double>(n);
    WillekensResult r;
    r.lhs = hits / nn;
    r.seLhs = std::sqrt(r.lhs * (1.0 - r.lhs) / nn);
    // {X >= u - u0} is contained in {X >= -u0}, so the ratio is a conditional frequency.
    r.rhs = den > 0.0 ? num / den : 0.0;
    r.seRhs = den > 0.0 ? std::sqrt(r.rhs * (1.0 - r.rhs) / den) : 0.0;
    r.ok = r.lhs <= r.rhs + 3.0 * std::hypot(r.seLhs, r.seRhs);
    return r;
}

TailsumReport tailsum_check(const JumpLaw& law, double q_plus, double q_minus, double k, double eps,
                            const std::vector<double>& x_grid, std::size_t n_t, std::uint64_t seed,
                            std::size_t exact_terms, int threads)
{
    require(q_plus > 0.0 && q_minus > 0.0, ErrorCode::InvalidArgument, "switching rates must be positive");
    require(k < 0.0, ErrorCode::InvalidArgument, "needs K < 0");
    require(eps > 0.0 && eps < -k, ErrorCode::EpsilonOutOfRange, "eps must lie in (0, -K)");
    double const c = std::fabs(k + eps);
    require(c >= 1e-3 * std::fabs(k), ErrorCode::EpsilonTooLarge,
            "K + eps is too close to 0; the tail sum would not terminate");
    require(n_t > 0 && exact_terms > 0, ErrorCode::InvalidArgument, "needs nT > 0 and exact_terms > 0");
    double const mean_t2 = 1.0 / q_plus + 1.0 / q_minus;
    std::size_t const m = x_grid.size();

    std::vector<double> sums(n_t * m, 0.0);
    parallel_for(n_t, threads, [&](std::size_t j) {
        auto rng = family_stream(seed, StreamFamily::Clock, j);
        double* s = &sums[j * m];
        std::vector<char> active(m, 1);
        std::size_t live = m;
        double t = 0.0;
        for (std::size_t n = 0; n < exact_terms && live > 0; ++n) {
            for (std::size_t i = 0; i < m; ++i) {
                if (!active[i])
                    continue;
                double const term = law.survival(x_grid[i] + c * t);
                s[i] += term;
                if (term < 1e-15 * s[i] || s[i] == 0.0) {
                    active[i] = 0;
                    --live;
                }
            }
            t += rng.exponential(q_plus) + rng.exponential(q_minus);
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (!active[i])
                continue;
            double const y = x_grid[i] + c * t;
            s[i] += law.integrated_tail(y) / (c * mean_t2) + 0.5 * law.survival(y);
        }
    });

    TailsumReport r;
    r.longTailed = law.tail_class() != TailClass::Light;
    r.exactTerms = exact_terms;
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n_t; ++j)
            acc += sums[j * m + i];
        TailsumPoint p;
        p.x = x_grid[i];
        p.lhs = law.integrated_tail(p.x);
        p.rhs = mean_t2 * c * acc / static_cast<double>(n_t);
        p.ratio = p.rhs > 0.0 ? p.lhs / p.rhs : 0.0;
        r.points.push_back(p);
    }
    return r;
}

}  // namespace mapfunc
