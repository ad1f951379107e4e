#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <tuple>

#include "mapfunc/cramer.hpp"
#include "mapfunc/error.hpp"
#include "mapfunc/heavytail.hpp"
#include "mapfunc/parallel.hpp"

namespace mapfunc {

namespace {

constexpr std::size_t end_col = 2;

double require_negative_k(const MapModel& model)
{
    auto const k = drift_K(model);
    require(k.defined() && k.sign() < 0, ErrorCode::PositiveDrift, "needs K < 0, got K = " + k.describe());
    require(k.finite(), ErrorCode::InvalidArgument, "needs finite K, got K = " + k.describe());
    require(model.killing() == 0.0, ErrorCode::KillingUnsupported, "excursions need killing q = 0");
    return k.value;
}

/*!
 * Gap u with P(sup of xi_t - c t >= u) < residual from any phase.
 *
 * Uses the Lundberg bound (max h / min h) e^{-R u} when lambda(z) - c z has a
 * positive root R with right eigenvector h, else 2 H(u) / (|K - c| E[T2]).
 */
std::pair<double, std::string> gap_for_rate(const MapModel& model, double k, double c, double residual)
{
    require(residual > 0.0 && residual < 1.0, ErrorCode::InvalidArgument, "residual must lie in (0, 1)");
    auto p = model.params();
    p.levyPlus.drift -= c;
    p.levyMinus.drift -= c;
    MapModel const shifted(p);
    auto const root = find_cramer_root(shifted);
    if (root.status == CramerRoot::Status::Found) {
        auto const me = matrix_exponent(shifted, root.kappa);
        require(me.has_value(), ErrorCode::InvalidArgument, "matrix exponent absent at the adjustment root");
        auto const& f = me->entries;
        double const h0 = f[0][1];
        double const h1 = me->leading - f[0][0];
        double ratio = 1.0;
        if (h0 > 0.0 && h1 > 0.0)
            ratio = std::max(h0, h1) / std::min(h0, h1);
        return {(std::log(ratio) - std::log(residual)) / root.kappa, "lundberg"};
    }
    if (root.status == CramerRoot::Status::NoRoot)
        return {-std::log(residual) / root.scan.back().first, "lundberg"};

    auto const cls = strong_subexp_classify(model);
    double const scale = std::fabs(k - c) * model.mean_t2();
    auto excess = [&](double u) { return 2.0 * total_integrated_tail(cls, u) / scale > residual; };
    double lo = 0.0, hi = 1.0;
    while (excess(hi)) {
        lo = hi;
        hi *= 2.0;
        require(hi < 1e15, ErrorCode::InvalidArgument, "heavy tail too heavy to calibrate a termination gap");
    }
    for (int it = 0; it < 100 && hi - lo > 1e-9 * hi; ++it) {
        double const mid = 0.5 * (lo + hi);
        (excess(mid) ? lo : hi) = mid;
    }
    return {hi, "subexponential"};
}

//---------------------------------------------------------------------------//
/*!
 * Detects the stopping times at which xi - xi_{sigma_{n-1}} meets the barrier
 * c (t - sigma_{n-1}) + A, with c = K + eps.
 */
struct ExcursionDetector : PathVisitor {
    double c = 0.0;
    double level = 0.0;
    //! terminate once the rebased process sits this far below the barrier
    double gap = std::numeric_limits<double>::infinity();
    bool terminate = true;

    double baseT = 0.0;
    double baseX = 0.0;
    double aIntegral = 0.0;
    bool done = false;
    PathExcursions rec;

    double rebased(double t, double x) const noexcept { return x - baseX - c * (t - baseT); }

    void cross(double t, double x, State k)
    {
        rec.z.push_back(x - baseX);
        rec.k.push_back(k);
        ++rec.n;
        baseT = t;
        baseX = x;
    }

    bool check_stop(double t, double x)
    {
        if (terminate && rebased(t, x) <= level - gap) {
            done = true;
            return false;
        }
        return true;
    }

    bool piece(const Piece& p, State s)
    {
        aIntegral += piece_exp_integral(p);
        double const t1 = p.t0 + p.dt;
        if (p.linear) {
            double const slope = (p.x1 - p.x0) / p.dt;
            double const r = slope - c;
            double t0 = p.t0, x0 = p.x0;
            while (r > 0.0) {
                double const tc = t0 + (level - rebased(t0, x0)) / r;
                if (tc > t1)
                    break;
                double const xc = p.x0 + slope * (tc - p.t0);
                cross(tc, xc, s);
                t0 = tc;
                x0 = xc;
            }
        } else if (rebased(t1, p.x1) >= level) {
            cross(t1, p.x1, s);
        }
        return check_stop(t1, p.x1);
    }

    bool jump(double t, double, double after, State from, bool is_switch)
    {
        if (rebased(t, after) >= level)
            cross(t, after, is_switch ? opposite(from) : from);
        return check_stop(t, after);
    }
};

ExcursionStats decompose_at(const MapModel& model, const SimConfig& cfg, const ExcursionOptions& opt, double k,
                            double h)
{
    ExcursionStats st;
    st.eps = opt.eps;
    st.levelA = opt.levelA;
    st.c = excursion_constant(k, opt.eps, opt.levelA);
    std::tie(st.terminationGap, st.gapMethod) = gap_for_rate(model, k, k + opt.eps, opt.residual);
    st.paths.resize(opt.nPaths);
    parallel_for(opt.nPaths, opt.threads, [&](std::size_t i) {
        auto rng = family_stream(cfg.masterSeed, StreamFamily::Paths, i);
        ExcursionDetector det;
        det.c = k + opt.eps;
        det.level = opt.levelA;
        det.gap = st.terminationGap;
        walk_path(model, h, rng, opt.maxTime, det);
        det.rec.complete = det.done;
        st.paths[i] = std::move(det.rec);
    });
    for (auto const& p : st.paths) {
        if (!p.complete) {
            ++st.incomplete;
            continue;
        }
        State prev = model.start_state();
        for (auto s : p.k) {
            ++st.transitions[static_cast<std::size_t>(index(prev))][static_cast<std::size_t>(index(s))];
            prev = s;
        }
        ++st.transitions[static_cast<std::size_t>(index(prev))][end_col];
        if (st.nHistogram.size() <= p.n)
            st.nHistogram.resize(p.n + 1, 0);
        ++st.nHistogram[p.n];
    }
    return st;
}

void validate_excursion_args(double k, double eps, double level_a)
{
    require(eps > 0.0 && eps < -k, ErrorCode::EpsilonOutOfRange, "eps must lie in (0, -K)");
    require(std::isfinite(level_a) && level_a > 0.0, ErrorCode::InvalidArgument, "levelA must be positive");
    require(excursion_constant(k, eps, level_a) > std::log(2.0), ErrorCode::LevelTooSmall,
            "levelA too small: needs e^C > 2");
}

}  // namespace

double excursion_constant(double k, double eps, double level_a) noexcept
{
    return level_a - std::log(std::fabs(k + eps));
}

std::size_t ExcursionStats::visits(State from) const noexcept
{
    auto const& row = transitions[static_cast<std::size_t>(index(from))];
    return row[0] + row[1] + row[2];
}

double ExcursionStats::eta(State from, int to) const noexcept
{
    auto const v = visits(from);
    if (v == 0)
        return 0.0;
    return static_cast<double>(transitions[static_cast<std::size_t>(index(from))][static_cast<std::size_t>(to)])
           / static_cast<double>(v);
}

double ExcursionStats::eta_se(State from, int to) const noexcept
{
    auto const v = visits(from);
    if (v == 0)
        return 0.0;
    double const p = eta(from, to);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(v));
}

double ExcursionStats::continuation_bound() const noexcept
{
    double p = 0.0;
    for (auto s : {State::Plus, State::Minus})
        if (visits(s) > 0)
            p = std::max(p, 1.0 - eta(s, static_cast<int>(end_col)));
    return p;
}

double ExcursionStats::n_exceeds(std::size_t n) const noexcept
{
    std::size_t total = 0, above = 0;
    for (std::size_t j = 0; j < nHistogram.size(); ++j) {
        total += nHistogram[j];
        if (j > n)
            above += nHistogram[j];
    }
    return total ? static_cast<double>(above) / static_cast<double>(total) : 0.0;
}

double ExcursionStats::mean_n() const noexcept
{
    std::size_t total = 0;
    double sum = 0.0;
    for (std::size_t j = 0; j < nHistogram.size(); ++j) {
        total += nHistogram[j];
        sum += static_cast<double>(j * nHistogram[j]);
    }
    return total ? sum / static_cast<double>(total) : 0.0;
}

std::pair<double, std::string> termination_gap(const MapModel& model, double eps, double residual)
{
    double const k = require_negative_k(model);
    require(eps > 0.0 && eps < -k, ErrorCode::EpsilonOutOfRange, "eps must lie in (0, -K)");
    return gap_for_rate(model, k, k + eps, residual);
}

ExcursionStats excursion_decompose(const MapModel& model, const SimConfig& cfg, const ExcursionOptions& opt)
{
    cfg.validate();
    double const k = require_negative_k(model);
    validate_excursion_args(k, opt.eps, opt.levelA);
    require(opt.maxTime > 0.0, ErrorCode::InvalidArgument, "maxTime must be positive");
    auto st = decompose_at(model, cfg, opt, k, cfg.gridStep);
    bool const brownian = model.levy(State::Plus).gaussianSigma > 0.0 || model.levy(State::Minus).gaussianSigma > 0.0;
    if (opt.gridSensitivity && brownian) {
        auto const fine = decompose_at(model, cfg, opt, k, 0.5 * cfg.gridStep);
        st.gridDelta = fine.mean_n() - st.mean_n();
    }
    return st;
}

LogABoundResult logA_bound_check(const MapModel& model, const SimConfig& cfg, double eps, double level_a,
                                 double horizon, std::size_t n_paths, std::optional<double> c_override, int threads)
{
    cfg.validate();
    double const k = require_negative_k(model);
    validate_excursion_args(k, eps, level_a);
    require(horizon > 0.0, ErrorCode::InvalidArgument, "horizon must be positive");
    LogABoundResult r;
    r.paths = n_paths;
    r.c = c_override.value_or(excursion_constant(k, eps, level_a));
    std::vector<double> excess(n_paths);
    parallel_for(n_paths, threads, [&](std::size_t i) {
        auto rng = family_stream(cfg.masterSeed, StreamFamily::Paths, i);
        ExcursionDetector det;
        det.c = k + eps;
        det.level = level_a;
        det.terminate = false;
        walk_path(model, cfg.gridStep, rng, horizon, det);
        double bound = static_cast<double>(det.rec.n + 1) * r.c;
        for (double z : det.rec.z)
            bound += std::max(z, 0.0);
        excess[i] = std::log(det.aIntegral) - bound;
    });
    for (double e : excess) {
        r.violations += e > 0.0;
        r.maxExcess = std::max(r.maxExcess, e);
    }
    return r;
}

LadderReport ladder_hit_prob(const MapModel& model, const SimConfig& cfg, const std::vector<double>& x_grid,
                             std::size_t n_paths, int threads, std::int64_t max_cycles)
{
    cfg.validate();
    double const k = require_negative_k(model);
    require(!x_grid.empty() && std::is_sorted(x_grid.begin(), x_grid.end()), ErrorCode::InvalidArgument,
            "ladder grid must be nonempty and ascending");
    require(n_paths > 0, ErrorCode::InvalidArgument, "needs nPaths > 0");
    double const mean_xi = k * model.mean_t2();

    // H from analytic member tails when a subexponential member dominates, else empirically.
    std::function<double(double)> h_of;
    try {
        auto const cls = strong_subexp_classify(model);
        h_of = [cls](double x) { return model_integrated_tail(cls, x); };
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotOfType)
            throw;
        auto const xi = sample_xi_T2(model, cfg, 100000, threads);
        h_of = [tail = std::make_shared<SampleSet>(xi)](double x) {
            return integrated_tail(*tail, std::vector<double>{x}).h[0];
        };
    }

    LadderReport rep;
    rep.paths = n_paths;
    rep.stopGap = gap_for_rate(model, k, 0.0, 1e-4).first;
    std::vector<double> sup(n_paths);
    std::vector<char> complete(n_paths, 1);
    double const top = x_grid.back();
    parallel_for(n_paths, threads, [&](std::size_t i) {
        auto rng = family_stream(cfg.masterSeed, StreamFamily::Cycles, i);
        double s = 0.0, mx = -std::numeric_limits<double>::infinity();
        std::int64_t n = 0;
        while (true) {
            s += sample_cycle(model, cfg, rng).xiT2;
            mx = std::max(mx, s);
            if (mx >= top)
                break;
            auto const unhit = std::upper_bound(x_grid.begin(), x_grid.end(), mx);
            if (s <= *unhit - rep.stopGap)
                break;
            if (++n >= max_cycles) {
                complete[i] = 0;
                break;
            }
        }
        sup[i] = mx;
    });
    for (char c : complete)
        rep.incomplete += !c;
    for (double x : x_grid) {
        LadderPoint p;
        p.x = x;
        p.hits = static_cast<std::size_t>(std::count_if(sup.begin(), sup.end(), [x](double v) { return v >= x; }));
        p.probability = static_cast<double>(p.hits) / static_cast<double>(n_paths);
        p.predicted = h_of(x) / std::fabs(mean_xi);
        p.ratio = p.predicted > 0.0 ? p.probability / p.predicted : std::numeric_limits<double>::infinity();
        rep.points.push_back(p);
    }
    return rep;
}

}  // namespace mapfunc
