#include "mapfunc/sim.hpp"

#include <algorithm>
#include <cmath>

#include "mapfunc/error.hpp"
#include "mapfunc/finiteness.hpp"
#include "mapfunc/model_io.hpp"
#include "mapfunc/parallel.hpp"

namespace mapfunc {

namespace {

struct Kahan {
    double sum = 0.0;
    double c = 0.0;
    void add(double v) noexcept
    {
        double const y = v - c;
        double const t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

struct SegmentAccumulator : PathVisitor {
    double integral = 0.0;
    double sup;

    explicit SegmentAccumulator(double x0) : sup(x0) {}

    bool piece(const Piece& p, State)
    {
        integral += piece_exp_integral(p);
        sup = std::max(sup, p.x1);
        return true;
    }
    bool jump(double, double, double after, State, bool)
    {
        sup = std::max(sup, after);
        return true;
    }
};

struct SignedAccumulator : PathVisitor {
    double a = 0.0;
    double b = 0.0;

    bool piece(const Piece& p, State s)
    {
        double const v = piece_exp_integral(p);
        a += v;
        b += sign(s) * v;
        return true;
    }
};

struct Recorder : PathVisitor {
    PathRecord& rec;

    explicit Recorder(PathRecord& r) : rec(r) {}

    bool piece(const Piece& p, State s)
    {
        rec.nodes.push_back({p.t0 + p.dt, p.x1, s});
        return true;
    }
    bool jump(double t, double before, double after, State from, bool is_switch)
    {
        if (is_switch) {
            rec.marks.push_back({t, after - before});
            rec.nodes.push_back({t, after, opposite(from)});
        } else {
            rec.nodes.push_back({t, after, from});
        }
        return true;
    }
    bool enter(double t, State s)
    {
        rec.breakpoints.push_back(t);
        rec.states.push_back(s);
        return true;
    }
};

double round_significant(double v, int digits)
{
    if (v == 0.0 || !std::isfinite(v))
        return v;
    double const e = std::floor(std::log10(std::fabs(v))) - (digits - 1);
    double const scale = std::pow(10.0, e);
    return std::nearbyint(v / scale) * scale;
}

FunctionalPair killed_functionals(const MapModel& model, const SimConfig& cfg, RandomStream& rng)
{
    double const chi = rng.exponential(model.killing());
    SignedAccumulator acc;
    walk_path(model, cfg.gridStep, rng, chi, acc);
    FunctionalPair out;
    out.a = {acc.a, !(acc.a <= cfg.divergeThreshold)};
    out.b = {acc.b, !(std::fabs(acc.b) <= cfg.divergeThreshold)};
    return out;
}

}  // namespace

void SimConfig::validate() const
{
    require(gridStep > 0.0 && std::isfinite(gridStep), ErrorCode::InvalidArgument, "gridStep must be positive");
    require(truncWeight > 0.0, ErrorCode::InvalidArgument, "truncWeight must be positive");
    require(maxCycles > 0, ErrorCode::InvalidArgument, "maxCycles must be positive");
    require(divergeThreshold > 0.0, ErrorCode::InvalidArgument, "divergeThreshold must be positive");
}

SegmentSample sample_segment(const LevyLaw& levy, double duration, const SimConfig& cfg, RandomStream& rng)
{
    require(duration > 0.0 && std::isfinite(duration), ErrorCode::InvalidArgument,
            "segment duration must be positive and finite");
    double x = 0.0, ex = 1.0;
    SegmentAccumulator acc(0.0);
    walk_segment(levy, State::Plus, duration, cfg.gridStep, rng, 0.0, x, ex, acc);
    return {x, acc.integral, acc.sup};
}

CyclePack sample_cycle(const MapModel& model, const SimConfig& cfg, RandomStream& rng)
{
    require(model.killing() == 0.0, ErrorCode::KillingUnsupported, "cycle sampling requires killing q = 0");
    CyclePack pack;
    double x = 0.0, ex = 1.0;
    double sup = 0.0;
    State s = model.start_state();
    for (int half = 0; half < 2; ++half) {
        double const zeta = rng.exponential(model.rate(s));
        SegmentAccumulator acc(sup);
        walk_segment(model.levy(s), s, zeta, cfg.gridStep, rng, pack.t2, x, ex, acc);
        x += model.switch_jump(s).sample(rng);
        ex = std::exp(x);
        sup = std::max(acc.sup, x);
        pack.t2 += zeta;
        pack.aT2 += acc.integral;
        pack.bT2 += sign(s) * acc.integral;
        s = opposite(s);
    }
    pack.xiT2 = x;
    pack.yT2 = ex;
    pack.supXi = sup;
    return pack;
}

FunctionalPair sample_functionals(const MapModel& model, const SimConfig& cfg, RandomStream& rng)
{
    if (model.killing() > 0.0)
        return killed_functionals(model, cfg, rng);
    FunctionalPair out;
    Kahan sa, sb;
    double w = 1.0;
    bool da = false, db = false;
    while (true) {
        if (out.cycles >= cfg.maxCycles) {
            da = db = true;
            break;
        }
        auto const c = sample_cycle(model, cfg, rng);
        sa.add(w * c.aT2);
        sb.add(w * c.bT2);
        w *= c.yT2;
        ++out.cycles;
        da = da || !(sa.sum <= cfg.divergeThreshold);
        db = db || !(std::fabs(sb.sum) <= cfg.divergeThreshold);
        if (da && db)
            break;
        // once A has diverged its sum no longer bounds the remaining terms of B
        if (!da && w < cfg.truncWeight * sa.sum)
            break;
    }
    out.a = {sa.sum, da};
    out.b = {sb.sum, db};
    return out;
}

FunctionalDraw sample_A_inf(const MapModel& model, const SimConfig& cfg, RandomStream& rng)
{
    return sample_functionals(model, cfg, rng).a;
}

FunctionalDraw sample_B_inf(const MapModel& model, const SimConfig& cfg, RandomStream& rng)
{
    return sample_functionals(model, cfg, rng).b;
}

SampleSet FunctionalSamples::finite_a(const MapModel& model, std::uint64_t seed) const
{
    std::vector<double> v;
    v.reserve(draws.size());
    for (auto const& d : draws)
        if (!d.a.diverged)
            v.push_back(d.a.value);
    return SampleSet(std::move(v), "A_inf", model_hash_hex(model), seed);
}

SampleSet FunctionalSamples::finite_b(const MapModel& model, std::uint64_t seed) const
{
    std::vector<double> v;
    v.reserve(draws.size());
    for (auto const& d : draws)
        if (!d.b.diverged)
            v.push_back(d.b.value);
    return SampleSet(std::move(v), "B_inf", model_hash_hex(model), seed);
}

FunctionalSamples sample_functionals_set(const MapModel& model, const SimConfig& cfg, std::size_t n, int threads)
{
    cfg.validate();
    FunctionalSamples out;
    out.draws.resize(n);
    parallel_for(n, threads, [&](std::size_t i) {
        auto rng = family_stream(cfg.masterSeed, StreamFamily::Functionals, i);
        out.draws[i] = sample_functionals(model, cfg, rng);
    });
    for (auto const& d : out.draws) {
        out.divergedA += d.a.diverged;
        out.divergedB += d.b.diverged;
        out.disagreements += d.a.diverged != d.b.diverged;
    }
    return out;
}

SampleSet sample_xi_T2(const MapModel& model, const SimConfig& cfg, std::size_t n, int threads)
{
    cfg.validate();
    require(model.killing() == 0.0, ErrorCode::KillingUnsupported, "xi_T2 sampling requires killing q = 0");
    std::vector<double> v(n);
    parallel_for(n, threads, [&](std::size_t i) {
        auto rng = family_stream(cfg.masterSeed, StreamFamily::XiT2, i);
        v[i] = sample_cycle(model, cfg, rng).xiT2;
    });
    return SampleSet(std::move(v), "xi_T2", model_hash_hex(model), cfg.masterSeed);
}

AffineReport affine_fixedpoint_check(const MapModel& model, const SimConfig& cfg, std::size_t n, int threads)
{
    auto const verdict = classify_convergence(model, cfg);
    require(is_convergent(verdict.tag), ErrorCode::NotConvergent,
            "affine check needs a convergent model (verdict " + std::string(to_string(verdict.tag)) + ")");
    std::vector<double> lhs(n), rhs(n);
    std::vector<char> ok(n, 1);
    parallel_for(n, threads, [&](std::size_t i) {
        auto r0 = family_stream(cfg.masterSeed, StreamFamily::AffineLhs, i);
        auto r1 = family_stream(cfg.masterSeed, StreamFamily::AffineCycle, i);
        auto r2 = family_stream(cfg.masterSeed, StreamFamily::AffineTail, i);
        auto const a = sample_A_inf(model, cfg, r0);
        auto const c = sample_cycle(model, cfg, r1);
        auto const tail = sample_A_inf(model, cfg, r2);
        ok[i] = !a.diverged && !tail.diverged;
        lhs[i] = round_significant(a.value, 10);
        rhs[i] = round_significant(c.aT2 + c.yT2 * tail.value, 10);
    });
    std::vector<double> l, r;
    for (std::size_t i = 0; i < n; ++i) {
        if (ok[i]) {
            l.push_back(lhs[i]);
            r.push_back(rhs[i]);
        }
    }
    AffineReport rep;
    rep.ks = ks_two_sample(l, r);
    rep.pass = !rep.ks.rejects(rep.level);
    return rep;
}

double PathRecord::y_at(std::size_t i) const
{
    auto const& nd = nodes.at(i);
    return startValue * sign(nd.state) * std::exp(nd.xi);
}

PathRecord sample_path(const MapModel& model, double horizon, const SimConfig& cfg, RandomStream& rng)
{
    require(horizon > 0.0 && std::isfinite(horizon), ErrorCode::InvalidArgument, "horizon must be positive");
    PathRecord rec;
    rec.horizon = horizon;
    rec.startValue = model.start_value();
    rec.breakpoints.push_back(0.0);
    rec.states.push_back(model.start_state());
    rec.nodes.push_back({0.0, 0.0, model.start_state()});
    Recorder visitor(rec);
    walk_path(model, cfg.gridStep, rng, horizon, visitor);
    return rec;
}

double trapezoid_exp_integral(std::span<const double> nodes, double step) noexcept
{
    double sum = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i)
        sum += 0.5 * step * (std::exp(nodes[i - 1]) + std::exp(nodes[i]));
    return sum;
}

}  // namespace mapfunc
