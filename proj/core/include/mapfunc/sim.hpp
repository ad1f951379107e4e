#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "map_model.hpp"
#include "random.hpp"
#include "sample_set.hpp"
#include "stats.hpp"

namespace mapfunc {

struct SimConfig {
    std::uint64_t masterSeed = 0;
    //! Brownian discretization step h.
    double gridStep = 1e-3;
    //! Perpetuity stop threshold: stop once W_n < truncWeight * sum.
    double truncWeight = 1e-12;
    std::int64_t maxCycles = 100000;
    double divergeThreshold = 1e12;

    void validate() const;
};

//! Independent stream families derived from one master seed.
enum class StreamFamily : std::uint64_t {
    Functionals = 0,
    XiT2,
    AffineLhs,
    AffineCycle,
    AffineTail,
    Paths,
    Cycles,
    Clock,
};

inline RandomStream family_stream(std::uint64_t seed, StreamFamily family, std::uint64_t index) noexcept
{
    return RandomStream(seed, static_cast<std::uint64_t>(family)).substream(index);
}

//---------------------------------------------------------------------------//
// Path walking
//---------------------------------------------------------------------------//

//! A continuous stretch of path within one regime, from (t0, x0) to (t0 + dt, x1).
struct Piece {
    double t0;
    double dt;
    double x0;
    double x1;
    double e0;  //!< exp(x0)
    double e1;  //!< exp(x1)
    bool linear;  //!< exact straight line (no Brownian part)
};

//! Exact integral of exp over a linear piece, trapezoid otherwise.
inline double piece_exp_integral(const Piece& p) noexcept
{
    if (!p.linear)
        return 0.5 * p.dt * (p.e0 + p.e1);
    double const d = p.x1 - p.x0;
    return d == 0.0 ? p.e0 * p.dt : (p.e1 - p.e0) / d * p.dt;
}

/*!
 * Visitor with no-op hooks; derive and shadow the ones needed.
 *
 * Each hook returns false to stop the walk.
 */
struct PathVisitor {
    bool piece(const Piece&, State) { return true; }
    //! Compound Poisson jump (switch = false) or switch jump U (switch = true).
    bool jump(double /*t*/, double /*before*/, double /*after*/, State /*from*/, bool /*is_switch*/) { return true; }
    //! Called after the switch jump, with the new state.
    bool enter(double /*t*/, State /*state*/) { return true; }
};

namespace detail {
constexpr double inf = std::numeric_limits<double>::infinity();
}

/*!
 * Walk one regime segment of the given duration starting at (t0, x, ex).
 *
 * Pure drift pieces are exact straight lines between jump epochs. With a
 * Brownian part the path is sampled on a grid of step h restarted at each
 * jump epoch. Returns false if the visitor stopped.
 */
template <class V>
bool walk_segment(const LevyLaw& levy, State state, double duration, double h, RandomStream& rng, double t0,
                  double& x, double& ex, V& vis)
{
    double t = 0.0;
    double next_jump = levy.has_jumps() ? rng.exponential(levy.cppRate) : detail::inf;
    double const a = levy.drift;
    double const sigma = levy.gaussianSigma;
    bool const linear = sigma == 0.0;
    while (true) {
        double const stop = std::min(next_jump, duration);
        double const tend = linear ? stop : std::min(t + h, stop);
        double const dt = tend - t;
        if (dt > 0.0) {
            double x1 = x + a * dt;
            if (!linear)
                x1 += sigma * std::sqrt(dt) * rng.normal();
            double const e1 = std::exp(x1);
            if (!vis.piece(Piece{t0 + t, dt, x, x1, ex, e1, linear}, state))
                return false;
            x = x1;
            ex = e1;
        }
        t = tend;
        if (tend < stop)
            continue;
        if (!(next_jump < duration))
            return true;
        double const after = x + levy.cppJump.sample(rng);
        if (!vis.jump(t0 + t, x, after, state, false))
            return false;
        x = after;
        ex = std::exp(x);
        next_jump = t + rng.exponential(levy.cppRate);
    }
}

/*!
 * Walk the Lamperti-Kiu path from (0, 0) in the start state up to horizon.
 *
 * Random draws per sojourn: the sojourn time, the segment, then the switch
 * jump. This is the same order as sample_cycle, so a path and a cycle
 * sequence on the same stream coincide.
 */
template <class V>
void walk_path(const MapModel& model, double h, RandomStream& rng, double horizon, V& vis)
{
    State s = model.start_state();
    double t = 0.0, x = 0.0, ex = 1.0;
    while (t < horizon) {
        double const zeta = rng.exponential(model.rate(s));
        bool const switches = zeta < horizon - t;
        double const dur = switches ? zeta : horizon - t;
        if (!walk_segment(model.levy(s), s, dur, h, rng, t, x, ex, vis))
            return;
        t += dur;
        if (!switches)
            return;
        double const after = x + model.switch_jump(s).sample(rng);
        if (!vis.jump(t, x, after, s, true))
            return;
        x = after;
        ex = std::exp(x);
        s = opposite(s);
        if (!vis.enter(t, s))
            return;
    }
}

//---------------------------------------------------------------------------//
// Samplers
//---------------------------------------------------------------------------//

struct SegmentSample {
    double endValue = 0.0;
    double expIntegral = 0.0;
    double supremum = 0.0;
};

SegmentSample sample_segment(const LevyLaw& levy, double duration, const SimConfig& cfg, RandomStream& rng);

struct CyclePack {
    double t2 = 0.0;
    double xiT2 = 0.0;
    double yT2 = 1.0;
    double aT2 = 0.0;
    double bT2 = 0.0;
    //! max of xi over the sampled nodes of the cycle
    double supXi = 0.0;
};

CyclePack sample_cycle(const MapModel& model, const SimConfig& cfg, RandomStream& rng);

struct FunctionalDraw {
    double value = 0.0;
    bool diverged = false;
};

struct FunctionalPair {
    FunctionalDraw a;
    FunctionalDraw b;
    std::int64_t cycles = 0;
};

//! Coupled A and B from one stream; B uses the A-based stop rule.
FunctionalPair sample_functionals(const MapModel& model, const SimConfig& cfg, RandomStream& rng);
FunctionalDraw sample_A_inf(const MapModel& model, const SimConfig& cfg, RandomStream& rng);
FunctionalDraw sample_B_inf(const MapModel& model, const SimConfig& cfg, RandomStream& rng);

struct FunctionalSamples {
    std::vector<FunctionalPair> draws;
    std::size_t divergedA = 0;
    std::size_t divergedB = 0;
    //! draws where exactly one of A, B diverged
    std::size_t disagreements = 0;

    SampleSet finite_a(const MapModel& model, std::uint64_t seed) const;
    SampleSet finite_b(const MapModel& model, std::uint64_t seed) const;
};

//! n coupled draws; draw i uses the Functionals stream i.
FunctionalSamples sample_functionals_set(const MapModel& model, const SimConfig& cfg, std::size_t n,
                                         int threads = 1);

SampleSet sample_xi_T2(const MapModel& model, const SimConfig& cfg, std::size_t n, int threads = 1);

struct AffineReport {
    KsResult ks;
    double level = 0.01;
    bool pass = false;
};

/*!
 * Compare A against A_T2 + Y_T2 * A' with independent components.
 *
 * Values are rounded to 10 significant digits before the KS test so that
 * point masses compare equal despite summation rounding.
 */
AffineReport affine_fixedpoint_check(const MapModel& model, const SimConfig& cfg, std::size_t n, int threads = 1);

struct PathRecord {
    struct Node {
        double t;
        double xi;
        State state;
    };
    struct Mark {
        double t;
        double u;
    };
    std::vector<double> breakpoints;  //!< T_0 = 0, T_1, ... up to the horizon
    std::vector<State> states;        //!< state on [T_n, T_{n+1})
    std::vector<Node> nodes;          //!< xi at grid nodes; jumps give two nodes at one time
    std::vector<Mark> marks;          //!< switch-jump applications
    double horizon = 0.0;
    double startValue = 1.0;

    //! Y_t = x J_t exp(xi_t) at node i
    double y_at(std::size_t i) const;
};

PathRecord sample_path(const MapModel& model, double horizon, const SimConfig& cfg, RandomStream& rng);

//! Trapezoid integral of exp over equally spaced nodes.
double trapezoid_exp_integral(std::span<const double> nodes, double step) noexcept;

}  // namespace mapfunc
