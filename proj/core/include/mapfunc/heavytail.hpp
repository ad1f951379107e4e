#pragma once

#include <array>
#include <limits>
#include <string>
#include <optional>
#include <string_view>
#include <vector>

#include "map_model.hpp"
#include "sample_set.hpp"
#include "sim.hpp"

namespace mapfunc {

//---------------------------------------------------------------------------//
// Integrated tails
//---------------------------------------------------------------------------//

enum class Provenance { Analytic, Empirical };
std::string_view to_string(Provenance p) noexcept;

//! H(x) = min(1, G(x)) with G(x) the integral of the survival function beyond x.
struct IntegratedTail {
    std::vector<double> x;
    std::vector<double> h;
    Provenance provenance = Provenance::Analytic;
};

IntegratedTail integrated_tail(const JumpLaw& law, const std::vector<double>& grid);
IntegratedTail integrated_tail(const SampleSet& samples, const std::vector<double>& grid);

//---------------------------------------------------------------------------//
// Strong subexponential classification
//---------------------------------------------------------------------------//

//! Members of L: the regime increments over their sojourns and the switch jumps.
enum class Component { XiPlusAtZeta, XiMinusAtZeta, UPlus, UMinus };
std::string_view to_string(Component c) noexcept;

//! Family-level tail order: Light < LogNormal (by logStdev, then logMean) < Pareto (smaller index heavier).
struct TailRank {
    enum class Family { Light = 0, LogNormal = 1, Pareto = 2 };
    Family family = Family::Light;
    double a = 0.0;
    double b = 0.0;

    static TailRank of(const JumpLaw& law) noexcept;
    //! -1 lighter, 0 comparable, +1 heavier
    friend int compare(const TailRank& x, const TailRank& y) noexcept;
};

struct ComponentTail {
    Component which = Component::UPlus;
    TailRank rank;
    TailClass tailClass = TailClass::Light;
    //! law whose integrated tail represents the member, scaled by weight
    JumpLaw law;
    double weight = 1.0;
    bool heavy() const noexcept { return rank.family != TailRank::Family::Light; }
};

struct SubexpClass {
    Component dominant = Component::UPlus;
    //! B membership of phases + and -
    std::array<bool, 2> inB{false, false};
    std::array<ComponentTail, 4> members;

    //! Phase beta collects xi_beta and the jump U_{-beta} made on entering beta.
    static std::array<Component, 2> phase_members(State beta) noexcept;
};

/*!
 * Decide the dominant strong-subexponential member of L from declared families.
 *
 * A regime increment over an Exp(q) sojourn is heavy only through its
 * compound Poisson jumps; its integrated tail is taken as (rate / q) G_J.
 */
SubexpClass strong_subexp_classify(const MapModel& model);

//! H = min(1, sum over phases in B of the heavy member tails), at x.
double model_integrated_tail(const SubexpClass& cls, double x) noexcept;

//! Same sum over every heavy member, regardless of B.
double total_integrated_tail(const SubexpClass& cls, double x) noexcept;

std::vector<double> subexp_prediction(const MapModel& model, const std::vector<double>& x_grid);

struct RatioPoint {
    double x = 0.0;
    double empirical = 0.0;
    double predicted = 0.0;
    double ratio = 0.0;
    std::size_t exceedances = 0;
    bool central = false;
};

struct SubexpReport {
    SubexpClass cls;
    double k = 0.0;
    double meanT2 = 0.0;
    std::vector<RatioPoint> points;
    std::size_t n = 0;
    std::size_t diverged = 0;
    bool inBand = false;
    bool trending = false;
    double trendSlope = 0.0;
    bool pass = false;
};

struct SubexpOptions {
    std::vector<double> xGrid;
    //! survival band of the central window
    double shallow = 1e-1;
    double deep = 1e-3;
    std::size_t minExceedances = 100;
    int threads = 1;
};

//! Default grid: x = exp(y) for y from 0.5 to 40.
std::vector<double> default_subexp_grid();

SubexpReport subexp_compare(const MapModel& model, const SimConfig& cfg, std::size_t n, const SubexpOptions& opt = {});
//! Ratio curve from existing A samples; diverged draws count as exceedances.
SubexpReport subexp_compare_samples(const MapModel& model, const SampleSet& a, std::size_t diverged,
                                    const SubexpOptions& opt = {});

//---------------------------------------------------------------------------//
// Lemma-level checks
//---------------------------------------------------------------------------//

struct WillekensResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double seLhs = 0.0;
    double seRhs = 0.0;
    bool ok = false;
};

//! P(sup_{s<tau} X_s > u) against P(X_tau >= u - u0) / P(X_tau >= -u0), tau ~ Exp(q).
WillekensResult willekens_check(const LevyLaw& levy, double q, double u, double u0, std::size_t n,
                                std::uint64_t seed, double grid_step = 1e-3, int threads = 1);

struct TailsumPoint {
    double x = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct TailsumReport {
    std::vector<TailsumPoint> points;
    bool longTailed = true;
    //! exact terms summed per clock path before the integral completion
    std::size_t exactTerms = 0;
};

/*!
 * G_X(x) against E[T2]|K+eps| sum_n P(X > x - (K+eps) T_{2n}).
 *
 * The sum is averaged over nT clock paths. Terms are summed exactly while they
 * exceed 1e-15 of the running sum, up to exact_terms; the rest is completed by
 * the Euler-Maclaurin estimate G(x + |c| T_{2N}) / (|c| E[T2]) + S(...) / 2.
 */
TailsumReport tailsum_check(const JumpLaw& law, double q_plus, double q_minus, double k, double eps,
                            const std::vector<double>& x_grid, std::size_t n_t, std::uint64_t seed,
                            std::size_t exact_terms = 100, int threads = 1);

//---------------------------------------------------------------------------//
// Excursion framework
//---------------------------------------------------------------------------//

struct ExcursionOptions {
    double eps = 0.0;
    double levelA = 0.0;
    std::size_t nPaths = 1000;
    int threads = 1;
    //! residual crossing probability tolerated at termination
    double residual = 1e-4;
    //! hard time cap per path; paths reaching it are incomplete
    double maxTime = 1e5;
    //! rerun at half the grid step when a regime has a Brownian part
    bool gridSensitivity = false;
};

struct PathExcursions {
    std::size_t n = 0;
    std::vector<double> z;
    std::vector<State> k;
    bool complete = false;
};

struct ExcursionStats {
    double eps = 0.0;
    double levelA = 0.0;
    double c = 0.0;
    //! xi-tilde gap beyond which a further crossing has probability < residual
    double terminationGap = 0.0;
    std::string gapMethod;
    std::vector<PathExcursions> paths;
    //! transitions from K_{n-1} in {+,-} to K_n in {+,-} or termination (index 2)
    std::array<std::array<std::size_t, 3>, 2> transitions{};
    std::vector<std::size_t> nHistogram;
    std::size_t incomplete = 0;
    //! mean N at step h/2 minus mean N at step h, when requested
    std::optional<double> gridDelta;

    double eta(State from, int to) const noexcept;
    double eta_se(State from, int to) const noexcept;
    std::size_t visits(State from) const noexcept;
    //! max over visited states of the continuation probability 1 - eta(., end)
    double continuation_bound() const noexcept;
    //! empirical P(N > n) over complete paths
    double n_exceeds(std::size_t n) const noexcept;
    double mean_n() const noexcept;
};

//! C = log(e^A / |K + eps|)
double excursion_constant(double k, double eps, double level_a) noexcept;

//! Termination gap D: Lundberg bound with the adjustment root of lambda(z) - (K+eps) z, else the heavy-tail asymptotic.
std::pair<double, std::string> termination_gap(const MapModel& model, double eps, double residual);

ExcursionStats excursion_decompose(const MapModel& model, const SimConfig& cfg, const ExcursionOptions& opt);

struct LogABoundResult {
    std::size_t paths = 0;
    std::size_t violations = 0;
    double c = 0.0;
    double maxExcess = -std::numeric_limits<double>::infinity();
};

/*!
 * Count paths with log A_horizon > (N + 1) C + sum Z_n^+.
 *
 * c_override replaces C, for the negative control.
 */
LogABoundResult logA_bound_check(const MapModel& model, const SimConfig& cfg, double eps, double level_a,
                                 double horizon, std::size_t n_paths, std::optional<double> c_override = {},
                                 int threads = 1);

struct LadderPoint {
    double x = 0.0;
    double probability = 0.0;
    double predicted = 0.0;
    double ratio = 0.0;
    std::size_t hits = 0;
};

struct LadderReport {
    std::vector<LadderPoint> points;
    std::size_t paths = 0;
    std::size_t incomplete = 0;
    double stopGap = 0.0;
};

//! P(sup_n xi_{T_2n} >= x) against H(x) / |E xi_T2|.
LadderReport ladder_hit_prob(const MapModel& model, const SimConfig& cfg, const std::vector<double>& x_grid,
                             std::size_t n_paths, int threads = 1, std::int64_t max_cycles = 10000000);

}  // namespace mapfunc
