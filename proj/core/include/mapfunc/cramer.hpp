#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "map_model.hpp"
#include "sample_set.hpp"
#include "stats.hpp"

namespace mapfunc {

struct CramerRoot {
    enum class Status { Found, NoRoot, DomainTooSmall };
    Status status = Status::NoRoot;
    double kappa = 0.0;
    //! lambda(kappa) at the returned root
    double residual = 0.0;
    //! (z, lambda(z)) at every evaluation, in order
    std::vector<std::pair<double, double>> scan;

    bool found() const noexcept { return status == Status::Found; }
};

std::string_view to_string(CramerRoot::Status s) noexcept;

/*!
 * Positive root of the leading eigenvalue lambda(z).
 *
 * Brackets by doubling from z = 1 and bisects until |lambda| < tol. Throws
 * PositiveDrift unless K < 0.
 */
CramerRoot find_cramer_root(const MapModel& model, double tol = 1e-12);

//! E[|Y_T2|^kappa] - 1 from the closed-form product; SubcriticalityViolated if psi(kappa) >= q.
double verify_mean_one(const MapModel& model, double kappa);

struct MomentCondition {
    bool ok = false;
    double epsilonUsed = 0.0;
};

//! Search eps = 2^-k, k = 1..40, with psi(kappa + eps) < q and G(kappa + eps) finite.
MomentCondition check_moment_condition(const MapModel& model, double kappa);

struct TailConstantOptions {
    SurvivalWindow window;
    int points = 20;
    int replicates = 200;
    double level = 0.95;
    std::uint64_t seed = 0;
    int threads = 1;
    //! |slope of log(t^kappa S) vs log t| above this flags NonPlateau
    double plateauSlopeTolerance = 0.1;
};

struct TailConstantFit {
    double c = 0.0;
    Interval ci;
    //! (max - min) / median of t^kappa S over the window
    double spread = 0.0;
    double trendSlope = 0.0;
    bool nonPlateau = false;
    std::vector<double> t;
    std::vector<double> curve;
};

//! Log-spaced evaluation points between the window's survival quantiles.
std::vector<double> tail_window_grid(const SampleSet& samples, const TailConstantOptions& opt);

//! Median of t^kappa S(t) over the grid of the window; WindowTooDeep if n * deep < 100.
TailConstantFit estimate_tail_constant(const SampleSet& samples, double kappa, const TailConstantOptions& opt = {});

/*!
 * Same estimate on a fixed grid, for signed tails sharing another set's window.
 *
 * With negate = true the left tail P(X < -t) is used.
 */
TailConstantFit estimate_tail_constant_on_grid(const SampleSet& samples, double kappa, const std::vector<double>& grid,
                                               bool negate, const TailConstantOptions& opt);

struct MomentVerdict {
    double s = 0.0;
    double moment = 0.0;
    double maxShare = 0.0;
    bool stable = true;
};

//! Empirical E|X|^s with the max-term share; share > 0.5 marks Unstable.
std::vector<MomentVerdict> moment_explosion_scan(const SampleSet& samples, const std::vector<double>& s_grid);

//! False only for fully deterministic-increment models, whose xi_T2 can be lattice.
bool lattice_guard(const MapModel& model) noexcept;

struct CramerReport {
    CramerRoot root;
    double meanOneResidual = 0.0;
    MomentCondition moment;
    std::optional<TailConstantFit> cA;
    std::optional<TailConstantFit> cBplus;
    std::optional<TailConstantFit> cBminus;
    std::optional<Estimate> slope;
    SurvivalWindow window;
    bool lattice = false;
};

}  // namespace mapfunc
