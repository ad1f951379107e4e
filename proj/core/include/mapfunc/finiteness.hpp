#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "map_model.hpp"
#include "sample_set.hpp"
#include "sim.hpp"

namespace mapfunc {

enum class Growth { Converging, Growing, Inconclusive };
std::string_view to_string(Growth g) noexcept;

//! Truncated Erickson integrals I+ and I- on a ladder of levels.
struct EricksonEstimate {
    std::vector<double> ladder;
    std::vector<double> iPlus;
    std::vector<double> iMinus;
    double slopePlus = 0.0;
    double slopeMinus = 0.0;
    Growth plus = Growth::Inconclusive;
    Growth minus = Growth::Inconclusive;
};

//! Growth thresholds on the log-log slope of the truncated integrals.
inline constexpr double converging_slope = 0.05;
inline constexpr double growing_slope = 0.2;

//! m-(x) = E[min(xi-, x)] from sorted negative-part magnitudes.
double empirical_m(std::span<const double> sorted_magnitudes, std::size_t n_total, double x) noexcept;

//! Log-spaced ladder from the median to the maximum of |xi|.
std::vector<double> default_ladder(const SampleSet& samples, int levels = 16);

EricksonEstimate erickson_integrals(const SampleSet& samples, const std::vector<double>& ladder);

struct ConvergenceVerdict {
    enum class Tag {
        FiniteLifetime,
        ConvergentKNegative,
        DivergentKZero,
        DivergentKPositive,
        ConvergentUndefinedK,
        DivergentUndefinedK,
        DegenerateZeroK,
        InconclusiveUndefinedK,
    };
    Tag tag = Tag::ConvergentKNegative;
    Drift k;
    std::optional<EricksonEstimate> evidence;
};

std::string_view to_string(ConvergenceVerdict::Tag tag) noexcept;
bool is_convergent(ConvergenceVerdict::Tag tag) noexcept;
bool is_divergent(ConvergenceVerdict::Tag tag) noexcept;

struct ClassifyOptions {
    //! xi_T2 draws for the undefined-K branch
    std::size_t samples = 200000;
    int ladderLevels = 16;
    int threads = 1;
};

ConvergenceVerdict classify_convergence(const MapModel& model, const SimConfig& cfg, const ClassifyOptions& opt = {});

struct AbReport {
    std::size_t n = 0;
    std::size_t divergedA = 0;
    std::size_t divergedB = 0;
    std::size_t disagreements = 0;
    double disagreementFraction() const noexcept { return n ? static_cast<double>(disagreements) / n : 0.0; }
};

AbReport ab_equivalence_check(const MapModel& model, const SimConfig& cfg, std::size_t n, int threads = 1);

}  // namespace mapfunc
