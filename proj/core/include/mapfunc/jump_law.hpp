#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "random.hpp"

namespace mapfunc {

//! z within this distance of an mgf pole is treated as outside the domain.
inline constexpr double pole_margin = 1e-9;

enum class JumpKind { Deterministic, Gaussian, ExpPositive, ExpNegative, Laplace, ParetoPositive, LogNormal };

//! Right-tail class of a law.
enum class TailClass { Light, StrongSubexponential, HeavyInfiniteMean };

std::string_view to_string(JumpKind kind) noexcept;
std::string_view to_string(TailClass tc) noexcept;
std::optional<JumpKind> jump_kind_from_string(std::string_view name) noexcept;

//! Open interval (lo, hi) of z where the mgf is finite; endpoints may be infinite.
struct MgfDomain {
    double lo;
    double hi;
    bool contains(double z) const noexcept { return z > lo + pole_margin && z < hi - pole_margin; }
};

namespace law {
struct Deterministic { double c; bool operator==(const Deterministic&) const = default; };
struct Gaussian { double mean; double stdev; bool operator==(const Gaussian&) const = default; };
struct ExpPositive { double rate; bool operator==(const ExpPositive&) const = default; };
struct ExpNegative { double rate; bool operator==(const ExpNegative&) const = default; };
struct Laplace { double rate; bool operator==(const Laplace&) const = default; };
//! Lomax form: P(X > x) = (1 + x / scale)^(-index), x >= 0.
struct ParetoPositive { double index; double scale; bool operator==(const ParetoPositive&) const = default; };
struct LogNormal { double logMean; double logStdev; bool operator==(const LogNormal&) const = default; };
}  // namespace law

//---------------------------------------------------------------------------//
/*!
 * \brief Distribution of a single real jump.
 *
 * Each family has an optional reflection flag; a negated law is the law of -X.
 */
class JumpLaw {
  public:
    using Params = std::variant<law::Deterministic, law::Gaussian, law::ExpPositive, law::ExpNegative,
                                law::Laplace, law::ParetoPositive, law::LogNormal>;

    JumpLaw() : JumpLaw(law::Deterministic{0.0}) {}
    JumpLaw(Params params, bool negated = false);

    static JumpLaw deterministic(double c) { return JumpLaw(law::Deterministic{c}); }
    static JumpLaw gaussian(double mean, double stdev) { return JumpLaw(law::Gaussian{mean, stdev}); }
    static JumpLaw exp_positive(double rate) { return JumpLaw(law::ExpPositive{rate}); }
    static JumpLaw exp_negative(double rate) { return JumpLaw(law::ExpNegative{rate}); }
    static JumpLaw laplace(double rate) { return JumpLaw(law::Laplace{rate}); }
    static JumpLaw pareto(double index, double scale) { return JumpLaw(law::ParetoPositive{index, scale}); }
    static JumpLaw lognormal(double log_mean, double log_stdev) { return JumpLaw(law::LogNormal{log_mean, log_stdev}); }

    JumpLaw negated() const { return JumpLaw(params_, !negated_); }

    JumpKind kind() const noexcept { return static_cast<JumpKind>(params_.index()); }
    const Params& params() const noexcept { return params_; }
    bool is_negated() const noexcept { return negated_; }

    bool is_deterministic() const noexcept { return kind() == JumpKind::Deterministic; }
    //! True for the point mass at zero.
    bool is_zero() const noexcept;

    //! E[exp(zX)], absent outside the domain.
    std::optional<double> mgf(double z) const;
    MgfDomain mgf_domain() const noexcept;

    //! E[X]; may be +inf or -inf when one part has infinite mean.
    double mean() const noexcept;
    bool positive_part_mean_infinite() const noexcept;
    bool negative_part_mean_infinite() const noexcept;

    TailClass tail_class() const noexcept;

    //! P(X > x)
    double survival(double x) const noexcept;
    //! P(X < x)
    double cdf_strict(double x) const noexcept;
    //! G(x) = integral over (x, inf) of P(X > u) du; +inf when E[X+] is infinite.
    double integrated_tail(double x) const noexcept;

    double sample(RandomStream& rng) const noexcept
    {
        double const v = sample_base(rng);
        return negated_ ? -v : v;
    }

    std::string describe() const;

    friend bool operator==(const JumpLaw& a, const JumpLaw& b) noexcept;

  private:
    Params params_;
    bool negated_ = false;

    double sample_base(RandomStream& rng) const noexcept;
    std::optional<double> mgf_base(double z) const;
    MgfDomain domain_base() const noexcept;
    double mean_base() const noexcept;
    double survival_base(double x) const noexcept;
    double cdf_strict_base(double x) const noexcept;
    double integrated_tail_base(double x) const noexcept;
    double integrated_head_base(double a) const noexcept;
};

}  // namespace mapfunc
