#include "mapfunc/jump_law.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "mapfunc/error.hpp"

namespace mapfunc {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double sqrt2 = 1.4142135623730950488;
constexpr double inv_sqrt_2pi = 0.39894228040143267794;

double norm_cdf(double x) { return 0.5 * std::erfc(-x / sqrt2); }
double norm_pdf(double x) { return inv_sqrt_2pi * std::exp(-0.5 * x * x); }
double norm_quantile(double p) { return -sqrt2 * boost::math::erfc_inv(2.0 * p); }

template <class... Ts>
struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// E[exp(z Q(p))] over p in (0,1), for z < 0 and a nonnegative quantile map.
template <class Quantile>
double mgf_by_quantile(double z, Quantile q)
{
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate([&](double p) { return std::exp(z * q(p)); }, 0.0, 1.0);
}

// integral from 0 to a of (1 + t / scale)^(-index) dt
double pareto_head_integral(double index, double scale, double a)
{
    double const y = 1.0 + a / scale;
    if (index == 1.0)
        return scale * std::log1p(a / scale);
    return scale / (1.0 - index) * (std::pow(y, 1.0 - index) - 1.0);
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string_view to_string(JumpKind kind) noexcept
{
    switch (kind) {
        case JumpKind::Deterministic: return "Deterministic";
        case JumpKind::Gaussian: return "Gaussian";
        case JumpKind::ExpPositive: return "ExpPositive";
        case JumpKind::ExpNegative: return "ExpNegative";
        case JumpKind::Laplace: return "Laplace";
        case JumpKind::ParetoPositive: return "ParetoPositive";
        case JumpKind::LogNormal: return "LogNormal";
    }
    return "Unknown";
}

std::string_view to_string(TailClass tc) noexcept
{
    switch (tc) {
        case TailClass::Light: return "Light";
        case TailClass::StrongSubexponential: return "StrongSubexponential";
        case TailClass::HeavyInfiniteMean: return "HeavyInfiniteMean";
    }
    return "Unknown";
}

std::optional<JumpKind> jump_kind_from_string(std::string_view name) noexcept
{
    static constexpr std::array kinds{JumpKind::Deterministic, JumpKind::Gaussian, JumpKind::ExpPositive,
                                      JumpKind::ExpNegative,   JumpKind::Laplace,  JumpKind::ParetoPositive,
                                      JumpKind::LogNormal};
    for (auto k : kinds)
        if (to_string(k) == name)
            return k;
    return std::nullopt;
}

JumpLaw::JumpLaw(Params params, bool negated) : params_(params), negated_(negated)
{
    auto positive = [](double v, const char* what) {
        require(std::isfinite(v) && v > 0.0, ErrorCode::InvalidArgument,
                std::string(what) + " must be positive and finite");
    };
    auto finite = [](double v, const char* what) {
        require(std::isfinite(v), ErrorCode::InvalidArgument, std::string(what) + " must be finite");
    };
    std::visit(overloaded{
                   [&](const law::Deterministic& p) { finite(p.c, "c"); },
                   [&](const law::Gaussian& p) {
                       finite(p.mean, "mean");
                       positive(p.stdev, "stdev");
                   },
                   [&](const law::ExpPositive& p) { positive(p.rate, "rate"); },
                   [&](const law::ExpNegative& p) { positive(p.rate, "rate"); },
                   [&](const law::Laplace& p) { positive(p.rate, "rate"); },
                   [&](const law::ParetoPositive& p) {
                       positive(p.index, "index");
                       positive(p.scale, "scale");
                   },
                   [&](const law::LogNormal& p) {
                       finite(p.logMean, "logMean");
                       positive(p.logStdev, "logStdev");
                   },
               },
               params_);
}

bool JumpLaw::is_zero() const noexcept
{
    auto const* d = std::get_if<law::Deterministic>(&params_);
    return d && d->c == 0.0;
}

std::optional<double> JumpLaw::mgf(double z) const { return mgf_base(negated_ ? -z : z); }

MgfDomain JumpLaw::mgf_domain() const noexcept
{
    auto const d = domain_base();
    // Adding 0.0 maps -0 to +0.
    return negated_ ? MgfDomain{-d.hi + 0.0, -d.lo + 0.0} : d;
}

MgfDomain JumpLaw::domain_base() const noexcept
{
    return std::visit(overloaded{
                          [](const law::ExpPositive& p) { return MgfDomain{-inf, p.rate}; },
                          [](const law::ExpNegative& p) { return MgfDomain{-p.rate, inf}; },
                          [](const law::Laplace& p) { return MgfDomain{-p.rate, p.rate}; },
                          [](const law::ParetoPositive&) { return MgfDomain{-inf, 0.0}; },
                          [](const law::LogNormal&) { return MgfDomain{-inf, 0.0}; },
                          [](const auto&) { return MgfDomain{-inf, inf}; },
                      },
                      params_);
}

std::optional<double> JumpLaw::mgf_base(double z) const
{
    if (z == 0.0)
        return 1.0;
    auto const dom = domain_base();
    // The heavy families have no pole at their upper end 0; only z > 0 is excluded.
    bool const closed_hi = kind() == JumpKind::ParetoPositive || kind() == JumpKind::LogNormal;
    if (closed_hi ? !(z < 0.0) : !MgfDomain{dom.lo, dom.hi}.contains(z))
        return std::nullopt;
    return std::visit(overloaded{
                          [&](const law::Deterministic& p) { return std::exp(z * p.c); },
                          [&](const law::Gaussian& p) {
                              return std::exp(z * p.mean + 0.5 * p.stdev * p.stdev * z * z);
                          },
                          [&](const law::ExpPositive& p) { return p.rate / (p.rate - z); },
                          [&](const law::ExpNegative& p) { return p.rate / (p.rate + z); },
                          [&](const law::Laplace& p) { return p.rate * p.rate / (p.rate * p.rate - z * z); },
                          [&](const law::ParetoPositive& p) {
                              return mgf_by_quantile(z, [&](double u) {
                                  return p.scale * std::expm1(-std::log1p(-u) / p.index);
                              });
                          },
                          [&](const law::LogNormal& p) {
                              return mgf_by_quantile(
                                  z, [&](double u) { return std::exp(p.logMean + p.logStdev * norm_quantile(u)); });
                          },
                      },
                      params_);
}

double JumpLaw::mean_base() const noexcept
{
    return std::visit(overloaded{
                          [](const law::Deterministic& p) { return p.c; },
                          [](const law::Gaussian& p) { return p.mean; },
                          [](const law::ExpPositive& p) { return 1.0 / p.rate; },
                          [](const law::ExpNegative& p) { return -1.0 / p.rate; },
                          [](const law::Laplace&) { return 0.0; },
                          [](const law::ParetoPositive& p) {
                              return p.index > 1.0 ? p.scale / (p.index - 1.0) : inf;
                          },
                          [](const law::LogNormal& p) {
                              return std::exp(p.logMean + 0.5 * p.logStdev * p.logStdev);
                          },
                      },
                      params_);
}

double JumpLaw::mean() const noexcept
{
    double const m = mean_base();
    return negated_ ? -m : m;
}

bool JumpLaw::positive_part_mean_infinite() const noexcept { return !negated_ && mean_base() == inf; }

bool JumpLaw::negative_part_mean_infinite() const noexcept { return negated_ && mean_base() == inf; }

TailClass JumpLaw::tail_class() const noexcept
{
    if (negated_)
        return TailClass::Light;
    if (auto const* p = std::get_if<law::ParetoPositive>(&params_))
        return p->index > 1.0 ? TailClass::StrongSubexponential : TailClass::HeavyInfiniteMean;
    if (kind() == JumpKind::LogNormal)
        return TailClass::StrongSubexponential;
    return TailClass::Light;
}

double JumpLaw::survival_base(double x) const noexcept
{
    return std::visit(overloaded{
                          [&](const law::Deterministic& p) { return p.c > x ? 1.0 : 0.0; },
                          [&](const law::Gaussian& p) { return 0.5 * std::erfc((x - p.mean) / (p.stdev * sqrt2)); },
                          [&](const law::ExpPositive& p) { return x < 0.0 ? 1.0 : std::exp(-p.rate * x); },
                          [&](const law::ExpNegative& p) { return x >= 0.0 ? 0.0 : -std::expm1(p.rate * x); },
                          [&](const law::Laplace& p) {
                              return x >= 0.0 ? 0.5 * std::exp(-p.rate * x) : 1.0 - 0.5 * std::exp(p.rate * x);
                          },
                          [&](const law::ParetoPositive& p) {
                              return x < 0.0 ? 1.0 : std::pow(1.0 + x / p.scale, -p.index);
                          },
                          [&](const law::LogNormal& p) {
                              return x <= 0.0 ? 1.0
                                              : 0.5 * std::erfc((std::log(x) - p.logMean) / (p.logStdev * sqrt2));
                          },
                      },
                      params_);
}

double JumpLaw::cdf_strict_base(double x) const noexcept
{
    if (auto const* d = std::get_if<law::Deterministic>(&params_))
        return d->c < x ? 1.0 : 0.0;
    return 1.0 - survival_base(x);
}

double JumpLaw::survival(double x) const noexcept { return negated_ ? cdf_strict_base(-x) : survival_base(x); }

double JumpLaw::cdf_strict(double x) const noexcept { return negated_ ? survival_base(-x) : cdf_strict_base(x); }

// E[(Y - x)+] for the unreflected law.
double JumpLaw::integrated_tail_base(double x) const noexcept
{
    return std::visit(
        overloaded{
            [&](const law::Deterministic& p) { return std::max(p.c - x, 0.0); },
            [&](const law::Gaussian& p) {
                double const d = (p.mean - x) / p.stdev;
                return (p.mean - x) * norm_cdf(d) + p.stdev * norm_pdf(d);
            },
            [&](const law::ExpPositive& p) { return x >= 0.0 ? std::exp(-p.rate * x) / p.rate : 1.0 / p.rate - x; },
            [&](const law::ExpNegative& p) { return x >= 0.0 ? 0.0 : -x + std::expm1(p.rate * x) / p.rate; },
            [&](const law::Laplace& p) {
                return x >= 0.0 ? std::exp(-p.rate * x) / (2.0 * p.rate) : -x + std::exp(p.rate * x) / (2.0 * p.rate);
            },
            [&](const law::ParetoPositive& p) {
                if (p.index <= 1.0)
                    return inf;
                double const g0 = p.scale / (p.index - 1.0);
                return x >= 0.0 ? g0 * std::pow(1.0 + x / p.scale, 1.0 - p.index) : g0 - x;
            },
            [&](const law::LogNormal& p) {
                double const m = std::exp(p.logMean + 0.5 * p.logStdev * p.logStdev);
                if (x <= 0.0)
                    return m - x;
                double const lx = std::log(x);
                double const s = p.logStdev;
                return m * norm_cdf((p.logMean + s * s - lx) / s) - x * norm_cdf((p.logMean - lx) / s);
            },
        },
        params_);
}

// E[(a - Y)+] for the unreflected law.
double JumpLaw::integrated_head_base(double a) const noexcept
{
    return std::visit(
        overloaded{
            [&](const law::Deterministic& p) { return std::max(a - p.c, 0.0); },
            [&](const law::Gaussian& p) {
                double const d = (a - p.mean) / p.stdev;
                return (a - p.mean) * norm_cdf(d) + p.stdev * norm_pdf(d);
            },
            [&](const law::ExpPositive& p) { return a <= 0.0 ? 0.0 : a + std::expm1(-p.rate * a) / p.rate; },
            [&](const law::ExpNegative& p) { return a >= 0.0 ? a + 1.0 / p.rate : std::exp(p.rate * a) / p.rate; },
            [&](const law::Laplace&) { return integrated_tail_base(-a); },
            [&](const law::ParetoPositive& p) {
                return a <= 0.0 ? 0.0 : a - pareto_head_integral(p.index, p.scale, a);
            },
            [&](const law::LogNormal& p) {
                if (a <= 0.0)
                    return 0.0;
                double const la = std::log(a);
                double const s = p.logStdev;
                double const m = std::exp(p.logMean + 0.5 * s * s);
                return a * norm_cdf((la - p.logMean) / s) - m * norm_cdf((la - p.logMean - s * s) / s);
            },
        },
        params_);
}

double JumpLaw::integrated_tail(double x) const noexcept
{
    return negated_ ? integrated_head_base(-x) : integrated_tail_base(x);
}

double JumpLaw::sample_base(RandomStream& rng) const noexcept
{
    return std::visit(overloaded{
                          [&](const law::Deterministic& p) { return p.c; },
                          [&](const law::Gaussian& p) { return p.mean + p.stdev * rng.normal(); },
                          [&](const law::ExpPositive& p) { return rng.exponential(p.rate); },
                          [&](const law::ExpNegative& p) { return -rng.exponential(p.rate); },
                          [&](const law::Laplace& p) {
                              double const e = rng.exponential(p.rate);
                              return (rng.next_u64() >> 63) ? e : -e;
                          },
                          [&](const law::ParetoPositive& p) {
                              return p.scale * std::expm1(-std::log(rng.uniform()) / p.index);
                          },
                          [&](const law::LogNormal& p) { return std::exp(p.logMean + p.logStdev * rng.normal()); },
                      },
                      params_);
}

std::string JumpLaw::describe() const
{
    std::string body = std::visit(
        overloaded{
            [](const law::Deterministic& p) { return "c=" + fmt(p.c); },
            [](const law::Gaussian& p) { return "mean=" + fmt(p.mean) + ", stdev=" + fmt(p.stdev); },
            [](const law::ExpPositive& p) { return "rate=" + fmt(p.rate); },
            [](const law::ExpNegative& p) { return "rate=" + fmt(p.rate); },
            [](const law::Laplace& p) { return "rate=" + fmt(p.rate); },
            [](const law::ParetoPositive& p) { return "index=" + fmt(p.index) + ", scale=" + fmt(p.scale); },
            [](const law::LogNormal& p) { return "logMean=" + fmt(p.logMean) + ", logStdev=" + fmt(p.logStdev); },
        },
        params_);
    return (negated_ ? "-" : "") + std::string(to_string(kind())) + "(" + body + ")";
}

bool operator==(const JumpLaw& a, const JumpLaw& b) noexcept
{
    return a.negated_ == b.negated_ && a.params_ == b.params_;
}

}  // namespace mapfunc
