#include "mapfunc/map_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <tuple>

#include "mapfunc/error.hpp"

namespace mapfunc {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();

bool identically_zero(const LevyLaw& l) noexcept
{
    return l.drift == 0.0 && l.gaussianSigma == 0.0 && (!l.has_jumps() || l.cppJump.is_zero());
}
}  // namespace

std::string_view to_string(State s) noexcept { return s == State::Plus ? "+" : "-"; }

MapModel::MapModel(const ModelParams& params) : p_(params)
{
    auto positive = [](double v, const char* what) {
        require(std::isfinite(v) && v > 0.0, ErrorCode::InvalidArgument, std::string(what) + " must be positive");
    };
    positive(p_.qPlus, "qPlus");
    positive(p_.qMinus, "qMinus");
    require(std::isfinite(p_.killing) && p_.killing >= 0.0, ErrorCode::InvalidArgument,
            "killing must be nonnegative");
    require(std::isfinite(p_.startValue) && p_.startValue != 0.0, ErrorCode::InvalidArgument,
            "startValue must be nonzero");
    p_.levyPlus.validate();
    p_.levyMinus.validate();
}

int Drift::sign() const noexcept
{
    switch (kind) {
        case Kind::PlusInfinity: return 1;
        case Kind::MinusInfinity: return -1;
        case Kind::Undefined: return 0;
        case Kind::Finite: return value > 0.0 ? 1 : (value < 0.0 ? -1 : 0);
    }
    return 0;
}

std::string Drift::describe() const
{
    switch (kind) {
        case Kind::PlusInfinity: return "+inf";
        case Kind::MinusInfinity: return "-inf";
        case Kind::Undefined: return "undefined";
        case Kind::Finite: break;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

Drift mean_xi_t2(const MapModel& model) noexcept
{
    auto const& p = model.params();
    bool const pos_inf = p.levyPlus.positive_part_mean_infinite() || p.levyMinus.positive_part_mean_infinite()
                         || p.uPlus.positive_part_mean_infinite() || p.uMinus.positive_part_mean_infinite();
    bool const neg_inf = p.levyPlus.negative_part_mean_infinite() || p.levyMinus.negative_part_mean_infinite()
                         || p.uPlus.negative_part_mean_infinite() || p.uMinus.negative_part_mean_infinite();
    if (pos_inf && neg_inf)
        return {Drift::Kind::Undefined, std::numeric_limits<double>::quiet_NaN()};
    if (pos_inf)
        return {Drift::Kind::PlusInfinity, inf};
    if (neg_inf)
        return {Drift::Kind::MinusInfinity, -inf};
    double const m = p.levyPlus.mean() / p.qPlus + p.uPlus.mean() + p.levyMinus.mean() / p.qMinus + p.uMinus.mean();
    return {Drift::Kind::Finite, m};
}

Drift drift_K(const MapModel& model) noexcept
{
    Drift d = mean_xi_t2(model);
    if (d.finite()) {
        auto const& p = model.params();
        double const qs = p.qPlus + p.qMinus;
        d.value = p.qMinus / qs * (p.levyPlus.mean() + p.qPlus * p.uPlus.mean())
                  + p.qPlus / qs * (p.levyMinus.mean() + p.qMinus * p.uMinus.mean());
    }
    return d;
}

bool is_degenerate(const MapModel& model) noexcept
{
    auto const& p = model.params();
    if (p.killing > 0.0)
        return true;
    if (!identically_zero(p.levyPlus) || !identically_zero(p.levyMinus))
        return false;
    auto const* up = std::get_if<law::Deterministic>(&p.uPlus.params());
    auto const* um = std::get_if<law::Deterministic>(&p.uMinus.params());
    if (!up || !um)
        return false;
    double const cp = p.uPlus.is_negated() ? -up->c : up->c;
    double const cm = p.uMinus.is_negated() ? -um->c : um->c;
    return cp == -cm;
}

std::optional<double> laplace_exponent(const LevyLaw& levy, double z) { return levy.laplace_exponent(z); }

std::optional<double> mgf(const JumpLaw& law, double z) { return law.mgf(z); }

std::pair<double, double> eigenvalues(const Matrix2& m) noexcept
{
    double const a = m[0][0], b = m[0][1], c = m[1][0], d = m[1][1];
    double const half_tr = 0.5 * (a + d);
    double const half_diff = 0.5 * (a - d);
    double const s = std::sqrt(half_diff * half_diff + b * c);
    double const det = a * d - b * c;
    // Compute the larger-magnitude root directly and recover the other from det.
    if (half_tr < 0.0) {
        double const mu = half_tr - s;
        double lambda = det / mu;
        if (lambda == 0.0)
            lambda = 0.0;  // drop the sign of zero
        return {lambda, mu};
    }
    double const lambda = half_tr + s;
    double const mu = lambda != 0.0 ? det / lambda : -s;
    return {lambda, mu};
}

MgfDomain matrix_exponent_domain(const MapModel& model) noexcept
{
    auto const& p = model.params();
    MgfDomain const doms[] = {p.levyPlus.domain(), p.levyMinus.domain(), p.uPlus.mgf_domain(), p.uMinus.mgf_domain()};
    MgfDomain out{-inf, inf};
    for (auto const& d : doms) {
        out.lo = std::max(out.lo, d.lo);
        out.hi = std::min(out.hi, d.hi);
    }
    return out;
}

std::optional<MatrixExponent> matrix_exponent(const MapModel& model, double z)
{
    require(model.killing() == 0.0, ErrorCode::KillingUnsupported, "matrix exponent requires killing q = 0");
    auto const& p = model.params();
    auto const psi_p = p.levyPlus.laplace_exponent(z);
    auto const psi_m = p.levyMinus.laplace_exponent(z);
    auto const g_p = p.uPlus.mgf(z);
    auto const g_m = p.uMinus.mgf(z);
    if (!psi_p || !psi_m || !g_p || !g_m)
        return std::nullopt;
    MatrixExponent f;
    f.z = z;
    f.entries = {{{*psi_p - p.qPlus, p.qPlus * *g_p}, {p.qMinus * *g_m, *psi_m - p.qMinus}}};
    std::tie(f.leading, f.trailing) = eigenvalues(f.entries);
    return f;
}

std::optional<double> leading_eigenvalue(const MapModel& model, double z)
{
    auto const f = matrix_exponent(model, z);
    if (!f)
        return std::nullopt;
    return f->leading;
}

std::optional<Matrix2> semigroup(const MapModel& model, double t, double z)
{
    require(t >= 0.0 && std::isfinite(t), ErrorCode::InvalidArgument, "t must be finite and nonnegative");
    auto const f = matrix_exponent(model, z);
    if (!f)
        return std::nullopt;
    if (t == 0.0)
        return Matrix2{{{1.0, 0.0}, {0.0, 1.0}}};
    double const l = f->leading, m = f->trailing;
    // Sylvester form; lambda > mu strictly since BC > 0.
    double const el = std::exp(l * t), em = std::exp(m * t);
    double const inv = 1.0 / (l - m);
    Matrix2 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            double const fij = f->entries[i][j];
            double const id = i == j ? 1.0 : 0.0;
            out[i][j] = (el * (fij - m * id) - em * (fij - l * id)) * inv;
        }
    }
    return out;
}

std::optional<double> semigroup_entry(const MapModel& model, double t, double z, State from, State to)
{
    auto const s = semigroup(model, t, z);
    if (!s)
        return std::nullopt;
    return (*s)[index(from)][index(to)];
}

}  // namespace mapfunc
