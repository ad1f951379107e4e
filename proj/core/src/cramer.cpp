#include "mapfunc/cramer.hpp"

#include <algorithm>
#include <cmath>

#include "mapfunc/error.hpp"

namespace mapfunc {

namespace {

constexpr double z_cap = 1e6;

bool has_density(const JumpLaw& j) noexcept { return !j.is_deterministic(); }

double curve_value(std::span<const double> sorted, double t, double kappa, bool negate)
{
    double s;
    if (!negate) {
        s = survival_sorted(sorted, t);
    } else {
        auto const it = std::lower_bound(sorted.begin(), sorted.end(), -t);
        s = static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
    }
    return std::pow(t, kappa) * s;
}

double median_curve(std::span<const double> sorted, const std::vector<double>& grid, double kappa, bool negate)
{
    std::vector<double> f(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        f[k] = curve_value(sorted, grid[k], kappa, negate);
    return median(std::move(f));
}

}  // namespace

std::string_view to_string(CramerRoot::Status s) noexcept
{
    switch (s) {
        case CramerRoot::Status::Found: return "Found";
        case CramerRoot::Status::NoRoot: return "NoRoot";
        case CramerRoot::Status::DomainTooSmall: return "DomainTooSmall";
    }
    return "Unknown";
}

CramerRoot find_cramer_root(const MapModel& model, double tol)
{
    auto const k = drift_K(model);
    require(k.defined(), ErrorCode::PositiveDrift, "K is undefined; the Cramér root needs K < 0");
    require(k.sign() < 0, ErrorCode::PositiveDrift, "the Cramér root needs K < 0, got K = " + k.describe());
    require(tol > 0.0, ErrorCode::InvalidArgument, "tol must be positive");

    CramerRoot out;
    auto const dom = matrix_exponent_domain(model);
    double const edge = dom.hi - 2.0 * pole_margin;
    auto eval = [&](double z) {
        auto const l = leading_eigenvalue(model, z);
        double const v = l ? *l : std::numeric_limits<double>::quiet_NaN();
        out.scan.emplace_back(z, v);
        return l;
    };

    if (!(edge > 0.0)) {
        out.status = CramerRoot::Status::DomainTooSmall;
        return out;
    }
    double lo = 0.0;
    double hi = std::min(1.0, 0.5 * edge);
    while (true) {
        auto const l = eval(hi);
        if (!l) {
            out.status = CramerRoot::Status::DomainTooSmall;
            return out;
        }
        if (*l >= 0.0)
            break;
        lo = hi;
        if (hi >= edge) {
            out.status = CramerRoot::Status::DomainTooSmall;
            return out;
        }
        if (hi >= z_cap) {
            out.status = CramerRoot::Status::NoRoot;
            return out;
        }
        hi = std::isfinite(edge) ? std::min(2.0 * hi, edge) : 2.0 * hi;
    }
    double z = hi;
    double lz = out.scan.back().second;
    for (int it = 0; it < 400 && std::fabs(lz) >= tol; ++it) {
        z = 0.5 * (lo + hi);
        if (z <= lo || z >= hi)
            break;
        lz = *eval(z);
        if (lz < 0.0)
            lo = z;
        else
            hi = z;
    }
    out.status = CramerRoot::Status::Found;
    out.kappa = z;
    out.residual = lz;
    return out;
}

double verify_mean_one(const MapModel& model, double kappa)
{
    auto const& p = model.params();
    auto const psi_p = p.levyPlus.laplace_exponent(kappa);
    auto const psi_m = p.levyMinus.laplace_exponent(kappa);
    auto const g_p = p.uPlus.mgf(kappa);
    auto const g_m = p.uMinus.mgf(kappa);
    require(psi_p && psi_m && g_p && g_m, ErrorCode::SubcriticalityViolated, "transforms undefined at kappa");
    require(*psi_p < p.qPlus && *psi_m < p.qMinus, ErrorCode::SubcriticalityViolated,
            "psi(kappa) must stay below the switching rate");
    double const m = p.qPlus / (p.qPlus - *psi_p) * *g_p * p.qMinus / (p.qMinus - *psi_m) * *g_m;
    return m - 1.0;
}

MomentCondition check_moment_condition(const MapModel& model, double kappa)
{
    auto const& p = model.params();
    for (int k = 1; k <= 40; ++k) {
        double const eps = std::ldexp(1.0, -k);
        double const z = kappa + eps;
        auto const psi_p = p.levyPlus.laplace_exponent(z);
        auto const psi_m = p.levyMinus.laplace_exponent(z);
        if (!psi_p || !psi_m || !p.uPlus.mgf(z) || !p.uMinus.mgf(z))
            continue;
        if (*psi_p < p.qPlus && *psi_m < p.qMinus)
            return {true, eps};
    }
    return {false, 0.0};
}

std::vector<double> tail_window_grid(const SampleSet& samples, const TailConstantOptions& opt)
{
    opt.window.validate();
    require(!samples.empty(), ErrorCode::EmptySample, "tail constant on an empty sample");
    require(opt.points >= 3, ErrorCode::InvalidArgument, "tail window needs at least 3 points");
    double const n = static_cast<double>(samples.count());
    if (opt.window.deep * n < 100.0)
        fail(ErrorCode::WindowTooDeep, "window depth " + std::to_string(opt.window.deep) + " needs at least "
                                           + std::to_string(100.0 / opt.window.deep) + " samples");
    auto const sorted = samples.sorted();
    double const t0 = survival_quantile(sorted, opt.window.shallow);
    double const t1 = survival_quantile(sorted, opt.window.deep);
    require(t0 > 0.0 && t1 > t0, ErrorCode::InvalidArgument, "tail window must lie in the positive range");
    std::vector<double> grid(static_cast<std::size_t>(opt.points));
    double const l0 = std::log(t0), l1 = std::log(t1);
    for (int k = 0; k < opt.points; ++k)
        grid[static_cast<std::size_t>(k)] = std::exp(l0 + (l1 - l0) * k / (opt.points - 1));
    return grid;
}

TailConstantFit estimate_tail_constant_on_grid(const SampleSet& samples, double kappa, const std::vector<double>& grid,
                                               bool negate, const TailConstantOptions& opt)
{
    require(kappa > 0.0, ErrorCode::InvalidArgument, "kappa must be positive");
    require(!samples.empty(), ErrorCode::EmptySample, "tail constant on an empty sample");
    auto const sorted = samples.sorted();
    TailConstantFit fit;
    fit.t = grid;
    fit.curve.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        fit.curve[k] = curve_value(sorted, grid[k], kappa, negate);
    fit.c = median(fit.curve);
    auto const [mn, mx] = std::minmax_element(fit.curve.begin(), fit.curve.end());
    fit.spread = fit.c > 0.0 ? (*mx - *mn) / fit.c : 0.0;

    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (fit.curve[k] > 0.0) {
            lx.push_back(std::log(grid[k]));
            ly.push_back(std::log(fit.curve[k]));
        }
    }
    if (lx.size() >= 3) {
        fit.trendSlope = fit_line(lx, ly).slope;
        fit.nonPlateau = std::fabs(fit.trendSlope) > opt.plateauSlopeTolerance;
    }

    Estimator est = [&](std::span<const double> resample) {
        std::vector<double> s(resample.begin(), resample.end());
        std::sort(s.begin(), s.end());
        return median_curve(s, grid, kappa, negate);
    };
    fit.ci = bootstrap_ci(est, samples, opt.replicates, opt.level, opt.seed, opt.threads);
    return fit;
}

TailConstantFit estimate_tail_constant(const SampleSet& samples, double kappa, const TailConstantOptions& opt)
{
    return estimate_tail_constant_on_grid(samples, kappa, tail_window_grid(samples, opt), false, opt);
}

std::vector<MomentVerdict> moment_explosion_scan(const SampleSet& samples, const std::vector<double>& s_grid)
{
    require(!samples.empty(), ErrorCode::EmptySample, "moment scan on an empty sample");
    std::vector<MomentVerdict> out;
    out.reserve(s_grid.size());
    for (double s : s_grid) {
        require(s > 0.0, ErrorCode::InvalidArgument, "moment orders must be positive");
        double sum = 0.0, mx = 0.0;
        for (double v : samples.values()) {
            double const term = std::pow(std::fabs(v), s);
            sum += term;
            mx = std::max(mx, term);
        }
        MomentVerdict mv;
        mv.s = s;
        mv.moment = sum / static_cast<double>(samples.count());
        mv.maxShare = sum > 0.0 ? mx / sum : 0.0;
        mv.stable = mv.maxShare <= 0.5;
        out.push_back(mv);
    }
    return out;
}

bool lattice_guard(const MapModel& model) noexcept
{
    auto const& p = model.params();
    for (auto const* l : {&p.levyPlus, &p.levyMinus}) {
        if (l->gaussianSigma > 0.0 || l->drift != 0.0)
            return true;
        if (l->has_jumps() && has_density(l->cppJump))
            return true;
    }
    return has_density(p.uPlus) || has_density(p.uMinus);
}

}  // namespace mapfunc
