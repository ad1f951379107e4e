#include "mapfunc/levy_law.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "mapfunc/error.hpp"

namespace mapfunc {

void LevyLaw::validate() const
{
    require(std::isfinite(drift), ErrorCode::InvalidArgument, "drift must be finite");
    require(std::isfinite(gaussianSigma) && gaussianSigma >= 0.0, ErrorCode::InvalidArgument,
            "gaussianSigma must be nonnegative");
    require(std::isfinite(cppRate) && cppRate >= 0.0, ErrorCode::InvalidArgument, "cppRate must be nonnegative");
}

MgfDomain LevyLaw::domain() const noexcept
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    return has_jumps() ? cppJump.mgf_domain() : MgfDomain{-inf, inf};
}

std::optional<double> LevyLaw::laplace_exponent(double z) const
{
    double psi = drift * z + 0.5 * gaussianSigma * gaussianSigma * z * z;
    if (has_jumps()) {
        auto const m = cppJump.mgf(z);
        if (!m)
            return std::nullopt;
        psi += cppRate * (*m - 1.0);
    }
    return psi;
}

double LevyLaw::mean() const noexcept { return has_jumps() ? drift + cppRate * cppJump.mean() : drift; }

bool LevyLaw::positive_part_mean_infinite() const noexcept
{
    return has_jumps() && cppJump.positive_part_mean_infinite();
}

bool LevyLaw::negative_part_mean_infinite() const noexcept
{
    return has_jumps() && cppJump.negative_part_mean_infinite();
}

std::string LevyLaw::describe() const
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "drift=%g sigma=%g cppRate=%g", drift, gaussianSigma, cppRate);
    std::string out = buf;
    if (has_jumps())
        out += " cppJump=" + cppJump.describe();
    return out;
}

}  // namespace mapfunc
