#pragma once

#include <optional>
#include <string>

#include "jump_law.hpp"

namespace mapfunc {

/// Lévy process: drift, Brownian part and compound Poisson jumps.
struct LevyLaw {
    double drift = 0.0;
    double gaussianSigma = 0.0;
    double cppRate = 0.0;
    JumpLaw cppJump;

    void validate() const;

    bool has_jumps() const noexcept { return cppRate > 0.0; }
    bool is_pure_drift() const noexcept { return gaussianSigma == 0.0 && !has_jumps(); }

    //! log E[exp(z X_1)], absent outside the domain.
    std::optional<double> laplace_exponent(double z) const;
    MgfDomain domain() const noexcept;

    //! E[X_1]; may be infinite.
    double mean() const noexcept;
    bool positive_part_mean_infinite() const noexcept;
    bool negative_part_mean_infinite() const noexcept;

    std::string describe() const;

    friend bool operator==(const LevyLaw&, const LevyLaw&) = default;
};

}  // namespace mapfunc
