#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "levy_law.hpp"

namespace mapfunc {

enum class State { Plus, Minus };

constexpr State opposite(State s) noexcept { return s == State::Plus ? State::Minus : State::Plus; }
constexpr double sign(State s) noexcept { return s == State::Plus ? 1.0 : -1.0; }
constexpr int index(State s) noexcept { return s == State::Plus ? 0 : 1; }
std::string_view to_string(State s) noexcept;

struct ModelParams {
    double qPlus = 1.0;
    double qMinus = 1.0;
    double killing = 0.0;
    LevyLaw levyPlus;
    LevyLaw levyMinus;
    JumpLaw uPlus;
    JumpLaw uMinus;
    State startState = State::Plus;
    double startValue = 1.0;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

//---------------------------------------------------------------------------//
/*!
 * \brief Validated two-state Lamperti-Kiu model.
 *
 * The process spends an Exp(q_s) time in state s following the Lévy law of s,
 * then jumps by U_s and switches state. U+ is applied when leaving +.
 */
class MapModel {
  public:
    explicit MapModel(const ModelParams& params);

    const ModelParams& params() const noexcept { return p_; }

    double rate(State s) const noexcept { return s == State::Plus ? p_.qPlus : p_.qMinus; }
    const LevyLaw& levy(State s) const noexcept { return s == State::Plus ? p_.levyPlus : p_.levyMinus; }
    //! Jump applied when leaving state s.
    const JumpLaw& switch_jump(State s) const noexcept { return s == State::Plus ? p_.uPlus : p_.uMinus; }
    double killing() const noexcept { return p_.killing; }
    State start_state() const noexcept { return p_.startState; }
    double start_value() const noexcept { return p_.startValue; }

    //! E[T2] = 1/q+ + 1/q-
    double mean_t2() const noexcept { return 1.0 / p_.qPlus + 1.0 / p_.qMinus; }

  private:
    ModelParams p_;
};

//! Long-run drift K with the infinite and undefined cases tagged.
struct Drift {
    enum class Kind { Finite, PlusInfinity, MinusInfinity, Undefined };
    Kind kind = Kind::Finite;
    double value = 0.0;

    bool finite() const noexcept { return kind == Kind::Finite; }
    bool defined() const noexcept { return kind != Kind::Undefined; }
    //! Sign of K; 0 for K = 0 or undefined.
    int sign() const noexcept;
    std::string describe() const;
};

//! E[xi_{T2}] = E[xi+_1]/q+ + E[U+] + E[xi-_1]/q- + E[U-]; NaN when undefined.
Drift mean_xi_t2(const MapModel& model) noexcept;
Drift drift_K(const MapModel& model) noexcept;
bool is_degenerate(const MapModel& model) noexcept;

//! Laplace exponent of one regime.
std::optional<double> laplace_exponent(const LevyLaw& levy, double z);
std::optional<double> mgf(const JumpLaw& law, double z);

using Matrix2 = std::array<std::array<double, 2>, 2>;

struct MatrixExponent {
    double z = 0.0;
    Matrix2 entries{};
    double leading = 0.0;
    double trailing = 0.0;
};

//! Domain (lo, hi) where F(z) exists: intersection of the four transform domains.
MgfDomain matrix_exponent_domain(const MapModel& model) noexcept;
std::optional<MatrixExponent> matrix_exponent(const MapModel& model, double z);
//! Leading eigenvalue lambda(z), absent outside the domain.
std::optional<double> leading_eigenvalue(const MapModel& model, double z);
std::optional<Matrix2> semigroup(const MapModel& model, double t, double z);
std::optional<double> semigroup_entry(const MapModel& model, double t, double z, State from, State to);

//! Eigenvalues of a real 2x2 matrix with BC >= 0, leading first.
std::pair<double, double> eigenvalues(const Matrix2& m) noexcept;

}  // namespace mapfunc
