#pragma once

// Self-consistent radiation-pressure steady states and their stability.

#include <array>
#include <complex>
#include <vector>

#include "optomech/model.hpp"

namespace om {

enum class Stability { stable, unstable, marginal };
const char* to_string(Stability s);

struct SteadyStateBranch {
    double x_bar;         // static displacement [m]
    double photons;       // |a|^2
    double detuning_eff;  // D - g0 x_bar [rad/s]
    Stability stability;
    bool degenerate;      // part of a (numerically) double root, i.e. at a fold

    bool stable() const { return stability == Stability::stable; }
    OperatingPoint operating_point() const;
};

// F = -hbar g0 |a|^2.
double radiation_force(const CavityParams& cav, double photons);

// All real solutions of
//   m Omega_m^2 x = -hbar g0 n,   n = eta_c kappa |s|^2 / ((D - g0 x)^2 + (kappa/2)^2),
// sorted by x_bar ascending. One or three branches away from folds.
std::vector<SteadyStateBranch> steady_states(const CavityParams& cav, const MechMode& mode,
                                             const Drive& drive);

// Smallest input photon flux [1/s] for which a bistable detuning window exists.
// Infinite when g0 = 0.
double bistability_threshold(const CavityParams& cav, const MechMode& mode);

// Eigenvalues of the linearised (Re da, Im da, dx, dv) dynamics at a branch.
std::array<std::complex<double>, 4> linearized_eigenvalues(const SteadyStateBranch& branch,
                                                           const CavityParams& cav,
                                                           const MechMode& mode);

// Stable when every eigenvalue has negative real part; marginal when the
// largest real part is within 1e-9 of zero relative to max(kappa, Omega_m, |D|).
Stability classify_stability(const SteadyStateBranch& branch, const CavityParams& cav,
                             const MechMode& mode);

}  // namespace om
