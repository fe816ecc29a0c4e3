#pragma once

#include <array>
#include <optional>
#include <vector>

#include "klein/core.hpp"

namespace klein {

// Smooth potential profile used as the brute-force reference: a Sauter
// step V0/(1 + e^(-x/a)), or two opposed Sauter edges forming a barrier
// of length L. Tends to the sharp profile as a -> 0.
struct SmoothProfile {
    double V0;
    double a;
    std::optional<double> barrier_length; // nullopt: single step

    static SmoothProfile sauter_step(double V0, double a);
    static SmoothProfile smoothed_barrier(double V0, double a, double L);

    double operator()(double x) const;
    double right_asymptote() const { return barrier_length ? 0.0 : V0; }
};

// Fundamental system of the first-order Dirac equation integrated across
// the profile. Column 0 starts as the incident spinor at x_left, column 1
// as the reflected one.
struct OdeSolution {
    std::vector<double> grid;
    std::vector<std::array<Spinor2, 2>> columns;
    double E = 0.0;
    double m = 0.0;
    SmoothProfile profile{0.0, 0.0, std::nullopt};
};

// Adaptive integration of the two-component linear system
//   d(psi+)/dx = (E + m - V(x)) psi-,  d(psi-)/dx = (m + V(x) - E) psi+
// from two independent initial conditions.
OdeSolution integrate_dirac(double m, const SmoothProfile& profile, double E,
                            double x_left, double x_right, double tol);

struct ExtractedAmps {
    cplx R;        // reflection amplitude in the Eq.-(4)-style left basis
    double T_flux; // flux-normalized transmission probability
    double defect; // |1 - |R|^2 - T_flux|
};

// Project the integrated solution onto the asymptotic mode bases at both
// ends and solve the scattering boundary conditions.
ExtractedAmps extract_amplitudes(const OdeSolution& sol);

struct SharpLimit {
    cplx R0;         // reflection amplitude extrapolated to a -> 0
    double T_flux0;  // transmission probability extrapolated to a -> 0
    double order;    // fitted convergence order q of R(a) = R0 + c a^q
    double residual; // consistency defect of the power-law fit
};

// Run the oracle for each smoothing width in a_sequence (strictly
// decreasing, >= 3 entries) and extrapolate to the sharp profile.
SharpLimit sharp_limit(const PhysParams& params, double E,
                       const std::vector<double>& a_sequence,
                       std::optional<double> barrier_length = std::nullopt,
                       double tol = 1e-10);

// Asymptotic half-width used for a given smoothing width and energy.
double asymptotic_cutoff(const PhysParams& params, double E, double a);

} // namespace klein
