#pragma once

#include <optional>
#include <vector>

#include "klein/core.hpp"

namespace klein {

// Energy spectrum of a packet: complex weights on a uniform energy grid,
// normalized so sum(|w|^2) * dE = 1. Weights carry the launch phase
// e^{-i k(E) x0} that centers the incident lump at x0 at t = 0.
struct SpectralGrid {
    PhysParams params;
    std::vector<double> energies;
    std::vector<cplx> weights;
    std::vector<EnergyZone> zones;
    double dE = 0.0;
    double launch_x0 = 0.0;
    bool zone_straddle = false; // Gaussian crossed a zone boundary and was truncated
};

// Gaussian spectral packet centered at E0 with width sigma_E, truncated
// to the zone interval containing E0 when necessary.
SpectralGrid build_gaussian(const PhysParams& params, double E0, double sigma_E,
                            int n_samples,
                            std::optional<double> launch_x0 = std::nullopt);

// Snapshot of the evolved packet on a spatial grid. Besides the full
// field, the reflected-channel and transmitted-channel partial fields are
// kept for the momentum-resolved diagnostics.
struct PacketState {
    std::vector<double> x;
    double t = 0.0;
    std::vector<Spinor2> field;
    std::vector<Spinor2> refl_field;  // reflected channel, x < 0
    std::vector<Spinor2> trans_field; // propagating transmitted channel, x > 0
};

// Spectral superposition of the stationary scattering states,
// field(x,t) = sum_j w_j e^{-i E_j t} u_j(x) dE with u_j the
// energy-normalized state at E_j. Trapezoid quadrature in space.
PacketState evolve(const SpectralGrid& grid, double t,
                   const std::vector<double>& x_grid);

struct PacketNorms {
    double refl_norm;  // left-moving norm at x < 0
    double pen_prob;   // total norm at x > 0
    double trans_norm; // propagating right-side norm
};
PacketNorms reflection_and_penetration(const PacketState& state);

double total_norm(const PacketState& state);

// Spectral-weight fraction per zone (diagnostic for straddling packets).
struct ZoneFractions {
    double klein = 0.0;
    double evanescent = 0.0;
    double over_barrier = 0.0;
};
ZoneFractions zone_fractions(const SpectralGrid& grid);

} // namespace klein
