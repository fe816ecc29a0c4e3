#pragma once

#include <complex>
#include <variant>

#include "klein/errors.hpp"

namespace klein {

using cplx = std::complex<double>;

inline constexpr cplx I{0.0, 1.0};

// Physical scales of the step problem, natural units (hbar = c = 1).
// A Klein energy zone exists iff V > 2m.
struct PhysParams {
    double m; // rest mass, > 0
    double V; // step height, > 0

    PhysParams(double m_, double V_) : m(m_), V(V_) {
        if (!(m > 0.0) || !std::isfinite(m))
            throw InputError("PhysParams: mass must be positive and finite");
        if (!(V > 0.0) || !std::isfinite(V))
            throw InputError("PhysParams: step height must be positive and finite");
    }

    bool has_klein_zone() const { return V > 2.0 * m; }

    // Energies this close to a channel threshold {m, V-m, V+m} are rejected:
    // the kinematics are non-analytic there.
    double eps_branch() const { return 1e-9 * (m > 1.0 ? m : 1.0); }
};

enum class EnergyZone {
    SubThreshold, // E <= m: no propagating wave on the left
    Klein,        // m < E < V - m (requires V > 2m)
    Evanescent,   // V - m < E < V + m, E > m
    OverBarrier   // E > V + m
};

const char* zone_name(EnergyZone z);

// Two-component spinor value (psi+, psi-). No implicit normalization.
struct Spinor2 {
    cplx upper{0.0, 0.0};
    cplx lower{0.0, 0.0};

    Spinor2& operator+=(const Spinor2& o) {
        upper += o.upper;
        lower += o.lower;
        return *this;
    }
    friend Spinor2 operator+(Spinor2 a, const Spinor2& b) { return a += b; }
    friend Spinor2 operator*(const cplx& c, const Spinor2& s) {
        return {c * s.upper, c * s.lower};
    }
    double norm_sq() const { return std::norm(upper) + std::norm(lower); }
};

// Right-side (x > 0) propagation character, by zone.
struct OscillatoryMode { // Klein zone: propagating negative-energy channel
    double p;    // wavenumber, sqrt((V-E)^2 - m^2)
    double beta; // spinor ratio, sqrt((V-E-m)/(V-E+m))
};
struct EvanescentMode {
    double kappa; // decay rate, sqrt(m^2 - (E-V)^2)
};
struct PositiveOscMode { // over-barrier: positive-energy channel at E-V
    double kp;      // sqrt((E-V)^2 - m^2)
    double alpha_p; // sqrt((E-V-m)/(E-V+m))
};

struct Kinematics {
    double k;     // left wavenumber, sqrt(E^2 - m^2)
    double alpha; // left spinor ratio, sqrt((E-m)/(E+m))
    std::variant<OscillatoryMode, EvanescentMode, PositiveOscMode> right;

    const OscillatoryMode& klein_mode() const { return std::get<OscillatoryMode>(right); }
    const EvanescentMode& evanescent_mode() const { return std::get<EvanescentMode>(right); }
    const PositiveOscMode& overbarrier_mode() const { return std::get<PositiveOscMode>(right); }
};

// Zone classification. Throws BranchPointError when E sits within
// eps_branch of a boundary; SubThreshold energies are returned as a zone
// and rejected by the solvers downstream.
EnergyZone classify_zone(const PhysParams& params, double E);

// Exact kinematic quantities for a scattering energy E > m.
Kinematics kinematics(const PhysParams& params, double E);

// Incident group velocity k/E, which equals the current carried by the
// unit-normalized incident spinor.
double group_velocity(const PhysParams& params, double E);

} // namespace klein
