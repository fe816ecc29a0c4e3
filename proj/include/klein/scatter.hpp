#pragma once

#include <optional>
#include <variant>

#include "klein/core.hpp"

namespace klein {

// Klein-zone step amplitudes. A, B come from matching the traditional
// solution at x = 0; C, D from matching the virtual (negative-energy
// incidence) solution. R, T and R_virt, T_virt are the flux-weighted
// reflection/transmission amplitudes of the two families.
struct StepAmplitudes {
    cplx A, B; // traditional: reflected, transmitted
    cplx C, D; // virtual: reflected (to the right), transmitted (to the left)
    cplx R, T;
    cplx R_virt, T_virt;
};

// Evanescent zone: totally reflecting step with a decaying tail.
struct EvanescentAmps {
    cplx A;       // reflected amplitude, |A| = 1
    cplx decay;   // amplitude of the decaying mode at x = 0+
    double kappa; // decay rate
    double ratio; // lower/upper component ratio of the decaying spinor
};

// Over-barrier: positive-energy channels on both sides.
struct OverBarrierAmps {
    cplx A, B; // reflected, transmitted (raw)
    cplx R, T; // flux-weighted
};

enum class Family { Traditional, Virtual, Combined };

// A matched stationary solution of the step problem. Immutable value
// object; field(x) evaluates the exact piecewise plane-wave/evanescent
// form, continuous at x = 0.
struct ScatterSolution {
    PhysParams params;
    double E;
    EnergyZone zone;
    Kinematics kin;
    Family family;
    std::variant<StepAmplitudes, EvanescentAmps, OverBarrierAmps> amps;
    cplx combine_weight{0.0, 0.0}; // weight of the virtual piece (Combined only)

    Spinor2 field(double x) const;

    const StepAmplitudes& step_amps() const { return std::get<StepAmplitudes>(amps); }
    const EvanescentAmps& evanescent_amps() const { return std::get<EvanescentAmps>(amps); }
    const OverBarrierAmps& overbarrier_amps() const { return std::get<OverBarrierAmps>(amps); }
};

// Klein-zone solvers. Both compute the full amplitude set; they differ in
// which field (psi or chi) the solution evaluates.
ScatterSolution solve_traditional(const PhysParams& params, double E);
ScatterSolution solve_virtual(const PhysParams& params, double E);

// psi + w*chi. The default weight nulls the net current in the left
// region, w = |T_virt|/|D| = sqrt(v_left/v_right).
ScatterSolution solve_combined(const PhysParams& params, double E,
                               std::optional<cplx> weight = std::nullopt);

ScatterSolution solve_evanescent(const PhysParams& params, double E);
ScatterSolution solve_overbarrier(const PhysParams& params, double E);

// Dispatch on the zone of E (Traditional family in the Klein zone).
ScatterSolution solve_auto(const PhysParams& params, double E);

Spinor2 evaluate_field(const ScatterSolution& sol, double x);

// Conserved current J = -i psi^dag sigma3 sigma1 psi = 2 Im(conj(psi+) psi-).
double current_density(const Spinor2& psi);

struct UnitarityReport {
    double sum_traditional; // |R|^2 + |T_virt|^2
    double sum_virtual;     // |R_virt|^2 + |T|^2
    double A_eq_C_gap;      // |A - C|
};
UnitarityReport unitarity_report(const PhysParams& params, double E);

// Square barrier of height V on 0 < x < L, free on both sides, solved by
// composing the transfer matrices of the two interfaces.
struct BarrierAmplitudes {
    cplx R, T;
    cplx transfer_det; // determinant of the composed transfer matrix
};
BarrierAmplitudes square_barrier(const PhysParams& params, double L, double E);

} // namespace klein
