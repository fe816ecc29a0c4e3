#include "klein/scatter.hpp"

#include <cmath>

namespace klein {

namespace {

Spinor2 left_incident(const Kinematics& kin, double x) {
    const double n = 1.0 / std::sqrt(1.0 + kin.alpha * kin.alpha);
    const cplx ph = std::exp(I * kin.k * x);
    return {n * ph, I * kin.alpha * n * ph};
}

Spinor2 left_reflected(const Kinematics& kin, double x) {
    const double n = 1.0 / std::sqrt(1.0 + kin.alpha * kin.alpha);
    const cplx ph = std::exp(-I * kin.k * x);
    return {n * ph, -I * kin.alpha * n * ph};
}

// Negative-energy channel under the step. e^{-ipx} travels in +x for
// negative energy; e^{+ipx} in -x.
Spinor2 right_minus(const OscillatoryMode& mode, double x) {
    const double n = 1.0 / std::sqrt(1.0 + mode.beta * mode.beta);
    const cplx ph = std::exp(-I * mode.p * x);
    return {-I * mode.beta * n * ph, n * ph};
}

Spinor2 right_plus(const OscillatoryMode& mode, double x) {
    const double n = 1.0 / std::sqrt(1.0 + mode.beta * mode.beta);
    const cplx ph = std::exp(I * mode.p * x);
    return {I * mode.beta * n * ph, n * ph};
}

StepAmplitudes klein_amplitudes(const Kinematics& kin) {
    const double a = kin.alpha;
    const double b = kin.klein_mode().beta;
    const double ab = a * b;

    StepAmplitudes s;
    s.A = cplx{(ab - 1.0) / (ab + 1.0), 0.0};
    s.B = (2.0 * I * a / (ab + 1.0)) * std::sqrt((1.0 + b * b) / (1.0 + a * a));
    s.C = s.A;
    s.D = (2.0 * I * b / (ab + 1.0)) * std::sqrt((1.0 + a * a) / (1.0 + b * b));
    s.R = s.A;
    s.T = s.B * std::sqrt((b / a) * (1.0 + a * a) / (1.0 + b * b));
    s.R_virt = s.C;
    s.T_virt = s.D * std::sqrt((a / b) * (1.0 + b * b) / (1.0 + a * a));
    return s;
}

Kinematics require_zone(const PhysParams& params, double E, EnergyZone want,
                        const char* who) {
    const EnergyZone zone = classify_zone(params, E);
    if (zone == EnergyZone::SubThreshold)
        throw SubThresholdError(std::string(who) + ": E <= m has no incident channel");
    if (zone != want)
        throw WrongZoneError(std::string(who) + ": E is in the " +
                             zone_name(zone) + " zone");
    return kinematics(params, E);
}

} // namespace

ScatterSolution solve_traditional(const PhysParams& params, double E) {
    Kinematics kin = require_zone(params, E, EnergyZone::Klein, "solve_traditional");
    return {params, E, EnergyZone::Klein, kin, Family::Traditional,
            klein_amplitudes(kin)};
}

ScatterSolution solve_virtual(const PhysParams& params, double E) {
    Kinematics kin = require_zone(params, E, EnergyZone::Klein, "solve_virtual");
    return {params, E, EnergyZone::Klein, kin, Family::Virtual,
            klein_amplitudes(kin)};
}

ScatterSolution solve_combined(const PhysParams& params, double E,
                               std::optional<cplx> weight) {
    Kinematics kin = require_zone(params, E, EnergyZone::Klein, "solve_combined");
    ScatterSolution sol{params, E, EnergyZone::Klein, kin, Family::Combined,
                        klein_amplitudes(kin)};
    if (weight) {
        sol.combine_weight = *weight;
    } else {
        // |A + w D| = 1 with w real positive: total reflection on the left.
        const double a = kin.alpha;
        const double b = kin.klein_mode().beta;
        sol.combine_weight = std::sqrt((a / b) * (1.0 + b * b) / (1.0 + a * a));
    }
    return sol;
}

ScatterSolution solve_evanescent(const PhysParams& params, double E) {
    Kinematics kin = require_zone(params, E, EnergyZone::Evanescent, "solve_evanescent");
    const double a = kin.alpha;
    const double kappa = kin.evanescent_mode().kappa;
    const double ratio = -kappa / (E - params.V + params.m);

    // Matching (1 + A) = (i a / ratio) (1 - A) gives a pure phase A.
    const cplx s = -I * ratio / a;
    EvanescentAmps amps;
    amps.A = (1.0 - s) / (1.0 + s);
    amps.kappa = kappa;
    amps.ratio = ratio;
    amps.decay = (1.0 + amps.A) / std::sqrt(1.0 + a * a);
    return {params, E, EnergyZone::Evanescent, kin, Family::Traditional, amps};
}

ScatterSolution solve_overbarrier(const PhysParams& params, double E) {
    Kinematics kin = require_zone(params, E, EnergyZone::OverBarrier, "solve_overbarrier");
    const double a = kin.alpha;
    const double ap = kin.overbarrier_mode().alpha_p;

    OverBarrierAmps amps;
    amps.A = cplx{(a - ap) / (a + ap), 0.0};
    amps.B = (1.0 + amps.A) * std::sqrt((1.0 + ap * ap) / (1.0 + a * a));
    amps.R = amps.A;
    amps.T = amps.B * std::sqrt((ap / a) * (1.0 + a * a) / (1.0 + ap * ap));
    return {params, E, EnergyZone::OverBarrier, kin, Family::Traditional, amps};
}

ScatterSolution solve_auto(const PhysParams& params, double E) {
    switch (classify_zone(params, E)) {
    case EnergyZone::Klein: return solve_traditional(params, E);
    case EnergyZone::Evanescent: return solve_evanescent(params, E);
    case EnergyZone::OverBarrier: return solve_overbarrier(params, E);
    default:
        throw SubThresholdError("solve_auto: E <= m has no incident channel");
    }
}

Spinor2 ScatterSolution::field(double x) const {
    if (zone == EnergyZone::Klein) {
        const auto& s = step_amps();
        const auto& mode = kin.klein_mode();
        Spinor2 psi{};
        if (family == Family::Traditional || family == Family::Combined) {
            if (x < 0.0)
                psi += left_incident(kin, x) + s.A * left_reflected(kin, x);
            else
                psi += s.B * right_minus(mode, x);
        }
        if (family == Family::Virtual || family == Family::Combined) {
            const cplx w = (family == Family::Virtual) ? cplx{1.0, 0.0} : combine_weight;
            if (x < 0.0)
                psi += (w * s.D) * left_reflected(kin, x);
            else
                psi += w * (right_plus(mode, x) + s.C * right_minus(mode, x));
        }
        return psi;
    }
    if (zone == EnergyZone::Evanescent) {
        const auto& e = evanescent_amps();
        if (x < 0.0)
            return left_incident(kin, x) + e.A * left_reflected(kin, x);
        const cplx amp = e.decay * std::exp(-e.kappa * x);
        return {amp, e.ratio * amp};
    }
    // over-barrier
    const auto& o = overbarrier_amps();
    if (x < 0.0)
        return left_incident(kin, x) + o.A * left_reflected(kin, x);
    const auto& mode = kin.overbarrier_mode();
    const double n = 1.0 / std::sqrt(1.0 + mode.alpha_p * mode.alpha_p);
    const cplx ph = std::exp(I * mode.kp * x);
    return {o.B * n * ph, o.B * I * mode.alpha_p * n * ph};
}

Spinor2 evaluate_field(const ScatterSolution& sol, double x) { return sol.field(x); }

double current_density(const Spinor2& psi) {
    return 2.0 * std::imag(std::conj(psi.upper) * psi.lower);
}

UnitarityReport unitarity_report(const PhysParams& params, double E) {
    const StepAmplitudes s = solve_traditional(params, E).step_amps();
    const StepAmplitudes v = solve_virtual(params, E).step_amps();
    return {std::norm(s.R) + std::norm(v.T_virt),
            std::norm(v.R_virt) + std::norm(s.T),
            std::abs(s.A - v.C)};
}

// ---------------------------------------------------------------------------
// Square barrier via 2x2 transfer matrices.

namespace {

struct Mat2c {
    cplx a, b, c, d; // row-major

    Mat2c operator*(const Mat2c& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    cplx det() const { return a * d - b * c; }
    Mat2c inverse() const {
        const cplx dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
};

// Columns are the two basis solutions of the uniform-potential system at
// position x: column 0 is the physical outgoing/transmitted mode (+x mover,
// or the decaying exponential), column 1 the complementary one.
Mat2c basis_at(double m, double Vr, double E, double x) {
    const double Er = E - Vr;
    if (Er > m) { // positive-energy oscillatory
        const double k = std::sqrt(Er * Er - m * m);
        const double al = std::sqrt((Er - m) / (Er + m));
        const double n = 1.0 / std::sqrt(1.0 + al * al);
        const cplx f = std::exp(I * k * x);
        return {n * f, n / f, I * al * n * f, -I * al * n / f};
    }
    if (Er < -m) { // negative-energy oscillatory (Klein interior)
        const double p = std::sqrt(Er * Er - m * m);
        const double be = std::sqrt((-Er - m) / (-Er + m));
        const double n = 1.0 / std::sqrt(1.0 + be * be);
        const cplx f = std::exp(-I * p * x);
        return {-I * be * n * f, I * be * n / f, n * f, n / f};
    }
    // evanescent interior
    const double kappa = std::sqrt(m * m - Er * Er);
    const double r = kappa / (Er + m);
    const double fd = std::exp(-kappa * x);
    return {cplx{fd, 0.0}, cplx{1.0 / fd, 0.0},
            cplx{-r * fd, 0.0}, cplx{r / fd, 0.0}};
}

} // namespace

BarrierAmplitudes square_barrier(const PhysParams& params, double L, double E) {
    if (!(L > 0.0) || !std::isfinite(L))
        throw NonpositiveWidthError("square_barrier: L must be positive");
    const EnergyZone zone = classify_zone(params, E); // throws at branch points
    if (zone == EnergyZone::SubThreshold)
        throw SubThresholdError("square_barrier: E <= m has no incident channel");

    const double m = params.m;
    const double V = params.V;

    const Mat2c wl = basis_at(m, 0.0, E, 0.0);
    const Mat2c wm0 = basis_at(m, V, E, 0.0);
    const Mat2c wmL = basis_at(m, V, E, L);
    const Mat2c wr = basis_at(m, 0.0, E, L);

    const Mat2c M = wl.inverse() * wm0 * wmL.inverse() * wr;

    BarrierAmplitudes out;
    out.T = 1.0 / M.a;
    out.R = M.c / M.a;
    out.transfer_det = M.det();
    return out;
}

} // namespace klein
