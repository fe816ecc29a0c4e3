#include "klein/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "klein/scatter.hpp"

namespace klein {

namespace {

// Zone interval (lo, hi) containing E0.
std::pair<double, double> zone_interval(const PhysParams& params, EnergyZone zone) {
    switch (zone) {
    case EnergyZone::Klein:
        return {params.m, params.V - params.m};
    case EnergyZone::Evanescent:
        return {params.has_klein_zone() ? params.V - params.m : params.m,
                params.V + params.m};
    case EnergyZone::OverBarrier:
        return {params.V + params.m, std::numeric_limits<double>::infinity()};
    default:
        throw SubThresholdError("build_gaussian: packet center below threshold");
    }
}

// Per-energy channel data for the observed-sector stationary state.
struct Channels {
    double k = 0.0, alpha = 0.0;
    cplx refl;            // reflected amplitude (unit modulus except over-barrier)
    // over-barrier transmitted channel
    bool has_trans = false;
    cplx trans;
    double kp = 0.0, alpha_p = 0.0;
    // evanescent tail
    bool has_tail = false;
    cplx tail;
    double kappa = 0.0, ratio = 0.0;
};

Channels make_channels(const PhysParams& params, double E, EnergyZone zone) {
    Channels ch;
    const Kinematics kin = kinematics(params, E);
    ch.k = kin.k;
    ch.alpha = kin.alpha;
    switch (zone) {
    case EnergyZone::Klein: {
        // Observed electron sector of the resolved Klein-zone solution:
        // the traditional reflected beam plus the beam transmitted to the
        // left by the virtual incidence. R real, T_virt imaginary, so the
        // effective reflection R + T_virt has unit modulus.
        const StepAmplitudes s = solve_traditional(params, E).step_amps();
        ch.refl = s.R + s.T_virt;
        break;
    }
    case EnergyZone::Evanescent: {
        const EvanescentAmps e = solve_evanescent(params, E).evanescent_amps();
        ch.refl = e.A;
        ch.has_tail = true;
        ch.tail = e.decay;
        ch.kappa = e.kappa;
        ch.ratio = e.ratio;
        break;
    }
    case EnergyZone::OverBarrier: {
        const OverBarrierAmps o = solve_overbarrier(params, E).overbarrier_amps();
        ch.refl = o.A;
        ch.has_trans = true;
        ch.trans = o.B;
        ch.kp = kin.overbarrier_mode().kp;
        ch.alpha_p = kin.overbarrier_mode().alpha_p;
        break;
    }
    default:
        throw SubThresholdError("evolve: sub-threshold sample");
    }
    return ch;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& f,
                 std::size_t begin, std::size_t end) {
    double s = 0.0;
    for (std::size_t i = begin; i + 1 < end; ++i)
        s += 0.5 * (f[i] + f[i + 1]) * (x[i + 1] - x[i]);
    return s;
}

} // namespace

SpectralGrid build_gaussian(const PhysParams& params, double E0, double sigma_E,
                            int n_samples, std::optional<double> launch_x0) {
    if (n_samples < 16) throw InputError("build_gaussian: need at least 16 samples");
    if (!(sigma_E > 0.0)) throw InputError("build_gaussian: sigma_E must be positive");

    const EnergyZone center_zone = classify_zone(params, E0);
    const auto [lo, hi] = zone_interval(params, center_zone);

    const double margin = 16.0 * params.eps_branch();
    double emin = E0 - 4.0 * sigma_E;
    double emax = E0 + 4.0 * sigma_E;
    bool straddle = false;
    if (emin < lo + margin) {
        emin = lo + margin;
        straddle = true;
    }
    if (emax > hi - margin) {
        emax = hi - margin;
        straddle = true;
    }
    if (!(emax > emin)) throw InputError("build_gaussian: truncated spectrum is empty");

    SpectralGrid grid{params, {}, {}, {}, 0.0, 0.0, false};
    grid.dE = (emax - emin) / (n_samples - 1);
    grid.zone_straddle = straddle;

    if (launch_x0) {
        grid.launch_x0 = *launch_x0;
    } else {
        // default launch: six spatial widths to the left of the step
        const double k0 = std::sqrt(E0 * E0 - params.m * params.m);
        const double sigma_k = sigma_E * E0 / k0;
        grid.launch_x0 = -6.0 / (2.0 * sigma_k);
    }

    double norm = 0.0;
    for (int j = 0; j < n_samples; ++j) {
        const double E = emin + j * grid.dE;
        const double g = (E - E0) / (2.0 * sigma_E);
        const double k = std::sqrt(E * E - params.m * params.m);
        grid.energies.push_back(E);
        grid.weights.push_back(std::exp(-g * g) * std::exp(-I * k * grid.launch_x0));
        grid.zones.push_back(classify_zone(params, E));
        norm += std::norm(grid.weights.back()) * grid.dE;
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& w : grid.weights) w *= scale;
    return grid;
}

PacketState evolve(const SpectralGrid& grid, double t,
                   const std::vector<double>& x_grid) {
    if (x_grid.size() < 2) throw InputError("evolve: x_grid too small");

    PacketState st;
    st.x = x_grid;
    st.t = t;
    st.field.assign(x_grid.size(), Spinor2{});
    st.refl_field.assign(x_grid.size(), Spinor2{});
    st.trans_field.assign(x_grid.size(), Spinor2{});

    for (std::size_t j = 0; j < grid.energies.size(); ++j) {
        const double E = grid.energies[j];
        const Channels ch = make_channels(grid.params, E, grid.zones[j]);

        // energy-normalized measure: 1 / sqrt(2 pi v) with v = k/E
        const double mu = std::sqrt(E / (2.0 * std::numbers::pi * ch.k));
        const cplx coeff = grid.weights[j] * mu * std::exp(-I * E * t) * grid.dE;

        const double nl = 1.0 / std::sqrt(1.0 + ch.alpha * ch.alpha);
        const double np = ch.has_trans
                              ? 1.0 / std::sqrt(1.0 + ch.alpha_p * ch.alpha_p)
                              : 0.0;

        for (std::size_t i = 0; i < x_grid.size(); ++i) {
            const double x = x_grid[i];
            if (x < 0.0) {
                const cplx fin = coeff * nl * std::exp(I * ch.k * x);
                const cplx fre = coeff * ch.refl * nl * std::exp(-I * ch.k * x);
                st.field[i] += Spinor2{fin + fre,
                                       I * ch.alpha * fin - I * ch.alpha * fre};
                st.refl_field[i] += Spinor2{fre, -I * ch.alpha * fre};
            } else if (ch.has_tail) {
                const cplx amp = coeff * ch.tail * std::exp(-ch.kappa * x);
                st.field[i] += Spinor2{amp, ch.ratio * amp};
            } else if (ch.has_trans) {
                const cplx ftr = coeff * ch.trans * np * std::exp(I * ch.kp * x);
                const Spinor2 v{ftr, I * ch.alpha_p * ftr};
                st.field[i] += v;
                st.trans_field[i] += v;
            }
            // Klein zone: no observable field for x > 0
        }
    }

    double spec_norm = 0.0;
    for (const auto& w : grid.weights) spec_norm += std::norm(w) * grid.dE;
    if (total_norm(st) < 0.99 * spec_norm)
        throw GridTooNarrowError("evolve: packet norm leaked off the spatial grid");
    return st;
}

PacketNorms reflection_and_penetration(const PacketState& state) {
    const std::size_t n = state.x.size();
    std::size_t split = 0;
    while (split < n && state.x[split] < 0.0) ++split;

    std::vector<double> dens(n), rdens(n), tdens(n);
    for (std::size_t i = 0; i < n; ++i) {
        dens[i] = state.field[i].norm_sq();
        rdens[i] = state.refl_field[i].norm_sq();
        tdens[i] = state.trans_field[i].norm_sq();
    }
    PacketNorms out;
    out.refl_norm = trapezoid(state.x, rdens, 0, split);
    out.pen_prob = trapezoid(state.x, dens, split == 0 ? 0 : split - 1, n);
    out.trans_norm = trapezoid(state.x, tdens, split == 0 ? 0 : split - 1, n);
    return out;
}

double total_norm(const PacketState& state) {
    std::vector<double> dens(state.x.size());
    for (std::size_t i = 0; i < state.x.size(); ++i)
        dens[i] = state.field[i].norm_sq();
    return trapezoid(state.x, dens, 0, state.x.size());
}

ZoneFractions zone_fractions(const SpectralGrid& grid) {
    ZoneFractions zf;
    for (std::size_t j = 0; j < grid.energies.size(); ++j) {
        const double w = std::norm(grid.weights[j]) * grid.dE;
        switch (grid.zones[j]) {
        case EnergyZone::Klein: zf.klein += w; break;
        case EnergyZone::Evanescent: zf.evanescent += w; break;
        case EnergyZone::OverBarrier: zf.over_barrier += w; break;
        default: break;
        }
    }
    return zf;
}

} // namespace klein
