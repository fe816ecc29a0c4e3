// Acceptance harness: one pass/fail line per criterion, each with the
// measured quantities. Runs all criteria without arguments, or a single
// one given as argv[1]. Exit 0 iff everything checked passed.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "klein/oracle.hpp"
#include "klein/scatter.hpp"
#include "klein/wavepacket.hpp"

using namespace klein;
using clock_t_ = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int crit, const char* what, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", crit, what,
                detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double elapsed_s(clock_t_::time_point t0) {
    return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

// ---- criterion 1: reflection extrema ----------------------------------
void criterion1() {
    const auto t0 = clock_t_::now();
    const PhysParams par(1.0, 4.0);

    const double r2_mid = std::norm(solve_traditional(par, 2.0).step_amps().R);
    report(1, "|R(2)|^2 = 1/4", std::abs(r2_mid - 0.25) < 1e-12,
           fmt("|R|^2 = %.17g, defect %.3g", r2_mid, std::abs(r2_mid - 0.25)));

    for (const double E : {1.0 + 1e-6, 3.0 - 1e-6}) {
        const double r2 = std::norm(solve_traditional(par, E).step_amps().R);
        // The leading depletion of |R|^2 near an edge at offset d is
        // 2*sqrt(2 m d / (V - 2m))-ish, ~2e-3 at d = 1e-6, so the squared
        // probability cannot clear 1 - 1e-3 at this offset; the amplitude
        // |R| does. Checked literally on |R|^2; amplitude shown alongside.
        report(1, "edge totality |R|^2 > 1 - 1e-3", r2 > 1.0 - 1e-3,
               fmt("E = %.9g: |R|^2 = %.9f, |R| = %.9f", E, r2, std::sqrt(r2)));
    }
    std::printf("        criterion 1 runtime %.3f s (budget 1 s)\n", elapsed_s(t0));
}

// ---- criterion 2: unitarity sums --------------------------------------
std::vector<std::pair<PhysParams, double>> klein_samples() {
    std::vector<std::pair<PhysParams, double>> out;
    for (const double V : {3.0, 4.0, 10.0}) {
        const PhysParams par(1.0, V);
        const double lo = par.m, hi = V - par.m;
        const int n = 1000;
        for (int i = 0; i < n; ++i) {
            // uniform nodes strictly inside (m, V-m)
            const double E = lo + (hi - lo) * (i + 0.5) / n;
            out.emplace_back(par, E);
        }
    }
    return out;
}

void criterion2() {
    const auto t0 = clock_t_::now();
    double worst_sum = 0.0, worst_gap = 0.0;
    for (const auto& [par, E] : klein_samples()) {
        const UnitarityReport u = unitarity_report(par, E);
        worst_sum = std::max({worst_sum, std::abs(u.sum_traditional - 1.0),
                              std::abs(u.sum_virtual - 1.0)});
        worst_gap = std::max(worst_gap, u.A_eq_C_gap);
    }
    report(2, "unitarity sums within 1e-12", worst_sum < 1e-12,
           fmt("3000 energies, worst |sum - 1| = %.3g", worst_sum));
    report(2, "A = C within 1e-15", worst_gap < 1e-15,
           fmt("worst |A - C| = %.3g", worst_gap));
    const double dt = elapsed_s(t0);
    report(2, "runtime < 1 s", dt < 1.0, fmt("%.3f s", dt));
}

// ---- criterion 3: oracle equivalence ----------------------------------
cplx analytic_R(const PhysParams& par, double E) {
    switch (classify_zone(par, E)) {
    case EnergyZone::Klein: return solve_traditional(par, E).step_amps().R;
    case EnergyZone::Evanescent: return solve_evanescent(par, E).evanescent_amps().A;
    case EnergyZone::OverBarrier: return solve_overbarrier(par, E).overbarrier_amps().R;
    default: throw InputError("analytic_R: sub-threshold energy");
    }
}

void criterion3() {
    const auto t0 = clock_t_::now();
    const PhysParams par(1.0, 4.0);
    const std::vector<double> a_seq{1e-1, 1e-2, 1e-3};
    // 50 energies: 20 Klein, 15 evanescent, 15 over-barrier, zone interiors.
    std::vector<double> energies;
    for (int i = 0; i < 20; ++i) energies.push_back(1.05 + (2.95 - 1.05) * i / 19.0);
    for (int i = 0; i < 15; ++i) energies.push_back(3.05 + (4.95 - 3.05) * i / 14.0);
    for (int i = 0; i < 15; ++i) energies.push_back(5.05 + (9.0 - 5.05) * i / 14.0);

    double worst_mag = 0.0, worst_phase = 0.0, worst_E = 0.0;
    for (const double E : energies) {
        const SharpLimit lim = sharp_limit(par, E, a_seq);
        const cplx exact = analytic_R(par, E);
        const double dmag = std::abs(std::abs(lim.R0) - std::abs(exact));
        double dphase = 0.0;
        if (std::abs(exact) > 1e-8)
            dphase = std::abs(std::arg(lim.R0 * std::conj(exact)));
        if (std::max(dmag, dphase) > std::max(worst_mag, worst_phase)) worst_E = E;
        worst_mag = std::max(worst_mag, dmag);
        worst_phase = std::max(worst_phase, dphase);
    }
    const double dt = elapsed_s(t0);
    report(3, "oracle matches analytic R within 1e-4",
           worst_mag < 1e-4 && worst_phase < 1e-4,
           fmt("50 energies: worst |d|R|| = %.3g, worst dphase = %.3g rad (at E = %.4g)",
               worst_mag, worst_phase, worst_E));
    report(3, "runtime < 2 min", dt < 120.0, fmt("%.1f s", dt));
}

// ---- criterion 4: current continuity ----------------------------------
void criterion4() {
    const auto t0 = clock_t_::now();
    const double xs[] = {-5.0, -1.0, -1e-6, 1e-6, 1.0, 5.0};
    double worst_spread = 0.0, worst_flux = 0.0;
    for (const auto& [par, E] : klein_samples()) {
        const ScatterSolution sol = solve_traditional(par, E);
        double lo = 1e300, hi = -1e300;
        for (const double x : xs) {
            const double j = current_density(sol.field(x));
            lo = std::min(lo, j);
            hi = std::max(hi, j);
        }
        worst_spread = std::max(worst_spread, hi - lo);
        const auto& km = sol.kin.klein_mode();
        const double expected =
            2.0 * km.beta * std::norm(sol.step_amps().B) / (1.0 + km.beta * km.beta);
        worst_flux = std::max(worst_flux, std::abs(hi - expected));
    }
    report(4, "J constant at sample points within 1e-10", worst_spread < 1e-10,
           fmt("3000 solutions, worst spread = %.3g", worst_spread));
    report(4, "J equals 2 beta |B|^2 / (1 + beta^2)", worst_flux < 1e-10,
           fmt("worst defect = %.3g", worst_flux));
    std::printf("        criterion 4 runtime %.3f s\n", elapsed_s(t0));
}

// ---- criterion 5: packet scenarios ------------------------------------
std::vector<double> linspace(double lo, double hi, double dx) {
    std::vector<double> out;
    const int n = static_cast<int>(std::ceil((hi - lo) / dx));
    out.reserve(n + 1);
    for (int i = 0; i <= n; ++i) out.push_back(lo + i * dx);
    return out;
}

void criterion5() {
    const PhysParams par(1.0, 4.0);

    { // Klein packet: total reflection, no penetration
        const auto t0 = clock_t_::now();
        const SpectralGrid grid = build_gaussian(par, 2.0, 0.1, 257);
        const double v = group_velocity(par, 2.0);
        const double tf = 3.0 * std::abs(grid.launch_x0) / v;
        const std::vector<double> xg =
            linspace(grid.launch_x0 - v * tf - 30.0, 8.0, 0.05);
        const PacketState st = evolve(grid, tf, xg);
        const PacketNorms n = reflection_and_penetration(st);
        report(5, "Klein packet: penetration < 1e-3", n.pen_prob < 1e-3,
               fmt("pen = %.3g", n.pen_prob));
        report(5, "Klein packet: reflected norm > 1 - 1e-3", n.refl_norm > 1.0 - 1e-3,
               fmt("refl = %.9f", n.refl_norm));
        const double dt = elapsed_s(t0);
        report(5, "Klein packet runtime < 1 min", dt < 60.0, fmt("%.1f s", dt));
    }

    { // evanescent packet: transient penetration, eventual total reflection
        const auto t0 = clock_t_::now();
        const SpectralGrid grid = build_gaussian(par, 3.5, 0.1, 257);
        const double v = group_velocity(par, 3.5);
        const double tf = 3.0 * std::abs(grid.launch_x0) / v;
        const std::vector<double> xg =
            linspace(grid.launch_x0 - v * tf - 30.0, 12.0, 0.05);
        double max_pen = 0.0;
        PacketNorms last{};
        for (int i = 0; i <= 6; ++i) {
            const PacketState st = evolve(grid, tf * i / 6.0, xg);
            const PacketNorms n = reflection_and_penetration(st);
            max_pen = std::max(max_pen, n.pen_prob);
            last = n;
        }
        report(5, "evanescent packet: max penetration > 1e-2", max_pen > 1e-2,
               fmt("max pen = %.4g", max_pen));
        report(5, "evanescent packet: final reflected norm > 1 - 1e-3",
               last.refl_norm > 1.0 - 1e-3,
               fmt("refl = %.9f, final pen = %.3g", last.refl_norm, last.pen_prob));
        const double dt = elapsed_s(t0);
        report(5, "evanescent packet runtime < 1 min", dt < 60.0, fmt("%.1f s", dt));
    }

    { // over-barrier packet: transmitted norm equals the spectral average of |T'|^2
        const auto t0 = clock_t_::now();
        const SpectralGrid grid = build_gaussian(par, 6.0, 0.1, 257);
        const double v = group_velocity(par, 6.0);
        const double tf = 3.0 * std::abs(grid.launch_x0) / v;
        double expected = 0.0;
        for (std::size_t i = 0; i < grid.energies.size(); ++i) {
            const OverBarrierAmps amp =
                solve_overbarrier(par, grid.energies[i]).overbarrier_amps();
            expected += std::norm(grid.weights[i]) * std::norm(amp.T) * grid.dE;
        }
        const std::vector<double> xg =
            linspace(grid.launch_x0 - v * tf - 30.0, v * tf + 30.0, 0.04);
        const PacketState st = evolve(grid, tf, xg);
        const PacketNorms n = reflection_and_penetration(st);
        report(5, "over-barrier packet: transmitted norm matches <|T'|^2> within 1e-3",
               std::abs(n.trans_norm - expected) < 1e-3,
               fmt("trans = %.6f, <|T'|^2> = %.6f, diff = %.3g", n.trans_norm,
                   expected, std::abs(n.trans_norm - expected)));
        const double dt = elapsed_s(t0);
        report(5, "over-barrier packet runtime < 1 min", dt < 60.0, fmt("%.1f s", dt));
    }
}

// ---- criterion 6: square barrier --------------------------------------
void criterion6() {
    const auto t0 = clock_t_::now();
    const PhysParams par(1.0, 4.0);

    const BarrierAmplitudes thin = square_barrier(par, 1e-6, 2.0);
    report(6, "L = 1e-6 barrier transparent, |T|^2 > 1 - 1e-3",
           std::norm(thin.T) > 1.0 - 1e-3, fmt("|T|^2 = %.9f", std::norm(thin.T)));

    double worst_unit = 0.0, worst_det = 0.0;
    int count = 0;
    for (int il = 0; il < 25; ++il) {
        const double L = 0.05 + 4.0 * il / 24.0;
        for (int ie = 0; ie < 40; ++ie) {
            const double E = 1.05 + (9.0 - 1.05) * ie / 39.0;
            const BarrierAmplitudes b = square_barrier(par, L, E);
            worst_unit = std::max(worst_unit,
                                  std::abs(std::norm(b.R) + std::norm(b.T) - 1.0));
            worst_det = std::max(worst_det, std::abs(std::abs(b.transfer_det) - 1.0));
            ++count;
        }
    }
    report(6, "transfer-matrix unitarity defect < 1e-12 on 1e3 samples",
           worst_unit < 1e-12 && worst_det < 1e-12,
           fmt("%d samples, worst |R^2+T^2-1| = %.3g, worst ||det|-1| = %.3g", count,
               worst_unit, worst_det));

    const std::vector<double> a_seq{2e-2, 2e-3, 2e-4};
    const double spot_L[] = {0.3, 0.3, 0.8, 0.8, 1.5, 1.5, 2.5, 2.5, 1.0, 1.0};
    const double spot_E[] = {1.6, 6.0, 2.2, 5.2, 1.8, 7.0, 2.6, 6.5, 3.5, 4.5};
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const SharpLimit lim = sharp_limit(par, spot_E[i], a_seq, spot_L[i]);
        const BarrierAmplitudes b = square_barrier(par, spot_L[i], spot_E[i]);
        worst = std::max(worst, std::abs(lim.R0 - b.R));
    }
    report(6, "ODE oracle matches transfer matrix within 1e-4 at 10 spot points",
           worst < 1e-4, fmt("worst |dR| = %.3g", worst));
    std::printf("        criterion 6 runtime %.1f s\n", elapsed_s(t0));
}

} // namespace

int main(int argc, char** argv) {
    const int which = argc > 1 ? std::atoi(argv[1]) : 0;
    void (*crit[])() = {criterion1, criterion2, criterion3,
                        criterion4, criterion5, criterion6};
    if (which < 0 || which > 6) {
        std::fprintf(stderr, "usage: %s [1-6]\n", argv[0]);
        return 2;
    }
    try {
        if (which == 0)
            for (auto f : crit) f();
        else
            crit[which - 1]();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
        return 2;
    }
    std::printf("%s\n", failures == 0 ? "ALL CHECKED CRITERIA PASSED"
                                      : "SOME CRITERIA FAILED");
    return failures == 0 ? 0 : 1;
}
