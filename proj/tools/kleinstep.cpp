// kleinstep: command-line front end for the 1-D Dirac step scattering
// engine. Subcommands: solve, sweep, packet, verify, zones.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "klein/oracle.hpp"
#include "klein/scatter.hpp"
#include "klein/wavepacket.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace klein;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json cplx_json(const cplx& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

// Relative output paths are taken under $KLEIN_OUT_DIR when set.
fs::path resolve_out(const std::string& path) {
    fs::path p(path);
    if (p.is_relative()) {
        if (const char* base = std::getenv("KLEIN_OUT_DIR")) return fs::path(base) / p;
    }
    return p;
}

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p);
    if (!out) throw std::ios_base::failure("cannot open output file: " + p.string());
    return out;
}

json solution_json(const PhysParams& params, double E) {
    const EnergyZone zone = classify_zone(params, E);
    if (zone == EnergyZone::SubThreshold)
        throw SubThresholdError("solve: E <= m has no incident channel");
    const Kinematics kin = kinematics(params, E);

    json j;
    j["m"] = params.m;
    j["V"] = params.V;
    j["E"] = E;
    j["zone"] = zone_name(zone);
    j["k"] = kin.k;
    j["alpha"] = kin.alpha;

    switch (zone) {
    case EnergyZone::Klein: {
        const auto& mode = kin.klein_mode();
        j["p"] = mode.p;
        j["beta"] = mode.beta;
        const StepAmplitudes s = solve_traditional(params, E).step_amps();
        j["A"] = cplx_json(s.A);
        j["B"] = cplx_json(s.B);
        j["C"] = cplx_json(s.C);
        j["D"] = cplx_json(s.D);
        j["R"] = cplx_json(s.R);
        j["T"] = cplx_json(s.T);
        j["R_virt"] = cplx_json(s.R_virt);
        j["T_virt"] = cplx_json(s.T_virt);
        j["R2"] = std::norm(s.R);
        j["T2"] = std::norm(s.T);
        j["Rv2"] = std::norm(s.R_virt);
        j["Tv2"] = std::norm(s.T_virt);
        const UnitarityReport rep = unitarity_report(params, E);
        j["unitarity_defect_traditional"] = std::abs(1.0 - rep.sum_traditional);
        j["unitarity_defect_virtual"] = std::abs(1.0 - rep.sum_virtual);
        j["A_eq_C_gap"] = rep.A_eq_C_gap;
        break;
    }
    case EnergyZone::Evanescent: {
        j["kappa"] = kin.evanescent_mode().kappa;
        const EvanescentAmps e = solve_evanescent(params, E).evanescent_amps();
        j["A"] = cplx_json(e.A);
        j["R"] = cplx_json(e.A);
        j["R2"] = std::norm(e.A);
        j["T2"] = 0.0;
        j["unitarity_defect_traditional"] = std::abs(1.0 - std::norm(e.A));
        break;
    }
    case EnergyZone::OverBarrier: {
        const auto& mode = kin.overbarrier_mode();
        j["kp"] = mode.kp;
        j["alpha_p"] = mode.alpha_p;
        const OverBarrierAmps o = solve_overbarrier(params, E).overbarrier_amps();
        j["A"] = cplx_json(o.A);
        j["B"] = cplx_json(o.B);
        j["R"] = cplx_json(o.R);
        j["T"] = cplx_json(o.T);
        j["R2"] = std::norm(o.R);
        j["T2"] = std::norm(o.T);
        j["unitarity_defect_traditional"] =
            std::abs(1.0 - std::norm(o.R) - std::norm(o.T));
        break;
    }
    default:
        break;
    }
    return j;
}

int cmd_solve(const PhysParams& params, const std::vector<double>& energies,
              const std::string& out_path) {
    json out = json::array();
    for (double E : energies) out.push_back(solution_json(params, E));
    const std::string text = (out.size() == 1 ? out[0] : out).dump(2);
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        auto f = open_out(resolve_out(out_path));
        f << text << "\n";
    }
    return 0;
}

struct SweepRow {
    double E;
    std::string zone;
    double R2 = 0.0, T2 = 0.0;
    std::optional<double> Rv2, Tv2;
    double defect = 0.0;
    double J_left = 0.0, J_right = 0.0;
};

std::vector<SweepRow> run_sweep(const PhysParams& params, double emin, double emax,
                                int n) {
    std::vector<SweepRow> rows;
    for (int i = 0; i < n; ++i) {
        const double E = (n == 1) ? emin : emin + (emax - emin) * i / (n - 1);
        try {
            const EnergyZone zone = classify_zone(params, E);
            if (zone == EnergyZone::SubThreshold) {
                std::cerr << "sweep: skipping E=" << fmt(E) << " (sub-threshold)\n";
                continue;
            }
            SweepRow row;
            row.E = E;
            row.zone = zone_name(zone);
            const ScatterSolution sol = solve_auto(params, E);
            row.J_left = current_density(sol.field(-1.0));
            row.J_right = current_density(sol.field(1.0));
            if (zone == EnergyZone::Klein) {
                const StepAmplitudes& s = sol.step_amps();
                row.R2 = std::norm(s.R);
                row.T2 = std::norm(s.T);
                row.Rv2 = std::norm(s.R_virt);
                row.Tv2 = std::norm(s.T_virt);
                row.defect = std::max(std::abs(1.0 - row.R2 - *row.Tv2),
                                      std::abs(1.0 - *row.Rv2 - row.T2));
            } else if (zone == EnergyZone::Evanescent) {
                row.R2 = std::norm(sol.evanescent_amps().A);
                row.defect = std::abs(1.0 - row.R2);
            } else {
                const OverBarrierAmps& o = sol.overbarrier_amps();
                row.R2 = std::norm(o.R);
                row.T2 = std::norm(o.T);
                row.defect = std::abs(1.0 - row.R2 - row.T2);
            }
            rows.push_back(row);
        } catch (const BranchPointError&) {
            std::cerr << "sweep: skipping E=" << fmt(E) << " (branch point)\n";
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "E,zone,R2,T2,Rv2,Tv2,unitarity_defect,J_left,J_right\n";
    for (const auto& r : rows) {
        out << fmt(r.E) << ',' << r.zone << ',' << fmt(r.R2) << ',' << fmt(r.T2)
            << ',' << (r.Rv2 ? fmt(*r.Rv2) : "") << ','
            << (r.Tv2 ? fmt(*r.Tv2) : "") << ',' << fmt(r.defect) << ','
            << fmt(r.J_left) << ',' << fmt(r.J_right) << '\n';
    }
}

// Minimal line chart of R2 vs E, no plotting dependency.
void write_sweep_svg(std::ostream& out, const std::vector<SweepRow>& rows) {
    const double w = 640.0, h = 480.0, pad = 50.0;
    double emin = rows.front().E, emax = rows.back().E;
    if (emax <= emin) emax = emin + 1.0;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
        << "\" height=\"" << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad
        << "\" y2=\"" << h - pad << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad
        << "\" y2=\"" << h - pad << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\">E</text>\n";
    out << "<text x=\"8\" y=\"" << h / 2 << "\">|R|^2</text>\n";
    out << "<polyline fill=\"none\" stroke=\"steelblue\" points=\"";
    for (const auto& r : rows) {
        const double px = pad + (r.E - emin) / (emax - emin) * (w - 2 * pad);
        const double py = h - pad - r.R2 * (h - 2 * pad);
        out << px << ',' << py << ' ';
    }
    out << "\"/>\n</svg>\n";
}

int cmd_sweep(const PhysParams& params, double emin, double emax, int n,
              const std::string& format, const std::string& out_path) {
    if (n < 2) throw InputError("sweep: need n >= 2");
    if (!(emax > emin)) throw InputError("sweep: emax must exceed emin");
    const auto rows = run_sweep(params, emin, emax, n);
    if (rows.empty()) std::cerr << "sweep: no accepted samples\n";

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file = open_out(resolve_out(out_path));
        out = &file;
    }
    if (format == "svg") {
        if (rows.empty()) throw InputError("sweep: nothing to plot");
        write_sweep_svg(*out, rows);
    } else {
        write_sweep_csv(*out, rows);
    }
    return 0;
}

int cmd_verify(const PhysParams& params, std::vector<double> energies,
               std::vector<double> a_seq, double tol, double threshold) {
    if (energies.empty()) {
        // default: 3 interior points per existing zone
        auto push_interior = [&](double lo, double hi) {
            for (double f : {0.25, 0.5, 0.75}) energies.push_back(lo + f * (hi - lo));
        };
        if (params.has_klein_zone()) push_interior(params.m, params.V - params.m);
        push_interior(params.has_klein_zone() ? params.V - params.m : params.m,
                      params.V + params.m);
        const double top = params.V + params.m;
        for (double off : {0.5, 1.5, 3.0})
            energies.push_back(top + off * std::max(params.m, 1.0));
    }

    std::printf("%-12s %-12s %-24s %-24s %-10s %s\n", "E", "zone", "R_analytic",
                "R_oracle", "order", "gap");
    double max_gap = 0.0;
    bool all_ok = true;
    for (double E : energies) {
        EnergyZone zone;
        try {
            zone = classify_zone(params, E);
        } catch (const BranchPointError&) {
            std::printf("%-12g %-12s rejected (branch point)\n", E, "-");
            continue;
        }
        if (zone == EnergyZone::SubThreshold) {
            std::printf("%-12g %-12s rejected (sub-threshold)\n", E, "-");
            continue;
        }
        cplx analytic;
        switch (zone) {
        case EnergyZone::Klein: analytic = solve_traditional(params, E).step_amps().R; break;
        case EnergyZone::Evanescent: analytic = solve_evanescent(params, E).evanescent_amps().A; break;
        default: analytic = solve_overbarrier(params, E).overbarrier_amps().R; break;
        }
        const SharpLimit lim = sharp_limit(params, E, a_seq, std::nullopt, tol);
        const double gap_mag = std::abs(std::abs(lim.R0) - std::abs(analytic));
        double gap_phase = std::abs(std::arg(lim.R0 * std::conj(analytic)));
        const double gap = std::max(gap_mag, gap_phase);
        max_gap = std::max(max_gap, gap);
        if (gap > threshold) all_ok = false;
        std::printf("%-12g %-12s %-11.6f%+.6fi %-11.6f%+.6fi %-10.3f %.3e\n", E,
                    zone_name(zone), analytic.real(), analytic.imag(),
                    lim.R0.real(), lim.R0.imag(), lim.order, gap);
    }
    std::printf("max gap: %.3e  threshold: %.1e  => %s\n", max_gap, threshold,
                all_ok ? "PASS" : "FAIL");
    return all_ok ? 0 : 2;
}

int cmd_packet(const PhysParams& params, double E0, double sigma, int n,
               std::optional<double> x0, std::optional<double> tmax,
               int snapshots, std::optional<double> xmin_opt,
               std::optional<double> xmax_opt, std::optional<double> dx_opt,
               const std::string& out_dir) {
    const SpectralGrid grid = build_gaussian(params, E0, sigma, n, x0);
    if (grid.zone_straddle)
        std::cerr << "packet: spectrum truncated at a zone boundary (ZoneStraddle)\n";

    double v_min = 1.0, v_max = 0.0, k_max = 0.0, vt_max = 0.0, kap_min = 0.0;
    bool has_right = false, has_tail = false;
    for (std::size_t j = 0; j < grid.energies.size(); ++j) {
        const double E = grid.energies[j];
        const Kinematics kin = kinematics(params, E);
        const double v = kin.k / E;
        v_min = std::min(v_min, v);
        v_max = std::max(v_max, v);
        k_max = std::max(k_max, kin.k);
        if (auto* o = std::get_if<PositiveOscMode>(&kin.right)) {
            has_right = true;
            k_max = std::max(k_max, o->kp);
            vt_max = std::max(vt_max, o->kp / (E - params.V));
        } else if (auto* e = std::get_if<EvanescentMode>(&kin.right)) {
            has_tail = true;
            kap_min = (kap_min == 0.0) ? e->kappa : std::min(kap_min, e->kappa);
        }
    }

    const double k0 = std::sqrt(E0 * E0 - params.m * params.m);
    const double sigma_x = k0 / (2.0 * sigma * E0);
    const double launch = grid.launch_x0;
    const double t_final = tmax ? *tmax : 3.0 * std::abs(launch) / v_min;

    const double xmin = xmin_opt ? *xmin_opt
                                 : -(v_max * t_final + 10.0 * sigma_x);
    double xmax_default = 4.0 * sigma_x;
    if (has_right) xmax_default = vt_max * t_final + 10.0 * sigma_x;
    if (has_tail) xmax_default = std::max(xmax_default, 12.0 / kap_min);
    const double xmax = xmax_opt ? *xmax_opt : xmax_default;
    const double dx = dx_opt ? *dx_opt : std::min(0.25 / k_max, sigma_x / 16.0);

    std::vector<double> x_grid;
    for (double x = xmin; x <= xmax; x += dx) x_grid.push_back(x);

    const fs::path dir = resolve_out(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);

    if (snapshots < 2) snapshots = 2;
    double max_pen = 0.0;
    PacketNorms final_norms{};
    double final_total = 0.0;
    json times = json::array();
    for (int s = 0; s < snapshots; ++s) {
        const double t = t_final * s / (snapshots - 1);
        const PacketState st = evolve(grid, t, x_grid);
        const PacketNorms norms = reflection_and_penetration(st);
        max_pen = std::max(max_pen, norms.pen_prob);
        final_norms = norms;
        final_total = total_norm(st);
        times.push_back(t);

        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%03d.csv", s);
        auto f = open_out(dir / name);
        f << "x,re_upper,im_upper,re_lower,im_lower,density\n";
        for (std::size_t i = 0; i < st.x.size(); ++i) {
            const Spinor2& psi = st.field[i];
            f << fmt(st.x[i]) << ',' << fmt(psi.upper.real()) << ','
              << fmt(psi.upper.imag()) << ',' << fmt(psi.lower.real()) << ','
              << fmt(psi.lower.imag()) << ',' << fmt(psi.norm_sq()) << '\n';
        }
    }

    const ZoneFractions zf = zone_fractions(grid);
    json summary;
    summary["refl_norm"] = final_norms.refl_norm;
    summary["pen_prob"] = final_norms.pen_prob;
    summary["trans_norm"] = final_norms.trans_norm;
    summary["max_pen_prob"] = max_pen;
    summary["total_norm"] = final_total;
    summary["zone_fractions"] = {{"klein", zf.klein},
                                 {"evanescent", zf.evanescent},
                                 {"over_barrier", zf.over_barrier}};
    summary["zone_straddle"] = grid.zone_straddle;
    summary["times"] = times;
    summary["launch_x0"] = launch;
    auto f = open_out(dir / "summary.json");
    f << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_zones(const PhysParams& params, std::optional<double> E) {
    std::cout << "m = " << fmt(params.m) << ", V = " << fmt(params.V) << "\n";
    std::cout << "thresholds: m = " << fmt(params.m);
    if (params.has_klein_zone()) std::cout << ", V-m = " << fmt(params.V - params.m);
    std::cout << ", V+m = " << fmt(params.V + params.m) << "\n";
    if (params.has_klein_zone())
        std::cout << "klein zone: (" << fmt(params.m) << ", "
                  << fmt(params.V - params.m) << ")\n";
    else
        std::cout << "klein zone: none (V <= 2m)\n";
    if (E) std::cout << "E = " << fmt(*E) << " -> " << zone_name(classify_zone(params, *E)) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-D Dirac step-potential scattering engine"};
    app.require_subcommand(1);
    app.fallthrough();

    double m = 1.0; // mass-unit convention: all inputs in units of m
    double V = 4.0;
    app.add_option("--m", m, "rest mass (default 1, the mass-unit convention)");
    app.add_option("--V", V, "step height (default 4)");

    // solve
    auto* solve = app.add_subcommand("solve", "solve the step at one or more energies");
    std::vector<double> energies;
    std::string out_path;
    solve->add_option("--E", energies, "scattering energy(ies)")->required();
    solve->add_option("--out", out_path, "output file (default stdout)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "sweep reflection/transmission over energy");
    double emin = 0.0, emax = 0.0;
    int nsweep = 101;
    std::string format = "csv";
    sweep->add_option("--emin", emin, "lowest energy")->required();
    sweep->add_option("--emax", emax, "highest energy")->required();
    sweep->add_option("--n", nsweep, "number of samples (default 101)");
    sweep->add_option("--format", format, "csv or svg")
        ->check(CLI::IsMember({"csv", "svg"}));
    sweep->add_option("--out", out_path, "output file (default stdout)");

    // packet
    auto* packet = app.add_subcommand("packet", "evolve a Gaussian wave packet");
    double E0 = 2.0, sigma = 0.1;
    int npk = 256, snapshots = 5;
    std::optional<double> x0, tmax, xmin, xmax, dx, Eprobe;
    std::string out_dir = "packet_out";
    packet->add_option("--E0", E0, "packet center energy (default 2)");
    packet->add_option("--sigma", sigma, "energy width (default 0.1)");
    packet->add_option("--n", npk, "spectral samples (default 256)");
    packet->add_option("--x0", x0, "launch center (default 6 widths left of the step)");
    packet->add_option("--t", tmax, "final time (default 3|x0|/v_min)");
    packet->add_option("--snapshots", snapshots, "number of snapshots (default 5)");
    packet->add_option("--xmin", xmin, "left edge of the spatial grid");
    packet->add_option("--xmax", xmax, "right edge of the spatial grid");
    packet->add_option("--dx", dx, "spatial step");
    packet->add_option("--out", out_dir, "output directory (default packet_out)");

    // verify
    auto* verify = app.add_subcommand("verify", "check the solver against the ODE oracle");
    std::vector<double> venergies;
    std::vector<double> a_seq{1e-1, 1e-2, 1e-3};
    double tol = 1e-10, threshold = 1e-4;
    verify->add_option("--E", venergies, "energies (default 9 zone-interior points)");
    verify->add_option("--a-seq", a_seq, "smoothing widths, strictly decreasing");
    verify->add_option("--tol", tol, "ODE tolerance (default 1e-10)");
    verify->add_option("--threshold", threshold, "pass threshold (default 1e-4)");

    // zones
    auto* zones = app.add_subcommand("zones", "print the energy-zone layout");
    zones->add_option("--E", Eprobe, "classify this energy");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const PhysParams params(m, V);
        if (*solve) return cmd_solve(params, energies, out_path);
        if (*sweep) return cmd_sweep(params, emin, emax, nsweep, format, out_path);
        if (*packet)
            return cmd_packet(params, E0, sigma, npk, x0, tmax, snapshots, xmin,
                              xmax, dx, out_dir);
        if (*verify) return cmd_verify(params, venergies, a_seq, tol, threshold);
        if (*zones) return cmd_zones(params, Eprobe);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
