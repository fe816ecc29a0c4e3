#include "klein/oracle.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>

namespace klein {

namespace {

using state_type = std::array<cplx, 4>; // two spinor columns

double sigmoid(double t) {
    // numerically safe logistic
    if (t > 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

} // namespace

SmoothProfile SmoothProfile::sauter_step(double V0, double a) {
    if (!(a > 0.0)) throw InputError("SmoothProfile: smoothing width must be positive");
    return {V0, a, std::nullopt};
}

SmoothProfile SmoothProfile::smoothed_barrier(double V0, double a, double L) {
    if (!(a > 0.0)) throw InputError("SmoothProfile: smoothing width must be positive");
    if (!(L > 0.0)) throw NonpositiveWidthError("SmoothProfile: barrier length must be positive");
    return {V0, a, L};
}

double SmoothProfile::operator()(double x) const {
    if (!barrier_length) return V0 * sigmoid(x / a);
    return V0 * (sigmoid(x / a) - sigmoid((x - *barrier_length) / a));
}

OdeSolution integrate_dirac(double m, const SmoothProfile& profile, double E,
                            double x_left, double x_right, double tol) {
    if (!(tol > 0.0)) throw InputError("integrate_dirac: tol must be positive");
    if (!(x_left < -10.0 * profile.a))
        throw InputError("integrate_dirac: x_left must clear the smoothing region");
    const double edge = profile.barrier_length ? *profile.barrier_length : 0.0;
    if (!(x_right > edge + 10.0 * profile.a))
        throw InputError("integrate_dirac: x_right must clear the smoothing region");

    const double eps = 1e-9 * (m > 1.0 ? m : 1.0);
    if (std::abs(E - m) < eps)
        throw BranchPointError("integrate_dirac: E at the left channel threshold");
    if (E < m)
        throw SubThresholdError("integrate_dirac: no incident channel for E <= m");
    const double Er = E - profile.right_asymptote();
    if (std::abs(std::abs(Er) - m) < eps)
        throw BranchPointError("integrate_dirac: E at the right channel threshold");

    const double k = std::sqrt(E * E - m * m);
    const double alpha = std::sqrt((E - m) / (E + m));
    const double n = 1.0 / std::sqrt(1.0 + alpha * alpha);

    // columns start as the incident / reflected basis spinors at x_left
    const cplx f = std::exp(I * k * x_left);
    state_type y{n * f, I * alpha * n * f, n / f, -I * alpha * n / f};

    auto rhs = [&](const state_type& s, state_type& ds, double x) {
        const double Vx = profile(x);
        const double cu = E + m - Vx;
        const double cl = m + Vx - E;
        ds[0] = cu * s[1];
        ds[1] = cl * s[0];
        ds[2] = cu * s[3];
        ds[3] = cl * s[2];
    };

    OdeSolution sol;
    sol.E = E;
    sol.m = m;
    sol.profile = profile;

    auto record = [&](double x, const state_type& s) {
        sol.grid.push_back(x);
        sol.columns.push_back({Spinor2{s[0], s[1]}, Spinor2{s[2], s[3]}});
    };

    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<state_type>());

    const double span = x_right - x_left;
    double x = x_left;
    double h = std::min(profile.a / 4.0, span / 64.0);
    record(x, y);
    while (x < x_right) {
        if (x + h > x_right) h = x_right - x;
        ode::controlled_step_result res;
        std::size_t rejects = 0;
        do {
            res = stepper.try_step(rhs, y, x, h);
            if (res == ode::controlled_step_result::fail && ++rejects > 500)
                throw StiffnessError("integrate_dirac: step control stalled");
        } while (res == ode::controlled_step_result::fail);
        if (h < 1e-14 * span)
            throw StiffnessError("integrate_dirac: step size underflow");
        record(x, y);
    }
    return sol;
}

ExtractedAmps extract_amplitudes(const OdeSolution& sol) {
    if (sol.grid.empty()) throw InputError("extract_amplitudes: empty solution");
    const double m = sol.m;
    const double E = sol.E;
    const double xr = sol.grid.back();
    const double Er = E - sol.profile.right_asymptote();

    // physical (transmitted / decaying) and forbidden modes at x_right
    Spinor2 phys, forb;
    double j_trans = 0.0;
    if (Er > m) {
        const double kp = std::sqrt(Er * Er - m * m);
        const double ap = std::sqrt((Er - m) / (Er + m));
        const double n = 1.0 / std::sqrt(1.0 + ap * ap);
        const cplx f = std::exp(I * kp * xr);
        phys = {n * f, I * ap * n * f};
        forb = {n / f, -I * ap * n / f};
        j_trans = kp / Er;
    } else if (Er < -m) {
        const double p = std::sqrt(Er * Er - m * m);
        const double be = std::sqrt((-Er - m) / (-Er + m));
        const double n = 1.0 / std::sqrt(1.0 + be * be);
        const cplx f = std::exp(-I * p * xr);
        phys = {-I * be * n * f, n * f};
        forb = {I * be * n / f, n / f};
        j_trans = p / (-Er);
    } else {
        const double kappa = std::sqrt(m * m - Er * Er);
        const double r = kappa / (Er + m);
        const double fd = std::exp(-kappa * xr);
        phys = {cplx{fd, 0.0}, cplx{-r * fd, 0.0}};
        forb = {cplx{1.0 / fd, 0.0}, cplx{r / fd, 0.0}};
    }

    // expand both propagated columns in (phys, forb)
    const cplx det = phys.upper * forb.lower - forb.upper * phys.lower;
    const double scale = std::sqrt(phys.norm_sq() * forb.norm_sq());
    if (std::abs(det) < 1e-12 * scale)
        throw ProjectionError("extract_amplitudes: asymptotic basis is near-singular");

    auto expand = [&](const Spinor2& u) {
        const cplx ca = (u.upper * forb.lower - forb.upper * u.lower) / det;
        const cplx cb = (phys.upper * u.lower - u.upper * phys.lower) / det;
        return std::array<cplx, 2>{ca, cb};
    };
    const auto in = expand(sol.columns.back()[0]);
    const auto re = expand(sol.columns.back()[1]);

    if (std::abs(re[1]) < 1e-300)
        throw ProjectionError("extract_amplitudes: reflected column degenerate");

    ExtractedAmps out;
    out.R = -in[1] / re[1];
    const cplx tau = in[0] + out.R * re[0];
    const double j_in = std::sqrt(E * E - m * m) / E;
    out.T_flux = std::norm(tau) * j_trans / j_in;
    out.defect = std::abs(1.0 - std::norm(out.R) - out.T_flux);
    return out;
}

double asymptotic_cutoff(const PhysParams& params, double E, double a) {
    double scale = std::sqrt(E * E - params.m * params.m); // left k
    const Kinematics kin = kinematics(params, E);
    if (auto* o = std::get_if<OscillatoryMode>(&kin.right))
        scale = std::min(scale, o->p);
    else if (auto* e = std::get_if<EvanescentMode>(&kin.right))
        scale = std::min(scale, e->kappa);
    else if (auto* p = std::get_if<PositiveOscMode>(&kin.right))
        scale = std::min(scale, p->kp);
    // 40a puts the Sauter tail at e^-40; 6/scale clears the slowest mode
    return std::max(40.0 * a, 6.0 / scale);
}

namespace {

// Power-law extrapolation of the last three samples of f(a) = f0 + c a^q.
struct PowerFit {
    cplx f0;
    double q;
    double residual;
};

PowerFit power_fit(const std::vector<double>& as, const std::vector<cplx>& fs) {
    const std::size_t n = as.size();
    const double a1 = as[n - 3], a2 = as[n - 2], a3 = as[n - 1];
    const cplx d1 = fs[n - 3] - fs[n - 2];
    const cplx d2 = fs[n - 2] - fs[n - 1];

    if (std::abs(d1) < 1e-13 && std::abs(d2) < 1e-13)
        return {fs[n - 1], 1.0, std::abs(d2)};
    if (std::abs(d2) < 1e-15)
        return {fs[n - 1], 4.0, std::abs(d2)};

    const double ratio = std::abs(d1) / std::abs(d2);
    if (!(ratio > 1.0))
        throw NoConvergenceError("sharp_limit: samples do not contract toward a limit");

    double q;
    const double r12 = a1 / a2;
    const double r23 = a2 / a3;
    if (std::abs(r12 - r23) < 1e-9 * r12) {
        q = std::log(ratio) / std::log(r12);
    } else {
        auto gap = [&](double qq) {
            return (std::pow(a1, qq) - std::pow(a2, qq)) /
                       (std::pow(a2, qq) - std::pow(a3, qq)) -
                   ratio;
        };
        double lo = 0.02, hi = 16.0;
        if (gap(lo) * gap(hi) > 0.0)
            throw NoConvergenceError("sharp_limit: no power-law order fits the samples");
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (gap(lo) * gap(mid) <= 0.0 ? hi : lo) = mid;
        }
        q = 0.5 * (lo + hi);
    }

    const cplx c = d2 / (std::pow(a2, q) - std::pow(a3, q));
    const cplx f0 = fs[n - 1] - c * std::pow(a3, q);

    double residual;
    if (n >= 4) {
        const double a0 = as[n - 4];
        residual = std::abs(fs[n - 4] - (f0 + c * std::pow(a0, q)));
    } else {
        residual = std::abs(c) * std::pow(a3, q) * std::pow(a3 / a2, q);
    }
    return {f0, q, residual};
}

} // namespace

SharpLimit sharp_limit(const PhysParams& params, double E,
                       const std::vector<double>& a_sequence,
                       std::optional<double> barrier_length, double tol) {
    if (a_sequence.size() < 3)
        throw InputError("sharp_limit: need at least 3 smoothing widths");
    for (std::size_t i = 0; i + 1 < a_sequence.size(); ++i)
        if (!(a_sequence[i] > a_sequence[i + 1]) || !(a_sequence.back() > 0.0))
            throw InputError("sharp_limit: a_sequence must be strictly decreasing and positive");

    std::vector<cplx> rs, ts;
    for (double a : a_sequence) {
        SmoothProfile profile =
            barrier_length ? SmoothProfile::smoothed_barrier(params.V, a, *barrier_length)
                           : SmoothProfile::sauter_step(params.V, a);
        const double cut = asymptotic_cutoff(params, E, a);
        const double edge = barrier_length ? *barrier_length : 0.0;
        const OdeSolution sol =
            integrate_dirac(params.m, profile, E, -cut, edge + cut, tol);
        const ExtractedAmps amps = extract_amplitudes(sol);
        rs.push_back(amps.R);
        ts.push_back(cplx{amps.T_flux, 0.0});
    }

    const PowerFit rfit = power_fit(a_sequence, rs);
    if (rfit.residual > 1e-3)
        throw NoConvergenceError("sharp_limit: power-law fit residual too large");

    SharpLimit out;
    out.R0 = rfit.f0;
    out.order = rfit.q;
    out.residual = rfit.residual;
    out.T_flux0 = power_fit(a_sequence, ts).f0.real();
    return out;
}

} // namespace klein
