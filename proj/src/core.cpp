#include "klein/core.hpp"

#include <cmath>

namespace klein {

const char* zone_name(EnergyZone z) {
    switch (z) {
    case EnergyZone::SubThreshold: return "sub-threshold";
    case EnergyZone::Klein: return "klein";
    case EnergyZone::Evanescent: return "evanescent";
    case EnergyZone::OverBarrier: return "over-barrier";
    }
    return "unknown";
}

EnergyZone classify_zone(const PhysParams& params, double E) {
    if (!std::isfinite(E)) throw InputError("classify_zone: E must be finite");
    const double eps = params.eps_branch();
    const double m = params.m;
    const double V = params.V;

    auto near = [eps, E](double b) { return std::abs(E - b) < eps; };
    if (near(m) || near(V + m))
        throw BranchPointError("classify_zone: E within eps_branch of a channel threshold");
    // V - m is a boundary only when the Klein zone is non-empty.
    if (V - m > m + eps && near(V - m))
        throw BranchPointError("classify_zone: E within eps_branch of a channel threshold");

    if (E < m) return EnergyZone::SubThreshold;
    if (V > 2.0 * m && E < V - m) return EnergyZone::Klein;
    if (E < V + m) return EnergyZone::Evanescent;
    return EnergyZone::OverBarrier;
}

Kinematics kinematics(const PhysParams& params, double E) {
    const EnergyZone zone = classify_zone(params, E);
    if (zone == EnergyZone::SubThreshold)
        throw SubThresholdError("kinematics: E <= m has no incident channel");

    const double m = params.m;
    const double V = params.V;

    Kinematics kin;
    kin.k = std::sqrt(E * E - m * m);
    kin.alpha = std::sqrt((E - m) / (E + m));

    const double Er = E - V; // effective energy under the step
    switch (zone) {
    case EnergyZone::Klein:
        kin.right = OscillatoryMode{std::sqrt((V - E) * (V - E) - m * m),
                                    std::sqrt((V - E - m) / (V - E + m))};
        break;
    case EnergyZone::Evanescent:
        kin.right = EvanescentMode{std::sqrt(m * m - Er * Er)};
        break;
    case EnergyZone::OverBarrier:
        kin.right = PositiveOscMode{std::sqrt(Er * Er - m * m),
                                    std::sqrt((Er - m) / (Er + m))};
        break;
    default:
        break;
    }
    return kin;
}

double group_velocity(const PhysParams& params, double E) {
    if (!(E > params.m)) throw SubThresholdError("group_velocity: E <= m");
    return std::sqrt(E * E - params.m * params.m) / E;
}

} // namespace klein
