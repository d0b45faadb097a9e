#include "enplan/network.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace enplan::network {

namespace {
constexpr double kEarthRadiusKm = 6371.0;

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
}  // namespace

double great_circle_km(const Coordinate& a, const Coordinate& b) {
    if (std::abs(a.lat_deg) > 90.0 || std::abs(b.lat_deg) > 90.0 ||
        std::abs(a.lon_deg) > 180.0 || std::abs(b.lon_deg) > 180.0)
        throw std::domain_error("coordinates outside valid range");
    double phi1 = deg2rad(a.lat_deg), phi2 = deg2rad(b.lat_deg);
    double dphi = phi2 - phi1;
    double dlam = deg2rad(b.lon_deg - a.lon_deg);
    double s = std::sin(dphi / 2.0), t = std::sin(dlam / 2.0);
    double h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

LinkKind link_kind_from_name(const std::string& name) {
    if (name == "hvac") return LinkKind::Hvac;
    if (name == "hvdc") return LinkKind::Hvdc;
    if (name == "h2_pipeline") return LinkKind::H2Pipeline;
    if (name == "truck_trade") return LinkKind::TruckTrade;
    throw std::runtime_error("unknown link kind '" + name + "'");
}

const char* link_kind_name(LinkKind kind) {
    switch (kind) {
        case LinkKind::Hvac: return "hvac";
        case LinkKind::Hvdc: return "hvdc";
        case LinkKind::H2Pipeline: return "h2_pipeline";
        case LinkKind::TruckTrade: return "truck_trade";
    }
    return "hvac";
}

double default_loss_per_1000km(LinkKind kind) {
    switch (kind) {
        case LinkKind::Hvac: return 0.05;
        case LinkKind::Hvdc: return 0.03;
        case LinkKind::H2Pipeline: return 0.0244;
        case LinkKind::TruckTrade: return 0.0;
    }
    return 0.0;
}

double Link::max_expansion_gw() const {
    double total = 0.0;
    for (const auto& s : expansion_steps) total += s.max_add_gw;
    return total;
}

void check_link(const Link& link) {
    if (link.length_km < 0.0)
        throw std::runtime_error("link " + link.id + ": negative length");
    if (link.loss_per_1000km < 0.0 || link.loss_per_1000km >= 1.0)
        throw std::runtime_error("link " + link.id + ": loss per 1,000 km outside [0,1)");
    if (link.transfer_factor() <= 0.0)
        throw std::runtime_error("link " + link.id + ": total attenuation reaches 100%");
    double prev = -1.0;
    for (const auto& s : link.expansion_steps) {
        if (s.cost_per_gw_yr < prev)
            throw std::runtime_error("link " + link.id +
                                     ": expansion step costs must be nondecreasing");
        if (s.max_add_gw < 0.0)
            throw std::runtime_error("link " + link.id + ": negative step capacity");
        prev = s.cost_per_gw_yr;
    }
    if (link.kind == LinkKind::TruckTrade && !link.expansion_steps.empty())
        throw std::runtime_error("link " + link.id + ": truck trade carries no capacity");
}

double delivered(double sent_gw, const Link& link) {
    if (sent_gw < 0.0) throw std::domain_error("sent quantity must be nonnegative");
    return sent_gw * link.transfer_factor();
}

double expansion_cost(const Link& link, double added_gw) {
    if (added_gw < 0.0) throw std::domain_error("added capacity must be nonnegative");
    double remaining = added_gw;
    double cost = 0.0;
    for (const auto& s : link.expansion_steps) {
        if (remaining <= 0.0) break;
        double take = std::min(remaining, s.max_add_gw);
        cost += take * s.cost_per_gw_yr;
        remaining -= take;
    }
    if (remaining > 1e-9)
        throw std::runtime_error("link " + link.id + ": expansion of " +
                                 std::to_string(added_gw) + " GW exceeds the step-curve limit of " +
                                 std::to_string(link.max_expansion_gw()) + " GW");
    return cost;
}

}  // namespace enplan::network
