// Transmission and pipeline links: great-circle lengths, linear per-distance
// attenuation, and piecewise step curves for expansion cost.
#pragma once

#include <string>
#include <vector>

namespace enplan::network {

struct Coordinate {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
};

/// Haversine distance on a sphere of radius 6,371 km.
double great_circle_km(const Coordinate& a, const Coordinate& b);

enum class LinkKind { Hvac, Hvdc, H2Pipeline, TruckTrade };

LinkKind link_kind_from_name(const std::string& name);
const char* link_kind_name(LinkKind kind);

/// Default attenuation per 1,000 km by link kind (fraction).
double default_loss_per_1000km(LinkKind kind);

struct ExpansionStep {
    double cost_per_gw_yr = 0.0;  // annualized specific cost, m$/GW/yr
    double max_add_gw = 0.0;      // additional capacity available at this cost
};

struct Link {
    std::string id;
    std::string from;
    std::string to;
    LinkKind kind = LinkKind::Hvac;
    double existing_capacity_gw = 0.0;
    double length_km = 0.0;
    double loss_per_1000km = 0.0;
    double fixed_om_per_gw_yr = 0.0;     // applies to existing capacity
    double variable_cost_per_mwh = 0.0;  // truck trade and the like
    bool bidirectional = true;
    std::vector<ExpansionStep> expansion_steps;  // costs nondecreasing

    /// Fraction of a sent quantity that reaches the far end.
    double transfer_factor() const { return 1.0 - loss_per_1000km * length_km / 1000.0; }
    double max_expansion_gw() const;
};

/// Validates step ordering and attenuation; throws on data errors
/// (loss of 100% or more, decreasing step costs).
void check_link(const Link& link);

/// Quantity arriving at the far end when `sent_gw` is injected.
double delivered(double sent_gw, const Link& link);

/// Yearly cost of adding `added_gw`, filling expansion steps in cost order.
/// Throws if the addition exceeds the total step limit.
double expansion_cost(const Link& link, double added_gw);

}  // namespace enplan::network
