#include "enplan/system_io.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "enplan/csvio.hpp"
#include "enplan/tomlio.hpp"

namespace enplan::system {

namespace {

bool parse_bool(const std::string& s, const std::string& where) {
    if (s.empty() || s == "0" || s == "false" || s == "no") return false;
    if (s == "1" || s == "true" || s == "yes") return true;
    throw std::runtime_error(where + ": cannot parse boolean '" + s + "'");
}

csv::Table read_table(const std::filesystem::path& dir, const std::string& name) {
    return csv::read_file(dir / name);
}

bool file_exists(const std::filesystem::path& dir, const std::string& name) {
    return std::filesystem::exists(dir / name);
}

}  // namespace

ScenarioConfig load_scenario(const std::filesystem::path& toml_path) {
    auto doc = toml::Document::parse_file(toml_path);
    ScenarioConfig cfg;
    cfg.name = doc.get_string_or("scenario.name", toml_path.stem().string());
    std::filesystem::path base = toml_path.parent_path();
    cfg.system_dir = (base / doc.get_string("scenario.system")).lexically_normal().string();

    cfg.nuclear_overnight_cost = doc.get_double_or("nuclear.overnight_cost", 0.0);
    cfg.nuclear_construction_time = doc.get_double_or("nuclear.construction_time", 0.0);
    cfg.nuclear_depreciation = static_cast<int>(doc.get_int_or("nuclear.depreciation", 40));
    cfg.interest = doc.get_double_or("finance.interest", 0.05);

    auto days = doc.get_double_array("horizon.period_days");
    cfg.period_weights = doc.get_double_array("horizon.period_weights");
    for (double d : days) {
        if (d < 1.0 || std::abs(d - std::round(d)) > 1e-9)
            throw std::runtime_error(toml_path.string() + ": period_days must be whole days");
        cfg.period_days.push_back(static_cast<std::size_t>(std::llround(d)));
    }

    cfg.solver.feasibility_tol = doc.get_double_or("solver.feasibility_tol", 1e-7);
    cfg.solver.optimality_tol = doc.get_double_or("solver.optimality_tol", 1e-7);
    cfg.solver.max_iterations = doc.get_int_or("solver.max_iterations", 0);
    cfg.solver.verbose = doc.get_bool_or("solver.verbose", false);

    cfg.flexibility.bev = doc.get_bool_or("flexibility.bev", true);
    cfg.flexibility.power_to_x = doc.get_bool_or("flexibility.power_to_x", true);
    cfg.flexibility.heat = doc.get_bool_or("flexibility.heat", true);

    cfg.output_dir = doc.get_string_or("output.dir", "out");
    return cfg;
}

EnergySystem load_system(const std::filesystem::path& dir, const ScenarioConfig& scenario) {
    EnergySystem sys;
    sys.time = timegrid::TimeHierarchy(scenario.period_days, scenario.period_weights);

    {
        auto t = read_table(dir, "carriers.csv");
        auto cn = t.col("name"), ct = t.col("temporal_level"), cs = t.col("spatial_level");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            Carrier c;
            c.name = t.cell(r, cn);
            c.temporal = timegrid::level_from_name(t.cell(r, ct));
            c.spatial = spatial_from_name(t.cell(r, cs));
            sys.carriers.push_back(c);
        }
    }
    {
        auto t = read_table(dir, "regions.csv");
        auto ci = t.col("id"), cl = t.col("level"), cp = t.col("parent");
        auto cla = t.col("lat"), clo = t.col("lon");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            Region reg;
            reg.id = t.cell(r, ci);
            reg.level = spatial_from_name(t.cell(r, cl));
            reg.parent = t.cell(r, cp);
            reg.centroid = {t.num(r, cla), t.num(r, clo)};
            sys.regions.push_back(reg);
        }
    }

    // Profiles live in a subdirectory; the file stem is the profile name.
    {
        std::filesystem::path pdir = dir / "profiles";
        if (std::filesystem::exists(pdir)) {
            std::vector<std::filesystem::path> files;
            for (const auto& e : std::filesystem::directory_iterator(pdir))
                if (e.path().extension() == ".csv") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files)
                sys.profiles[f.stem().string()] = timegrid::read_profile_csv(f.string());
        }
    }

    {
        auto t = read_table(dir, "technologies.csv");
        auto cn = t.col("name");
        auto cic = t.col("invest_cost"), clt = t.col("lifetime");
        auto cfo = t.col("fixed_om"), cvo = t.col("variable_om"), cav = t.col("availability");
        auto csf = t.col_optional("scenario_financed");
        auto cfl = t.col_optional("fluctuating");
        auto cse = t.col_optional("serves_segment");
        auto cds = t.col_optional("dedicated_storage");
        auto ccf = t.col("cost_family");
        auto cff = t.col_optional("flex_family");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            ConversionTech tech;
            tech.name = t.cell(r, cn);
            tech.invest_cost = t.num(r, cic);
            tech.lifetime = static_cast<int>(t.integer(r, clt));
            tech.fixed_om = t.num(r, cfo);
            tech.variable_om = t.num(r, cvo);
            tech.availability = t.num(r, cav);
            if (csf >= 0) tech.scenario_financed = parse_bool(t.cell(r, csf), "technologies.csv");
            if (cfl >= 0) tech.fluctuating = parse_bool(t.cell(r, cfl), "technologies.csv");
            if (cse >= 0) tech.serves_segment = t.cell(r, cse);
            if (cds >= 0) tech.dedicated_storage = t.cell(r, cds);
            tech.proportional_dispatch = !tech.serves_segment.empty();
            tech.cost_family = cost_family_from_name(t.cell(r, ccf));
            if (cff >= 0) tech.flex_family = flex_family_from_name(t.cell(r, cff));
            sys.techs.push_back(tech);
        }
    }
    {
        auto t = read_table(dir, "tech_io.csv");
        auto ct = t.col("tech"), cc = t.col("carrier"), cd = t.col("direction"),
             cv = t.col("coefficient");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const std::string& name = t.cell(r, ct);
            auto it = std::find_if(sys.techs.begin(), sys.techs.end(),
                                   [&](const ConversionTech& x) { return x.name == name; });
            if (it == sys.techs.end())
                throw std::runtime_error("tech_io.csv: unknown technology '" + name + "'");
            const std::string& d = t.cell(r, cd);
            if (d == "in")
                it->inputs[t.cell(r, cc)] = t.num(r, cv);
            else if (d == "out")
                it->outputs[t.cell(r, cc)] = t.num(r, cv);
            else
                throw std::runtime_error("tech_io.csv: direction must be in or out, got '" + d +
                                         "'");
        }
    }
    {
        auto t = read_table(dir, "tech_capacity.csv");
        auto ct = t.col("tech"), cr = t.col("region");
        auto cmin = t.col("min_gw"), cmax = t.col("max_gw");
        auto cp = t.col_optional("profile");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const std::string& name = t.cell(r, ct);
            auto it = std::find_if(sys.techs.begin(), sys.techs.end(),
                                   [&](const ConversionTech& x) { return x.name == name; });
            if (it == sys.techs.end())
                throw std::runtime_error("tech_capacity.csv: unknown technology '" + name + "'");
            CapacitySite site;
            site.region = t.cell(r, cr);
            site.min_gw = t.num(r, cmin);
            site.max_gw = t.num(r, cmax);
            if (cp >= 0) site.profile = t.cell(r, cp);
            it->sites.push_back(site);
        }
    }

    if (file_exists(dir, "storage.csv")) {
        auto t = read_table(dir, "storage.csv");
        auto cn = t.col("name"), cc = t.col("carrier");
        auto cpi = t.col("power_invest"), cei = t.col("energy_invest"), clt = t.col("lifetime");
        auto cpo = t.col("power_om"), ceo = t.col("energy_om");
        auto cef = t.col("cycle_efficiency");
        auto cmin = t.col("ep_min"), cmax = t.col("ep_max");
        auto cb = t.col_optional("battery");
        auto cdo = t.col_optional("dedicated_only");
        auto ccf = t.col("cost_family");
        auto cff = t.col_optional("flex_family");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            StorageTech s;
            s.name = t.cell(r, cn);
            s.carrier = t.cell(r, cc);
            s.power_invest = t.num(r, cpi);
            s.energy_invest = t.num(r, cei);
            s.lifetime = static_cast<int>(t.integer(r, clt));
            s.power_om = t.num(r, cpo);
            s.energy_om = t.num(r, ceo);
            s.cycle_efficiency = t.num(r, cef);
            s.ep_min = t.num(r, cmin);
            s.ep_max = t.num(r, cmax);
            if (cb >= 0) s.battery = parse_bool(t.cell(r, cb), "storage.csv");
            if (cdo >= 0) s.dedicated_only = parse_bool(t.cell(r, cdo), "storage.csv");
            s.cost_family = cost_family_from_name(t.cell(r, ccf));
            if (cff >= 0) s.flex_family = flex_family_from_name(t.cell(r, cff));
            sys.storages.push_back(s);
        }
    }
    if (file_exists(dir, "storage_potential.csv")) {
        auto t = read_table(dir, "storage_potential.csv");
        auto cs = t.col("storage"), cr = t.col("region"), cm = t.col("max_energy_gwh");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const std::string& name = t.cell(r, cs);
            auto it = std::find_if(sys.storages.begin(), sys.storages.end(),
                                   [&](const StorageTech& x) { return x.name == name; });
            if (it == sys.storages.end())
                throw std::runtime_error("storage_potential.csv: unknown storage '" + name + "'");
            it->sites.push_back({t.cell(r, cr), t.num(r, cm)});
        }
    }

    if (file_exists(dir, "links.csv")) {
        auto t = read_table(dir, "links.csv");
        auto ci = t.col("id"), cc = t.col("carrier"), cf = t.col("from"), ct2 = t.col("to");
        auto ck = t.col("kind"), ce = t.col("existing_gw");
        auto cl = t.col_optional("length_km"), clo = t.col_optional("loss_per_1000km");
        auto cfo = t.col_optional("fixed_om"), cvc = t.col_optional("variable_cost");
        auto cb = t.col_optional("bidirectional");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            GridLink gl;
            gl.carrier = t.cell(r, cc);
            gl.link.id = t.cell(r, ci);
            gl.link.from = t.cell(r, cf);
            gl.link.to = t.cell(r, ct2);
            gl.link.kind = network::link_kind_from_name(t.cell(r, ck));
            gl.link.existing_capacity_gw = t.num(r, ce);
            double length = t.num_or(r, cl, -1.0);
            if (length < 0.0) {
                const Region* a = sys.find_region(gl.link.from);
                const Region* b = sys.find_region(gl.link.to);
                if (a == nullptr || b == nullptr)
                    throw std::runtime_error("links.csv: link '" + gl.link.id +
                                             "' needs a length or known endpoint centroids");
                length = network::great_circle_km(a->centroid, b->centroid);
            }
            gl.link.length_km = length;
            gl.link.loss_per_1000km =
                t.num_or(r, clo, network::default_loss_per_1000km(gl.link.kind));
            gl.link.fixed_om_per_gw_yr = t.num_or(r, cfo, 0.0);
            gl.link.variable_cost_per_mwh = t.num_or(r, cvc, 0.0);
            if (cb >= 0) gl.link.bidirectional = parse_bool(t.cell(r, cb), "links.csv");
            sys.links.push_back(gl);
        }
    }
    if (file_exists(dir, "link_steps.csv")) {
        auto t = read_table(dir, "link_steps.csv");
        auto cl = t.col("link"), cm = t.col("max_add_gw");
        auto cc = t.col_optional("cost_per_gw_yr");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const std::string& id = t.cell(r, cl);
            auto it = std::find_if(sys.links.begin(), sys.links.end(),
                                   [&](const GridLink& x) { return x.link.id == id; });
            if (it == sys.links.end())
                throw std::runtime_error("link_steps.csv: unknown link '" + id + "'");
            network::ExpansionStep step;
            step.max_add_gw = t.num(r, cm);
            double cost = t.num_or(r, cc, -1.0);
            if (cost < 0.0) {
                // Hydrogen pipelines: 0.4 m$/GW/km overnight, annualized over
                // 40 years at the scenario interest rate.
                if (it->link.kind != network::LinkKind::H2Pipeline)
                    throw std::runtime_error("link_steps.csv: link '" + id +
                                             "' needs an explicit step cost");
                cost = finance::annuity(0.0, 0.4 * it->link.length_km, scenario.interest, 40);
            }
            step.cost_per_gw_yr = cost;
            it->link.expansion_steps.push_back(step);
        }
    }

    {
        auto t = read_table(dir, "demands.csv");
        auto ci = t.col("id"), cc = t.col("carrier"), cr = t.col("region");
        auto ca = t.col("annual_gwh"), cp = t.col("profile"), cf = t.col("flexibility");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            DemandSegment d;
            d.id = t.cell(r, ci);
            d.carrier = t.cell(r, cc);
            d.region = t.cell(r, cr);
            d.annual_gwh = t.num(r, ca);
            d.profile = t.cell(r, cp);
            d.flexibility = flex_kind_from_name(t.cell(r, cf));
            sys.demands.push_back(d);
        }
    }
    if (file_exists(dir, "bev.csv")) {
        auto t = read_table(dir, "bev.csv");
        auto cd = t.col("demand"), cck = t.col("charge_kw"), csm = t.col("safety_margin");
        auto cvd = t.col("vehicle_daily_kwh"), ccn = t.col("consumption_kwh_per_pkm");
        auto cap = t.col("availability_profile");
        auto cfc = t.col_optional("fleet_cost");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const std::string& id = t.cell(r, cd);
            auto it = std::find_if(sys.demands.begin(), sys.demands.end(),
                                   [&](const DemandSegment& x) { return x.id == id; });
            if (it == sys.demands.end())
                throw std::runtime_error("bev.csv: unknown demand segment '" + id + "'");
            BevParams p;
            p.charge_kw = t.num(r, cck);
            p.safety_margin = t.num(r, csm);
            p.vehicle_daily_kwh = t.num(r, cvd);
            p.consumption_kwh_per_pkm = t.num(r, ccn);
            p.availability_profile = t.cell(r, cap);
            p.fleet_cost = t.num_or(r, cfc, 0.0);
            it->bev = p;
        }
    }

    if (file_exists(dir, "supplies.csv")) {
        auto t = read_table(dir, "supplies.csv");
        auto ci = t.col("id"), cc = t.col("carrier"), cr = t.col("region");
        auto cp = t.col("cost_per_mwh"), ca = t.col("annual_cap_gwh");
        auto ccf = t.col("cost_family");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            Supply s;
            s.id = t.cell(r, ci);
            s.carrier = t.cell(r, cc);
            s.region = t.cell(r, cr);
            s.cost_per_mwh = t.num(r, cp);
            s.annual_cap_gwh = t.num(r, ca);
            s.cost_family = cost_family_from_name(t.cell(r, ccf));
            sys.supplies.push_back(s);
        }
    }

    return sys;
}

}  // namespace enplan::system
