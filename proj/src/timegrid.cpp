#include "enplan/timegrid.hpp"

#include <stdexcept>

#include "enplan/csvio.hpp"

namespace enplan::timegrid {

const char* level_name(Level level) {
    switch (level) {
        case Level::Hour: return "hour";
        case Level::FourHour: return "four_hour";
        case Level::Day: return "day";
    }
    return "hour";
}

Level level_from_name(const std::string& name) {
    if (name == "hour") return Level::Hour;
    if (name == "four_hour") return Level::FourHour;
    if (name == "day") return Level::Day;
    throw std::runtime_error("unknown temporal level '" + name + "'");
}

Level finer(Level a, Level b) {
    return block_hours(a) <= block_hours(b) ? a : b;
}

TimeHierarchy::TimeHierarchy(const std::vector<std::size_t>& period_days,
                             const std::vector<double>& period_weights) {
    if (period_days.empty() || period_days.size() != period_weights.size())
        throw std::runtime_error("time hierarchy needs matching, nonempty day and weight lists");
    std::size_t start = 0;
    for (std::size_t p = 0; p < period_days.size(); ++p) {
        if (period_days[p] == 0) throw std::runtime_error("period with zero days");
        if (!(period_weights[p] > 0.0)) throw std::runtime_error("period weight must be positive");
        Period per;
        per.start_hour = start;
        per.hours = period_days[p] * 24;
        per.weight = period_weights[p];
        periods_.push_back(per);
        start += per.hours;
    }
    hours_ = start;
    hour_period_.resize(hours_);
    for (std::size_t p = 0; p < periods_.size(); ++p)
        for (std::size_t h = periods_[p].start_hour; h < periods_[p].start_hour + periods_[p].hours; ++h)
            hour_period_[h] = p;
}

std::size_t TimeHierarchy::block_of(std::size_t hour, Level level) const {
    if (hour >= hours_)
        throw std::out_of_range("hour index " + std::to_string(hour) + " outside horizon of " +
                                std::to_string(hours_) + " hours");
    return hour / static_cast<std::size_t>(block_hours(level));
}

std::size_t TimeHierarchy::period_of(std::size_t hour) const {
    if (hour >= hours_) throw std::out_of_range("hour index outside horizon");
    return hour_period_[hour];
}

double TimeHierarchy::weight_at(std::size_t hour) const {
    return periods_[period_of(hour)].weight;
}

std::size_t TimeHierarchy::block_start_hour(std::size_t block, Level level) const {
    std::size_t h = block * static_cast<std::size_t>(block_hours(level));
    if (h >= hours_) throw std::out_of_range("block index outside horizon");
    return h;
}

double TimeHierarchy::weighted_hours() const {
    double total = 0.0;
    for (const auto& p : periods_) total += p.weight * static_cast<double>(p.hours);
    return total;
}

ProfileSeries aggregate(const ProfileSeries& hourly, Level target, AggregateMode mode) {
    if (hourly.level != Level::Hour)
        throw std::runtime_error("aggregate expects an hourly input series");
    std::size_t block = static_cast<std::size_t>(block_hours(target));
    if (hourly.values.size() % block != 0)
        throw std::runtime_error("series length is not a multiple of the target block size");
    ProfileSeries out;
    out.level = target;
    out.values.resize(hourly.values.size() / block);
    for (std::size_t b = 0; b < out.values.size(); ++b) {
        double acc = 0.0;
        for (std::size_t k = 0; k < block; ++k) acc += hourly.values[b * block + k];
        out.values[b] = mode == AggregateMode::Sum ? acc : acc / static_cast<double>(block);
    }
    return out;
}

ProfileSeries expand_uniform(const ProfileSeries& coarse, AggregateMode mode) {
    std::size_t block = static_cast<std::size_t>(block_hours(coarse.level));
    ProfileSeries out;
    out.level = Level::Hour;
    out.values.resize(coarse.values.size() * block);
    for (std::size_t b = 0; b < coarse.values.size(); ++b) {
        double v = mode == AggregateMode::Sum ? coarse.values[b] / static_cast<double>(block)
                                              : coarse.values[b];
        for (std::size_t k = 0; k < block; ++k) out.values[b * block + k] = v;
    }
    return out;
}

ProfileSeries read_profile_csv(const std::string& path) {
    auto table = csv::read_file(path);
    if (table.header.size() != 1)
        throw std::runtime_error(path + ": profile files have exactly one column");
    ProfileSeries s;
    s.level = level_from_name(table.header[0]);
    s.values.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) s.values.push_back(table.num(r, 0));
    return s;
}

}  // namespace enplan::timegrid
