// Hierarchical temporal resolution: hourly steps nest exactly into four-hour
// blocks and days. Representative periods are contiguous whole days carrying
// a weight that scales operational quantities back to a full year.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace enplan::timegrid {

enum class Level { Hour, FourHour, Day };

constexpr int block_hours(Level level) {
    switch (level) {
        case Level::Hour: return 1;
        case Level::FourHour: return 4;
        case Level::Day: return 24;
    }
    return 1;
}

const char* level_name(Level level);
Level level_from_name(const std::string& name);

/// Finer of two levels (hour < four_hour < day).
Level finer(Level a, Level b);

struct Period {
    std::size_t start_hour = 0;  // 0-based, multiple of 24
    std::size_t hours = 0;       // multiple of 24
    double weight = 1.0;         // representative weight toward the 8760-h year
};

class TimeHierarchy {
public:
    /// One period per entry of days/weights; periods are laid out
    /// contiguously. Throws if day counts are not positive.
    TimeHierarchy(const std::vector<std::size_t>& period_days,
                  const std::vector<double>& period_weights);

    std::size_t hours() const { return hours_; }
    std::size_t steps(Level level) const { return hours_ / block_hours(level); }
    const std::vector<Period>& periods() const { return periods_; }

    /// Coarse index containing the given hour. Out-of-range hour throws.
    std::size_t block_of(std::size_t hour, Level level) const;
    /// Period index containing the given hour.
    std::size_t period_of(std::size_t hour) const;
    /// Weight applied to quantities of the period containing this hour.
    double weight_at(std::size_t hour) const;
    /// First hour of a coarse step.
    std::size_t block_start_hour(std::size_t block, Level level) const;

    /// Sum of weight * hours across periods; equals 8760 when the horizon
    /// represents one year.
    double weighted_hours() const;

private:
    std::size_t hours_ = 0;
    std::vector<Period> periods_;
    std::vector<std::size_t> hour_period_;  // hour -> period index
};

enum class AggregateMode { Sum, Mean };

/// A value series aligned to one temporal level of a hierarchy.
struct ProfileSeries {
    Level level = Level::Hour;
    std::vector<double> values;
};

/// Aggregates an hourly series to a coarser level. Sum mode conserves the
/// total exactly; mean mode is for normalized factors.
ProfileSeries aggregate(const ProfileSeries& hourly, Level target, AggregateMode mode);

/// Expands a coarse series to hourly by repeating (capacity factors) or
/// splitting uniformly (energies).
ProfileSeries expand_uniform(const ProfileSeries& coarse, AggregateMode mode);

/// Reads a single-column CSV whose header names the level.
ProfileSeries read_profile_csv(const std::string& path);

}  // namespace enplan::timegrid
