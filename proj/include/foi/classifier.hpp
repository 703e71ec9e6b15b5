#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <iterator>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "foi/error.hpp"
#include "foi/pillar_index.hpp"
#include "foi/rescaling.hpp"

namespace foi {

enum class Level { L, H };

inline constexpr double kDefaultThreshold = 4.0;
inline constexpr double kDefaultEpsilon = 0.05;

using LevelTriple = std::array<Level, 3>;

/// Interval-halving cluster id: LLL=1 ... HHH=8, F is the most significant bit.
inline int cluster_id(const LevelTriple& levels) {
    return 1 + 4 * (levels[0] == Level::H) + 2 * (levels[1] == Level::H) + (levels[2] == Level::H);
}

inline LevelTriple levels_of(int cluster) {
    if (cluster < 1 || cluster > 8) throw DomainError("cluster id " + std::to_string(cluster) + " outside 1..8");
    const int bits = cluster - 1;
    return {(bits & 4) ? Level::H : Level::L, (bits & 2) ? Level::H : Level::L, (bits & 1) ? Level::H : Level::L};
}

inline std::string_view cluster_label(int cluster) {
    switch (cluster) {
        case 1: return "Traditional";
        case 3: return "Dualistic";
        case 4: return "Open market-based";
        case 7: return "Government-led / Bureaucratic";
        case 8: return "Human capital-based";
        default: return "-";
    }
}

inline std::string level_string(const LevelTriple& levels) {
    std::string s;
    for (auto l : levels) s += l == Level::H ? 'H' : 'L';
    return s;
}

struct ClusterAssignment {
    std::string country;
    std::array<double, 3> index{};
    LevelTriple levels{};
    int cluster = 0;
    std::string label;
    std::array<bool, 3> borderline{};

    int high_count() const { return static_cast<int>(std::count(levels.begin(), levels.end(), Level::H)); }
    bool any_borderline() const { return borderline[0] || borderline[1] || borderline[2]; }
};

/// H iff index >= threshold. Indices must lie in [1, 7].
inline ClusterAssignment classify(std::string country, double f, double o, double i, double threshold = kDefaultThreshold,
                                  double epsilon = kDefaultEpsilon) {
    ClusterAssignment a;
    a.country = std::move(country);
    a.index = {f, o, i};
    for (std::size_t k = 0; k < 3; ++k) {
        const double v = a.index[k];
        if (!(v >= kScaleMin && v <= kScaleMax)) {
            throw DomainError("classify: " + std::string(to_string(kPillars[k])) + " index " + detail::format_full(v) + " of '" +
                              a.country + "' outside [1, 7]");
        }
        a.levels[k] = v >= threshold ? Level::H : Level::L;
        a.borderline[k] = std::abs(v - threshold) <= epsilon;
    }
    a.cluster = cluster_id(a.levels);
    a.label = std::string(cluster_label(a.cluster));
    return a;
}

inline ClusterAssignment classify(double f, double o, double i, double threshold = kDefaultThreshold, double epsilon = kDefaultEpsilon) {
    return classify(std::string{}, f, o, i, threshold, epsilon);
}

/// Classifies every country; output sorted by country code.
inline std::vector<ClusterAssignment> classify_epoch(const FoiScores& scores, double threshold = kDefaultThreshold,
                                                     double epsilon = kDefaultEpsilon) {
    std::vector<ClusterAssignment> out;
    out.reserve(scores.rows.size());
    for (const auto& row : scores.rows) {
        for (auto p : kPillars) {
            if (!row.get(p)) {
                throw DomainError("classify: country '" + row.country + "' has no " + std::string(to_string(p)) + " index");
            }
        }
        out.push_back(classify(row.country, *row.index[0], *row.index[1], *row.index[2], threshold, epsilon));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.country < b.country; });
    return out;
}

struct CountryShift {
    std::string country;
    int from_cluster = 0;
    int to_cluster = 0;
    int delta_h = 0;
};

struct ShiftReport {
    int from_epoch = 0;
    int to_epoch = 0;
    std::vector<CountryShift> shifts;                 // by country code
    std::array<std::array<int, 8>, 8> transitions{};  // [from-1][to-1]
    std::vector<CountryShift> upward;                 // delta_h > 0
    std::vector<CountryShift> downward;               // delta_h < 0
    std::vector<CountryShift> lateral;                // delta_h == 0, cluster changed
    std::vector<CountryShift> stayers;                // same cluster

    const CountryShift* find(std::string_view country) const {
        auto it = std::find_if(shifts.begin(), shifts.end(), [&](const auto& s) { return s.country == country; });
        return it == shifts.end() ? nullptr : &*it;
    }
};

/// Epoch-to-epoch transitions. Both lists must cover the same set of countries.
inline ShiftReport shift_report(const std::vector<ClusterAssignment>& a, const std::vector<ClusterAssignment>& b, int from_epoch = 0,
                                int to_epoch = 0) {
    std::set<std::string> sa, sb;
    for (const auto& x : a) sa.insert(x.country);
    for (const auto& x : b) sb.insert(x.country);
    if (sa.size() != a.size() || sb.size() != b.size()) throw InputError("shift_report: duplicate country in assignment list");
    if (sa != sb) {
        std::vector<std::string> diff;
        std::set_symmetric_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(diff));
        std::string msg = "shift_report: country sets differ:";
        for (const auto& d : diff) msg += " " + d;
        throw InputError(msg);
    }

    ShiftReport report;
    report.from_epoch = from_epoch;
    report.to_epoch = to_epoch;
    for (const auto& x : a) {
        const auto& y = *std::find_if(b.begin(), b.end(), [&](const auto& c) { return c.country == x.country; });
        CountryShift s{x.country, x.cluster, y.cluster, y.high_count() - x.high_count()};
        ++report.transitions[static_cast<std::size_t>(s.from_cluster - 1)][static_cast<std::size_t>(s.to_cluster - 1)];
        report.shifts.push_back(s);
    }
    std::sort(report.shifts.begin(), report.shifts.end(), [](const auto& l, const auto& r) { return l.country < r.country; });

    for (const auto& s : report.shifts) {
        if (s.delta_h > 0) report.upward.push_back(s);
        else if (s.delta_h < 0) report.downward.push_back(s);
        else if (s.from_cluster != s.to_cluster) report.lateral.push_back(s);
        else report.stayers.push_back(s);
    }
    auto by_magnitude = [](const CountryShift& l, const CountryShift& r) {
        if (std::abs(l.delta_h) != std::abs(r.delta_h)) return std::abs(l.delta_h) > std::abs(r.delta_h);
        return l.country < r.country;
    };
    std::sort(report.upward.begin(), report.upward.end(), by_magnitude);
    std::sort(report.downward.begin(), report.downward.end(), by_magnitude);
    return report;
}

}  // namespace foi
