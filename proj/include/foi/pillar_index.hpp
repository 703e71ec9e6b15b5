#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "foi/error.hpp"
#include "foi/indicator_store.hpp"
#include "foi/rescaling.hpp"

namespace foi {

enum class MissingPolicy {
    AvailableMean,  ///< mean over the country's non-missing components
    Strict,         ///< any missing component makes the pillar index absent
};

inline MissingPolicy parse_missing_policy(std::string_view s) {
    if (s == "available_mean") return MissingPolicy::AvailableMean;
    if (s == "strict") return MissingPolicy::Strict;
    throw InputError("invalid missing policy '" + std::string(s) + "' (expected available_mean or strict)");
}

struct CountryScores {
    std::string country;
    std::array<std::optional<double>, 3> index{};  // indexed by Pillar
    std::array<int, 3> rank{};                     // 0 = unranked

    std::optional<double> get(Pillar p) const { return index[static_cast<std::size_t>(p)]; }
    int rank_of(Pillar p) const { return rank[static_cast<std::size_t>(p)]; }
};

struct FoiScores {
    int epoch = 0;
    std::vector<CountryScores> rows;

    const CountryScores* find(std::string_view country) const {
        auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.country == country; });
        return it == rows.end() ? nullptr : &*it;
    }
};

/// Averages rescaled components into the F, O and I indices (ranks left at 0).
///
/// Specs sharing a component key are first averaged over their present values; the pillar index
/// is then the mean of the pillar's components.
inline FoiScores compute_pillar_scores(const RescaledPanel& rescaled, const IndicatorManifest& manifest,
                                       MissingPolicy policy = MissingPolicy::AvailableMean) {
    struct Component {
        Pillar pillar;
        std::vector<std::size_t> columns;
    };
    std::vector<std::string> order;
    std::map<std::string, Component> components;
    for (std::size_t c = 0; c < rescaled.cols(); ++c) {
        const auto& spec = manifest.at(rescaled.indicators()[c]);
        auto [it, inserted] = components.try_emplace(spec.component_key(), Component{spec.pillar, {}});
        if (inserted) order.push_back(spec.component_key());
        it->second.columns.push_back(c);
    }
    for (auto p : kPillars) {
        bool has = std::any_of(components.begin(), components.end(), [p](const auto& kv) { return kv.second.pillar == p; });
        if (!has) throw InputError("pillar_index: pillar " + std::string(to_string(p)) + " has no indicators in the panel");
    }

    FoiScores scores;
    scores.epoch = rescaled.epoch();
    for (std::size_t r = 0; r < rescaled.rows(); ++r) {
        CountryScores row;
        row.country = rescaled.countries()[r];
        for (auto p : kPillars) {
            double sum = 0.0;
            std::size_t present = 0;
            bool any_missing = false;
            for (const auto& key : order) {
                const auto& comp = components.at(key);
                if (comp.pillar != p) continue;
                double csum = 0.0;
                std::size_t cn = 0;
                for (auto c : comp.columns) {
                    if (const auto& v = rescaled.at(r, c)) {
                        csum += *v;
                        ++cn;
                    } else {
                        any_missing = true;
                    }
                }
                if (cn > 0) {
                    sum += csum / static_cast<double>(cn);
                    ++present;
                }
            }
            auto& slot = row.index[static_cast<std::size_t>(p)];
            if (policy == MissingPolicy::Strict) {
                if (!any_missing) slot = sum / static_cast<double>(present);
            } else {
                if (present == 0) {
                    throw InputError("pillar_index: country '" + row.country + "' has no non-missing components in pillar " +
                                     std::string(to_string(p)));
                }
                slot = sum / static_cast<double>(present);
            }
        }
        scores.rows.push_back(std::move(row));
    }
    return scores;
}

/// Fills ranks per pillar: 1 = highest index, ties by ascending country code. Absent indices stay unranked.
inline FoiScores rank_countries(FoiScores scores) {
    for (auto p : kPillars) {
        const auto k = static_cast<std::size_t>(p);
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < scores.rows.size(); ++i) {
            scores.rows[i].rank[k] = 0;
            if (scores.rows[i].index[k]) idx.push_back(i);
        }
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            const double va = *scores.rows[a].index[k];
            const double vb = *scores.rows[b].index[k];
            if (va != vb) return va > vb;
            return scores.rows[a].country < scores.rows[b].country;
        });
        for (std::size_t pos = 0; pos < idx.size(); ++pos) scores.rows[idx[pos]].rank[k] = static_cast<int>(pos + 1);
    }
    return scores;
}

}  // namespace foi
