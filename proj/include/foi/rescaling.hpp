#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "foi/cell.hpp"
#include "foi/error.hpp"
#include "foi/indicator_store.hpp"

namespace foi {

inline constexpr double kScaleMin = 1.0;
inline constexpr double kScaleMax = 7.0;
inline constexpr double kScaleMid = 4.0;

/// Raised when a column has no non-missing value.
class EmptyColumnError : public InputError {
public:
    using InputError::InputError;
};

/// Min-max map of one column onto [1, 7]: worst observed value -> 1, best -> 7.
/// A column whose present values are all equal maps to the midpoint 4.
inline std::vector<Cell> min_max_rescale(std::span<const Cell> values, Direction direction) {
    bool any = false;
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& v : values) {
        if (!v) continue;
        if (!any) {
            lo = hi = *v;
            any = true;
        } else {
            lo = std::min(lo, *v);
            hi = std::max(hi, *v);
        }
    }
    if (!any) throw EmptyColumnError("column has no non-missing values");

    std::vector<Cell> out;
    out.reserve(values.size());
    const double range = hi - lo;
    for (const auto& v : values) {
        if (!v) {
            out.push_back(kMissing);
            continue;
        }
        if (range == 0.0) {
            out.push_back(kScaleMid);
            continue;
        }
        const double t = direction == Direction::HigherIsBetter ? (*v - lo) / range : (hi - *v) / range;
        // endpoints exactly, not 1 + 6 * 0.9999999999999999
        double r = kScaleMin + (kScaleMax - kScaleMin) * t;
        if (*v == (direction == Direction::HigherIsBetter ? hi : lo)) r = kScaleMax;
        if (*v == (direction == Direction::HigherIsBetter ? lo : hi)) r = kScaleMin;
        out.push_back(std::clamp(r, kScaleMin, kScaleMax));
    }
    return out;
}

/// A panel whose cells are on the 1-7 scale.
class RescaledPanel {
public:
    RescaledPanel() = default;
    explicit RescaledPanel(IndicatorPanel panel) : panel_(std::move(panel)) {}

    const IndicatorPanel& panel() const { return panel_; }
    int epoch() const { return panel_.epoch(); }
    const std::vector<std::string>& countries() const { return panel_.countries(); }
    const std::vector<std::string>& indicators() const { return panel_.indicators(); }
    const Cell& at(std::size_t row, std::size_t col) const { return panel_.at(row, col); }
    std::size_t rows() const { return panel_.rows(); }
    std::size_t cols() const { return panel_.cols(); }

private:
    IndicatorPanel panel_;
};

/// Rescales each column with its manifest direction; min/max range over this panel's countries.
inline RescaledPanel rescale_panel(const IndicatorPanel& panel, const IndicatorManifest& manifest) {
    std::vector<Cell> grid(panel.rows() * panel.cols());
    for (std::size_t c = 0; c < panel.cols(); ++c) {
        const auto& id = panel.indicators()[c];
        const auto column = panel.column(c);
        std::vector<Cell> scaled;
        try {
            scaled = min_max_rescale(column, manifest.at(id).direction);
        } catch (const EmptyColumnError&) {
            throw EmptyColumnError("rescaling: indicator '" + id + "' has no non-missing values");
        }
        for (std::size_t r = 0; r < panel.rows(); ++r) grid[r * panel.cols() + c] = scaled[r];
    }
    return RescaledPanel(IndicatorPanel(panel.epoch(), panel.countries(), panel.indicators(), std::move(grid)));
}

}  // namespace foi
