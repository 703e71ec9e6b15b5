#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "foi/cell.hpp"
#include "foi/csv.hpp"
#include "foi/error.hpp"

namespace foi {

enum class Pillar { F = 0, O = 1, I = 2 };
enum class Direction { HigherIsBetter, LowerIsBetter };

inline constexpr std::array<Pillar, 3> kPillars{Pillar::F, Pillar::O, Pillar::I};

inline std::string_view to_string(Pillar p) {
    switch (p) {
        case Pillar::F: return "F";
        case Pillar::O: return "O";
        case Pillar::I: return "I";
    }
    return "?";
}

inline std::string_view to_string(Direction d) {
    return d == Direction::HigherIsBetter ? "higher_is_better" : "lower_is_better";
}

inline Pillar parse_pillar(std::string_view s) {
    if (s == "F") return Pillar::F;
    if (s == "O") return Pillar::O;
    if (s == "I") return Pillar::I;
    throw InputError("invalid pillar '" + std::string(s) + "' (expected F, O or I)");
}

inline Direction parse_direction(std::string_view s) {
    if (s == "higher_is_better") return Direction::HigherIsBetter;
    if (s == "lower_is_better") return Direction::LowerIsBetter;
    throw InputError("invalid direction '" + std::string(s) + "' (expected higher_is_better or lower_is_better)");
}

/// Metadata for one raw indicator column.
///
/// `component` groups specs that are averaged into a single model component before pillar
/// aggregation; it defaults to `id` (one spec per component).
struct IndicatorSpec {
    std::string id;
    std::string name;
    Pillar pillar = Pillar::F;
    Direction direction = Direction::HigherIsBetter;
    std::string source;
    std::string component;

    const std::string& component_key() const { return component.empty() ? id : component; }
};

/// Ordered, validated list of indicator specs.
class IndicatorManifest {
public:
    IndicatorManifest() = default;

    explicit IndicatorManifest(std::vector<IndicatorSpec> specs) : specs_(std::move(specs)) {
        std::map<std::string, Pillar, std::less<>> component_pillar;
        for (std::size_t i = 0; i < specs_.size(); ++i) {
            const auto& s = specs_[i];
            if (s.id.empty()) throw InputError("manifest: spec " + std::to_string(i) + " has an empty id");
            if (!index_.emplace(s.id, i).second) throw InputError("manifest: duplicate indicator id '" + s.id + "'");
            auto [it, inserted] = component_pillar.emplace(s.component_key(), s.pillar);
            if (!inserted && it->second != s.pillar) {
                throw InputError("manifest: component '" + s.component_key() + "' spans more than one pillar");
            }
        }
    }

    const std::vector<IndicatorSpec>& specs() const { return specs_; }
    std::size_t size() const { return specs_.size(); }

    bool contains(std::string_view id) const { return index_.find(id) != index_.end(); }

    const IndicatorSpec& at(std::string_view id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw InputError("manifest: unknown indicator '" + std::string(id) + "'");
        return specs_[it->second];
    }

    std::size_t position(std::string_view id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw InputError("manifest: unknown indicator '" + std::string(id) + "'");
        return it->second;
    }

    std::size_t spec_count(Pillar p) const {
        return static_cast<std::size_t>(std::count_if(specs_.begin(), specs_.end(), [p](const auto& s) { return s.pillar == p; }));
    }

    /// Distinct component keys of a pillar, in manifest order.
    std::vector<std::string> components(Pillar p) const {
        std::vector<std::string> out;
        for (const auto& s : specs_) {
            if (s.pillar == p && std::find(out.begin(), out.end(), s.component_key()) == out.end()) out.push_back(s.component_key());
        }
        return out;
    }

    static IndicatorManifest from_json(const nlohmann::json& doc) {
        if (!doc.is_array()) throw InputError("manifest: expected a JSON array of spec objects");
        std::vector<IndicatorSpec> specs;
        for (const auto& item : doc) {
            if (!item.is_object()) throw InputError("manifest: every entry must be an object");
            for (const char* key : {"id", "name", "pillar", "direction", "source"}) {
                if (!item.contains(key) || !item[key].is_string()) {
                    throw InputError(std::string("manifest: entry missing string key '") + key + "'");
                }
            }
            IndicatorSpec s;
            s.id = item["id"].get<std::string>();
            s.name = item["name"].get<std::string>();
            s.pillar = parse_pillar(item["pillar"].get<std::string>());
            s.direction = parse_direction(item["direction"].get<std::string>());
            s.source = item["source"].get<std::string>();
            if (item.contains("component")) s.component = item["component"].get<std::string>();
            specs.push_back(std::move(s));
        }
        return IndicatorManifest(std::move(specs));
    }

    nlohmann::json to_json() const {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& s : specs_) {
            nlohmann::json item{{"id", s.id},
                                {"name", s.name},
                                {"pillar", std::string(to_string(s.pillar))},
                                {"direction", std::string(to_string(s.direction))},
                                {"source", s.source}};
            if (!s.component.empty()) item["component"] = s.component;
            out.push_back(std::move(item));
        }
        return out;
    }

private:
    std::vector<IndicatorSpec> specs_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

inline IndicatorManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open manifest file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("manifest '" + path + "': " + e.what());
    }
    return IndicatorManifest::from_json(doc);
}

/// The shipped 24-component manifest (25 specs; R&D potential uses two specs).
///
/// Direction flags are interpretive: ageing share, ecological footprint, exchange-rate variance,
/// tax burden and electricity losses are treated as lower-is-better. They are assumptions, not
/// published facts.
inline IndicatorManifest default_manifest() {
    using enum Pillar;
    constexpr auto hi = Direction::HigherIsBetter;
    constexpr auto lo = Direction::LowerIsBetter;
    return IndicatorManifest({
        {"social_responsibility", "Social responsibility: Global Sustainable Competitiveness Index", F, hi, "Solability", ""},
        {"work_ethic", "Work ethic: cooperation in labour-employer relations", F, hi, "WEF", ""},
        {"energy_efficiency", "Energy efficiency: electricity supply losses, % of output (assumed lower is better)", F, lo, "WEF", ""},
        {"education_expenditure", "Education expenditure: spending on educational institutions, % of GDP", F, hi, "OECD", ""},
        {"ageing_society", "Ageing of society: population 65 and above, % (assumed lower is better)", F, lo, "OECD", ""},
        {"renewable_energy", "Renewable energy, % of primary energy supply", F, hi, "OECD", ""},
        {"ecological_footprint", "Environmental sustainability: ecological footprint (assumed lower is better)", F, lo, "GFN", ""},
        {"rd_expenditure", "R&D potential: R&D expenditures, % of GDP", F, hi, "WEF", "rd_potential"},
        {"patent_applications", "R&D potential: patent applications per million population", F, hi, "WEF", "rd_potential"},
        {"education_efficiency", "Efficiency of the education system: not low achievers (PISA), 15-year-olds", F, hi, "OECD-PISA", ""},
        {"trade_openness", "Trade openness: (exports + imports) / GDP * 2", O, hi, "OECD", ""},
        {"country_risk", "Country risk: country credit rating", O, hi, "TE", ""},
        {"bank_soundness", "Stability of the financial sector: soundness of banks", O, hi, "WEF", ""},
        {"exchange_rate_stability", "Exchange rate stability: SDR variance (assumed lower is better)", O, lo, "IMF", ""},
        {"language_skills", "Language skills: TOEFL scores", O, hi, "ETS.ORG", ""},
        {"government_efficiency", "Government efficiency: budget transparency", I, hi, "WEF", ""},
        {"social_wellbeing", "Social wellbeing: Better Life Index", I, hi, "OECD", ""},
        {"tax_burden", "Tax burden: general government revenue, % of GDP (assumed lower is better)", I, lo, "IMF", ""},
        {"pension_system", "Pension system: assets in pension funds and retirement vehicles, % of GDP", I, hi, "OECD", ""},
        {"development_level", "Level of development: PPP GDP per capita", I, hi, "IMF", ""},
        {"growth", "Growth: real GDP change", I, hi, "IMF", ""},
        {"capital_availability", "Availability of capital: financing of SMEs", I, hi, "WEF", ""},
        {"labour_flexibility", "Labour market flexibility", I, hi, "WEF", ""},
        {"employment", "Employment: labour force, % of population", I, hi, "OECD", ""},
        {"skilled_labour", "Skilled labour: ease of finding skilled employees", I, hi, "WEF", ""},
    });
}

/// Country × indicator grid for one epoch. Immutable after construction.
class IndicatorPanel {
public:
    IndicatorPanel() = default;

    IndicatorPanel(int epoch, std::vector<std::string> countries, std::vector<std::string> indicators, std::vector<Cell> values)
        : epoch_(epoch), countries_(std::move(countries)), indicators_(std::move(indicators)), values_(std::move(values)) {
        if (values_.size() != countries_.size() * indicators_.size()) {
            throw InputError("panel: grid has " + std::to_string(values_.size()) + " cells, expected " +
                             std::to_string(countries_.size() * indicators_.size()));
        }
        std::set<std::string, std::less<>> seen;
        for (const auto& c : countries_) {
            if (!seen.insert(c).second) throw InputError("panel: duplicate country '" + c + "'");
        }
        seen.clear();
        for (const auto& id : indicators_) {
            if (!seen.insert(id).second) throw InputError("panel: duplicate indicator '" + id + "'");
        }
    }

    int epoch() const { return epoch_; }
    const std::vector<std::string>& countries() const { return countries_; }
    const std::vector<std::string>& indicators() const { return indicators_; }
    std::size_t rows() const { return countries_.size(); }
    std::size_t cols() const { return indicators_.size(); }
    const std::vector<Cell>& values() const { return values_; }

    const Cell& at(std::size_t row, std::size_t col) const { return values_[row * cols() + col]; }

    std::vector<Cell> column(std::size_t col) const {
        std::vector<Cell> out;
        out.reserve(rows());
        for (std::size_t r = 0; r < rows(); ++r) out.push_back(at(r, col));
        return out;
    }

    std::optional<std::size_t> find_indicator(std::string_view id) const {
        auto it = std::find(indicators_.begin(), indicators_.end(), id);
        if (it == indicators_.end()) return std::nullopt;
        return static_cast<std::size_t>(it - indicators_.begin());
    }

    std::optional<std::size_t> find_country(std::string_view code) const {
        auto it = std::find(countries_.begin(), countries_.end(), code);
        if (it == countries_.end()) return std::nullopt;
        return static_cast<std::size_t>(it - countries_.begin());
    }

    friend bool operator==(const IndicatorPanel&, const IndicatorPanel&) = default;

private:
    int epoch_ = 0;
    std::vector<std::string> countries_;
    std::vector<std::string> indicators_;
    std::vector<Cell> values_;
};

/// Builds a panel from a parsed table; columns are reordered to follow the manifest.
inline IndicatorPanel panel_from_table(const CsvTable& table, const IndicatorManifest& manifest, int epoch, std::string_view source) {
    for (const auto& col : table.columns) {
        if (!manifest.contains(col)) {
            throw InputError(std::string(source) + ": schema error: column '" + col + "' is not in the manifest");
        }
    }
    std::vector<std::size_t> order(table.columns.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return manifest.position(table.columns[a]) < manifest.position(table.columns[b]);
    });

    std::vector<std::string> indicators;
    for (auto i : order) indicators.push_back(table.columns[i]);
    std::vector<Cell> values;
    values.reserve(table.rows.size() * order.size());
    for (const auto& row : table.rows) {
        for (auto i : order) values.push_back(row[i]);
    }
    return IndicatorPanel(epoch, table.keys, std::move(indicators), std::move(values));
}

inline IndicatorPanel parse_panel(std::istream& in, const IndicatorManifest& manifest, int epoch, std::string_view source = "<panel>") {
    return panel_from_table(parse_csv_table(in, source), manifest, epoch, source);
}

/// Loads a `country,<indicator ids...>` CSV. Empty cells are MISSING.
inline IndicatorPanel load_panel(const std::string& path, const IndicatorManifest& manifest, int epoch = 0) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open panel file '" + path + "'");
    return parse_panel(in, manifest, epoch, path);
}

inline void write_panel_csv(std::ostream& out, const IndicatorPanel& panel) {
    CsvTable table;
    table.columns = panel.indicators();
    table.keys = panel.countries();
    for (std::size_t r = 0; r < panel.rows(); ++r) {
        std::vector<Cell> row;
        for (std::size_t c = 0; c < panel.cols(); ++c) row.push_back(panel.at(r, c));
        table.rows.push_back(std::move(row));
    }
    write_csv_table(out, table);
}

struct ValidationReport {
    std::vector<std::pair<std::string, std::size_t>> missing_by_indicator;
    std::vector<std::pair<std::string, std::size_t>> missing_by_country;
    std::size_t missing_cells = 0;
    std::size_t total_cells = 0;
    double coverage = 1.0;
    std::vector<std::string> warnings;
};

/// Counts MISSING cells; never throws.
inline ValidationReport validate_panel(const IndicatorPanel& panel) {
    ValidationReport report;
    report.total_cells = panel.rows() * panel.cols();
    std::vector<std::size_t> by_col(panel.cols(), 0);
    std::vector<std::size_t> by_row(panel.rows(), 0);
    for (std::size_t r = 0; r < panel.rows(); ++r) {
        for (std::size_t c = 0; c < panel.cols(); ++c) {
            if (!panel.at(r, c)) {
                ++by_col[c];
                ++by_row[r];
                ++report.missing_cells;
            }
        }
    }
    for (std::size_t c = 0; c < panel.cols(); ++c) {
        report.missing_by_indicator.emplace_back(panel.indicators()[c], by_col[c]);
        if (panel.rows() > 0 && by_col[c] == panel.rows()) {
            report.warnings.push_back("indicator '" + panel.indicators()[c] + "' is entirely missing");
        }
    }
    for (std::size_t r = 0; r < panel.rows(); ++r) {
        report.missing_by_country.emplace_back(panel.countries()[r], by_row[r]);
        if (panel.cols() > 0 && by_row[r] == panel.cols()) {
            report.warnings.push_back("country '" + panel.countries()[r] + "' has no values");
        }
    }
    report.coverage = report.total_cells == 0 ? 1.0
                                              : 1.0 - static_cast<double>(report.missing_cells) / static_cast<double>(report.total_cells);
    return report;
}

}  // namespace foi
