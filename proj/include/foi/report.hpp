#pragma once

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "foi/classifier.hpp"
#include "foi/factor_analysis.hpp"
#include "foi/indicator_store.hpp"
#include "foi/pillar_index.hpp"
#include "foi/reference_fixture.hpp"

namespace foi {

enum class OutputFormat { Table, Csv, Json };

inline OutputFormat parse_format(std::string_view s) {
    if (s == "table") return OutputFormat::Table;
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw InputError("invalid format '" + std::string(s) + "' (expected table, csv or json)");
}

/// One decimal, half-up (away from zero at .x5 on the decimal value, computed in binary).
inline std::string format_1dp(double v) {
    const double rounded = std::floor(v * 10.0 + 0.5) / 10.0;
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), rounded == 0.0 ? 0.0 : rounded, std::chars_format::fixed, 1);
    return std::string(buf, ptr);
}

/// Index cell in the "5.2 (2)" style.
inline std::string format_index_cell(const std::optional<double>& value, int rank) {
    if (!value) return "-";
    std::string s = format_1dp(*value);
    if (rank > 0) s += " (" + std::to_string(rank) + ")";
    return s;
}

namespace detail {

inline nlohmann::json cell_json(const Cell& c) { return c ? nlohmann::json(*c) : nlohmann::json(nullptr); }

inline std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

/// Left-aligned text table; the last column is not padded.
inline std::string render_text_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += i + 1 == row.size() ? row[i] : pad(row[i], widths[i] + 2);
        }
        out += '\n';
    }
    return out;
}

}  // namespace detail

// ---- pillar scores ------------------------------------------------------------------------------

inline nlohmann::json scores_to_json(const FoiScores& scores) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : scores.rows) {
        nlohmann::json row{{"country", r.country}};
        for (auto p : kPillars) {
            const std::string key(to_string(p));
            row[key] = {{"index", detail::cell_json(r.get(p))}, {"rank", r.rank_of(p)}};
        }
        rows.push_back(std::move(row));
    }
    return {{"epoch", scores.epoch}, {"scores", std::move(rows)}};
}

inline FoiScores scores_from_json(const nlohmann::json& doc) {
    FoiScores scores;
    scores.epoch = doc.at("epoch").get<int>();
    for (const auto& row : doc.at("scores")) {
        CountryScores cs;
        cs.country = row.at("country").get<std::string>();
        for (auto p : kPillars) {
            const auto& cell = row.at(std::string(to_string(p)));
            const auto k = static_cast<std::size_t>(p);
            if (!cell.at("index").is_null()) cs.index[k] = cell.at("index").get<double>();
            cs.rank[k] = cell.at("rank").get<int>();
        }
        scores.rows.push_back(std::move(cs));
    }
    return scores;
}

inline std::string render_scores(const FoiScores& scores, OutputFormat format) {
    const std::string suffix = scores.epoch ? "-" + std::to_string(scores.epoch) : "";
    switch (format) {
        case OutputFormat::Table: {
            std::vector<std::vector<std::string>> rows{{"Country", "F" + suffix, "O" + suffix, "I" + suffix}};
            for (const auto& r : scores.rows) {
                rows.push_back({r.country, format_index_cell(r.get(Pillar::F), r.rank_of(Pillar::F)),
                                format_index_cell(r.get(Pillar::O), r.rank_of(Pillar::O)),
                                format_index_cell(r.get(Pillar::I), r.rank_of(Pillar::I))});
            }
            return detail::render_text_table(rows);
        }
        case OutputFormat::Csv: {
            std::string out = "country,f_index,f_rank,o_index,o_rank,i_index,i_rank\n";
            for (const auto& r : scores.rows) {
                out += r.country;
                for (auto p : kPillars) out += "," + detail::format_cell(r.get(p)) + "," + std::to_string(r.rank_of(p));
                out += '\n';
            }
            return out;
        }
        case OutputFormat::Json: return scores_to_json(scores).dump(2) + "\n";
    }
    return {};
}

// ---- cluster assignments -----------------------------------------------------------------------

inline std::string borderline_string(const ClusterAssignment& a) {
    std::string s;
    for (std::size_t k = 0; k < 3; ++k) {
        if (a.borderline[k]) s += to_string(kPillars[k]);
    }
    return s;
}

inline std::string render_assignments(const std::vector<ClusterAssignment>& list, OutputFormat format, int epoch = 0) {
    switch (format) {
        case OutputFormat::Table: {
            std::vector<std::vector<std::string>> rows{{"Country", "F", "O", "I", "Levels", "Cluster", "Model", "Borderline"}};
            for (const auto& a : list) {
                rows.push_back({a.country, format_1dp(a.index[0]), format_1dp(a.index[1]), format_1dp(a.index[2]), level_string(a.levels),
                                std::to_string(a.cluster), a.label, a.any_borderline() ? borderline_string(a) : "-"});
            }
            return detail::render_text_table(rows);
        }
        case OutputFormat::Csv: {
            std::string out = "country,f_index,o_index,i_index,levels,cluster,label,borderline\n";
            for (const auto& a : list) {
                out += a.country + "," + detail::format_full(a.index[0]) + "," + detail::format_full(a.index[1]) + "," +
                       detail::format_full(a.index[2]) + "," + level_string(a.levels) + "," + std::to_string(a.cluster) + "," + a.label +
                       "," + borderline_string(a) + "\n";
            }
            return out;
        }
        case OutputFormat::Json: {
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& a : list) {
                rows.push_back({{"country", a.country},
                                {"index", a.index},
                                {"levels", level_string(a.levels)},
                                {"cluster", a.cluster},
                                {"label", a.label},
                                {"borderline", borderline_string(a)}});
            }
            nlohmann::json doc{{"assignments", std::move(rows)}};
            if (epoch) doc["epoch"] = epoch;
            return doc.dump(2) + "\n";
        }
    }
    return {};
}

// ---- shifts ------------------------------------------------------------------------------------

inline std::string render_shift(const ShiftReport& report, OutputFormat format) {
    auto signed_delta = [](int d) { return (d > 0 ? "+" : "") + std::to_string(d); };
    switch (format) {
        case OutputFormat::Table: {
            std::ostringstream out;
            out << "Shift " << report.from_epoch << " -> " << report.to_epoch << "\n\n";
            std::vector<std::vector<std::string>> rows{{"Country", "From", "To", "dH"}};
            for (const auto& s : report.shifts) {
                rows.push_back({s.country, std::to_string(s.from_cluster), std::to_string(s.to_cluster), signed_delta(s.delta_h)});
            }
            out << detail::render_text_table(rows) << "\nTransition matrix (rows: from, columns: to)\n";
            std::vector<std::vector<std::string>> matrix{{""}};
            for (int c = 1; c <= 8; ++c) matrix[0].push_back(std::to_string(c));
            for (std::size_t i = 0; i < 8; ++i) {
                std::vector<std::string> row{std::to_string(i + 1)};
                for (std::size_t j = 0; j < 8; ++j) row.push_back(std::to_string(report.transitions[i][j]));
                matrix.push_back(std::move(row));
            }
            out << detail::render_text_table(matrix) << '\n';
            auto list = [&](const char* title, const std::vector<CountryShift>& v) {
                out << title << ":";
                for (const auto& s : v) out << ' ' << s.country << '(' << signed_delta(s.delta_h) << ')';
                out << '\n';
            };
            list("Upward", report.upward);
            list("Downward", report.downward);
            list("Lateral", report.lateral);
            list("Stayers", report.stayers);
            return out.str();
        }
        case OutputFormat::Csv: {
            std::string out = "country,from_cluster,to_cluster,delta_h\n";
            for (const auto& s : report.shifts) {
                out += s.country + "," + std::to_string(s.from_cluster) + "," + std::to_string(s.to_cluster) + "," +
                       std::to_string(s.delta_h) + "\n";
            }
            return out;
        }
        case OutputFormat::Json: {
            auto to_json = [](const std::vector<CountryShift>& v) {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& s : v) {
                    arr.push_back({{"country", s.country}, {"from", s.from_cluster}, {"to", s.to_cluster}, {"delta_h", s.delta_h}});
                }
                return arr;
            };
            nlohmann::json doc{{"from_epoch", report.from_epoch},
                               {"to_epoch", report.to_epoch},
                               {"shifts", to_json(report.shifts)},
                               {"transitions", report.transitions},
                               {"upward", to_json(report.upward)},
                               {"downward", to_json(report.downward)},
                               {"lateral", to_json(report.lateral)},
                               {"stayers", to_json(report.stayers)}};
            return doc.dump(2) + "\n";
        }
    }
    return {};
}

// ---- verification ------------------------------------------------------------------------------

inline std::string render_verify(const VerifyReport& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::Table: {
            std::ostringstream out;
            out << "Epoch " << report.epoch << ": " << report.matches << "/" << report.country_count << " match (threshold "
                << detail::format_full(report.threshold) << ", epsilon " << detail::format_full(report.epsilon) << ")\n";
            if (!report.mismatches.empty()) {
                std::vector<std::vector<std::string>> rows{{"Country", "Computed", "Reference", "Kind"}};
                for (const auto& m : report.mismatches) {
                    rows.push_back({m.country, std::to_string(m.computed), std::to_string(m.reference), m.borderline ? "borderline" : "hard"});
                }
                out << detail::render_text_table(rows);
            }
            return out.str();
        }
        case OutputFormat::Csv: {
            std::string out = "country,computed,reference,kind\n";
            for (const auto& m : report.mismatches) {
                out += m.country + "," + std::to_string(m.computed) + "," + std::to_string(m.reference) + "," +
                       (m.borderline ? "borderline" : "hard") + "\n";
            }
            return out;
        }
        case OutputFormat::Json: {
            nlohmann::json list = nlohmann::json::array();
            for (const auto& m : report.mismatches) {
                list.push_back({{"country", m.country}, {"computed", m.computed}, {"reference", m.reference}, {"borderline", m.borderline}});
            }
            nlohmann::json doc{{"epoch", report.epoch},         {"threshold", report.threshold},
                               {"epsilon", report.epsilon},     {"countries", report.country_count},
                               {"matches", report.matches},     {"hard_mismatches", report.hard_count()},
                               {"borderline_mismatches", report.borderline_count()}, {"mismatches", std::move(list)}};
            return doc.dump(2) + "\n";
        }
    }
    return {};
}

// ---- validation --------------------------------------------------------------------------------

inline std::string render_validation(const ValidationReport& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::Table: {
            std::ostringstream out;
            out << "Cells: " << report.total_cells << ", missing: " << report.missing_cells << ", coverage: " << detail::format_full(report.coverage)
                << "\n";
            std::vector<std::vector<std::string>> rows{{"Indicator", "Missing"}};
            for (const auto& [id, n] : report.missing_by_indicator) rows.push_back({id, std::to_string(n)});
            out << detail::render_text_table(rows);
            std::vector<std::vector<std::string>> crow{{"Country", "Missing"}};
            for (const auto& [c, n] : report.missing_by_country) crow.push_back({c, std::to_string(n)});
            out << detail::render_text_table(crow);
            for (const auto& w : report.warnings) out << "warning: " << w << '\n';
            return out.str();
        }
        case OutputFormat::Csv: {
            std::string out = "kind,key,missing\n";
            for (const auto& [id, n] : report.missing_by_indicator) out += "indicator," + id + "," + std::to_string(n) + "\n";
            for (const auto& [c, n] : report.missing_by_country) out += "country," + c + "," + std::to_string(n) + "\n";
            return out;
        }
        case OutputFormat::Json: {
            nlohmann::json by_ind = nlohmann::json::object();
            for (const auto& [id, n] : report.missing_by_indicator) by_ind[id] = n;
            nlohmann::json by_country = nlohmann::json::object();
            for (const auto& [c, n] : report.missing_by_country) by_country[c] = n;
            nlohmann::json doc{{"total_cells", report.total_cells},     {"missing_cells", report.missing_cells},
                               {"coverage", report.coverage},           {"missing_by_indicator", by_ind},
                               {"missing_by_country", by_country},      {"warnings", report.warnings}};
            return doc.dump(2) + "\n";
        }
    }
    return {};
}

// ---- factor analysis ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
        rows.push_back(row);
    }
    return rows;
}

inline nlohmann::json vector_json(const Eigen::VectorXd& v) {
    std::vector<double> out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v(i);
    return out;
}

}  // namespace detail

inline nlohmann::json factor_model_to_json(const fa::FactorModel& m) {
    return {{"variables", m.variables},
            {"n", m.n},
            {"k", m.rotated.cols()},
            {"eigenvalues", detail::vector_json(m.eigenvalues)},
            {"eigenvalue_ties", m.eigenvalue_ties},
            {"unrotated_loadings", detail::matrix_json(m.unrotated)},
            {"rotated_loadings", detail::matrix_json(m.rotated)},
            {"rotation", detail::matrix_json(m.rotation)},
            {"communalities", detail::vector_json(fa::communalities(m.rotated))},
            {"kmo", m.kmo},
            {"msa", detail::vector_json(m.msa)},
            {"bartlett", {{"chi_square", m.bartlett.chi_square}, {"df", m.bartlett.df}, {"p_value", m.bartlett.p_value}}},
            {"variance_explained", m.variance_explained},
            {"varimax", {{"criterion", m.varimax_criterion}, {"sweeps", m.varimax_sweeps}, {"converged", m.converged}}}};
}

/// Scores CSV in the factor-value table layout; MISSING cells are empty.
inline std::string render_factor_scores_csv(const fa::FactorScores& scores, const std::vector<std::string>& factor_names) {
    std::string out = "country";
    for (const auto& n : factor_names) out += "," + n;
    out += '\n';
    for (std::size_t r = 0; r < scores.rows.size(); ++r) {
        out += scores.rows[r];
        for (const auto& v : scores.values[r]) out += "," + detail::format_cell(v);
        out += '\n';
    }
    return out;
}

inline std::string render_factor_scores(const fa::FactorScores& scores, const std::vector<std::string>& factor_names, OutputFormat format) {
    switch (format) {
        case OutputFormat::Csv: return render_factor_scores_csv(scores, factor_names);
        case OutputFormat::Table: {
            std::vector<std::vector<std::string>> rows{{"Country"}};
            rows[0].insert(rows[0].end(), factor_names.begin(), factor_names.end());
            for (std::size_t r = 0; r < scores.rows.size(); ++r) {
                std::vector<std::string> row{scores.rows[r]};
                for (const auto& v : scores.values[r]) {
                    if (!v) {
                        row.emplace_back("");
                        continue;
                    }
                    std::ostringstream s;
                    s.imbue(std::locale::classic());
                    s << std::fixed << std::setprecision(5) << *v;
                    row.push_back(s.str());
                }
                rows.push_back(std::move(row));
            }
            return detail::render_text_table(rows);
        }
        case OutputFormat::Json: {
            nlohmann::json rows = nlohmann::json::array();
            for (std::size_t r = 0; r < scores.rows.size(); ++r) {
                nlohmann::json vals = nlohmann::json::array();
                for (const auto& v : scores.values[r]) vals.push_back(detail::cell_json(v));
                rows.push_back({{"country", scores.rows[r]}, {"values", std::move(vals)}});
            }
            return nlohmann::json{{"factors", factor_names}, {"rows", std::move(rows)}}.dump(2) + "\n";
        }
    }
    return {};
}

}  // namespace foi
