// foi: command-line front end for the FOI development-index pipeline.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "foi/foi.hpp"

namespace {

enum ExitCode : int { kOk = 0, kInputError = 1, kNumericalError = 2, kVerifyMismatch = 3 };

struct CommonOptions {
    std::string format = "table";
    std::string out;
};

struct PanelOptions {
    std::string panel;
    std::string manifest;
    int epoch = 0;
    std::string missing_policy = "available_mean";
    double threshold = foi::kDefaultThreshold;
    double epsilon = foi::kDefaultEpsilon;
    bool reference = false;
};

void emit(const CommonOptions& common, const std::string& text) {
    if (common.out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream file(common.out, std::ios::binary | std::ios::trunc);
    if (!file) throw foi::InputError("I/O error: cannot write '" + common.out + "'");
    file << text;
    if (!file) throw foi::InputError("I/O error: failed writing '" + common.out + "'");
}

foi::IndicatorManifest manifest_for(const PanelOptions& opts) {
    return opts.manifest.empty() ? foi::default_manifest() : foi::load_manifest(opts.manifest);
}

foi::PipelineOptions pipeline_options(const PanelOptions& opts) {
    foi::PipelineOptions p;
    p.epoch = opts.epoch;
    p.missing_policy = foi::parse_missing_policy(opts.missing_policy);
    p.threshold = opts.threshold;
    p.epsilon = opts.epsilon;
    return p;
}

foi::FoiScores scores_for(const PanelOptions& opts) {
    if (opts.reference) return foi::ReferenceFixture::embedded().indices(opts.epoch);
    if (opts.panel.empty()) throw foi::InputError("either --panel or --reference is required");
    const auto manifest = manifest_for(opts);
    const auto panel = foi::load_panel(opts.panel, manifest, opts.epoch);
    const auto rescaled = foi::rescale_panel(panel, manifest);
    return foi::rank_countries(foi::compute_pillar_scores(rescaled, manifest, foi::parse_missing_policy(opts.missing_policy)));
}

std::string render_rescaled(const foi::RescaledPanel& rescaled, foi::OutputFormat format) {
    const auto& panel = rescaled.panel();
    switch (format) {
        case foi::OutputFormat::Csv: {
            std::ostringstream out;
            foi::write_panel_csv(out, panel);
            return out.str();
        }
        case foi::OutputFormat::Json: {
            nlohmann::json rows = nlohmann::json::array();
            for (std::size_t r = 0; r < panel.rows(); ++r) {
                nlohmann::json vals = nlohmann::json::array();
                for (std::size_t c = 0; c < panel.cols(); ++c) {
                    const auto& v = panel.at(r, c);
                    vals.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
                }
                rows.push_back({{"country", panel.countries()[r]}, {"values", std::move(vals)}});
            }
            return nlohmann::json{{"epoch", panel.epoch()}, {"indicators", panel.indicators()}, {"rows", std::move(rows)}}.dump(2) + "\n";
        }
        case foi::OutputFormat::Table: {
            std::vector<std::vector<std::string>> rows{{"Country"}};
            rows[0].insert(rows[0].end(), panel.indicators().begin(), panel.indicators().end());
            for (std::size_t r = 0; r < panel.rows(); ++r) {
                std::vector<std::string> row{panel.countries()[r]};
                for (std::size_t c = 0; c < panel.cols(); ++c) {
                    const auto& v = panel.at(r, c);
                    row.push_back(v ? foi::format_1dp(*v) : "");
                }
                rows.push_back(std::move(row));
            }
            return foi::detail::render_text_table(rows);
        }
    }
    return {};
}

void add_common(CLI::App* cmd, CommonOptions& common) {
    cmd->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
    cmd->add_option("--out", common.out, "Write output to this file instead of standard output");
}

void add_panel(CLI::App* cmd, PanelOptions& opts, bool with_policy, bool with_rule) {
    cmd->add_option("--panel", opts.panel, "Indicator panel CSV (country,<indicator ids...>)");
    cmd->add_option("--manifest", opts.manifest, "Indicator manifest JSON (default: built-in 24-component manifest)");
    cmd->add_option("--epoch", opts.epoch, "Epoch label (year)");
    if (with_policy) {
        cmd->add_option("--missing-policy", opts.missing_policy, "Missing-component policy")
            ->check(CLI::IsMember({"available_mean", "strict"}));
    }
    if (with_rule) {
        cmd->add_option("--threshold", opts.threshold, "H/L threshold (H iff index >= threshold)");
        cmd->add_option("--epsilon", opts.epsilon, "Borderline band half-width");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"foi: Future/Outside/Inside development-index pipeline"};
    app.require_subcommand(1);

    CommonOptions common;
    PanelOptions popts;

    auto* ingest = app.add_subcommand("ingest", "Load and validate an indicator panel");
    add_common(ingest, common);
    add_panel(ingest, popts, false, false);
    ingest->get_option("--panel")->required();

    auto* rescale = app.add_subcommand("rescale", "Min-max rescale a panel onto the 1-7 scale");
    add_common(rescale, common);
    add_panel(rescale, popts, false, false);
    rescale->get_option("--panel")->required();

    auto* indices = app.add_subcommand("indices", "Compute F/O/I indices and ranks");
    add_common(indices, common);
    add_panel(indices, popts, true, false);
    indices->add_flag("--reference", popts.reference, "Use the embedded published indices for --epoch");

    auto* classify = app.add_subcommand("classify", "Interval-halving classification into clusters 1-8");
    add_common(classify, common);
    add_panel(classify, popts, true, true);
    classify->add_flag("--reference", popts.reference, "Classify the embedded published indices for --epoch");

    std::vector<std::string> shift_panels;
    std::vector<int> shift_epochs;
    bool shift_reference = false;
    auto* shift = app.add_subcommand("shift", "Epoch-to-epoch cluster transitions");
    add_common(shift, common);
    shift->add_option("--panel", shift_panels, "Two panels: earlier epoch first")->expected(2);
    shift->add_option("--epoch", shift_epochs, "Two epoch labels matching --panel")->expected(2);
    shift->add_option("--manifest", popts.manifest, "Indicator manifest JSON");
    shift->add_option("--missing-policy", popts.missing_policy, "Missing-component policy")->check(CLI::IsMember({"available_mean", "strict"}));
    shift->add_option("--threshold", popts.threshold, "H/L threshold");
    shift->add_option("--epsilon", popts.epsilon, "Borderline band half-width");
    shift->add_flag("--reference", shift_reference, "Use the embedded published indices (2010 -> 2020)");

    std::string fa_panel, fa_missing = "pairwise", scores_out;
    std::size_t factors_k = 2;
    bool kaiser_count = false, no_kaiser_normalize = false;
    std::vector<std::string> fa_variables;
    auto* factors = app.add_subcommand("factors", "Exploratory factor analysis (PCA + varimax, KMO, Bartlett, scores)");
    factors->add_option("--format", common.format, "json: model document; csv/table: factor scores")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    factors->add_option("--out", common.out, "Write output to this file");
    factors->add_option("--panel", fa_panel, "Variable CSV (country,<variables...>)")->required();
    factors->add_option("--variables", fa_variables, "Subset of variables to analyse (default: all columns)");
    factors->add_option("--factors-k", factors_k, "Number of factors to retain")->check(CLI::PositiveNumber);
    factors->add_flag("--kaiser-count", kaiser_count, "Retain factors with eigenvalue > 1 instead of --factors-k");
    factors->add_flag("--no-kaiser-normalize", no_kaiser_normalize, "Rotate raw rather than Kaiser-normalized loadings");
    factors->add_option("--missing", fa_missing, "Correlation missing-data handling")->check(CLI::IsMember({"pairwise", "listwise"}));
    factors->add_option("--scores-out", scores_out, "Also write the factor scores CSV here");

    int verify_epoch = 0;
    bool strict_verify = false;
    auto* verify = app.add_subcommand("verify", "Classify published indices and diff against published memberships");
    add_common(verify, common);
    verify->add_option("--epoch", verify_epoch, "2010 or 2020")->required()->check(CLI::IsMember({2010, 2020}));
    verify->add_option("--threshold", popts.threshold, "H/L threshold");
    verify->add_option("--epsilon", popts.epsilon, "Borderline band half-width");
    verify->add_flag("--strict-verify", strict_verify, "Exit with status 3 when mismatches are present");

    std::string export_what = "indices";
    auto* exportc = app.add_subcommand("export", "Write a report (indices, clusters, rescaled, factor-values)");
    add_common(exportc, common);
    add_panel(exportc, popts, true, true);
    exportc->add_option("--what", export_what, "Report to export")
        ->check(CLI::IsMember({"indices", "clusters", "rescaled", "factor-values"}));
    exportc->add_flag("--reference", popts.reference, "Export from the embedded published tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        const auto format = foi::parse_format(common.format);

        if (*ingest) {
            const auto panel = foi::load_panel(popts.panel, manifest_for(popts), popts.epoch);
            emit(common, foi::render_validation(foi::validate_panel(panel), format));
        } else if (*rescale) {
            const auto manifest = manifest_for(popts);
            emit(common, render_rescaled(foi::rescale_panel(foi::load_panel(popts.panel, manifest, popts.epoch), manifest), format));
        } else if (*indices) {
            emit(common, foi::render_scores(scores_for(popts), format));
        } else if (*classify) {
            const auto scores = scores_for(popts);
            emit(common, foi::render_assignments(foi::classify_epoch(scores, popts.threshold, popts.epsilon), format, scores.epoch));
        } else if (*shift) {
            std::vector<foi::ClusterAssignment> a, b;
            int from = 2010, to = 2020;
            if (shift_reference) {
                const auto& fixture = foi::ReferenceFixture::embedded();
                a = foi::classify_epoch(fixture.indices(2010), popts.threshold, popts.epsilon);
                b = foi::classify_epoch(fixture.indices(2020), popts.threshold, popts.epsilon);
            } else {
                if (shift_panels.size() != 2) throw foi::InputError("shift: give --panel twice (earlier epoch first) or --reference");
                from = shift_epochs.size() == 2 ? shift_epochs[0] : 0;
                to = shift_epochs.size() == 2 ? shift_epochs[1] : 0;
                const auto manifest = manifest_for(popts);
                auto opts = pipeline_options(popts);
                opts.epoch = from;
                a = foi::run_pipeline(shift_panels[0], manifest, opts).assignments;
                opts.epoch = to;
                b = foi::run_pipeline(shift_panels[1], manifest, opts).assignments;
            }
            emit(common, foi::render_shift(foi::shift_report(a, b, from, to), format));
        } else if (*factors) {
            auto data = foi::fa::load_variable_matrix(fa_panel);
            if (!fa_variables.empty()) data = data.select(fa_variables);
            foi::fa::FactorModelOptions options;
            options.k = factors_k;
            options.use_kaiser_count = kaiser_count;
            options.missing = foi::fa::parse_missing_handling(fa_missing);
            options.varimax.kaiser_normalize = !no_kaiser_normalize;
            const auto model = foi::fa::fit_factor_model(data, options);
            std::vector<std::string> names;
            for (std::size_t j = 0; j < model.scores.k; ++j) names.push_back("F" + std::to_string(j + 1));
            if (format == foi::OutputFormat::Json) {
                emit(common, foi::factor_model_to_json(model).dump(2) + "\n");
            } else {
                emit(common, foi::render_factor_scores(model.scores, names, format));
            }
            if (!scores_out.empty()) emit(CommonOptions{"csv", scores_out}, foi::render_factor_scores_csv(model.scores, names));
        } else if (*verify) {
            const auto report = foi::verify_reference(foi::ReferenceFixture::embedded(), verify_epoch, popts.threshold, popts.epsilon);
            emit(common, foi::render_verify(report, format));
            if (strict_verify && !report.mismatches.empty()) return kVerifyMismatch;
        } else if (*exportc) {
            if (export_what == "factor-values") {
                const auto& fixture = foi::ReferenceFixture::embedded();
                emit(common, foi::render_factor_scores(fixture.factor_values(), fixture.factor_names(), format));
            } else if (export_what == "rescaled") {
                if (popts.panel.empty()) throw foi::InputError("export --what rescaled needs --panel");
                const auto manifest = manifest_for(popts);
                emit(common, render_rescaled(foi::rescale_panel(foi::load_panel(popts.panel, manifest, popts.epoch), manifest), format));
            } else {
                const auto scores = scores_for(popts);
                if (export_what == "indices") {
                    emit(common, foi::render_scores(scores, format));
                } else {
                    emit(common, foi::render_assignments(foi::classify_epoch(scores, popts.threshold, popts.epsilon), format, scores.epoch));
                }
            }
        }
    } catch (const foi::NumericalError& e) {
        std::cerr << "foi: numerical error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const foi::InputError& e) {
        std::cerr << "foi: input error: " << e.what() << '\n';
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "foi: input error: " << e.what() << '\n';
        return kInputError;
    }
    return kOk;
}
