#pragma once

#include <string>
#include <vector>

#include "foi/classifier.hpp"
#include "foi/indicator_store.hpp"
#include "foi/pillar_index.hpp"
#include "foi/rescaling.hpp"

namespace foi {

struct PipelineOptions {
    int epoch = 0;
    MissingPolicy missing_policy = MissingPolicy::AvailableMean;
    double threshold = kDefaultThreshold;
    double epsilon = kDefaultEpsilon;
};

struct PipelineResult {
    IndicatorPanel panel;
    ValidationReport validation;
    RescaledPanel rescaled;
    FoiScores scores;  // ranked
    std::vector<ClusterAssignment> assignments;
};

/// load -> validate -> rescale -> pillar means -> ranks -> classification.
inline PipelineResult run_pipeline(const IndicatorPanel& panel, const IndicatorManifest& manifest, const PipelineOptions& options = {}) {
    PipelineResult result;
    result.panel = panel;
    result.validation = validate_panel(panel);
    result.rescaled = rescale_panel(panel, manifest);
    result.scores = rank_countries(compute_pillar_scores(result.rescaled, manifest, options.missing_policy));
    result.assignments = classify_epoch(result.scores, options.threshold, options.epsilon);
    return result;
}

inline PipelineResult run_pipeline(const std::string& panel_csv, const IndicatorManifest& manifest, const PipelineOptions& options = {}) {
    return run_pipeline(load_panel(panel_csv, manifest, options.epoch), manifest, options);
}

}  // namespace foi
