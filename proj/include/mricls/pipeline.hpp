#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "mricls/eigenbrain.hpp"
#include "mricls/eval.hpp"
#include "mricls/manifest.hpp"

namespace mricls {

// Everything one end-to-end run needs. Defaults follow the reference
// configuration: RBF kernel, gamma = 1/(active feature count), C = 1,
// 10 stratified folds, coronal component #4 / axial #7 at the middle slices,
// per-fold standardization by standard deviation, whole-cohort PCA fit.
struct RunConfig {
    KernelKind kernel = KernelKind::Rbf;
    double gamma = 0.0; // 0 = auto (1 / active feature count)
    double c = 1.0;
    int folds = 10;
    std::uint64_t seed = 0;
    std::array<bool, kFeatureCount> feature_mask = [] {
        std::array<bool, kFeatureCount> m{};
        m.fill(true);
        return m;
    }();
    ComponentSelection selection;
    bool stratified = true;
    bool global_standardize = false;
    NormalizeBy normalize = NormalizeBy::StdDev;
    bool pca_train_only = false; // refit eigenbrains per fold on training subjects
    bool final_fit = false;      // also report full-data training accuracy
    bool export_eigenbrains = false;
    TrainConfig train; // c is taken from RunConfig::c
    std::filesystem::path out_dir; // empty = compute only, write nothing
};

// Per-subject extraction result: everything except the PCA coefficients,
// which need the whole cohort.
struct Cohort {
    std::vector<SubjectRecord> records;
    std::vector<ImageFeatures> image;
    std::vector<int> labels;
    std::vector<Slice2D> axial_slices;
    std::vector<Slice2D> coronal_slices;
    int size() const { return static_cast<int>(records.size()); }
};

// Loads volumes and computes image features for every subject (fanning out
// across threads), slicing at the configured or middle planes. Errors are
// reported with the subject id and stage named.
Cohort load_cohort(const std::vector<SubjectRecord>& records,
                   const ComponentSelection& selection);

struct PipelineResult {
    CvReport report;
    FoldPlan plan;
    Dataset dataset; // unstandardized features, cohort-basis coefficients
    EigenbrainBasis axial_basis;
    EigenbrainBasis coronal_basis;
    SvmModel final_model; // trained on the full standardized cohort
    double resolved_gamma = 0.0;
    double final_fit_train_accuracy = -1.0; // set when RunConfig::final_fit
};

// The full run: extract, fit eigenbrains, assemble features, label,
// cross-validate, train the final model, and (when out_dir is set) write
// report.json, report.txt, folds.csv, and model.txt. Deterministic under a
// fixed seed.
PipelineResult run_pipeline(const std::vector<SubjectRecord>& manifest,
                            const RunConfig& config);

struct GridEntry {
    int coronal_component = 0;
    int axial_component = 0;
    double gamma = 0.0;
    CvReport report;
};

// Cross-validates every (coronal, axial) component pair, reusing one cohort
// extraction, one basis fit, and one fold plan. Entries are sorted by mean
// test accuracy, ties broken by higher MCC then lower indices. Writes
// grid.json/grid.txt when out_dir is set.
std::vector<GridEntry> grid_search(const std::vector<SubjectRecord>& manifest,
                                   const RunConfig& config,
                                   const std::vector<int>& coronal_range,
                                   const std::vector<int>& axial_range);

// Baseline plus the two feature-ablation runs (drop age; drop both PCA
// coefficients), with deltas against baseline. Writes ablate.json/ablate.txt
// when out_dir is set.
struct AblationReport {
    CvReport baseline;
    CvReport no_age;
    CvReport no_pca;
};
AblationReport run_ablations(const std::vector<SubjectRecord>& manifest,
                             const RunConfig& config);

// Machine- and human-readable report forms. The JSON string is the
// acceptance surface: byte-deterministic for identical runs.
std::string report_json_string(const PipelineResult& result, const RunConfig& config);
std::string report_text(const PipelineResult& result, const RunConfig& config);

// Raw (unstandardized) feature table for the active features, CSV with an
// id and label column. Used by the extract subcommand.
std::string features_csv(const std::vector<SubjectRecord>& records,
                         const Dataset& dataset);

} // namespace mricls
