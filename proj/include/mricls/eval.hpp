#pragma once

#include <cstdint>
#include <vector>

#include "mricls/features.hpp"
#include "mricls/svm.hpp"

namespace mricls {

// K-fold assignment: assignments[i] is the fold holding example i out as
// test data. Folds partition the index set and sizes differ by at most one
// (at most one per class when stratified).
struct FoldPlan {
    int n = 0;
    int k = 0;
    std::vector<int> assignments;
    std::uint64_t seed = 0;
    bool stratified = true;
};

// Seeded shuffle followed by round-robin assignment; stratified mode
// round-robins each class separately with a continuing fold cursor, so
// per-class and total fold sizes both stay balanced. Deterministic given the
// seed. Requires k >= 2, n >= k, and (when stratified) both classes present.
FoldPlan make_folds(const std::vector<int>& labels, int k, std::uint64_t seed,
                    bool stratified);

struct ConfusionMatrix {
    long tp = 0, fp = 0, tn = 0, fn = 0;
    long total() const { return tp + fp + tn + fn; }
};

// Tallies with positive = +1.
ConfusionMatrix confusion(const std::vector<int>& predictions,
                          const std::vector<int>& truths);

struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double mcc = 0.0;
};

// accuracy = (tp+tn)/total, precision = tp/(tp+fp), recall = tp/(tp+fn),
// mcc = (tp*tn - fp*fn) / sqrt((tp+fp)(tp+fn)(tn+fp)(tn+fn)).
// Degenerate denominators: precision/recall are 0 when their denominator is
// 0; mcc is 0 when any factor under the root is 0.
Metrics metrics(const ConfusionMatrix& cm);

struct Dataset {
    std::vector<FeatureVector> x;
    std::vector<int> y; // +1 / -1
    int size() const { return static_cast<int>(y.size()); }
};

struct FoldResult {
    int fold = 0;
    double train_accuracy = 0.0;
    Metrics test;
    ConfusionMatrix cm;
    bool converged = true;
};

struct CvReport {
    std::vector<FoldResult> per_fold;
    double mean_train_accuracy = 0.0;
    Metrics mean_test; // unweighted arithmetic means over folds
    bool all_converged = true;
};

struct CvOptions {
    bool global_standardize = false; // fit the standardizer once on all data
    NormalizeBy normalize = NormalizeBy::StdDev;
};

// Standardize (per the options), train on one fold's training split, and
// score train accuracy plus held-out test metrics. `prefit` supplies the
// global standardizer when not fitting per fold.
FoldResult evaluate_fold(const Dataset& train, const Dataset& test, int fold_id,
                         const KernelSpec& kernel, const TrainConfig& config,
                         const Standardizer* prefit, NormalizeBy normalize);

CvReport summarize_folds(std::vector<FoldResult> folds);

// Full k-fold cross-validation: per fold, fit the standardizer (per mode),
// train on the out-of-fold examples, and evaluate on the held-out fold.
// Every example is tested exactly once. A non-converged fold is reported
// with its flag down rather than silently averaged away.
CvReport cross_validate(const Dataset& data, const KernelSpec& kernel,
                        const TrainConfig& config, const FoldPlan& plan,
                        const CvOptions& options = {});

} // namespace mricls
