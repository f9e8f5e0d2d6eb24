#include "mricls/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mricls/rng.hpp"

namespace mricls {

FoldPlan make_folds(const std::vector<int>& labels, int k, std::uint64_t seed,
                    bool stratified) {
    const int n = static_cast<int>(labels.size());
    if (k < 2)
        throw DataError("make_folds: k must be >= 2");
    if (n < k)
        throw DataError("make_folds: need at least k examples, got " + std::to_string(n));
    for (int y : labels)
        if (y != 1 && y != -1)
            throw DataError("make_folds: labels must be +1 or -1");

    FoldPlan plan;
    plan.n = n;
    plan.k = k;
    plan.seed = seed;
    plan.stratified = stratified;
    plan.assignments.assign(static_cast<std::size_t>(n), 0);

    Rng rng(seed);
    if (!stratified) {
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        for (int i = 0; i < n; ++i)
            plan.assignments[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
                i % k;
        return plan;
    }

    // Per-class shuffle and round-robin with a continuing fold cursor, so
    // each class and the totals both spread within one example per fold.
    int cursor = 0;
    for (int cls : {1, -1}) {
        std::vector<int> members;
        for (int i = 0; i < n; ++i)
            if (labels[static_cast<std::size_t>(i)] == cls)
                members.push_back(i);
        if (members.empty())
            throw DataError("make_folds: stratified folds need both classes present");
        rng.shuffle(members);
        for (int idx : members)
            plan.assignments[static_cast<std::size_t>(idx)] = cursor++ % k;
    }
    return plan;
}

ConfusionMatrix confusion(const std::vector<int>& predictions,
                          const std::vector<int>& truths) {
    if (predictions.size() != truths.size())
        throw DataError("confusion: prediction and truth lengths differ");
    if (predictions.empty())
        throw DataError("confusion: empty input");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        const int p = predictions[i];
        const int t = truths[i];
        if ((p != 1 && p != -1) || (t != 1 && t != -1))
            throw DataError("confusion: labels must be +1 or -1");
        if (t == 1)
            p == 1 ? ++cm.tp : ++cm.fn;
        else
            p == 1 ? ++cm.fp : ++cm.tn;
    }
    return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
    const double total = static_cast<double>(cm.total());
    if (total <= 0.0)
        throw DataError("metrics: empty confusion matrix");
    const double tp = static_cast<double>(cm.tp), fp = static_cast<double>(cm.fp);
    const double tn = static_cast<double>(cm.tn), fn = static_cast<double>(cm.fn);

    Metrics m;
    m.accuracy = (tp + tn) / total;
    m.precision = (tp + fp) > 0.0 ? tp / (tp + fp) : 0.0;
    m.recall = (tp + fn) > 0.0 ? tp / (tp + fn) : 0.0;
    const double d1 = tp + fp, d2 = tp + fn, d3 = tn + fp, d4 = tn + fn;
    m.mcc = (d1 > 0.0 && d2 > 0.0 && d3 > 0.0 && d4 > 0.0)
                ? (tp * tn - fp * fn) / std::sqrt(d1 * d2 * d3 * d4)
                : 0.0;
    return m;
}

FoldResult evaluate_fold(const Dataset& train_set, const Dataset& test_set, int fold_id,
                         const KernelSpec& kernel, const TrainConfig& config,
                         const Standardizer* prefit, NormalizeBy normalize) {
    const Standardizer standardizer =
        prefit ? *prefit : fit_standardizer(train_set.x, normalize);

    auto to_matrix = [&standardizer](const Dataset& d) {
        std::vector<std::vector<double>> rows;
        rows.reserve(d.x.size());
        for (const auto& fv : d.x)
            rows.push_back(apply_standardizer(standardizer, fv).active_values());
        return rows;
    };
    const auto train_x = to_matrix(train_set);
    const auto test_x = to_matrix(test_set);

    const SvmModel model = train(train_x, train_set.y, kernel, config);

    long correct = 0;
    for (std::size_t i = 0; i < train_x.size(); ++i)
        if (predict(model, train_x[i]) == train_set.y[i])
            ++correct;

    std::vector<int> preds;
    preds.reserve(test_x.size());
    for (const auto& row : test_x)
        preds.push_back(predict(model, row));

    FoldResult r;
    r.fold = fold_id;
    r.train_accuracy = static_cast<double>(correct) / static_cast<double>(train_x.size());
    r.cm = confusion(preds, test_set.y);
    r.test = metrics(r.cm);
    r.converged = model.converged;
    return r;
}

CvReport summarize_folds(std::vector<FoldResult> folds) {
    CvReport report;
    report.per_fold = std::move(folds);
    const double k = static_cast<double>(report.per_fold.size());
    for (const auto& f : report.per_fold) {
        report.mean_train_accuracy += f.train_accuracy;
        report.mean_test.accuracy += f.test.accuracy;
        report.mean_test.precision += f.test.precision;
        report.mean_test.recall += f.test.recall;
        report.mean_test.mcc += f.test.mcc;
        report.all_converged = report.all_converged && f.converged;
    }
    report.mean_train_accuracy /= k;
    report.mean_test.accuracy /= k;
    report.mean_test.precision /= k;
    report.mean_test.recall /= k;
    report.mean_test.mcc /= k;
    return report;
}

CvReport cross_validate(const Dataset& data, const KernelSpec& kernel,
                        const TrainConfig& config, const FoldPlan& plan,
                        const CvOptions& options) {
    if (data.size() == 0)
        throw DataError("cross_validate: empty dataset");
    if (plan.n != data.size() ||
        plan.assignments.size() != static_cast<std::size_t>(data.size()))
        throw DataError("cross_validate: fold plan does not match dataset size");

    // Folds must partition the index set.
    std::vector<int> fold_sizes(static_cast<std::size_t>(plan.k), 0);
    for (int f : plan.assignments) {
        if (f < 0 || f >= plan.k)
            throw DataError("cross_validate: fold id out of range");
        ++fold_sizes[static_cast<std::size_t>(f)];
    }
    int tested = 0;
    for (int size : fold_sizes)
        tested += size;
    if (tested != data.size())
        throw DataError("cross_validate: folds do not cover the dataset");

    Standardizer global;
    if (options.global_standardize)
        global = fit_standardizer(data.x, options.normalize);

    std::vector<FoldResult> results;
    results.reserve(static_cast<std::size_t>(plan.k));
    for (int f = 0; f < plan.k; ++f) {
        Dataset train_set, test_set;
        for (int i = 0; i < data.size(); ++i) {
            if (plan.assignments[static_cast<std::size_t>(i)] == f) {
                test_set.x.push_back(data.x[static_cast<std::size_t>(i)]);
                test_set.y.push_back(data.y[static_cast<std::size_t>(i)]);
            } else {
                train_set.x.push_back(data.x[static_cast<std::size_t>(i)]);
                train_set.y.push_back(data.y[static_cast<std::size_t>(i)]);
            }
        }
        results.push_back(evaluate_fold(train_set, test_set, f, kernel, config,
                                        options.global_standardize ? &global : nullptr,
                                        options.normalize));
    }
    return summarize_folds(std::move(results));
}

} // namespace mricls
