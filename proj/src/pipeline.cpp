#include "mricls/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

#include "mricls/volume_io.hpp"

namespace mricls {

namespace {

using ordered_json = nlohmann::ordered_json;

// Run f(0..n-1) across a small worker pool; exceptions propagate.
template <class F>
void parallel_for(int n, F&& f) {
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0)
        workers = 1;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(n));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        futures.push_back(std::async(std::launch::async, [&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                f(i);
        }));
    for (auto& fut : futures)
        fut.get();
}

bool has_extension(const std::filesystem::path& p, const char* ext) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return e == ext;
}

Volume load_volume(const std::filesystem::path& path, VolumeKind kind) {
    if (has_extension(path, ".rvol")) {
        Volume v = load_rvol(path);
        if (v.kind != kind)
            throw DataError(path.string() + " holds the wrong volume kind");
        return v;
    }
    if (has_extension(path, ".hdr") || has_extension(path, ".img")) {
        std::filesystem::path hdr = path, img = path;
        hdr.replace_extension(".hdr");
        img.replace_extension(".img");
        return load_analyze(hdr, img, kind);
    }
    throw DataError("unrecognized volume extension on " + path.string() +
                    " (expected .rvol, .hdr, or .img)");
}

[[noreturn]] void subject_error(const std::string& id, const char* stage,
                                const std::exception& e) {
    throw DataError("subject " + id + " [" + stage + "]: " + e.what());
}

struct SubjectExtract {
    ImageFeatures image;
    Slice2D axial;
    Slice2D coronal;
    int label = 0;
};

SubjectExtract extract_one(const SubjectRecord& rec, const ComponentSelection& sel) {
    SubjectExtract out;
    Volume masked, segmented;
    try {
        masked = load_volume(rec.masked_volume_path, VolumeKind::Intensity);
    } catch (const std::exception& e) {
        subject_error(rec.id, "load masked volume", e);
    }
    try {
        segmented = load_volume(rec.segmented_volume_path, VolumeKind::SegmentationLabels);
    } catch (const std::exception& e) {
        subject_error(rec.id, "load segmented volume", e);
    }
    try {
        out.image = image_features(masked, segmented);
    } catch (const std::exception& e) {
        subject_error(rec.id, "image features", e);
    }
    try {
        const int az = sel.axial_slice >= 0 ? sel.axial_slice : masked.nz / 2;
        const int cy = sel.coronal_slice >= 0 ? sel.coronal_slice : masked.ny / 2;
        out.axial = extract_slice(masked, Orientation::Axial, az);
        out.coronal = extract_slice(masked, Orientation::Coronal, cy);
    } catch (const std::exception& e) {
        subject_error(rec.id, "slice extraction", e);
    }
    out.label = label_subject(rec);
    return out;
}

std::vector<int> indices_of(const FoldPlan& plan, int fold, bool in_fold) {
    std::vector<int> out;
    for (int i = 0; i < plan.n; ++i)
        if ((plan.assignments[static_cast<std::size_t>(i)] == fold) == in_fold)
            out.push_back(i);
    return out;
}

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

Cohort load_cohort(const std::vector<SubjectRecord>& records,
                   const ComponentSelection& selection) {
    if (records.empty())
        throw DataError("empty manifest");
    const int n = static_cast<int>(records.size());
    std::vector<SubjectExtract> extracts(static_cast<std::size_t>(n));
    parallel_for(n, [&](int i) {
        extracts[static_cast<std::size_t>(i)] =
            extract_one(records[static_cast<std::size_t>(i)], selection);
    });

    Cohort cohort;
    cohort.records = records;
    cohort.image.reserve(static_cast<std::size_t>(n));
    cohort.labels.reserve(static_cast<std::size_t>(n));
    cohort.axial_slices.reserve(static_cast<std::size_t>(n));
    cohort.coronal_slices.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& e = extracts[static_cast<std::size_t>(i)];
        if (e.axial.nu != extracts[0].axial.nu || e.axial.nv != extracts[0].axial.nv ||
            e.coronal.nu != extracts[0].coronal.nu ||
            e.coronal.nv != extracts[0].coronal.nv)
            throw DataError("subject " + records[static_cast<std::size_t>(i)].id +
                            " [slice extraction]: volume shape differs from subject " +
                            records[0].id);
        cohort.image.push_back(e.image);
        cohort.labels.push_back(e.label);
        cohort.axial_slices.push_back(std::move(e.axial));
        cohort.coronal_slices.push_back(std::move(e.coronal));
    }
    return cohort;
}

namespace {

Dataset build_dataset(const Cohort& cohort, const std::vector<double>& coronal_coeffs,
                      const std::vector<double>& axial_coeffs,
                      const std::array<bool, kFeatureCount>& mask) {
    Dataset data;
    data.x.reserve(cohort.records.size());
    data.y = cohort.labels;
    for (std::size_t i = 0; i < cohort.records.size(); ++i) {
        FeatureVector fv = build_feature_vector(cohort.records[i], cohort.image[i],
                                                coronal_coeffs[i], axial_coeffs[i]);
        fv.mask = mask;
        data.x.push_back(std::move(fv));
    }
    return data;
}

double resolve_gamma(const RunConfig& config, int active_features) {
    if (config.kernel == KernelKind::Linear)
        return 0.0;
    if (config.gamma > 0.0)
        return config.gamma;
    return 1.0 / static_cast<double>(active_features);
}

KernelSpec make_kernel(const RunConfig& config, int active_features) {
    KernelSpec spec;
    spec.kind = config.kernel;
    spec.gamma = resolve_gamma(config, active_features);
    return spec;
}

TrainConfig make_train_config(const RunConfig& config) {
    TrainConfig tc = config.train;
    tc.c = config.c;
    tc.seed = config.seed;
    return tc;
}

int active_count(const std::array<bool, kFeatureCount>& mask) {
    int n = 0;
    for (bool b : mask)
        n += b ? 1 : 0;
    return n;
}

std::vector<Slice2D> gather(const std::vector<Slice2D>& slices,
                            const std::vector<int>& idx) {
    std::vector<Slice2D> out;
    out.reserve(idx.size());
    for (int i : idx)
        out.push_back(slices[static_cast<std::size_t>(i)]);
    return out;
}

// Per-fold eigenbrain refit: bases see only training subjects, then every
// subject is projected onto the fold's basis.
CvReport cross_validate_pca_per_fold(const Cohort& cohort, const RunConfig& config,
                                     const KernelSpec& kernel, const TrainConfig& tc,
                                     const FoldPlan& plan) {
    std::vector<FoldResult> results;
    for (int f = 0; f < plan.k; ++f) {
        const auto train_idx = indices_of(plan, f, false);
        const auto test_idx = indices_of(plan, f, true);
        const auto ax_basis = fit_eigenbrains(gather(cohort.axial_slices, train_idx),
                                              config.selection.axial_component);
        const auto cor_basis = fit_eigenbrains(gather(cohort.coronal_slices, train_idx),
                                               config.selection.coronal_component);
        std::vector<double> cor(cohort.records.size(), 0.0), ax(cohort.records.size(), 0.0);
        for (std::size_t i = 0; i < cohort.records.size(); ++i) {
            cor[i] = project_coefficient(cor_basis, cohort.coronal_slices[i],
                                         config.selection.coronal_component);
            ax[i] = project_coefficient(ax_basis, cohort.axial_slices[i],
                                        config.selection.axial_component);
        }
        const Dataset data = build_dataset(cohort, cor, ax, config.feature_mask);
        Dataset train_set, test_set;
        for (int i : train_idx) {
            train_set.x.push_back(data.x[static_cast<std::size_t>(i)]);
            train_set.y.push_back(data.y[static_cast<std::size_t>(i)]);
        }
        for (int i : test_idx) {
            test_set.x.push_back(data.x[static_cast<std::size_t>(i)]);
            test_set.y.push_back(data.y[static_cast<std::size_t>(i)]);
        }
        Standardizer global;
        const Standardizer* prefit = nullptr;
        if (config.global_standardize) {
            global = fit_standardizer(data.x, config.normalize);
            prefit = &global;
        }
        results.push_back(
            evaluate_fold(train_set, test_set, f, kernel, tc, prefit, config.normalize));
    }
    return summarize_folds(std::move(results));
}

ordered_json config_json(const RunConfig& config, const PipelineResult& result) {
    ordered_json cfg;
    cfg["kernel"] = config.kernel == KernelKind::Linear ? "linear" : "rbf";
    if (config.kernel == KernelKind::Rbf)
        cfg["gamma"] = result.resolved_gamma;
    cfg["c"] = config.c;
    cfg["folds"] = config.folds;
    cfg["seed"] = config.seed;
    cfg["stratified"] = config.stratified;
    cfg["standardize"] = config.global_standardize ? "global" : "per-fold";
    cfg["normalize_by"] =
        config.normalize == NormalizeBy::StdDev ? "stddev" : "variance";
    cfg["pca_fit"] = config.pca_train_only ? "train-only" : "cohort";
    cfg["coronal_component"] = config.selection.coronal_component;
    cfg["axial_component"] = config.selection.axial_component;
    cfg["coronal_slice"] = result.coronal_basis.slice_index;
    cfg["axial_slice"] = result.axial_basis.slice_index;
    return cfg;
}

ordered_json report_json(const PipelineResult& result, const RunConfig& config) {
    ordered_json j;
    j["schema"] = "mricls-cv-report/1";
    j["config"] = config_json(config, result);

    ordered_json features = ordered_json::array();
    for (int i = 0; i < kFeatureCount; ++i)
        if (config.feature_mask[static_cast<std::size_t>(i)])
            features.push_back(kFeatureNames[static_cast<std::size_t>(i)]);
    j["features"] = features;

    int positives = 0;
    for (int y : result.dataset.y)
        positives += y == 1 ? 1 : 0;
    j["n_subjects"] = result.dataset.size();
    j["n_positive"] = positives;

    ordered_json folds = ordered_json::array();
    for (const auto& f : result.report.per_fold) {
        ordered_json row;
        row["fold"] = f.fold;
        row["train_accuracy"] = f.train_accuracy;
        row["test_accuracy"] = f.test.accuracy;
        row["precision"] = f.test.precision;
        row["recall"] = f.test.recall;
        row["mcc"] = f.test.mcc;
        row["tp"] = f.cm.tp;
        row["fp"] = f.cm.fp;
        row["tn"] = f.cm.tn;
        row["fn"] = f.cm.fn;
        row["converged"] = f.converged;
        folds.push_back(std::move(row));
    }
    j["folds"] = folds;

    ordered_json mean;
    mean["train_accuracy"] = result.report.mean_train_accuracy;
    mean["test_accuracy"] = result.report.mean_test.accuracy;
    mean["precision"] = result.report.mean_test.precision;
    mean["recall"] = result.report.mean_test.recall;
    mean["mcc"] = result.report.mean_test.mcc;
    j["mean"] = mean;
    j["all_converged"] = result.report.all_converged;
    if (result.final_fit_train_accuracy >= 0.0)
        j["final_fit_train_accuracy"] = result.final_fit_train_accuracy;
    return j;
}

} // namespace

std::string report_json_string(const PipelineResult& result, const RunConfig& config) {
    return report_json(result, config).dump(2) + "\n";
}

std::string report_text(const PipelineResult& result, const RunConfig& config) {
    std::ostringstream out;
    out << "cross-validation report\n";
    out << "  kernel: " << (config.kernel == KernelKind::Linear ? "linear" : "rbf");
    if (config.kernel == KernelKind::Rbf)
        out << " (gamma " << fmt(result.resolved_gamma, "%.6g") << ")";
    out << ", C " << fmt(config.c, "%.6g") << ", folds " << config.folds << ", seed "
        << config.seed << "\n";
    const int active =
        result.dataset.x.empty() ? 0 : result.dataset.x.front().active_count();
    out << "  subjects: " << result.dataset.size() << ", features " << active;
    out << "\n\n";
    out << "  fold  train_acc  test_acc  precision  recall   mcc      tp fp tn fn\n";
    for (const auto& f : result.report.per_fold) {
        char line[160];
        std::snprintf(line, sizeof line,
                      "  %-4d  %.4f     %.4f    %.4f     %.4f   %+.4f  %2ld %2ld %2ld %2ld%s\n",
                      f.fold, f.train_accuracy, f.test.accuracy, f.test.precision,
                      f.test.recall, f.test.mcc, f.cm.tp, f.cm.fp, f.cm.tn, f.cm.fn,
                      f.converged ? "" : "  [not converged]");
        out << line;
    }
    out << "\n  mean: train_acc " << fmt(result.report.mean_train_accuracy);
    out << ", test_acc " << fmt(result.report.mean_test.accuracy);
    out << ", precision " << fmt(result.report.mean_test.precision);
    out << ", recall " << fmt(result.report.mean_test.recall);
    out << ", mcc " << fmt(result.report.mean_test.mcc) << "\n";
    if (!result.report.all_converged)
        out << "  warning: at least one fold did not converge\n";
    if (result.final_fit_train_accuracy >= 0.0)
        out << "  final fit train accuracy: " << fmt(result.final_fit_train_accuracy)
            << "\n";
    return out.str();
}

std::string features_csv(const std::vector<SubjectRecord>& records,
                         const Dataset& dataset) {
    std::ostringstream out;
    out << "id,label";
    const auto& mask = dataset.x.front().mask;
    for (int f = 0; f < kFeatureCount; ++f)
        if (mask[static_cast<std::size_t>(f)])
            out << "," << kFeatureNames[static_cast<std::size_t>(f)];
    out << "\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        out << records[i].id << "," << dataset.y[i];
        for (int f = 0; f < kFeatureCount; ++f)
            if (mask[static_cast<std::size_t>(f)])
                out << "," << fmt(dataset.x[i].values[static_cast<std::size_t>(f)], "%.17g");
        out << "\n";
    }
    return out.str();
}

PipelineResult run_pipeline(const std::vector<SubjectRecord>& manifest,
                            const RunConfig& config) {
    if (config.folds < 2)
        throw DataError("folds must be >= 2");
    if (config.selection.coronal_component < 1 || config.selection.axial_component < 1)
        throw DataError("component indices are 1-based and must be >= 1");
    if (active_count(config.feature_mask) < 1)
        throw DataError("feature mask leaves no active features");

    const Cohort cohort = load_cohort(manifest, config.selection);
    const int n = cohort.size();

    bool has_pos = false, has_neg = false;
    for (int y : cohort.labels) {
        if (y == 1)
            has_pos = true;
        else
            has_neg = true;
    }
    if (!has_pos || !has_neg)
        throw DataError("cohort contains a single class; cannot train");

    PipelineResult result;
    result.axial_basis =
        fit_eigenbrains(cohort.axial_slices, config.selection.axial_component);
    result.coronal_basis =
        fit_eigenbrains(cohort.coronal_slices, config.selection.coronal_component);

    std::vector<double> cor(static_cast<std::size_t>(n)), ax(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        cor[static_cast<std::size_t>(i)] =
            project_coefficient(result.coronal_basis,
                                cohort.coronal_slices[static_cast<std::size_t>(i)],
                                config.selection.coronal_component);
        ax[static_cast<std::size_t>(i)] =
            project_coefficient(result.axial_basis,
                                cohort.axial_slices[static_cast<std::size_t>(i)],
                                config.selection.axial_component);
    }
    result.dataset = build_dataset(cohort, cor, ax, config.feature_mask);

    const int active = active_count(config.feature_mask);
    const KernelSpec kernel = make_kernel(config, active);
    const TrainConfig tc = make_train_config(config);
    result.resolved_gamma = kernel.gamma;
    result.plan = make_folds(cohort.labels, config.folds, config.seed, config.stratified);

    if (config.pca_train_only) {
        result.report = cross_validate_pca_per_fold(cohort, config, kernel, tc, result.plan);
    } else {
        CvOptions options;
        options.global_standardize = config.global_standardize;
        options.normalize = config.normalize;
        result.report = cross_validate(result.dataset, kernel, tc, result.plan, options);
    }

    // Final model on the whole standardized cohort: the deployable artifact.
    const Standardizer full_standardizer =
        fit_standardizer(result.dataset.x, config.normalize);
    std::vector<std::vector<double>> full_x;
    full_x.reserve(static_cast<std::size_t>(n));
    for (const auto& fv : result.dataset.x)
        full_x.push_back(apply_standardizer(full_standardizer, fv).active_values());
    result.final_model = train(full_x, result.dataset.y, kernel, tc);
    if (config.final_fit) {
        long correct = 0;
        for (int i = 0; i < n; ++i)
            if (predict(result.final_model, full_x[static_cast<std::size_t>(i)]) ==
                result.dataset.y[static_cast<std::size_t>(i)])
                ++correct;
        result.final_fit_train_accuracy = static_cast<double>(correct) / n;
    }

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        auto write_text = [](const std::filesystem::path& p, const std::string& text) {
            std::ofstream out(p, std::ios::binary | std::ios::trunc);
            if (!out)
                throw DataError("cannot write " + p.string());
            out << text;
            if (!out)
                throw DataError("write failed on " + p.string());
        };
        write_text(config.out_dir / "report.json", report_json_string(result, config));
        write_text(config.out_dir / "report.txt", report_text(result, config));
        std::string folds = "id,fold\n";
        for (int i = 0; i < n; ++i)
            folds += cohort.records[static_cast<std::size_t>(i)].id + "," +
                     std::to_string(result.plan.assignments[static_cast<std::size_t>(i)]) +
                     "\n";
        write_text(config.out_dir / "folds.csv", folds);
        save_model(result.final_model, config.out_dir / "model.txt");
        if (config.export_eigenbrains) {
            write_rvol(mean_as_volume(result.axial_basis),
                       config.out_dir / "eigenbrain_axial_mean.rvol");
            write_rvol(component_as_volume(result.axial_basis,
                                           config.selection.axial_component),
                       config.out_dir / "eigenbrain_axial_component.rvol");
            write_rvol(mean_as_volume(result.coronal_basis),
                       config.out_dir / "eigenbrain_coronal_mean.rvol");
            write_rvol(component_as_volume(result.coronal_basis,
                                           config.selection.coronal_component),
                       config.out_dir / "eigenbrain_coronal_component.rvol");
        }
    }
    return result;
}

std::vector<GridEntry> grid_search(const std::vector<SubjectRecord>& manifest,
                                   const RunConfig& config,
                                   const std::vector<int>& coronal_range,
                                   const std::vector<int>& axial_range) {
    if (coronal_range.empty() || axial_range.empty())
        throw DataError("grid_search: empty component range");
    for (int v : coronal_range)
        if (v < 1)
            throw DataError("grid_search: component indices are 1-based");
    for (int v : axial_range)
        if (v < 1)
            throw DataError("grid_search: component indices are 1-based");

    const int max_cor = *std::max_element(coronal_range.begin(), coronal_range.end());
    const int max_ax = *std::max_element(axial_range.begin(), axial_range.end());

    const Cohort cohort = load_cohort(manifest, config.selection);
    const int n = cohort.size();
    const auto ax_basis = fit_eigenbrains(cohort.axial_slices, max_ax);
    const auto cor_basis = fit_eigenbrains(cohort.coronal_slices, max_cor);

    // Project every subject onto every needed component once.
    std::vector<std::vector<double>> cor_coeffs(
        static_cast<std::size_t>(max_cor), std::vector<double>(static_cast<std::size_t>(n)));
    std::vector<std::vector<double>> ax_coeffs(
        static_cast<std::size_t>(max_ax), std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        for (int c = 1; c <= max_cor; ++c)
            cor_coeffs[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(i)] =
                project_coefficient(cor_basis,
                                    cohort.coronal_slices[static_cast<std::size_t>(i)], c);
        for (int a = 1; a <= max_ax; ++a)
            ax_coeffs[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(i)] =
                project_coefficient(ax_basis,
                                    cohort.axial_slices[static_cast<std::size_t>(i)], a);
    }

    const int active = active_count(config.feature_mask);
    const KernelSpec kernel = make_kernel(config, active);
    const TrainConfig tc = make_train_config(config);
    const FoldPlan plan = make_folds(cohort.labels, config.folds, config.seed,
                                     config.stratified);
    CvOptions options;
    options.global_standardize = config.global_standardize;
    options.normalize = config.normalize;

    std::vector<GridEntry> entries;
    entries.reserve(coronal_range.size() * axial_range.size());
    for (int c : coronal_range) {
        for (int a : axial_range) {
            const Dataset data =
                build_dataset(cohort, cor_coeffs[static_cast<std::size_t>(c - 1)],
                              ax_coeffs[static_cast<std::size_t>(a - 1)],
                              config.feature_mask);
            GridEntry entry;
            entry.coronal_component = c;
            entry.axial_component = a;
            entry.gamma = kernel.gamma;
            entry.report = cross_validate(data, kernel, tc, plan, options);
            entries.push_back(std::move(entry));
        }
    }

    std::stable_sort(entries.begin(), entries.end(), [](const GridEntry& a,
                                                        const GridEntry& b) {
        if (a.report.mean_test.accuracy != b.report.mean_test.accuracy)
            return a.report.mean_test.accuracy > b.report.mean_test.accuracy;
        if (a.report.mean_test.mcc != b.report.mean_test.mcc)
            return a.report.mean_test.mcc > b.report.mean_test.mcc;
        if (a.coronal_component != b.coronal_component)
            return a.coronal_component < b.coronal_component;
        return a.axial_component < b.axial_component;
    });

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        ordered_json j;
        j["schema"] = "mricls-grid-report/1";
        ordered_json rows = ordered_json::array();
        for (const auto& e : entries) {
            ordered_json row;
            row["coronal_component"] = e.coronal_component;
            row["axial_component"] = e.axial_component;
            row["test_accuracy"] = e.report.mean_test.accuracy;
            row["mcc"] = e.report.mean_test.mcc;
            row["precision"] = e.report.mean_test.precision;
            row["recall"] = e.report.mean_test.recall;
            row["train_accuracy"] = e.report.mean_train_accuracy;
            row["all_converged"] = e.report.all_converged;
            rows.push_back(std::move(row));
        }
        j["entries"] = rows;
        std::ofstream out(config.out_dir / "grid.json", std::ios::binary | std::ios::trunc);
        if (!out)
            throw DataError("cannot write grid.json");
        out << j.dump(2) << "\n";

        std::ostringstream text;
        text << "grid search (" << entries.size() << " entries, sorted by test accuracy)\n";
        text << "  coronal  axial  test_acc  mcc      precision  recall\n";
        for (const auto& e : entries) {
            char line[128];
            std::snprintf(line, sizeof line, "  %-7d  %-5d  %.4f    %+.4f  %.4f     %.4f\n",
                          e.coronal_component, e.axial_component,
                          e.report.mean_test.accuracy, e.report.mean_test.mcc,
                          e.report.mean_test.precision, e.report.mean_test.recall);
            text << line;
        }
        std::ofstream tout(config.out_dir / "grid.txt", std::ios::binary | std::ios::trunc);
        tout << text.str();
    }
    return entries;
}

AblationReport run_ablations(const std::vector<SubjectRecord>& manifest,
                             const RunConfig& config) {
    RunConfig base = config;
    base.out_dir.clear();

    RunConfig no_age = base;
    no_age.feature_mask[feat::kAge] = false;

    RunConfig no_pca = base;
    no_pca.feature_mask[feat::kCoronalPca] = false;
    no_pca.feature_mask[feat::kAxialPca] = false;

    AblationReport report;
    report.baseline = run_pipeline(manifest, base).report;
    report.no_age = run_pipeline(manifest, no_age).report;
    report.no_pca = run_pipeline(manifest, no_pca).report;

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        auto row = [](const CvReport& r) {
            ordered_json j;
            j["train_accuracy"] = r.mean_train_accuracy;
            j["test_accuracy"] = r.mean_test.accuracy;
            j["precision"] = r.mean_test.precision;
            j["recall"] = r.mean_test.recall;
            j["mcc"] = r.mean_test.mcc;
            j["all_converged"] = r.all_converged;
            return j;
        };
        auto delta = [](const CvReport& r, const CvReport& b) {
            ordered_json j;
            j["test_accuracy"] = r.mean_test.accuracy - b.mean_test.accuracy;
            j["precision"] = r.mean_test.precision - b.mean_test.precision;
            j["recall"] = r.mean_test.recall - b.mean_test.recall;
            j["mcc"] = r.mean_test.mcc - b.mean_test.mcc;
            return j;
        };
        ordered_json j;
        j["schema"] = "mricls-ablation-report/1";
        j["baseline"] = row(report.baseline);
        j["drop_age"] = row(report.no_age);
        j["drop_age_delta"] = delta(report.no_age, report.baseline);
        j["drop_pca"] = row(report.no_pca);
        j["drop_pca_delta"] = delta(report.no_pca, report.baseline);
        std::ofstream out(config.out_dir / "ablate.json",
                          std::ios::binary | std::ios::trunc);
        if (!out)
            throw DataError("cannot write ablate.json");
        out << j.dump(2) << "\n";

        std::ostringstream text;
        auto line = [&text](const char* name, const CvReport& r) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "  %-9s test_acc %.4f  precision %.4f  recall %.4f  mcc %+.4f\n",
                          name, r.mean_test.accuracy, r.mean_test.precision,
                          r.mean_test.recall, r.mean_test.mcc);
            text << buf;
        };
        text << "ablation summary\n";
        line("baseline", report.baseline);
        line("drop-age", report.no_age);
        line("drop-pca", report.no_pca);
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "  drop-age delta: test_acc %+.4f, mcc %+.4f\n",
                      report.no_age.mean_test.accuracy - report.baseline.mean_test.accuracy,
                      report.no_age.mean_test.mcc - report.baseline.mean_test.mcc);
        text << buf;
        std::snprintf(buf, sizeof buf,
                      "  drop-pca delta: test_acc %+.4f, mcc %+.4f\n",
                      report.no_pca.mean_test.accuracy - report.baseline.mean_test.accuracy,
                      report.no_pca.mean_test.mcc - report.baseline.mean_test.mcc);
        text << buf;
        std::ofstream tout(config.out_dir / "ablate.txt",
                           std::ios::binary | std::ios::trunc);
        tout << text.str();
    }
    return report;
}

} // namespace mricls
