// Command-line front end: extract / train / cv / grid / ablate / synth.
// Exit codes: 0 success, 1 data or parse error, 2 numerical non-convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mricls/pipeline.hpp"
#include "mricls/synthetic.hpp"

namespace {

using namespace mricls;

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitNotConverged = 2;

struct CliOptions {
    std::string manifest;
    std::string kernel = "rbf";
    double gamma = 0.0;
    double c = 1.0;
    int folds = 10;
    std::uint64_t seed = 0;
    std::vector<int> drop_features;
    int coronal_comp = 4;
    int axial_comp = 7;
    int coronal_slice = -1;
    int axial_slice = -1;
    bool global_standardize = false;
    bool variance_normalize = false;
    bool pca_train_only = false;
    bool no_stratify = false;
    bool final_fit = false;
    bool export_eigenbrains = false;
    std::string out;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt, bool needs_manifest = true) {
    auto* m = cmd->add_option("--manifest", opt.manifest,
                              "subject manifest CSV (id,age,gender,etiv,nwbv,cdr,"
                              "masked_path,segmented_path)");
    if (needs_manifest)
        m->required();
    cmd->add_option("--kernel", opt.kernel, "kernel: linear or rbf")
        ->check(CLI::IsMember({"linear", "rbf"}))
        ->capture_default_str();
    cmd->add_option("--gamma", opt.gamma,
                    "rbf width; default 1 / (active feature count)");
    cmd->add_option("--c", opt.c, "soft-margin C")->capture_default_str();
    cmd->add_option("--folds", opt.folds, "cross-validation folds")
        ->capture_default_str();
    cmd->add_option("--seed", opt.seed, "seed for folds and solver tie-breaking")
        ->capture_default_str();
    cmd->add_option("--drop-features", opt.drop_features,
                    "1-based feature indices to mask out (e.g. 1 or 10 11)");
    cmd->add_option("--coronal-comp", opt.coronal_comp, "coronal PCA component (1-based)")
        ->capture_default_str();
    cmd->add_option("--axial-comp", opt.axial_comp, "axial PCA component (1-based)")
        ->capture_default_str();
    cmd->add_option("--coronal-slice", opt.coronal_slice,
                    "coronal slice index; default middle plane");
    cmd->add_option("--axial-slice", opt.axial_slice,
                    "axial slice index; default middle plane");
    cmd->add_flag("--global-standardize", opt.global_standardize,
                  "fit the standardizer on the whole cohort instead of per fold");
    cmd->add_flag("--variance-normalize", opt.variance_normalize,
                  "divide by the variance instead of the standard deviation");
    cmd->add_flag("--pca-train-only", opt.pca_train_only,
                  "refit eigenbrains per fold on training subjects only");
    cmd->add_flag("--no-stratify", opt.no_stratify, "plain shuffled folds");
    cmd->add_flag("--final-fit", opt.final_fit,
                  "also report training accuracy of the full-data fit");
    cmd->add_flag("--export-eigenbrains", opt.export_eigenbrains,
                  "write mean/component images as RVOL volumes");
    cmd->add_option("--out", opt.out, "output directory");
}

RunConfig to_run_config(const CliOptions& opt) {
    RunConfig cfg;
    cfg.kernel = opt.kernel == "linear" ? KernelKind::Linear : KernelKind::Rbf;
    cfg.gamma = opt.gamma;
    cfg.c = opt.c;
    cfg.folds = opt.folds;
    cfg.seed = opt.seed;
    for (int f : opt.drop_features) {
        if (f < 1 || f > kFeatureCount)
            throw DataError("--drop-features indices must be in 1.." +
                            std::to_string(kFeatureCount));
        cfg.feature_mask[static_cast<std::size_t>(f - 1)] = false;
    }
    cfg.selection.coronal_component = opt.coronal_comp;
    cfg.selection.axial_component = opt.axial_comp;
    cfg.selection.coronal_slice = opt.coronal_slice;
    cfg.selection.axial_slice = opt.axial_slice;
    cfg.stratified = !opt.no_stratify;
    cfg.global_standardize = opt.global_standardize;
    cfg.normalize = opt.variance_normalize ? NormalizeBy::Variance : NormalizeBy::StdDev;
    cfg.pca_train_only = opt.pca_train_only;
    cfg.final_fit = opt.final_fit;
    cfg.export_eigenbrains = opt.export_eigenbrains;
    if (!opt.out.empty())
        cfg.out_dir = opt.out;
    return cfg;
}

std::vector<int> parse_range(const std::string& text) {
    // "a:b" inclusive, or a comma-separated list.
    std::vector<int> out;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const int a = std::stoi(text.substr(0, colon));
        const int b = std::stoi(text.substr(colon + 1));
        if (a < 1 || b < a)
            throw DataError("bad component range '" + text + "'");
        for (int v = a; v <= b; ++v)
            out.push_back(v);
        return out;
    }
    std::istringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ','))
        out.push_back(std::stoi(cell));
    if (out.empty())
        throw DataError("bad component range '" + text + "'");
    return out;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot write " + p.string());
    out << text;
    if (!out)
        throw DataError("write failed on " + p.string());
}

int run_cv(const CliOptions& opt) {
    const RunConfig cfg = to_run_config(opt);
    const auto manifest = load_manifest(opt.manifest);
    const PipelineResult result = run_pipeline(manifest, cfg);
    std::cout << report_text(result, cfg);
    if (!result.report.all_converged || !result.final_model.converged) {
        std::cerr << "warning: solver did not converge on every fit\n";
        return kExitNotConverged;
    }
    return kExitOk;
}

int run_extract(const CliOptions& opt) {
    RunConfig cfg = to_run_config(opt);
    const auto out_dir = cfg.out_dir;
    cfg.out_dir.clear(); // feature table only; no CV artifacts
    const auto manifest = load_manifest(opt.manifest);

    const Cohort cohort = load_cohort(manifest, cfg.selection);
    const auto ax_basis =
        fit_eigenbrains(cohort.axial_slices, cfg.selection.axial_component);
    const auto cor_basis =
        fit_eigenbrains(cohort.coronal_slices, cfg.selection.coronal_component);
    Dataset data;
    data.y = cohort.labels;
    for (int i = 0; i < cohort.size(); ++i) {
        FeatureVector fv = build_feature_vector(
            cohort.records[static_cast<std::size_t>(i)],
            cohort.image[static_cast<std::size_t>(i)],
            project_coefficient(cor_basis,
                                cohort.coronal_slices[static_cast<std::size_t>(i)],
                                cfg.selection.coronal_component),
            project_coefficient(ax_basis,
                                cohort.axial_slices[static_cast<std::size_t>(i)],
                                cfg.selection.axial_component));
        fv.mask = cfg.feature_mask;
        data.x.push_back(std::move(fv));
    }
    const std::string csv = features_csv(cohort.records, data);
    if (out_dir.empty()) {
        std::cout << csv;
    } else {
        std::filesystem::create_directories(out_dir);
        write_file(out_dir / "features.csv", csv);
        std::cout << "wrote " << (out_dir / "features.csv").string() << "\n";
    }
    return kExitOk;
}

int run_train(const CliOptions& opt) {
    RunConfig cfg = to_run_config(opt);
    cfg.final_fit = true;
    const auto manifest = load_manifest(opt.manifest);
    const PipelineResult result = run_pipeline(manifest, cfg);
    char buf[96];
    std::snprintf(buf, sizeof buf, "trained on %d subjects: training accuracy %.4f\n",
                  result.dataset.size(), result.final_fit_train_accuracy);
    std::cout << buf;
    if (!cfg.out_dir.empty())
        std::cout << "model written to " << (cfg.out_dir / "model.txt").string() << "\n";
    return result.final_model.converged ? kExitOk : kExitNotConverged;
}

int run_grid(const CliOptions& opt, const std::string& coronal_range,
             const std::string& axial_range) {
    const RunConfig cfg = to_run_config(opt);
    const auto manifest = load_manifest(opt.manifest);
    const auto entries = grid_search(manifest, cfg, parse_range(coronal_range),
                                     parse_range(axial_range));
    char line[128];
    std::snprintf(line, sizeof line, "%-8s %-6s %-9s %-8s\n", "coronal", "axial",
                  "test_acc", "mcc");
    std::cout << line;
    for (const auto& e : entries) {
        std::snprintf(line, sizeof line, "%-8d %-6d %-9.4f %+-8.4f\n",
                      e.coronal_component, e.axial_component,
                      e.report.mean_test.accuracy, e.report.mean_test.mcc);
        std::cout << line;
    }
    for (const auto& e : entries)
        if (!e.report.all_converged)
            return kExitNotConverged;
    return kExitOk;
}

int run_ablate(const CliOptions& opt) {
    const RunConfig cfg = to_run_config(opt);
    const auto manifest = load_manifest(opt.manifest);
    const AblationReport report = run_ablations(manifest, cfg);
    auto line = [](const char* name, const CvReport& r) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "%-9s test_acc %.4f  precision %.4f  recall %.4f  mcc %+.4f\n", name,
                      r.mean_test.accuracy, r.mean_test.precision, r.mean_test.recall,
                      r.mean_test.mcc);
        return std::string(buf);
    };
    std::cout << line("baseline", report.baseline);
    std::cout << line("drop-age", report.no_age);
    std::cout << line("drop-pca", report.no_pca);
    char buf[160];
    std::snprintf(buf, sizeof buf, "drop-age delta: test_acc %+.4f, mcc %+.4f\n",
                  report.no_age.mean_test.accuracy - report.baseline.mean_test.accuracy,
                  report.no_age.mean_test.mcc - report.baseline.mean_test.mcc);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "drop-pca delta: test_acc %+.4f, mcc %+.4f\n",
                  report.no_pca.mean_test.accuracy - report.baseline.mean_test.accuracy,
                  report.no_pca.mean_test.mcc - report.baseline.mean_test.mcc);
    std::cout << buf;
    if (!report.baseline.all_converged || !report.no_age.all_converged ||
        !report.no_pca.all_converged)
        return kExitNotConverged;
    return kExitOk;
}

int run_synth(int n, const std::string& dims, double class_effect, std::uint64_t seed,
              const std::string& out) {
    SynthConfig cfg;
    cfg.n_subjects = n;
    cfg.class_effect = class_effect;
    cfg.seed = seed;
    if (!dims.empty()) {
        int nx = 0, ny = 0, nz = 0;
        if (std::sscanf(dims.c_str(), "%dx%dx%d", &nx, &ny, &nz) == 3) {
            cfg.nx = nx;
            cfg.ny = ny;
            cfg.nz = nz;
        } else if (std::sscanf(dims.c_str(), "%d", &nx) == 1) {
            cfg.nx = cfg.ny = cfg.nz = nx;
        } else {
            throw DataError("bad --dims '" + dims + "' (use N or NXxNYxNZ)");
        }
    }
    const auto manifest = generate_synthetic(cfg, out);
    std::cout << "wrote " << manifest.string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dementia classification from structural MRI: dimensionally reduced "
                 "features + soft-margin SVM"};
    app.require_subcommand(1);

    CliOptions opt;
    std::string coronal_range = "1:8", axial_range = "1:8";
    int synth_n = 200;
    std::string synth_dims = "16";
    double synth_effect = 1.0;
    std::uint64_t synth_seed = 0;
    std::string synth_out;

    auto* extract = app.add_subcommand("extract", "compute the feature table only");
    add_common_flags(extract, opt);
    auto* train_cmd = app.add_subcommand("train", "train a model on the whole manifest");
    add_common_flags(train_cmd, opt);
    auto* cv = app.add_subcommand("cv", "k-fold cross-validation");
    add_common_flags(cv, opt);
    auto* grid = app.add_subcommand("grid", "sweep PCA component pairs");
    add_common_flags(grid, opt);
    grid->add_option("--coronal-range", coronal_range, "a:b or comma list")
        ->capture_default_str();
    grid->add_option("--axial-range", axial_range, "a:b or comma list")
        ->capture_default_str();
    auto* ablate = app.add_subcommand("ablate", "baseline vs drop-age and drop-PCA runs");
    add_common_flags(ablate, opt);
    auto* synth = app.add_subcommand("synth", "generate a synthetic RVOL cohort");
    synth->add_option("--n", synth_n, "number of subjects")->capture_default_str();
    synth->add_option("--dims", synth_dims, "volume dims: N or NXxNYxNZ")
        ->capture_default_str();
    synth->add_option("--class-effect", synth_effect, "class separation strength")
        ->capture_default_str();
    synth->add_option("--seed", synth_seed, "generator seed")->capture_default_str();
    synth->add_option("--out", synth_out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (extract->parsed())
            return run_extract(opt);
        if (train_cmd->parsed())
            return run_train(opt);
        if (cv->parsed())
            return run_cv(opt);
        if (grid->parsed())
            return run_grid(opt, coronal_range, axial_range);
        if (ablate->parsed())
            return run_ablate(opt);
        if (synth->parsed())
            return run_synth(synth_n, synth_dims, synth_effect, synth_seed, synth_out);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitOk;
}
