// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Criteria 7 and 8 drive the real CLI
// binary; criterion 9 needs the OASIS-1 dataset and is skipped unless
// MRICLS_OASIS_MANIFEST points at a manifest for it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mricls/eigenbrain.hpp"
#include "mricls/eval.hpp"
#include "mricls/features.hpp"
#include "mricls/pipeline.hpp"
#include "mricls/rng.hpp"
#include "mricls/svm.hpp"

#include "oracles.hpp"

using namespace mricls;
namespace fs = std::filesystem;

namespace {

struct Failure {
    std::string message;
};

void require(bool condition, const std::string& message) {
    if (!condition)
        throw Failure{message};
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1

void criterion_svm_oracle() {
    Rng rng(20260808);
    const double c_values[] = {0.5, 1.0, 10.0};
    for (int trial = 0; trial < 50; ++trial) {
        const int n = rng.uniform_int(3, 6);
        const int dim = rng.uniform_int(1, 3);
        std::vector<std::vector<double>> x;
        std::vector<int> y;
        bool pos = false, neg = false;
        do {
            x.clear();
            y.clear();
            pos = neg = false;
            for (int i = 0; i < n; ++i) {
                std::vector<double> row(static_cast<std::size_t>(dim));
                for (double& v : row)
                    v = rng.normal(0.0, 1.0);
                x.push_back(std::move(row));
                const int label = rng.uniform() < 0.5 ? -1 : 1;
                y.push_back(label);
                (label == 1 ? pos : neg) = true;
            }
        } while (!pos || !neg);

        KernelSpec kernel;
        if (trial % 2 == 0)
            kernel = {KernelKind::Linear, 0.0};
        else
            kernel = {KernelKind::Rbf, 1.0 / dim};

        TrainConfig cfg;
        cfg.c = c_values[trial % 3];
        cfg.tolerance = 1e-8;
        cfg.seed = static_cast<std::uint64_t>(trial);
        const SvmModel model = train(x, y, kernel, cfg);
        require(model.converged, "trial " + std::to_string(trial) + ": SMO not converged");

        const auto oracle = oracles::pga_dual_max(x, y, kernel, cfg.c);
        const double gap = std::fabs(model.dual_objective - oracle.objective);
        require(gap <= 1e-6, "trial " + std::to_string(trial) + ": dual objective gap " +
                                 num(gap) + " > 1e-6");

        // 5x5 probe grid over the first two coordinates (or 25 points along
        // the only coordinate in 1-D).
        std::vector<std::vector<double>> probes;
        if (dim == 1) {
            for (int i = 0; i < 25; ++i)
                probes.push_back({-2.0 + 4.0 * i / 24.0});
        } else {
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 5; ++j) {
                    std::vector<double> probe(static_cast<std::size_t>(dim), 0.0);
                    probe[0] = -2.0 + i;
                    probe[1] = -2.0 + j;
                    probes.push_back(std::move(probe));
                }
        }
        for (const auto& probe : probes) {
            const int smo_pred = predict(model, probe);
            const double oracle_f = oracles::oracle_decision(oracle, x, y, kernel, probe);
            const int oracle_pred = oracle_f >= 0.0 ? 1 : -1;
            require(smo_pred == oracle_pred,
                    "trial " + std::to_string(trial) + ": prediction mismatch at probe (f=" +
                        num(oracle_f) + ")");
        }
    }
}

// ---------------------------------------------------------------- criterion 2

void criterion_kkt() {
    Rng rng(77001);
    const double c_values[] = {0.5, 1.0, 10.0};
    for (int trial = 0; trial < 30; ++trial) {
        const int n = rng.uniform_int(8, 60);
        const int dim = rng.uniform_int(1, 4);
        std::vector<std::vector<double>> x;
        std::vector<int> y;
        bool pos = false, neg = false;
        do {
            x.clear();
            y.clear();
            pos = neg = false;
            for (int i = 0; i < n; ++i) {
                std::vector<double> row(static_cast<std::size_t>(dim));
                for (double& v : row)
                    v = rng.normal(0.0, 1.5);
                x.push_back(std::move(row));
                const int label = rng.uniform() < 0.5 ? -1 : 1;
                y.push_back(label);
                (label == 1 ? pos : neg) = true;
            }
        } while (!pos || !neg);

        TrainConfig cfg;
        cfg.c = c_values[trial % 3];
        cfg.seed = static_cast<std::uint64_t>(trial) * 13 + 1;
        const KernelSpec kernel = trial % 2 == 0 ? KernelSpec{KernelKind::Rbf, 1.0 / dim}
                                                 : KernelSpec{KernelKind::Linear, 0.0};
        const SvmModel model = train(x, y, kernel, cfg);
        require(model.converged, "trial " + std::to_string(trial) + ": not converged");

        // alpha per training point, recovered from the stored support vectors
        // (training order is preserved).
        std::vector<double> alpha(x.size(), 0.0);
        std::size_t sv = 0;
        double coef_sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (sv < model.support_vectors.size() && model.support_vectors[sv] == x[i]) {
                alpha[i] = std::fabs(model.dual_coefs[sv]);
                coef_sum += model.dual_coefs[sv];
                ++sv;
            }
        }
        require(sv == model.support_vectors.size(),
                "trial " + std::to_string(trial) + ": support vectors not matched");
        require(std::fabs(coef_sum) <= 1e-8,
                "trial " + std::to_string(trial) + ": |sum alpha_i y_i| = " +
                    num(std::fabs(coef_sum)) + " > 1e-8");

        const double slack = 1e-5; // truncated (alpha <= 1e-8) vectors perturb f
        for (std::size_t i = 0; i < x.size(); ++i) {
            require(alpha[i] >= 0.0 && alpha[i] <= cfg.c + 1e-8,
                    "trial " + std::to_string(trial) + ": alpha outside [0, C]");
            const double margin = y[i] * decision_value(model, x[i]);
            if (alpha[i] <= 1e-8)
                require(margin >= 1.0 - cfg.tolerance - slack,
                        "trial " + std::to_string(trial) + ": alpha=0 KKT violated (" +
                            num(margin) + ")");
            else if (alpha[i] >= cfg.c - 1e-8)
                require(margin <= 1.0 + cfg.tolerance + slack,
                        "trial " + std::to_string(trial) + ": alpha=C KKT violated (" +
                            num(margin) + ")");
            else
                require(std::fabs(margin - 1.0) <= cfg.tolerance + slack,
                        "trial " + std::to_string(trial) + ": margin-SV KKT violated (" +
                            num(margin) + ")");
        }
    }
}

// ---------------------------------------------------------------- criterion 3

void criterion_pca_oracle() {
    Rng rng(5150);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(3, 8);
        std::vector<Slice2D> slices;
        for (int i = 0; i < n; ++i) {
            Slice2D s;
            s.nu = 4;
            s.nv = 4;
            s.data.resize(16);
            for (double& v : s.data)
                v = rng.normal(80.0, 25.0);
            slices.push_back(std::move(s));
        }
        const int k = n - 1;
        const EigenbrainBasis basis = fit_eigenbrains(slices, k);
        const oracles::DensePca dense = oracles::dense_pca(slices, k);

        for (int c = 0; c < k; ++c) {
            const double dist = oracles::component_distance_up_to_sign(
                basis.components[static_cast<std::size_t>(c)],
                dense.components[static_cast<std::size_t>(c)]);
            require(dist < 1e-8, "trial " + std::to_string(trial) + " component " +
                                     std::to_string(c + 1) + ": route distance " +
                                     num(dist));
            const double ev_gap =
                std::fabs(basis.eigenvalues[static_cast<std::size_t>(c)] -
                          dense.eigenvalues[static_cast<std::size_t>(c)]);
            require(ev_gap <= 1e-8 * std::max(1.0, dense.eigenvalues[0]),
                    "trial " + std::to_string(trial) + ": eigenvalue gap " + num(ev_gap));
        }

        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                double dot = 0.0;
                for (std::size_t t = 0; t < 16; ++t)
                    dot += basis.components[static_cast<std::size_t>(i)][t] *
                           basis.components[static_cast<std::size_t>(j)][t];
                require(std::fabs(dot - (i == j ? 1.0 : 0.0)) < 1e-8,
                        "trial " + std::to_string(trial) + ": orthonormality violated");
            }

        // full-rank reconstruction of every training slice
        for (const auto& s : slices) {
            std::vector<double> coeffs;
            for (int c = 1; c <= k; ++c)
                coeffs.push_back(project_coefficient(basis, s, c));
            const Slice2D rebuilt = reconstruct(basis, coeffs);
            double err = 0.0;
            for (std::size_t t = 0; t < s.data.size(); ++t)
                err += (rebuilt.data[t] - s.data[t]) * (rebuilt.data[t] - s.data[t]);
            require(std::sqrt(err) < 1e-8, "trial " + std::to_string(trial) +
                                               ": reconstruction error " +
                                               num(std::sqrt(err)));
        }
    }
}

// ---------------------------------------------------------------- criterion 4

void criterion_symmetry() {
    Slice2D hand;
    hand.nu = 2;
    hand.nv = 2;
    hand.data = {1, 2, 3, 4};
    require(std::fabs(slice_symmetry(hand, FlipAxis::U) - 2.8) <= 1e-12,
            "hand case psi != 2.8");

    Slice2D ones;
    ones.nu = 3;
    ones.nv = 3;
    ones.data.assign(9, 1.0);
    require(std::fabs(slice_symmetry(ones, FlipAxis::U) - 1.0) <= 1e-12,
            "constant slice psi != 1");
    require(std::fabs(slice_symmetry(ones, FlipAxis::V) - 1.0) <= 1e-12,
            "constant slice psi != 1 (V)");

    Rng rng(8086);
    for (int trial = 0; trial < 100; ++trial) {
        Slice2D s;
        s.nu = rng.uniform_int(1, 7);
        s.nv = rng.uniform_int(1, 7);
        s.data.resize(s.pixel_count());
        for (double& v : s.data)
            v = rng.uniform() * 9.0 + 0.5;
        for (FlipAxis axis : {FlipAxis::U, FlipAxis::V}) {
            Slice2D flipped = s;
            for (int v = 0; v < s.nv; ++v)
                for (int u = 0; u < s.nu; ++u)
                    flipped.at(u, v) = axis == FlipAxis::U ? s.at(s.nu - 1 - u, v)
                                                           : s.at(u, s.nv - 1 - v);
            const double a = slice_symmetry(s, axis);
            const double b = slice_symmetry(flipped, axis);
            require(std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a)),
                    "flip invariance violated");

            const double c = 0.25 + rng.uniform() * 4.0;
            Slice2D scaled = s;
            for (double& v : scaled.data)
                v *= c;
            const double sc = slice_symmetry(scaled, axis);
            require(std::fabs(sc - c * a) <= 1e-12 * std::max(1.0, std::fabs(c * a)),
                    "scaling covariance violated");
        }
    }
}

// ---------------------------------------------------------------- criterion 5

void criterion_metrics() {
    const Metrics perfect = metrics({5, 0, 5, 0});
    require(perfect.mcc == 1.0 && perfect.accuracy == 1.0 && perfect.precision == 1.0 &&
                perfect.recall == 1.0,
            "perfect confusion matrix identities");
    require(metrics({5, 5, 5, 5}).mcc == 0.0, "balanced matrix mcc != 0");

    const Metrics hand = metrics({3, 1, 4, 2});
    require(std::fabs(hand.mcc - 10.0 / std::sqrt(600.0)) <= 1e-12, "10/sqrt(600) case");
    require(std::fabs(hand.accuracy - 0.7) <= 1e-12, "hand accuracy");
    require(std::fabs(hand.precision - 0.75) <= 1e-12, "hand precision");
    require(std::fabs(hand.recall - 0.6) <= 1e-12, "hand recall");

    Rng rng(6502);
    for (int trial = 0; trial < 1000; ++trial) {
        ConfusionMatrix cm;
        cm.tp = rng.uniform_int(0, 40);
        cm.fp = rng.uniform_int(0, 40);
        cm.tn = rng.uniform_int(0, 40);
        cm.fn = rng.uniform_int(0, 40);
        if (cm.total() == 0)
            cm.tp = 1;
        const Metrics m = metrics(cm);
        const Metrics swapped = metrics({cm.tn, cm.fn, cm.tp, cm.fp});
        require(std::fabs(m.mcc - swapped.mcc) <= 1e-12, "class-swap symmetry violated");
        const Metrics inverted = metrics({cm.fn, cm.tn, cm.fp, cm.tp});
        require(std::fabs(m.mcc + inverted.mcc) <= 1e-12,
                "prediction-inversion antisymmetry violated");
        require(m.mcc >= -1.0 - 1e-12 && m.mcc <= 1.0 + 1e-12, "mcc out of range");
    }
}

// ---------------------------------------------------------------- criterion 6

void criterion_folds() {
    Rng rng(1214);
    std::vector<int> sizes_to_try;
    for (int n = 20; n <= 60; ++n)
        sizes_to_try.push_back(n);
    sizes_to_try.push_back(416);

    for (int n : sizes_to_try) {
        const int n_pos = n == 416 ? 100 : std::max(2, n / 4);
        std::vector<int> labels;
        for (int i = 0; i < n; ++i)
            labels.push_back(i < n_pos ? 1 : -1);
        rng.shuffle(labels);

        for (bool stratified : {false, true}) {
            const FoldPlan plan = make_folds(labels, 10, 99, stratified);
            std::vector<int> size(10, 0), pos(10, 0);
            for (int i = 0; i < n; ++i) {
                const int f = plan.assignments[static_cast<std::size_t>(i)];
                require(f >= 0 && f < 10, "fold id out of range");
                ++size[static_cast<std::size_t>(f)];
                if (labels[static_cast<std::size_t>(i)] == 1)
                    ++pos[static_cast<std::size_t>(f)];
            }
            int total = 0, min_size = n, max_size = 0, min_pos = n, max_pos = 0;
            for (int f = 0; f < 10; ++f) {
                total += size[static_cast<std::size_t>(f)];
                min_size = std::min(min_size, size[static_cast<std::size_t>(f)]);
                max_size = std::max(max_size, size[static_cast<std::size_t>(f)]);
                min_pos = std::min(min_pos, pos[static_cast<std::size_t>(f)]);
                max_pos = std::max(max_pos, pos[static_cast<std::size_t>(f)]);
            }
            require(total == n, "folds do not partition");
            require(max_size - min_size <= 1, "fold sizes differ by more than 1 at n=" +
                                                  std::to_string(n));
            if (stratified)
                require(max_pos - min_pos <= 1, "per-class fold sizes differ by more "
                                                "than 1 at n=" +
                                                    std::to_string(n));
            if (n == 416) {
                int n41 = 0, n42 = 0;
                for (int f = 0; f < 10; ++f) {
                    if (size[static_cast<std::size_t>(f)] == 41)
                        ++n41;
                    if (size[static_cast<std::size_t>(f)] == 42)
                        ++n42;
                }
                require(n41 == 4 && n42 == 6, "n=416 folds are not {41 x 4, 42 x 6}");
            }
        }
    }
}

// ------------------------------------------------------- criteria 7 and 8

fs::path acceptance_dir() {
    const fs::path dir = fs::temp_directory_path() / "mricls_acceptance";
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cli = MRICLS_CLI_PATH;
    const std::string log = (acceptance_dir() / "cli.log").string();
    const std::string command = "\"" + cli + "\" " + args + " > \"" + log + "\" 2>&1";
    return std::system(command.c_str());
}

nlohmann::json read_report(const fs::path& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "missing report " + path.string());
    nlohmann::json j;
    in >> j;
    return j;
}

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), "missing file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion_end_to_end() {
    const fs::path root = acceptance_dir();
    fs::remove_all(root / "e2e");
    const fs::path data = root / "e2e" / "data";
    const fs::path null_data = root / "e2e" / "null";

    require(run_cli("synth --n 200 --seed 7 --out \"" + data.string() + "\"") == 0,
            "synth failed");

    for (const char* kernel : {"rbf", "linear"}) {
        const fs::path out = root / "e2e" / ("cv_" + std::string(kernel));
        require(run_cli("cv --manifest \"" + (data / "manifest.csv").string() +
                        "\" --kernel " + kernel + " --out \"" + out.string() + "\"") == 0,
                std::string("cv ") + kernel + " failed");
        const auto report = read_report(out / "report.json");
        require(report["n_subjects"].get<int>() == 200, "expected 200 subjects");
        const int positives = report["n_positive"].get<int>();
        require(positives >= 30 && positives <= 66,
                "positive count " + std::to_string(positives) +
                    " outside the ~24% prevalence band");
        const double acc = report["mean"]["test_accuracy"].get<double>();
        const double mcc = report["mean"]["mcc"].get<double>();
        require(acc >= 0.90, std::string(kernel) + ": mean test accuracy " + num(acc) +
                                 " < 0.90");
        require(mcc >= 0.70, std::string(kernel) + ": mean MCC " + num(mcc) + " < 0.70");
        require(report["all_converged"].get<bool>(),
                std::string(kernel) + ": a fold did not converge");
    }

    require(run_cli("synth --n 200 --seed 7 --class-effect 0 --out \"" +
                    null_data.string() + "\"") == 0,
            "null synth failed");
    for (const char* kernel : {"rbf", "linear"}) {
        const fs::path out = root / "e2e" / ("null_" + std::string(kernel));
        require(run_cli("cv --manifest \"" + (null_data / "manifest.csv").string() +
                        "\" --kernel " + kernel + " --out \"" + out.string() + "\"") == 0,
                std::string("null cv ") + kernel + " failed");
        const auto report = read_report(out / "report.json");
        const double mcc = report["mean"]["mcc"].get<double>();
        require(std::fabs(mcc) < 0.15, std::string(kernel) + ": null cohort |MCC| " +
                                           num(std::fabs(mcc)) + " >= 0.15");
    }
}

void criterion_determinism() {
    const fs::path root = acceptance_dir();
    const fs::path data = root / "e2e" / "data"; // produced by criterion 7
    require(fs::exists(data / "manifest.csv"), "criterion 7 data missing");

    const fs::path out_a = root / "det_a";
    const fs::path out_b = root / "det_b";
    fs::remove_all(out_a);
    fs::remove_all(out_b);
    const std::string common = "cv --manifest \"" + (data / "manifest.csv").string() +
                               "\" --kernel rbf --seed 41 --out \"";
    require(run_cli(common + out_a.string() + "\"") == 0, "first run failed");
    require(run_cli(common + out_b.string() + "\"") == 0, "second run failed");

    require(read_bytes(out_a / "report.json") == read_bytes(out_b / "report.json"),
            "report.json differs between identical runs");
    require(read_bytes(out_a / "folds.csv") == read_bytes(out_b / "folds.csv"),
            "folds.csv differs between identical runs");
    require(read_bytes(out_a / "model.txt") == read_bytes(out_b / "model.txt"),
            "model.txt differs between identical runs");
}

// ---------------------------------------------------------------- criterion 9

std::string criterion_oasis() {
    const char* manifest_env = std::getenv("MRICLS_OASIS_MANIFEST");
    if (manifest_env == nullptr || std::string(manifest_env).empty())
        return "requires OASIS-1 data; set MRICLS_OASIS_MANIFEST to run";

    const auto manifest = load_manifest(manifest_env);
    require(manifest.size() == 416,
            "expected the 416-subject OASIS-1 cohort, found " +
                std::to_string(manifest.size()));
    int positives = 0;
    for (const auto& r : manifest)
        positives += label_subject(r) == 1 ? 1 : 0;
    require(positives == 100, "expected 100 demented subjects, found " +
                                  std::to_string(positives));

    struct Best {
        double accuracy = 0.0;
        double mcc = 0.0;
        double c = 0.0;
    };
    Best best_linear, best_rbf;
    for (double c : {0.1, 1.0, 10.0, 100.0}) {
        for (KernelKind kind : {KernelKind::Linear, KernelKind::Rbf}) {
            RunConfig cfg;
            cfg.kernel = kind;
            cfg.c = c;
            cfg.seed = 7;
            const PipelineResult result = run_pipeline(manifest, cfg);
            Best& best = kind == KernelKind::Linear ? best_linear : best_rbf;
            if (result.report.mean_test.accuracy > best.accuracy) {
                best.accuracy = result.report.mean_test.accuracy;
                best.mcc = result.report.mean_test.mcc;
                best.c = c;
            }
        }
    }
    require(std::fabs(best_linear.accuracy - 0.850) <= 0.03,
            "linear accuracy " + num(best_linear.accuracy) + " not within 3pp of 0.850");
    require(std::fabs(best_rbf.accuracy - 0.857) <= 0.03,
            "rbf accuracy " + num(best_rbf.accuracy) + " not within 3pp of 0.857");
    require(std::fabs(best_linear.mcc - 0.594) <= 0.05,
            "linear MCC " + num(best_linear.mcc) + " not within 0.05 of 0.594");
    require(std::fabs(best_rbf.mcc - 0.616) <= 0.05,
            "rbf MCC " + num(best_rbf.mcc) + " not within 0.05 of 0.616");

    // ablations at the best rbf/linear setting
    RunConfig cfg;
    cfg.kernel = KernelKind::Rbf;
    cfg.c = best_rbf.c;
    cfg.seed = 7;
    const AblationReport ablation = run_ablations(manifest, cfg);
    const double age_drop = ablation.baseline.mean_test.accuracy -
                            ablation.no_age.mean_test.accuracy;
    require(age_drop >= 0.0 && age_drop <= 0.04,
            "drop-age accuracy change " + num(age_drop) + " not roughly 2pp");
    const double pca_mcc_drop =
        ablation.baseline.mean_test.mcc - ablation.no_pca.mean_test.mcc;
    require(std::fabs(pca_mcc_drop - 0.07) <= 0.05,
            "drop-pca MCC change " + num(pca_mcc_drop) + " not roughly 0.07");
    return "";
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<void()> run;
    std::function<std::string()> run_optional; // returns skip reason or ""
};

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "SVM oracle equivalence (SMO vs projected-gradient dual)", 10.0,
         criterion_svm_oracle, nullptr},
        {2, "KKT and dual feasibility on converged models", 5.0, criterion_kkt, nullptr},
        {3, "PCA oracle equivalence (Gram route vs dense covariance)", 5.0,
         criterion_pca_oracle, nullptr},
        {4, "symmetry feature hand values and invariances", 2.0, criterion_symmetry,
         nullptr},
        {5, "metrics identities and MCC symmetries", 2.0, criterion_metrics, nullptr},
        {6, "fold partition laws incl. the 416-subject shape", 2.0, criterion_folds,
         nullptr},
        {7, "end-to-end synthetic cohort via the CLI", 60.0, criterion_end_to_end,
         nullptr},
        {8, "byte-identical reports for identical runs", 60.0, criterion_determinism,
         nullptr},
        {9, "OASIS-1 reproduction (optional)", 0.0, nullptr, criterion_oasis},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string failure;
        std::string skip;
        try {
            if (c.run_optional) {
                skip = c.run_optional();
            } else {
                c.run();
            }
        } catch (const Failure& f) {
            failure = f.message;
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (!failure.empty()) {
            ++failures;
            std::printf("[FAIL] criterion %d: %s (%.2fs) — %s\n", c.id, c.name, elapsed,
                        failure.c_str());
        } else if (!skip.empty()) {
            std::printf("[SKIP] criterion %d: %s — %s\n", c.id, c.name, skip.c_str());
        } else {
            std::printf("[PASS] criterion %d: %s (%.2fs)\n", c.id, c.name, elapsed);
            if (c.budget_seconds > 0.0 && elapsed > c.budget_seconds) {
                ++failures;
                std::printf("[FAIL] criterion %d exceeded its %.0fs budget (%.2fs)\n",
                            c.id, c.budget_seconds, elapsed);
            }
        }
    }
    return failures == 0 ? 0 : 1;
}
