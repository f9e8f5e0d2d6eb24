#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mricls/errors.hpp"

namespace mricls {

enum class KernelKind { Linear, Rbf };

struct KernelSpec {
    KernelKind kind = KernelKind::Linear;
    double gamma = 0.0; // required > 0 for Rbf
};

// Linear: <u, v>. Rbf: exp(-gamma * |u - v|^2).
double kernel_eval(const KernelSpec& spec, std::span<const double> u,
                   std::span<const double> v);

struct TrainConfig {
    double c = 1.0;          // box constraint
    double tolerance = 1e-3; // KKT tolerance
    int max_passes = 10;     // full passes without an alpha change before giving up
    long max_iters = 0;      // hard cap on examinations; 0 = 1000 * n
    std::uint64_t seed = 0;  // second-index tie-breaking
};

// Soft-margin SVM in dual form. dual_coefs[i] = alpha_i * y_i for the stored
// support vectors (alpha_i > 1e-8). `converged` is false when training hit
// its iteration caps with KKT violations outstanding. `dual_objective` is
// the objective value reached by the solver, recorded before support-vector
// truncation. Trained models are immutable; concurrent prediction is safe.
struct SvmModel {
    KernelSpec kernel;
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> dual_coefs;
    double bias = 0.0;
    double c = 1.0;
    bool converged = true;
    double dual_objective = 0.0;
};

// Maximizes the standard soft-margin dual
//   sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j),  0 <= a_i <= C,
//   sum_i a_i y_i = 0
// by Platt-style SMO with a seeded random second-index heuristic. The bias is
// the mean of the margin-support-vector estimates, falling back to the
// midpoint of the KKT-feasible interval when no margin vectors exist.
// Labels must be +1/-1 with both classes present; features must be finite.
SvmModel train(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
               const KernelSpec& kernel, const TrainConfig& config = {});

// f(x) = sum_i dual_coefs[i] * K(sv_i, x) + bias
double decision_value(const SvmModel& model, std::span<const double> x);

// sign of the decision value; exactly 0 maps to +1.
int predict(const SvmModel& model, std::span<const double> x);

// Dual objective recomputed from the stored support vectors.
double dual_objective(const SvmModel& model);

// Plain-text model format, versioned:
//   mricls-svm 1
//   kernel linear|rbf
//   gamma <g>
//   c <C>
//   bias <b>
//   nsv <k>
// then one line per support vector: dual coefficient followed by the feature
// values, full-precision decimal.
void save_model(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_model(const std::filesystem::path& path);

} // namespace mricls
