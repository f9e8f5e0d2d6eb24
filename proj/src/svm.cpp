#include "mricls/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "mricls/rng.hpp"

namespace mricls {

double kernel_eval(const KernelSpec& spec, std::span<const double> u,
                   std::span<const double> v) {
    if (u.size() != v.size())
        throw DataError("kernel_eval: dimension mismatch (" + std::to_string(u.size()) +
                        " vs " + std::to_string(v.size()) + ")");
    if (spec.kind == KernelKind::Linear) {
        double dot = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            dot += u[i] * v[i];
        return dot;
    }
    if (!(spec.gamma > 0.0))
        throw DataError("rbf kernel requires gamma > 0");
    double dist2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        dist2 += d * d;
    }
    return std::exp(-spec.gamma * dist2);
}

namespace {

// SMO working state. The gradient cache g[i] = sum_j alpha_j y_j K(i, j) is
// kept incrementally so error terms stay O(1) per lookup.
class SmoSolver {
public:
    SmoSolver(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
              const KernelSpec& kernel, const TrainConfig& cfg)
        : x_(x), y_(y), kernel_(kernel), cfg_(cfg), n_(static_cast<int>(y.size())),
          rng_(cfg.seed) {
        alpha_.assign(static_cast<std::size_t>(n_), 0.0);
        g_.assign(static_cast<std::size_t>(n_), 0.0);
        // Bound-snapping window; shrinks with the tolerance so tight runs
        // keep full precision in the dual objective.
        eps_bound_ = std::min(1e-9, 1e-3 * cfg_.tolerance) * std::max(1.0, cfg_.c);
        min_step_ = 1e-14 * std::max(1.0, cfg_.c);
        const std::size_t cells = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
        cache_gram_ = cells <= (std::size_t{1} << 24);
        if (cache_gram_) {
            gram_.resize(cells);
            for (int i = 0; i < n_; ++i)
                for (int j = i; j < n_; ++j) {
                    const double kv = kernel_eval(kernel_, x_[static_cast<std::size_t>(i)],
                                                  x_[static_cast<std::size_t>(j)]);
                    gram_[static_cast<std::size_t>(i) * n_ + j] = kv;
                    gram_[static_cast<std::size_t>(j) * n_ + i] = kv;
                }
        }
    }

    // Platt's outer loop: full scans alternate with passes over the
    // non-bound (margin) set until that set is clean, then a full rescan.
    // Convergence is certified only by a complete full scan that finds no
    // violation and takes no step.
    bool solve(long max_iters) {
        long iters = 0;
        int stalled_full_passes = 0;
        bool examine_all = true;
        while (true) {
            bias_ = canonical_bias();
            int violations = 0;
            int changed = 0;
            bool complete = true;
            for (int i = 0; i < n_; ++i) {
                if (!examine_all) {
                    const double a = alpha_[static_cast<std::size_t>(i)];
                    if (a <= eps_bound_ || a >= cfg_.c - eps_bound_)
                        continue;
                }
                if (iters >= max_iters) {
                    complete = false;
                    break;
                }
                ++iters;
                if (examine(i))
                    ++changed;
                else if (last_was_violation_)
                    ++violations;
            }
            if (examine_all && complete && violations == 0 && changed == 0)
                return true;
            if (!complete)
                return false;
            if (examine_all) {
                if (changed == 0) {
                    // violations remain but no step succeeded
                    if (++stalled_full_passes >= cfg_.max_passes)
                        return false;
                } else {
                    stalled_full_passes = 0;
                    examine_all = false;
                }
            } else if (changed == 0) {
                examine_all = true;
            }
        }
    }

    double canonical_bias() const {
        double sum = 0.0;
        int margin = 0;
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n_; ++i) {
            const double a = alpha_[static_cast<std::size_t>(i)];
            const double beta = y_[static_cast<std::size_t>(i)] - g_[static_cast<std::size_t>(i)];
            if (a > eps_bound_ && a < cfg_.c - eps_bound_) {
                sum += beta;
                ++margin;
            } else if (a <= eps_bound_) {
                if (y_[static_cast<std::size_t>(i)] > 0)
                    lo = std::max(lo, beta);
                else
                    hi = std::min(hi, beta);
            } else { // at C
                if (y_[static_cast<std::size_t>(i)] > 0)
                    hi = std::min(hi, beta);
                else
                    lo = std::max(lo, beta);
            }
        }
        if (margin > 0)
            return sum / margin;
        const bool has_lo = std::isfinite(lo);
        const bool has_hi = std::isfinite(hi);
        if (has_lo && has_hi)
            return 0.5 * (lo + hi);
        if (has_lo)
            return lo;
        if (has_hi)
            return hi;
        return 0.0;
    }

    double objective() const {
        double w = 0.0;
        for (int i = 0; i < n_; ++i)
            w += alpha_[static_cast<std::size_t>(i)] *
                 (1.0 - 0.5 * y_[static_cast<std::size_t>(i)] * g_[static_cast<std::size_t>(i)]);
        return w;
    }

    const std::vector<double>& alpha() const { return alpha_; }
    double bias() const { return bias_; }

private:
    double k(int i, int j) const {
        if (cache_gram_)
            return gram_[static_cast<std::size_t>(i) * n_ + j];
        return kernel_eval(kernel_, x_[static_cast<std::size_t>(i)],
                           x_[static_cast<std::size_t>(j)]);
    }

    // Checks i against the KKT conditions; on a violation, attempts a joint
    // step with the largest-|Ei - Ej| partner first, then a seeded random
    // rotation over the rest until one succeeds.
    bool examine(int i) {
        last_was_violation_ = false;
        const double e_i = g_[static_cast<std::size_t>(i)] + bias_ -
                           y_[static_cast<std::size_t>(i)];
        const double r = y_[static_cast<std::size_t>(i)] * e_i;
        const double a = alpha_[static_cast<std::size_t>(i)];
        const bool violates = (r < -cfg_.tolerance && a < cfg_.c - eps_bound_) ||
                              (r > cfg_.tolerance && a > eps_bound_);
        if (!violates)
            return false;
        last_was_violation_ = true;

        int best = -1;
        double best_gap = 0.0;
        for (int j = 0; j < n_; ++j) {
            if (j == i)
                continue;
            const double e_j = g_[static_cast<std::size_t>(j)] + bias_ -
                               y_[static_cast<std::size_t>(j)];
            const double gap = std::fabs(e_i - e_j);
            if (gap > best_gap) {
                best_gap = gap;
                best = j;
            }
        }
        if (best >= 0 && take_step(i, best))
            return true;

        const int start = rng_.uniform_int(0, n_ - 1);
        for (int d = 0; d < n_; ++d) {
            const int j = (start + d) % n_;
            if (j == i || j == best)
                continue;
            if (take_step(i, j))
                return true;
        }
        return false;
    }

    bool take_step(int i, int j) {
        const double yi = y_[static_cast<std::size_t>(i)];
        const double yj = y_[static_cast<std::size_t>(j)];
        const double ai = alpha_[static_cast<std::size_t>(i)];
        const double aj = alpha_[static_cast<std::size_t>(j)];
        const double s = yi * yj;
        const double c = cfg_.c;

        double lo, hi;
        if (s < 0.0) {
            lo = std::max(0.0, aj - ai);
            hi = std::min(c, c + aj - ai);
        } else {
            lo = std::max(0.0, ai + aj - c);
            hi = std::min(c, ai + aj);
        }
        if (hi - lo < min_step_)
            return false;

        const double e_i = g_[static_cast<std::size_t>(i)] + bias_ - yi;
        const double e_j = g_[static_cast<std::size_t>(j)] + bias_ - yj;
        const double kii = k(i, i), kjj = k(j, j), kij = k(i, j);
        const double eta = kii + kjj - 2.0 * kij; // curvature along the constraint line

        double aj_new;
        if (eta > 1e-12) {
            aj_new = aj + yj * (e_i - e_j) / eta;
            aj_new = std::clamp(aj_new, lo, hi);
        } else {
            // Flat direction: pick the endpoint with the larger dual gain.
            const double slope = yj * (e_i - e_j);
            const double dl = lo - aj, dh = hi - aj;
            const double gain_lo = slope * dl - 0.5 * eta * dl * dl;
            const double gain_hi = slope * dh - 0.5 * eta * dh * dh;
            if (gain_lo > gain_hi + 1e-12)
                aj_new = lo;
            else if (gain_hi > gain_lo + 1e-12)
                aj_new = hi;
            else
                return false;
        }
        if (aj_new - lo < eps_bound_)
            aj_new = lo;
        else if (hi - aj_new < eps_bound_)
            aj_new = hi;
        if (std::fabs(aj_new - aj) < min_step_)
            return false;

        // Snapping ai to a bound moves the residual into aj so that
        // yi*ai + yj*aj is conserved exactly.
        double ai_new = ai + s * (aj - aj_new);
        if (ai_new < eps_bound_) {
            aj_new = std::clamp(aj_new + s * ai_new, 0.0, c);
            ai_new = 0.0;
        } else if (ai_new > c - eps_bound_) {
            aj_new = std::clamp(aj_new + s * (ai_new - c), 0.0, c);
            ai_new = c;
        }

        const double di = ai_new - ai;
        const double dj = aj_new - aj;
        alpha_[static_cast<std::size_t>(i)] = ai_new;
        alpha_[static_cast<std::size_t>(j)] = aj_new;
        for (int r = 0; r < n_; ++r)
            g_[static_cast<std::size_t>(r)] += di * yi * k(i, r) + dj * yj * k(j, r);

        // Local bias refresh keeps later error terms in this pass current.
        const double b1 = yi - g_[static_cast<std::size_t>(i)];
        const double b2 = yj - g_[static_cast<std::size_t>(j)];
        if (ai_new > eps_bound_ && ai_new < c - eps_bound_)
            bias_ = b1;
        else if (aj_new > eps_bound_ && aj_new < c - eps_bound_)
            bias_ = b2;
        else
            bias_ = 0.5 * (b1 + b2);
        return true;
    }

    const std::vector<std::vector<double>>& x_;
    const std::vector<int>& y_;
    KernelSpec kernel_;
    TrainConfig cfg_;
    int n_;
    Rng rng_;
    std::vector<double> alpha_;
    std::vector<double> g_;
    std::vector<double> gram_;
    bool cache_gram_ = false;
    double bias_ = 0.0;
    double eps_bound_ = 0.0;
    double min_step_ = 0.0;
    bool last_was_violation_ = false;
};

} // namespace

SvmModel train(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
               const KernelSpec& kernel, const TrainConfig& config) {
    const int n = static_cast<int>(y.size());
    if (x.size() != y.size())
        throw DataError("train: feature and label counts differ");
    if (n < 2)
        throw DataError("train: need at least one example of each class");
    if (!(config.c > 0.0) || !(config.tolerance > 0.0) || config.max_passes < 1)
        throw DataError("train: invalid config");
    const std::size_t dim = x.front().size();
    bool has_pos = false, has_neg = false;
    for (int i = 0; i < n; ++i) {
        if (y[static_cast<std::size_t>(i)] == 1)
            has_pos = true;
        else if (y[static_cast<std::size_t>(i)] == -1)
            has_neg = true;
        else
            throw DataError("train: labels must be +1 or -1");
        if (x[static_cast<std::size_t>(i)].size() != dim)
            throw DataError("train: inconsistent feature dimensions");
        for (double v : x[static_cast<std::size_t>(i)])
            if (!std::isfinite(v))
                throw DataError("train: non-finite feature value in example " +
                                std::to_string(i));
    }
    if (!has_pos || !has_neg)
        throw DataError("train: training data contains a single class");
    if (kernel.kind == KernelKind::Rbf && !(kernel.gamma > 0.0))
        throw DataError("train: rbf kernel requires gamma > 0");

    SmoSolver solver(x, y, kernel, config);
    const long max_iters = config.max_iters > 0 ? config.max_iters : 1000L * n;
    const bool converged = solver.solve(max_iters);

    SvmModel model;
    model.kernel = kernel;
    model.c = config.c;
    model.converged = converged;
    model.bias = solver.canonical_bias();
    model.dual_objective = solver.objective();
    const auto& alpha = solver.alpha();
    for (int i = 0; i < n; ++i) {
        if (alpha[static_cast<std::size_t>(i)] > 1e-8) {
            model.support_vectors.push_back(x[static_cast<std::size_t>(i)]);
            model.dual_coefs.push_back(alpha[static_cast<std::size_t>(i)] *
                                       y[static_cast<std::size_t>(i)]);
        }
    }
    return model;
}

double decision_value(const SvmModel& model, std::span<const double> x) {
    double f = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
        f += model.dual_coefs[i] * kernel_eval(model.kernel, model.support_vectors[i], x);
    return f;
}

int predict(const SvmModel& model, std::span<const double> x) {
    return decision_value(model, x) >= 0.0 ? 1 : -1;
}

double dual_objective(const SvmModel& model) {
    const std::size_t m = model.support_vectors.size();
    double w = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        w += std::fabs(model.dual_coefs[i]);
        for (std::size_t j = 0; j < m; ++j)
            w -= 0.5 * model.dual_coefs[i] * model.dual_coefs[j] *
                 kernel_eval(model.kernel, model.support_vectors[i],
                             model.support_vectors[j]);
    }
    return w;
}

void save_model(const SvmModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw DataError("cannot open " + path.string() + " for writing");
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "mricls-svm 1\n";
    out << "kernel " << (model.kernel.kind == KernelKind::Linear ? "linear" : "rbf")
        << "\n";
    out << "gamma " << num(model.kernel.gamma) << "\n";
    out << "c " << num(model.c) << "\n";
    out << "bias " << num(model.bias) << "\n";
    out << "nsv " << model.support_vectors.size() << "\n";
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
        out << num(model.dual_coefs[i]);
        for (double v : model.support_vectors[i])
            out << " " << num(v);
        out << "\n";
    }
    if (!out)
        throw DataError("write failed on " + path.string());
}

SvmModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open " + path.string());
    std::string word;
    auto expect = [&](const std::string& key) {
        if (!(in >> word) || word != key)
            throw DataError("malformed model file " + path.string() + ": expected '" +
                            key + "'");
    };
    expect("mricls-svm");
    int version = 0;
    if (!(in >> version) || version != 1)
        throw DataError("unsupported model version in " + path.string());

    SvmModel model;
    expect("kernel");
    if (!(in >> word))
        throw DataError("malformed model file " + path.string());
    if (word == "linear")
        model.kernel.kind = KernelKind::Linear;
    else if (word == "rbf")
        model.kernel.kind = KernelKind::Rbf;
    else
        throw DataError("unknown kernel '" + word + "' in " + path.string());
    expect("gamma");
    in >> model.kernel.gamma;
    expect("c");
    in >> model.c;
    expect("bias");
    in >> model.bias;
    expect("nsv");
    std::size_t nsv = 0;
    if (!(in >> nsv))
        throw DataError("malformed model file " + path.string());
    std::string rest;
    std::getline(in, rest);
    for (std::size_t i = 0; i < nsv; ++i) {
        std::string line;
        if (!std::getline(in, line))
            throw DataError("model file " + path.string() + " truncated at vector " +
                            std::to_string(i));
        std::istringstream row(line);
        double coef = 0.0;
        if (!(row >> coef))
            throw DataError("malformed support-vector line in " + path.string());
        std::vector<double> sv;
        double v = 0.0;
        while (row >> v)
            sv.push_back(v);
        if (sv.empty())
            throw DataError("empty support vector in " + path.string());
        model.dual_coefs.push_back(coef);
        model.support_vectors.push_back(std::move(sv));
    }
    model.dual_objective = dual_objective(model);
    return model;
}

} // namespace mricls
