#include "mricls/eigenbrain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mricls/jacobi.hpp"

namespace mricls {

namespace {

void check_dims(const EigenbrainBasis& basis, const Slice2D& slice) {
    if (slice.nu != basis.nu || slice.nv != basis.nv)
        throw DataError("slice dims " + std::to_string(slice.nu) + "x" +
                        std::to_string(slice.nv) + " do not match basis " +
                        std::to_string(basis.nu) + "x" + std::to_string(basis.nv));
}

// Largest-magnitude entry positive; first index wins ties. Keeps repeated
// fits bit-comparable.
void fix_sign(std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::fabs(v[i]) > std::fabs(v[best]))
            best = i;
    if (v[best] < 0.0)
        for (double& x : v)
            x = -x;
}

// Deterministic orthonormal filler for zero-variance directions: the first
// canonical basis vector with a usable residual after projecting out the
// components already chosen.
std::vector<double> orthonormal_filler(const std::vector<std::vector<double>>& existing,
                                       std::size_t p) {
    for (std::size_t m = 0; m < p; ++m) {
        std::vector<double> cand(p, 0.0);
        cand[m] = 1.0;
        for (const auto& c : existing) {
            double dot = 0.0;
            for (std::size_t i = 0; i < p; ++i)
                dot += cand[i] * c[i];
            for (std::size_t i = 0; i < p; ++i)
                cand[i] -= dot * c[i];
        }
        double norm = 0.0;
        for (double x : cand)
            norm += x * x;
        norm = std::sqrt(norm);
        if (norm >= 0.5) {
            for (double& x : cand)
                x /= norm;
            return cand;
        }
    }
    throw DataError("eigenbrain basis cannot exceed the slice pixel count");
}

} // namespace

EigenbrainBasis fit_eigenbrains(const std::vector<Slice2D>& slices, int n_components) {
    const int n = static_cast<int>(slices.size());
    if (n < 2)
        throw DataError("fit_eigenbrains needs at least 2 slices, got " +
                        std::to_string(n));
    const Slice2D& first = slices.front();
    for (const auto& s : slices)
        if (s.nu != first.nu || s.nv != first.nv || s.orientation != first.orientation)
            throw DataError("fit_eigenbrains: slices differ in dims or orientation");
    const std::size_t p = first.pixel_count();
    const int max_components = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(n - 1), p));
    if (n_components < 1 || n_components > max_components)
        throw DataError("fit_eigenbrains: n_components " + std::to_string(n_components) +
                        " outside [1, " + std::to_string(max_components) + "]");

    EigenbrainBasis basis;
    basis.orientation = first.orientation;
    basis.slice_index = first.index;
    basis.nu = first.nu;
    basis.nv = first.nv;

    basis.mean_image.assign(p, 0.0);
    for (const auto& s : slices)
        for (std::size_t i = 0; i < p; ++i)
            basis.mean_image[i] += s.data[i];
    for (double& x : basis.mean_image)
        x /= n;

    // Centered slices as columns of X; G = X^T X is only n x n.
    std::vector<std::vector<double>> centered(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        auto& col = centered[static_cast<std::size_t>(j)];
        col.resize(p);
        for (std::size_t i = 0; i < p; ++i)
            col[i] = slices[static_cast<std::size_t>(j)].data[i] - basis.mean_image[i];
    }

    std::vector<double> gram(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < p; ++k)
                dot += centered[static_cast<std::size_t>(i)][k] *
                       centered[static_cast<std::size_t>(j)][k];
            gram[static_cast<std::size_t>(i) * n + j] = dot;
            gram[static_cast<std::size_t>(j) * n + i] = dot;
        }
    }

    const SymmetricEigen eig = jacobi_eigen(gram, n);
    const double lead = std::max(eig.values.front(), 0.0);

    basis.components.reserve(static_cast<std::size_t>(n_components));
    basis.eigenvalues.reserve(static_cast<std::size_t>(n_components));
    for (int k = 0; k < n_components; ++k) {
        const double lambda = std::max(eig.values[static_cast<std::size_t>(k)], 0.0);
        std::vector<double> comp(p, 0.0);
        for (int j = 0; j < n; ++j) {
            const double w = eig.vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            const auto& col = centered[static_cast<std::size_t>(j)];
            for (std::size_t i = 0; i < p; ++i)
                comp[i] += w * col[i];
        }
        double norm = 0.0;
        for (double x : comp)
            norm += x * x;
        norm = std::sqrt(norm);
        if (lambda <= 1e-12 * lead || norm <= 0.0) {
            comp = orthonormal_filler(basis.components, p);
            basis.eigenvalues.push_back(0.0);
        } else {
            for (double& x : comp)
                x /= norm;
            basis.eigenvalues.push_back(lambda / n); // population covariance
        }
        fix_sign(comp);
        basis.components.push_back(std::move(comp));
    }
    return basis;
}

double project_coefficient(const EigenbrainBasis& basis, const Slice2D& slice,
                           int component) {
    check_dims(basis, slice);
    if (component < 1 || component > basis.size())
        throw DataError("component index " + std::to_string(component) +
                        " outside [1, " + std::to_string(basis.size()) + "]");
    const auto& comp = basis.components[static_cast<std::size_t>(component - 1)];
    double dot = 0.0;
    for (std::size_t i = 0; i < basis.mean_image.size(); ++i)
        dot += (slice.data[i] - basis.mean_image[i]) * comp[i];
    return dot;
}

Slice2D reconstruct(const EigenbrainBasis& basis, const std::vector<double>& coefficients) {
    if (coefficients.size() > static_cast<std::size_t>(basis.size()))
        throw DataError("reconstruct: " + std::to_string(coefficients.size()) +
                        " coefficients exceed basis size " + std::to_string(basis.size()));
    Slice2D out;
    out.nu = basis.nu;
    out.nv = basis.nv;
    out.orientation = basis.orientation;
    out.index = basis.slice_index;
    out.data = basis.mean_image;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        const auto& comp = basis.components[k];
        for (std::size_t i = 0; i < out.data.size(); ++i)
            out.data[i] += coefficients[k] * comp[i];
    }
    return out;
}

namespace {

Volume image_as_volume(const EigenbrainBasis& basis, const std::vector<double>& image) {
    Volume v;
    v.nx = basis.nu;
    v.ny = basis.nv;
    v.nz = 1;
    v.kind = VolumeKind::Intensity;
    v.data = image;
    return v;
}

} // namespace

Volume mean_as_volume(const EigenbrainBasis& basis) {
    return image_as_volume(basis, basis.mean_image);
}

Volume component_as_volume(const EigenbrainBasis& basis, int component) {
    if (component < 1 || component > basis.size())
        throw DataError("component index " + std::to_string(component) +
                        " outside [1, " + std::to_string(basis.size()) + "]");
    return image_as_volume(basis, basis.components[static_cast<std::size_t>(component - 1)]);
}

} // namespace mricls
