#pragma once

#include <vector>

#include "mricls/volume.hpp"

namespace mricls {

// Principal components of a cohort of equally sized 2-D slices. Components
// are orthonormal flattened images; eigenvalues follow the population
// covariance convention (divide by the number of slices) and are
// nonincreasing. Components whose eigenvalue is zero carry no cohort
// variance; they are filled with deterministic orthonormal placeholders.
// A fitted basis is immutable and safe to share across projections.
struct EigenbrainBasis {
    Orientation orientation = Orientation::Axial;
    int slice_index = 0;
    int nu = 0, nv = 0;
    std::vector<double> mean_image;               // length nu*nv
    std::vector<std::vector<double>> components;  // each length nu*nv
    std::vector<double> eigenvalues;

    int size() const { return static_cast<int>(components.size()); }
};

// Component selection and slice placement for the two bases the pipeline
// fits. Component indices are 1-based.
struct ComponentSelection {
    int coronal_component = 4;
    int axial_component = 7;
    int coronal_slice = -1; // -1 = middle plane
    int axial_slice = -1;
};

// Fits the top n_components principal components of the centered slices via
// the Gram-matrix route: eigendecompose G = X^T X (one row/column per slice,
// cheap because slices outnumber nothing), map eigenvectors back through X,
// and normalize. Sign convention: the entry of largest absolute value (first
// such index on ties) is made positive, so fits are deterministic.
// Requires >= 2 slices of equal dims and orientation, and
// n_components <= min(slices - 1, pixels).
EigenbrainBasis fit_eigenbrains(const std::vector<Slice2D>& slices, int n_components);

// OLS coefficient of the centered slice on one component. With an
// orthonormal basis the joint least-squares solution coincides with these
// per-component inner products. `component` is 1-based.
double project_coefficient(const EigenbrainBasis& basis, const Slice2D& slice,
                           int component);

// mean_image + sum_k coefficients[k] * component_k, shaped like the fitted
// slices. coefficients.size() must not exceed the basis size.
Slice2D reconstruct(const EigenbrainBasis& basis, const std::vector<double>& coefficients);

// Visualization exports: the mean image or one component (1-based) as a
// single-slice intensity volume, suitable for write_rvol.
Volume mean_as_volume(const EigenbrainBasis& basis);
Volume component_as_volume(const EigenbrainBasis& basis, int component);

} // namespace mricls
