#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "mricls/eigenbrain.hpp"
#include "mricls/jacobi.hpp"
#include "mricls/rng.hpp"

#include "oracles.hpp"

using namespace mricls;

namespace {

Slice2D make_slice(int nu, int nv, std::vector<double> data) {
    Slice2D s;
    s.nu = nu;
    s.nv = nv;
    s.data = std::move(data);
    return s;
}

std::vector<Slice2D> random_cohort(Rng& rng, int n, int nu, int nv) {
    std::vector<Slice2D> slices;
    for (int i = 0; i < n; ++i) {
        Slice2D s;
        s.nu = nu;
        s.nv = nv;
        s.data.resize(s.pixel_count());
        for (double& x : s.data)
            x = rng.normal(50.0, 20.0);
        slices.push_back(std::move(s));
    }
    return slices;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d += a[i] * b[i];
    return d;
}

using oracles::component_distance_up_to_sign;
using oracles::dense_pca;
using oracles::DensePca;

} // namespace

TEST_CASE("jacobi_eigen: hand 2x2 and eigenpair residuals on random matrices") {
    // [[2, 1], [1, 2]] has eigenvalues 3 and 1.
    const SymmetricEigen e = jacobi_eigen({2, 1, 1, 2}, 2);
    CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = rng.uniform_int(2, 9);
        std::vector<double> a(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double v = rng.normal(0.0, 2.0);
                a[static_cast<std::size_t>(i) * n + j] = v;
                a[static_cast<std::size_t>(j) * n + i] = v;
            }
        const SymmetricEigen eig = jacobi_eigen(a, n);
        double trace = 0.0, sum = 0.0;
        for (int i = 0; i < n; ++i) {
            trace += a[static_cast<std::size_t>(i) * n + i];
            sum += eig.values[static_cast<std::size_t>(i)];
        }
        CHECK(trace == doctest::Approx(sum).epsilon(1e-10));
        for (int k = 0; k < n; ++k) {
            if (k > 0)
                CHECK(eig.values[static_cast<std::size_t>(k - 1)] >=
                      eig.values[static_cast<std::size_t>(k)]);
            // residual ||A v - lambda v||
            const auto& v = eig.vectors[static_cast<std::size_t>(k)];
            double residual = 0.0;
            for (int i = 0; i < n; ++i) {
                double av = 0.0;
                for (int j = 0; j < n; ++j)
                    av += a[static_cast<std::size_t>(i) * n + j] *
                          v[static_cast<std::size_t>(j)];
                const double r =
                    av - eig.values[static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(i)];
                residual += r * r;
            }
            CHECK(std::sqrt(residual) < 1e-9);
            CHECK(dot(v, v) == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("fit_eigenbrains: two-slice hand case") {
    const std::vector<Slice2D> slices = {make_slice(2, 1, {1, 0}), make_slice(2, 1, {0, 1})};
    const EigenbrainBasis basis = fit_eigenbrains(slices, 1);
    CHECK(basis.mean_image[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(basis.mean_image[1] == doctest::Approx(0.5).epsilon(1e-15));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(basis.components[0][0] == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(basis.components[0][1] == doctest::Approx(-inv_sqrt2).epsilon(1e-12));
    CHECK(basis.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-12));

    // projecting [1, 0] gives <[0.5, -0.5], c> = 1/sqrt(2)
    CHECK(project_coefficient(basis, slices[0], 1) ==
          doctest::Approx(inv_sqrt2).epsilon(1e-12));
    // projecting the mean gives 0
    CHECK(project_coefficient(basis, make_slice(2, 1, {0.5, 0.5}), 1) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fit_eigenbrains: identical slices yield zero eigenvalues, orthonormal basis") {
    std::vector<Slice2D> slices(4, make_slice(2, 2, {3, 3, 3, 3}));
    const EigenbrainBasis basis = fit_eigenbrains(slices, 3);
    REQUIRE(basis.size() == 3);
    for (double ev : basis.eigenvalues)
        CHECK(ev == 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double expected = i == j ? 1.0 : 0.0;
            CHECK(std::fabs(dot(basis.components[static_cast<std::size_t>(i)],
                                basis.components[static_cast<std::size_t>(j)]) -
                            expected) < 1e-8);
        }
}

TEST_CASE("fit_eigenbrains: preconditions") {
    std::vector<Slice2D> one = {make_slice(2, 2, {1, 2, 3, 4})};
    CHECK_THROWS_AS(fit_eigenbrains(one, 1), DataError);

    std::vector<Slice2D> mismatched = {make_slice(2, 2, {1, 2, 3, 4}),
                                       make_slice(2, 1, {1, 2})};
    CHECK_THROWS_AS(fit_eigenbrains(mismatched, 1), DataError);

    Rng rng(2);
    auto slices = random_cohort(rng, 3, 2, 2);
    CHECK_THROWS_AS(fit_eigenbrains(slices, 3), DataError); // > n-1
    CHECK_NOTHROW(fit_eigenbrains(slices, 2));
}

TEST_CASE("gram route matches dense covariance eigendecomposition") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(3, 8);
        const auto slices = random_cohort(rng, n, 4, 4);
        const int k = std::min(3, n - 1);
        const EigenbrainBasis basis = fit_eigenbrains(slices, k);
        const DensePca dense = dense_pca(slices, k);
        for (int c = 0; c < k; ++c) {
            CHECK(component_distance_up_to_sign(
                      basis.components[static_cast<std::size_t>(c)],
                      dense.components[static_cast<std::size_t>(c)]) < 1e-8);
            CHECK(basis.eigenvalues[static_cast<std::size_t>(c)] ==
                  doctest::Approx(dense.eigenvalues[static_cast<std::size_t>(c)])
                      .epsilon(1e-8));
        }
    }
}

TEST_CASE("eigenbrain invariants on random cohorts") {
    Rng rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = rng.uniform_int(4, 10);
        const int nu = rng.uniform_int(2, 5);
        const int nv = rng.uniform_int(2, 5);
        const auto slices = random_cohort(rng, n, nu, nv);
        const int k = std::min(n - 1, static_cast<int>(slices[0].pixel_count()));
        const EigenbrainBasis basis = fit_eigenbrains(slices, k);

        // orthonormality
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                const double expected = i == j ? 1.0 : 0.0;
                CHECK(std::fabs(dot(basis.components[static_cast<std::size_t>(i)],
                                    basis.components[static_cast<std::size_t>(j)]) -
                                expected) < 1e-8);
            }

        // nonincreasing eigenvalues
        for (int i = 1; i < k; ++i)
            CHECK(basis.eigenvalues[static_cast<std::size_t>(i - 1)] >=
                  basis.eigenvalues[static_cast<std::size_t>(i)] - 1e-12);

        // at full rank (k = n-1 <= p) the retained eigenvalues capture the
        // whole centered variance
        if (k == n - 1 && static_cast<std::size_t>(k) < slices[0].pixel_count()) {
            double total = 0.0;
            for (const auto& s : slices) {
                for (std::size_t i = 0; i < s.data.size(); ++i) {
                    const double d = s.data[i] - basis.mean_image[i];
                    total += d * d;
                }
            }
            total /= n;
            double sum = 0.0;
            for (double ev : basis.eigenvalues)
                sum += ev;
            CHECK(sum == doctest::Approx(total).epsilon(1e-8));
        }

        // full-rank reconstruction of any training slice
        const Slice2D& target = slices[static_cast<std::size_t>(rng.uniform_int(0, n - 1))];
        std::vector<double> coeffs;
        for (int c = 1; c <= k; ++c)
            coeffs.push_back(project_coefficient(basis, target, c));
        const Slice2D rebuilt = reconstruct(basis, coeffs);
        double err = 0.0;
        for (std::size_t i = 0; i < target.data.size(); ++i)
            err += (rebuilt.data[i] - target.data[i]) * (rebuilt.data[i] - target.data[i]);
        CHECK(std::sqrt(err) < 1e-8);

        // partial reconstruction error is nonincreasing in component count
        double prev = std::numeric_limits<double>::infinity();
        for (int used = 0; used <= k; ++used) {
            const Slice2D partial =
                reconstruct(basis, std::vector<double>(coeffs.begin(), coeffs.begin() + used));
            double e = 0.0;
            for (std::size_t i = 0; i < target.data.size(); ++i)
                e += (partial.data[i] - target.data[i]) * (partial.data[i] - target.data[i]);
            CHECK(e <= prev + 1e-9);
            prev = e;
        }
    }
}

TEST_CASE("projection and reconstruction identities") {
    Rng rng(13);
    const auto slices = random_cohort(rng, 6, 3, 3);
    const EigenbrainBasis basis = fit_eigenbrains(slices, 4);

    // mean + 3 * component_k projects to 3 on k and 0 elsewhere
    for (int k = 1; k <= 4; ++k) {
        Slice2D probe = make_slice(3, 3, basis.mean_image);
        for (std::size_t i = 0; i < probe.data.size(); ++i)
            probe.data[i] += 3.0 * basis.components[static_cast<std::size_t>(k - 1)][i];
        for (int c = 1; c <= 4; ++c) {
            const double expected = c == k ? 3.0 : 0.0;
            CHECK(project_coefficient(basis, probe, c) ==
                  doctest::Approx(expected).epsilon(1e-9));
        }
    }

    // zero coefficients reconstruct the mean image
    const Slice2D mean = reconstruct(basis, {});
    for (std::size_t i = 0; i < mean.data.size(); ++i)
        CHECK(mean.data[i] == basis.mean_image[i]);

    CHECK_THROWS_AS(reconstruct(basis, std::vector<double>(5, 0.0)), DataError);
    CHECK_THROWS_AS(project_coefficient(basis, slices[0], 0), DataError);
    CHECK_THROWS_AS(project_coefficient(basis, slices[0], 5), DataError);
    CHECK_THROWS_AS(project_coefficient(basis, make_slice(2, 2, {1, 2, 3, 4}), 1),
                    DataError);
}

TEST_CASE("repeated fits are bit-identical") {
    Rng rng(55);
    const auto slices = random_cohort(rng, 5, 3, 2);
    const EigenbrainBasis a = fit_eigenbrains(slices, 3);
    const EigenbrainBasis b = fit_eigenbrains(slices, 3);
    CHECK(a.mean_image == b.mean_image);
    CHECK(a.eigenvalues == b.eigenvalues);
    for (int k = 0; k < 3; ++k)
        CHECK(a.components[static_cast<std::size_t>(k)] ==
              b.components[static_cast<std::size_t>(k)]);
}

TEST_CASE("basis exports as single-slice volumes") {
    Rng rng(4);
    const auto slices = random_cohort(rng, 4, 3, 3);
    const EigenbrainBasis basis = fit_eigenbrains(slices, 2);
    const Volume mean = mean_as_volume(basis);
    CHECK(mean.nx == 3);
    CHECK(mean.ny == 3);
    CHECK(mean.nz == 1);
    CHECK(mean.data == basis.mean_image);
    const Volume comp = component_as_volume(basis, 2);
    CHECK(comp.data == basis.components[1]);
    CHECK_THROWS_AS(component_as_volume(basis, 3), DataError);
}
