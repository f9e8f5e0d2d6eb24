#include "mricls/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mricls {

namespace {

double off_diagonal_norm(const std::vector<double>& a, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            s += 2.0 * a[static_cast<std::size_t>(i) * n + j] *
                 a[static_cast<std::size_t>(i) * n + j];
    return std::sqrt(s);
}

} // namespace

SymmetricEigen jacobi_eigen(const std::vector<double>& matrix, int n) {
    if (n < 1 || matrix.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("jacobi_eigen: matrix size does not match n");

    std::vector<double> a(matrix.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a[static_cast<std::size_t>(i) * n + j] =
                0.5 * (matrix[static_cast<std::size_t>(i) * n + j] +
                       matrix[static_cast<std::size_t>(j) * n + i]);

    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i) * n + i] = 1.0;

    double frob = 0.0;
    for (double x : a)
        frob += x * x;
    frob = std::sqrt(frob);
    const double threshold = 1e-12 * frob;

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a, n) > threshold;
         ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[static_cast<std::size_t>(p) * n + q];
                if (apq == 0.0)
                    continue;
                const double app = a[static_cast<std::size_t>(p) * n + p];
                const double aqq = a[static_cast<std::size_t>(q) * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) /
                    (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a[static_cast<std::size_t>(p) * n + p] = app - t * apq;
                a[static_cast<std::size_t>(q) * n + q] = aqq + t * apq;
                a[static_cast<std::size_t>(p) * n + q] = 0.0;
                a[static_cast<std::size_t>(q) * n + p] = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a[static_cast<std::size_t>(r) * n + p];
                        const double arq = a[static_cast<std::size_t>(r) * n + q];
                        a[static_cast<std::size_t>(r) * n + p] =
                            a[static_cast<std::size_t>(p) * n + r] =
                                arp - s * (arq + tau * arp);
                        a[static_cast<std::size_t>(r) * n + q] =
                            a[static_cast<std::size_t>(q) * n + r] =
                                arq + s * (arp - tau * arq);
                    }
                    const double vrp = v[static_cast<std::size_t>(r) * n + p];
                    const double vrq = v[static_cast<std::size_t>(r) * n + q];
                    v[static_cast<std::size_t>(r) * n + p] = vrp - s * (vrq + tau * vrp);
                    v[static_cast<std::size_t>(r) * n + q] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    // Sort eigenpairs by value, descending; ties keep the lower index first.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return a[static_cast<std::size_t>(i) * n + i] >
               a[static_cast<std::size_t>(j) * n + j];
    });

    SymmetricEigen result;
    result.values.resize(static_cast<std::size_t>(n));
    result.vectors.assign(static_cast<std::size_t>(n),
                          std::vector<double>(static_cast<std::size_t>(n)));
    for (int k = 0; k < n; ++k) {
        const int idx = order[static_cast<std::size_t>(k)];
        result.values[static_cast<std::size_t>(k)] =
            a[static_cast<std::size_t>(idx) * n + idx];
        for (int i = 0; i < n; ++i)
            result.vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
                v[static_cast<std::size_t>(i) * n + idx];
    }
    return result;
}

} // namespace mricls
