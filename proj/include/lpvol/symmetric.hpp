#pragma once

#include <Eigen/Core>
#include <algorithm>

namespace lpvol {

/// sigma_0..sigma_kmax of the entries of x (kmax < 0 means all, up to x.size()).
/// One pass of the product recurrence prod_i (1 + x_i z), truncated at kmax.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> elementary_symmetric(const Eigen::MatrixBase<Derived>& x,
                                                                                 Eigen::Index kmax = -1) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = x.size();
    if (kmax < 0 || kmax > n) kmax = n;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> e = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(kmax + 1);
    e[0] = Scalar(1);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = std::min<Eigen::Index>(i + 1, kmax); k >= 1; --k) e[k] += x[i] * e[k - 1];
    return e;
}

/// sigma_k of x with entry `skip` removed.
template <typename Derived>
typename Derived::Scalar elementary_symmetric_without(const Eigen::MatrixBase<Derived>& x, Eigen::Index skip,
                                                      Eigen::Index k) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = x.size();
    if (k < 0 || k > n - 1) return Scalar(0);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> e = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(k + 1);
    e[0] = Scalar(1);
    Eigen::Index seen = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i == skip) continue;
        ++seen;
        for (Eigen::Index j = std::min(seen, k); j >= 1; --j) e[j] += x[i] * e[j - 1];
    }
    return e[k];
}

}  // namespace lpvol
