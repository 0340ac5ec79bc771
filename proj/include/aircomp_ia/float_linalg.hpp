#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cstdint>
#include <vector>

#include "aircomp_ia/dense.hpp"
#include "aircomp_ia/errors.hpp"
#include "aircomp_ia/scalar.hpp"

namespace aircomp_ia {

struct FloatRankResult {
    std::int64_t rank = 0;
    double sigma_ratio = 0.0;  // sigma_min / sigma_max, 0 for an all-zero matrix
};

inline Eigen::MatrixXcd to_eigen(const ColMatrix<Complex>& m) {
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (std::int64_t j = 0; j < m.cols(); ++j) {
        for (std::int64_t i = 0; i < m.rows(); ++i) e(i, j) = m(i, j);
    }
    return e;
}

/// Numerical rank: singular values above tol * sigma_max.
inline FloatRankResult rank_check_float(const ColMatrix<Complex>& m, double tol = 1e-9) {
    if (!(tol > 0.0 && tol < 1.0)) throw InvalidParams("rank tolerance must lie in (0, 1)");
    if (m.rows() == 0 || m.cols() == 0) return {0, 0.0};
    Eigen::MatrixXcd e = to_eigen(m);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(e);
    if (svd.info() != Eigen::Success) throw NumericalFailure("SVD did not converge");
    const auto& sigma = svd.singularValues();
    const double smax = sigma(0);
    if (!(smax > 0.0)) return {0, 0.0};
    FloatRankResult out;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > tol * smax) ++out.rank;
    }
    out.sigma_ratio = sigma(sigma.size() - 1) / smax;
    return out;
}

/// Least-squares solve via column-pivoted QR.
inline std::vector<Complex> solve_least_squares(const ColMatrix<Complex>& a, const std::vector<Complex>& rhs) {
    if (static_cast<std::int64_t>(rhs.size()) != a.rows()) {
        throw DimensionError("right-hand side length does not match matrix rows");
    }
    Eigen::MatrixXcd e = to_eigen(a);
    Eigen::VectorXcd b(a.rows());
    for (std::int64_t i = 0; i < a.rows(); ++i) b(i) = rhs[static_cast<std::size_t>(i)];
    Eigen::VectorXcd x = e.colPivHouseholderQr().solve(b);
    std::vector<Complex> out(static_cast<std::size_t>(a.cols()));
    for (std::int64_t j = 0; j < a.cols(); ++j) out[static_cast<std::size_t>(j)] = x(j);
    return out;
}

}  // namespace aircomp_ia
