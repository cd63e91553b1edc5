#include "triage/error.hpp"
#include "triage/features.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <random>

namespace triage {

namespace {

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& y)
{
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

template <typename Matrix>
SvdResult randomized_svd(const Matrix& a, int k, const SvdOptions& opt)
{
    const auto rows = a.rows();
    const auto cols = a.cols();
    if (k < 1 || k > std::min(rows, cols)) {
        throw ValidationError("truncated svd: rank " + std::to_string(k) + " outside [1, min(" +
                              std::to_string(rows) + ", " + std::to_string(cols) + ")]");
    }
    if (opt.oversample < 0 || opt.power_iterations < 0) {
        throw ValidationError("truncated svd: oversample and power iterations must be non-negative");
    }
    const auto width = std::min<Eigen::Index>(k + opt.oversample, std::min(rows, cols));

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd omega(cols, width);
    for (Eigen::Index j = 0; j < width; ++j) {
        for (Eigen::Index i = 0; i < cols; ++i) {
            omega(i, j) = gauss(rng);
        }
    }

    Eigen::MatrixXd q = orthonormal_basis(a * omega);
    Eigen::VectorXd previous;
    int it = 0;
    const int max_iter = std::max(opt.power_iterations, opt.max_power_iterations);
    while (it < max_iter) {
        const Eigen::MatrixXd z = orthonormal_basis(a.transpose() * q);
        q = orthonormal_basis(a * z);
        ++it;
        if (it < opt.power_iterations) {
            continue;
        }
        const Eigen::MatrixXd b = (a.transpose() * q).transpose();
        const Eigen::VectorXd current = Eigen::JacobiSVD<Eigen::MatrixXd>(b).singularValues().head(k);
        if (previous.size() == k) {
            const double scale = std::max(current[0], 1e-300);
            if ((current - previous).cwiseAbs().maxCoeff() <= opt.tolerance * scale) {
                break;
            }
        }
        previous = current;
    }

    const Eigen::MatrixXd b = (a.transpose() * q).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdResult out;
    out.u = q * svd.matrixU().leftCols(k);
    out.s = svd.singularValues().head(k);
    out.v = svd.matrixV().leftCols(k);
    out.iterations = it;
    return out;
}

} // namespace

SvdResult truncated_svd(const Eigen::MatrixXd& a, int k, const SvdOptions& options)
{
    return randomized_svd(a, k, options);
}

SvdResult truncated_svd(const SparseRows& a, int k, const SvdOptions& options)
{
    return randomized_svd(a, k, options);
}

} // namespace triage
