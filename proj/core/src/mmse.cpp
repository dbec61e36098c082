// SPDX-License-Identifier: Apache-2.0
#include "dlcp/mmse.hpp"

#include <Eigen/Dense>

namespace dlcp {

namespace {
using EMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;
}

MmseEstimator::MmseEstimator(std::span<const ComplexTensor> coarse, std::span<const double> sigma2) {
    require(!coarse.empty(), "MmseEstimator: empty training set");
    require(coarse.size() == sigma2.size(), "MmseEstimator: one noise variance per training sample");
    dims_ = coarse.front().dims();
    const auto d = static_cast<Eigen::Index>(coarse.front().size());

    EMat c = EMat::Zero(d, d);
    double mean_sigma2 = 0.0;
    for (std::size_t t = 0; t < coarse.size(); ++t) {
        require(coarse[t].dims() == dims_, "MmseEstimator: training samples differ in shape");
        const Eigen::Map<const Eigen::VectorXcd> h(coarse[t].data().data(), d);
        c.selfadjointView<Eigen::Lower>().rankUpdate(h, 1.0);
        mean_sigma2 += sigma2[t];
    }
    const double inv_n = 1.0 / static_cast<double>(coarse.size());
    EMat full = c.selfadjointView<Eigen::Lower>();
    full *= inv_n;
    mean_sigma2 *= inv_n;
    full.diagonal().array() -= mean_sigma2;

    Eigen::SelfAdjointEigenSolver<EMat> es(full);
    if (es.info() != Eigen::Success) throw NumericalError("MmseEstimator: eigendecomposition failed");
    lambda_.resize(static_cast<std::size_t>(d));
    for (Eigen::Index k = 0; k < d; ++k) {
        double v = es.eigenvalues()[k];
        if (v < 0.0) {
            v = 0.0;
            ++floored_;
        }
        lambda_[static_cast<std::size_t>(k)] = v;
    }
    u_ = ComplexMatrix(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
    Eigen::Map<EMat>(u_.data().data(), d, d) = es.eigenvectors();
}

ComplexTensor MmseEstimator::estimate(const ComplexTensor& coarse, double sigma2) const {
    require(coarse.dims() == dims_, "MmseEstimator: sample shape differs from the training set");
    require(sigma2 >= 0.0, "MmseEstimator: noise variance must be >= 0");
    const auto d = static_cast<Eigen::Index>(coarse.size());
    const Eigen::Map<const EMat> u(u_.data().data(), d, d);
    const Eigen::Map<const Eigen::VectorXcd> h(coarse.data().data(), d);
    Eigen::VectorXcd p = u.adjoint() * h;
    for (Eigen::Index k = 0; k < d; ++k) {
        const double l = lambda_[static_cast<std::size_t>(k)];
        const double den = l + sigma2;
        p[k] *= den > 0.0 ? l / den : 1.0;
    }
    ComplexTensor out(dims_);
    Eigen::Map<Eigen::VectorXcd>(out.data().data(), d) = u * p;
    return out;
}

}  // namespace dlcp
