#include "fusionkit/gaussian.hpp"

#include "fusionkit/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fusionkit {

Eigen::Index GaussianMixture::dim() const {
    return components.empty() ? 0 : components.front().mean.size();
}

double GaussianMixture::total_weight() const {
    double total = 0.0;
    for (const auto& c : components) total += c.weight;
    return total;
}

Eigen::VectorXd GaussianMixture::mean() const {
    const double total = total_weight();
    Eigen::VectorXd m = Eigen::VectorXd::Zero(dim());
    for (const auto& c : components) m += (c.weight / total) * c.mean;
    return m;
}

Eigen::MatrixXd GaussianMixture::covariance() const {
    const double total = total_weight();
    const Eigen::VectorXd m = mean();
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(dim(), dim());
    for (const auto& c : components) {
        const Eigen::VectorXd d = c.mean - m;
        P += (c.weight / total) * (c.covariance + d * d.transpose());
    }
    return P;
}

const Eigen::VectorXd& GaussianMixture::dominant_mean() const {
    if (components.empty()) throw DomainError("dominant_mean of an empty mixture");
    const GaussianComponent* best = &components.front();
    for (const auto& c : components) {
        if (c.weight > best->weight) best = &c;
    }
    return best->mean;
}

double GaussianMixture::evaluate(const Eigen::VectorXd& x) const {
    double value = 0.0;
    for (const auto& c : components) value += c.weight * gaussian_pdf(x, c.mean, c.covariance);
    return value;
}

void check_spd(const Eigen::MatrixXd& P) {
    if (P.rows() != P.cols() || P.rows() == 0) throw DomainError("covariance must be square and non-empty");
    if (!P.allFinite()) throw DomainError("covariance has non-finite entries");
    const double norm = P.norm();
    if ((P - P.transpose()).norm() > 1e-9 * norm) throw DomainError("covariance is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(P, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= 1e-9 * norm) {
        throw DomainError("covariance is not positive definite (min eigenvalue " +
                          std::to_string(eig.eigenvalues().minCoeff()) + ")");
    }
}

void check_mixture(const GaussianMixture& p, bool normalized) {
    if (p.empty()) throw DomainError("mixture has no components");
    const auto d = p.dim();
    if (d == 0) throw DomainError("mixture has zero-dimensional components");
    for (const auto& c : p.components) {
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) throw DomainError("mixture weight must be finite and >= 0");
        if (c.mean.size() != d || c.covariance.rows() != d) throw DomainError("mixture component dimension mismatch");
        if (!c.mean.allFinite()) throw DomainError("mixture mean has non-finite entries");
        check_spd(c.covariance);
    }
    if (normalized && std::abs(p.total_weight() - 1.0) > 1e-9) {
        throw DomainError("mixture weights sum to " + std::to_string(p.total_weight()) + ", expected 1");
    }
}

Eigen::LLT<Eigen::MatrixXd> cholesky(const Eigen::MatrixXd& P) {
    Eigen::LLT<Eigen::MatrixXd> llt(P);
    if (llt.info() != Eigen::Success) throw DomainError("Cholesky factorization failed: matrix not SPD");
    return llt;
}

double log_det_spd(const Eigen::LLT<Eigen::MatrixXd>& llt) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double log_gaussian_pdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                        const Eigen::LLT<Eigen::MatrixXd>& llt) {
    const Eigen::VectorXd white = llt.matrixL().solve(x - mean);
    const auto d = static_cast<double>(x.size());
    return -0.5 * (white.squaredNorm() + d * std::log(2.0 * std::numbers::pi) + log_det_spd(llt));
}

double gaussian_pdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::MatrixXd& P) {
    return std::exp(log_gaussian_pdf(x, mean, cholesky(P)));
}

GaussianMixture normalized(GaussianMixture p) {
    const double total = p.total_weight();
    if (!(total > 0.0)) throw DomainError("cannot normalize a mixture with zero total weight");
    for (auto& c : p.components) c.weight /= total;
    return p;
}

}  // namespace fusionkit
