#pragma once

#include <Eigen/Dense>

#include <vector>

namespace fusionkit {

struct GaussianComponent {
    double weight = 1.0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
};

/// Weighted sum of Gaussians. As a spatial density the weights sum to one.
struct GaussianMixture {
    std::vector<GaussianComponent> components;

    GaussianMixture() = default;
    explicit GaussianMixture(std::vector<GaussianComponent> comps) : components(std::move(comps)) {}
    GaussianMixture(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
        : components{{1.0, std::move(mean), std::move(covariance)}} {}

    [[nodiscard]] bool empty() const { return components.empty(); }
    [[nodiscard]] std::size_t size() const { return components.size(); }
    [[nodiscard]] Eigen::Index dim() const;
    [[nodiscard]] double total_weight() const;

    /// Mixture mean and covariance (moment matched), using normalized weights.
    [[nodiscard]] Eigen::VectorXd mean() const;
    [[nodiscard]] Eigen::MatrixXd covariance() const;
    /// Mean of the heaviest component.
    [[nodiscard]] const Eigen::VectorXd& dominant_mean() const;

    [[nodiscard]] double evaluate(const Eigen::VectorXd& x) const;
};

/// Throws DomainError unless P is symmetric (1e-9 relative) with all eigenvalues
/// above 1e-9 * ||P||.
void check_spd(const Eigen::MatrixXd& P);

/// Structural and SPD checks; `normalized` additionally requires weights summing to one
/// within 1e-9.
void check_mixture(const GaussianMixture& p, bool normalized);

/// Cholesky factor of an SPD matrix; throws DomainError on failure.
Eigen::LLT<Eigen::MatrixXd> cholesky(const Eigen::MatrixXd& P);

double log_det_spd(const Eigen::LLT<Eigen::MatrixXd>& llt);

/// log N(x; mean, P) given the Cholesky factor of P.
double log_gaussian_pdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                        const Eigen::LLT<Eigen::MatrixXd>& llt);
double gaussian_pdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::MatrixXd& P);

/// Scales the weights to sum to one. Throws DomainError on zero total weight.
GaussianMixture normalized(GaussianMixture p);

}  // namespace fusionkit
