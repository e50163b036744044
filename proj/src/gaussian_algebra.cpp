#include "fusionkit/gaussian_algebra.hpp"

#include "fusionkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fusionkit {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2 pi)

void check_omega_open(double omega) {
    if (!(omega > 0.0 && omega < 1.0)) throw DomainError("fusion weight must lie in (0,1)");
}

/// Information-form view of one mixture component.
struct InfoComponent {
    double log_weight;
    double log_kappa;
    Eigen::MatrixXd information;  // P^-1
    Eigen::VectorXd info_mean;    // P^-1 m
    const GaussianComponent* source;
};

std::vector<InfoComponent> to_info(const GaussianMixture& p, double omega) {
    std::vector<InfoComponent> out;
    out.reserve(p.size());
    for (const auto& c : p.components) {
        const auto llt = cholesky(c.covariance);
        Eigen::MatrixXd info = llt.solve(Eigen::MatrixXd::Identity(c.mean.size(), c.mean.size()));
        Eigen::VectorXd info_mean = info * c.mean;
        const double logdet = log_det_spd(llt);
        const auto d = static_cast<double>(c.mean.size());
        const double lk = 0.5 * (d * kLog2Pi + logdet - d * std::log(omega)) - 0.5 * omega * (d * kLog2Pi + logdet);
        out.push_back({c.weight > 0.0 ? std::log(c.weight) : -std::numeric_limits<double>::infinity(), lk,
                       std::move(info), std::move(info_mean), &c});
    }
    return out;
}

/// log alpha_ij for the pair (i, j).
double log_pair_weight(const InfoComponent& a, const InfoComponent& b, double omega) {
    if (!std::isfinite(a.log_weight) || !std::isfinite(b.log_weight)) {
        return -std::numeric_limits<double>::infinity();
    }
    const Eigen::MatrixXd S = a.source->covariance / omega + b.source->covariance / (1.0 - omega);
    const auto llt = cholesky(S);
    const double log_n = log_gaussian_pdf(a.source->mean, b.source->mean, llt);
    return omega * a.log_weight + (1.0 - omega) * b.log_weight + a.log_kappa + b.log_kappa + log_n;
}

std::vector<double> pair_log_weights(const std::vector<InfoComponent>& a, const std::vector<InfoComponent>& b,
                                     double omega) {
    std::vector<double> out;
    out.reserve(a.size() * b.size());
    for (const auto& ca : a) {
        for (const auto& cb : b) out.push_back(log_pair_weight(ca, cb, omega));
    }
    return out;
}

double log_sum_exp(const std::vector<double>& values) {
    const double top = *std::max_element(values.begin(), values.end());
    if (!std::isfinite(top)) return top;
    double acc = 0.0;
    for (double v : values) acc += std::exp(v - top);
    return top + std::log(acc);
}

}  // namespace

double log_kappa(double omega, const Eigen::MatrixXd& P) {
    if (!(omega > 0.0 && omega <= 1.0)) throw DomainError("kappa exponent must lie in (0,1]");
    const auto llt = cholesky(P);
    const double logdet = log_det_spd(llt);
    const auto d = static_cast<double>(P.rows());
    return 0.5 * (d * kLog2Pi + logdet - d * std::log(omega)) - 0.5 * omega * (d * kLog2Pi + logdet);
}

double kappa(double omega, const Eigen::MatrixXd& P) { return std::exp(log_kappa(omega, P)); }

GaussianMixture gm_power(const GaussianMixture& p, double omega) {
    if (!(omega > 0.0 && omega <= 1.0)) throw DomainError("mixture power exponent must lie in (0,1]");
    check_mixture(p, false);
    GaussianMixture out;
    out.components.reserve(p.size());
    for (const auto& c : p.components) {
        const double w = c.weight > 0.0 ? std::exp(omega * std::log(c.weight) + log_kappa(omega, c.covariance)) : 0.0;
        out.components.push_back({w, c.mean, c.covariance / omega});
    }
    return out;
}

double gm_gci_eta(const GaussianMixture& p1, const GaussianMixture& p2, double omega) {
    check_omega_open(omega);
    const auto a = to_info(p1, omega);
    const auto b = to_info(p2, 1.0 - omega);
    const double log_eta = log_sum_exp(pair_log_weights(a, b, omega));
    const double eta = std::exp(log_eta);
    return eta < kEtaUnderflow ? 0.0 : eta;
}

FusionResult gm_gci_fuse(const GaussianMixture& p1, const GaussianMixture& p2, double omega) {
    check_omega_open(omega);
    if (p1.empty() || p2.empty()) throw DomainError("cannot fuse an empty mixture");
    if (p1.dim() != p2.dim()) throw DomainError("mixture dimensions differ");
    const auto a = to_info(p1, omega);
    const auto b = to_info(p2, 1.0 - omega);
    const auto log_weights = pair_log_weights(a, b, omega);
    const double log_eta = log_sum_exp(log_weights);

    FusionResult result;
    const double eta = std::exp(log_eta);
    if (!(eta >= kEtaUnderflow)) {
        result.no_overlap = true;
        return result;
    }
    result.eta = eta;
    result.fused.components.reserve(log_weights.size());
    std::size_t k = 0;
    for (const auto& ca : a) {
        for (const auto& cb : b) {
            const double w = std::exp(log_weights[k++] - log_eta);
            const Eigen::MatrixXd info = omega * ca.information + (1.0 - omega) * cb.information;
            const auto llt = cholesky(info);
            Eigen::MatrixXd P = llt.solve(Eigen::MatrixXd::Identity(info.rows(), info.cols()));
            P = 0.5 * (P + P.transpose()).eval();
            Eigen::VectorXd m = llt.solve(omega * ca.info_mean + (1.0 - omega) * cb.info_mean);
            result.fused.components.push_back({w, std::move(m), std::move(P)});
        }
    }
    return result;
}

}  // namespace fusionkit
