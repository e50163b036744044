#pragma once

#include "fusionkit/gaussian.hpp"

namespace fusionkit {

/// Output of the weighted geometric mean of two mixtures.
struct FusionResult {
    /// Fusion mass: integral of p1^omega * p2^(1-omega).
    double eta = 0.0;
    /// Normalized fused density. Empty when `no_overlap` is set.
    GaussianMixture fused;
    /// Set when eta underflows 1e-300; eta is then reported as exactly 0.
    bool no_overlap = false;
};

inline constexpr double kEtaUnderflow = 1e-300;

/// Integral of N(x; m, P)^omega over x, independent of m:
///   det(2 pi P / omega)^(1/2) / det(2 pi P)^(omega/2).
double kappa(double omega, const Eigen::MatrixXd& P);
double log_kappa(double omega, const Eigen::MatrixXd& P);

/// Per-component power of a mixture, alpha^omega * kappa(omega, P) * N(x; m, P/omega).
/// Exact for a single Gaussian, approximate when components overlap. Unnormalized.
GaussianMixture gm_power(const GaussianMixture& p, double omega);

/// Weighted geometric mean p1^omega p2^(1-omega) of two mixtures in closed form.
/// Produces M1*M2 components, row-major in (i, j).
FusionResult gm_gci_fuse(const GaussianMixture& p1, const GaussianMixture& p2, double omega);

/// Fusion mass only; skips building the fused components.
double gm_gci_eta(const GaussianMixture& p1, const GaussianMixture& p2, double omega);

}  // namespace fusionkit
