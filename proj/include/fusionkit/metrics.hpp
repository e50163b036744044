#pragma once

#include "fusionkit/lmb.hpp"

#include <vector>

namespace fusionkit {

/// Parameters of the labeled OSPA distance.
struct TospaParams {
    double p = 1.0;        ///< order, >= 1
    double c = 100.0;      ///< cutoff in metres
    double alpha = 100.0;  ///< label error penalty, in [0, c]

    void check() const;
};

/// Labeled OSPA between two track sets. The state assignment minimizes the
/// sum of cut-off distances to the power p; every assigned pair with
/// differing identities adds alpha^p and every unassigned track adds c^p.
/// Returns the 1/p-th root of the mean over the larger cardinality.
double tospa(const LabeledTrackSet& x, const LabeledTrackSet& y, const TospaParams& params);

/// Unlabeled OSPA of order p with cutoff c.
double ospa(const std::vector<Eigen::VectorXd>& x, const std::vector<Eigen::VectorXd>& y, double p, double c);

/// Order-p vector distance min(c, ||x - y||_p).
double cutoff_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double p, double c);

/// Keeps only the given state coordinates, e.g. {0, 2} for the positions of
/// [x, vx, y, vy].
LabeledTrackSet select_coordinates(const LabeledTrackSet& tracks, const std::vector<Eigen::Index>& indices);

}  // namespace fusionkit
