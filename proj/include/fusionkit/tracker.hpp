#pragma once

#include "fusionkit/lmb.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace fusionkit {

/// Linear Gaussian motion with survival probability.
struct MotionModel {
    Eigen::MatrixXd F;
    Eigen::MatrixXd Q;
    double survival = 1.0;

    /// Nearly constant velocity in 2-D over state [x, vx, y, vy]:
    /// Q = G G^T sigma_w^2 with G = [T^2/2 0; T 0; 0 T^2/2; 0 T].
    static MotionModel constant_velocity(double period, double sigma_w, double survival);
    void check() const;
};

/// Axis-aligned rectangle supporting uniform clutter.
struct Region {
    double x_min = -1000.0;
    double x_max = 1000.0;
    double y_min = -1000.0;
    double y_max = 1000.0;

    [[nodiscard]] double area() const { return (x_max - x_min) * (y_max - y_min); }
};

struct SensorModel {
    Eigen::MatrixXd H;
    Eigen::MatrixXd R;
    double detection = 1.0;
    double clutter_rate = 0.0;
    Region region;

    /// Position-only sensor over [x, vx, y, vy] with independent x/y noise.
    static SensorModel position(double sigma_x, double sigma_y, double detection, double clutter_rate,
                                Region region = {});
    /// Clutter intensity lambda / area.
    [[nodiscard]] double clutter_intensity() const;
    void check() const;
};

struct BirthComponent {
    double existence = 0.0;
    GaussianMixture density;
    /// Ordinal used for labels born from this component: (time, birth_index).
    std::uint32_t birth_index = 0;
};

struct BirthModel {
    std::vector<BirthComponent> components;
    void check() const;
};

struct TrackerConfig {
    double prune_threshold = 1e-5;      ///< mixture component weight
    double merge_threshold = 4.0;       ///< squared Mahalanobis distance
    std::size_t max_components = 20;
    std::size_t k_best = 100;           ///< ranked association hypotheses per group
    double gate_threshold = 18.42;      ///< chi-square 2 dof, 0.9999
    double track_prune_threshold = 1e-3;  ///< drop tracks with lower existence
    double extraction_threshold = 0.5;
};

/// Survival and Kalman prediction of every track, then birth tracks labelled
/// (time, birth_index) appended.
LmbDensity lmb_predict(const LmbDensity& f, const MotionModel& motion, const BirthModel& birth,
                       std::uint32_t time);

/// Measurement update. Tracks are grouped by shared gated measurements; each
/// group's joint association is approximated by its k best ranked assignments
/// over [detections | missed | absent]. Tracks without gated measurements take
/// the closed-form missed-detection update.
LmbDensity lmb_update(const LmbDensity& f, const std::vector<Eigen::VectorXd>& measurements,
                      const SensorModel& sensor, const TrackerConfig& cfg = {});

/// Prunes light components, greedily merges neighbours of the heaviest one,
/// caps the count by weight. Renormalizes when anything was removed; when
/// everything is below the prune threshold the heaviest component survives.
GaussianMixture reduce_mixture(const GaussianMixture& p, double prune_threshold, double merge_threshold,
                               std::size_t max_components);

/// One track per Bernoulli component with existence strictly above the
/// threshold, at the mean of its heaviest mixture component.
LabeledTrackSet extract_tracks(const LmbDensity& f, double threshold);

/// Joint-label variant. The identity is the first agent's label; when several
/// joint components of the same first-agent label pass, the strongest keeps
/// that identity and the others use the full joint label.
LabeledTrackSet extract_tracks(const JointLmbDensity& f, double threshold);

/// One agent's filter state.
class LmbTracker {
public:
    LmbTracker(MotionModel motion, SensorModel sensor, BirthModel birth, TrackerConfig cfg = {});

    /// Predict to `time` and update with the scan.
    const LmbDensity& step(std::uint32_t time, const std::vector<Eigen::VectorXd>& measurements);

    [[nodiscard]] const LmbDensity& posterior() const { return posterior_; }
    [[nodiscard]] const TrackerConfig& config() const { return cfg_; }

private:
    MotionModel motion_;
    SensorModel sensor_;
    BirthModel birth_;
    TrackerConfig cfg_;
    LmbDensity posterior_;
};

}  // namespace fusionkit
