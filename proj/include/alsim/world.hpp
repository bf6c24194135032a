#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "alsim/rng.hpp"
#include "alsim/types.hpp"

namespace alsim {

/// Synthetic stand-in for the physical rig: C unit-norm class prototypes in
/// R^d, an angle-dependent per-object displacement of scale view_sigma, and
/// fresh per-view noise of scale noise_sigma.
struct World {
  int class_count = 0;
  int feature_dim = 0;
  std::vector<Eigen::VectorXd> prototypes;
  double view_sigma = 0.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// One object arriving on the conveyor. identifier_direction is the angle
/// at which the class marker faces; pose_seed pins every random aspect of
/// how this particular object is captured.
struct ObjectEvent {
  ClassLabel true_class = 0;
  double identifier_direction = 0.0;  // phi in [0, 2*pi)
  std::uint64_t pose_seed = 0;
};

/// Arrival model plus capture geometry for the conveyor stream.
struct StreamConfig {
  /// Per-tick arrival probability for each class; sum must be <= 1.
  std::vector<double> flow_probabilities;
  /// Half-width omega of the angular window around identifier_direction in
  /// which a side view can see the marker; in (0, pi].
  double visibility_halfwidth = 0.7853981633974483;  // pi/4
  /// Probability the overhead shot sees the marker.
  double overhead_visible_prob = 0.5;
  /// Probability the detector misses a geometrically visible marker.
  double miss_rate = 0.0;
};

/// Angular span of the camera sweep (the 160-degree arc analog), centered
/// at angle 0.
inline constexpr double kSweepArc = 2.7925268031909273;  // 8*pi/9

/// Fixed angle assigned to the overhead shot, outside the sweep arc.
inline constexpr double kOverheadAngle = 3.141592653589793;

/// Builds a world with C unit-norm prototypes drawn from an isotropic
/// normal; deterministic in seed. Throws std::invalid_argument when C < 2
/// or d < 2 (invalid-config error).
World make_world(int class_count, int feature_dim, double view_sigma,
                 double noise_sigma, std::uint64_t seed);

/// One conveyor tick: with probability sum(p_c) an object arrives, its
/// class drawn proportionally to p_c, posture and marker direction drawn
/// fresh. Throws std::invalid_argument when sum(p_c) > 1.
std::optional<ObjectEvent> next_object(const StreamConfig& cfg, Rng& rng);

/// Smallest circular distance between two angles, in [0, pi].
double angular_distance(double a, double b);

/// Renders one view of the object at the given angle. Deterministic in
/// (world.seed, ev.pose_seed, slot); slot 0 is reserved for the overhead
/// shot, capture_bundle uses slots 1..n_sub.
Instance render_view(const World& world, const ObjectEvent& ev, double angle,
                     int slot, const StreamConfig& cfg);

/// Captures the overhead shot x_o; equals capture_bundle(...).overhead.
Instance capture_overhead(const World& world, const ObjectEvent& ev,
                          const StreamConfig& cfg);

/// Captures n_sub views evenly spaced over the sweep arc plus the overhead
/// shot. Every instance carries the object's true class (the weak label).
/// Throws std::invalid_argument when n_sub < 1.
WeakBundle capture_bundle(const World& world, const ObjectEvent& ev, int n_sub,
                          const StreamConfig& cfg);

/// Precise-or-silent marker reading: returns the true class when the
/// marker is visible and a Bernoulli(1 - miss_rate) draw succeeds, nothing
/// otherwise. Never returns a wrong label.
std::optional<ClassLabel> detect_identifier(const Instance& x,
                                            double miss_rate, Rng& rng);

}  // namespace alsim
