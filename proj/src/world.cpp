#include "alsim/world.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace alsim {

namespace {

constexpr double kTwoPi = 6.283185307179586;

// Order of the trigonometric displacement series. Low so the displacement
// is smooth across neighboring sweep angles.
constexpr int kSeriesOrder = 3;

// Per-object displacement field: d pairs of cosine/sine coefficient rows.
// Coefficients are scaled so the displacement vector has unit expected
// squared norm; view_sigma then sets its physical scale.
struct PoseField {
  Eigen::MatrixXd cos_coeff;  // d x kSeriesOrder
  Eigen::MatrixXd sin_coeff;  // d x kSeriesOrder
};

PoseField make_pose_field(const World& world, std::uint64_t pose_seed) {
  Rng rng(seed_mix(world.seed, seed_tag::kPoseCoeffs, pose_seed));
  const int d = world.feature_dim;
  const double scale = 1.0 / std::sqrt(static_cast<double>(kSeriesOrder * d));
  PoseField field{Eigen::MatrixXd(d, kSeriesOrder),
                  Eigen::MatrixXd(d, kSeriesOrder)};
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < kSeriesOrder; ++k) {
      field.cos_coeff(j, k) = scale * rng.normal();
      field.sin_coeff(j, k) = scale * rng.normal();
    }
  }
  return field;
}

Eigen::VectorXd displacement_at(const PoseField& field, double angle) {
  const int d = static_cast<int>(field.cos_coeff.rows());
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
  for (int k = 0; k < kSeriesOrder; ++k) {
    const double c = std::cos((k + 1) * angle);
    const double s = std::sin((k + 1) * angle);
    u += c * field.cos_coeff.col(k) + s * field.sin_coeff.col(k);
  }
  return u;
}

Eigen::VectorXd fresh_noise(const World& world, std::uint64_t noise_seed) {
  Rng rng(noise_seed);
  const int d = world.feature_dim;
  const double scale =
      world.noise_sigma / std::sqrt(static_cast<double>(d));
  Eigen::VectorXd eps(d);
  for (int j = 0; j < d; ++j) eps[j] = scale * rng.normal();
  return eps;
}

double sweep_angle(int view_index, int n_sub) {
  if (n_sub == 1) return 0.0;
  return -kSweepArc / 2.0 +
         kSweepArc * static_cast<double>(view_index) /
             static_cast<double>(n_sub - 1);
}

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

// slot 0 is the overhead shot, slots 1..n_sub the sweep views.
Instance render_with_field(const World& world, const ObjectEvent& ev,
                           const PoseField& field, double angle, int slot,
                           bool visible) {
  Instance x;
  x.features = world.prototypes[ev.true_class - 1] +
               world.view_sigma * displacement_at(field, angle) +
               fresh_noise(world, seed_mix(world.seed, seed_tag::kViewNoise,
                                           ev.pose_seed,
                                           static_cast<std::uint64_t>(slot)));
  x.true_class = ev.true_class;
  x.view_angle = wrap_angle(angle);
  x.identifier_visible = visible;
  x.id = seed_mix(ev.pose_seed, static_cast<std::uint64_t>(slot));
  return x;
}

}  // namespace

World make_world(int class_count, int feature_dim, double view_sigma,
                 double noise_sigma, std::uint64_t seed) {
  if (class_count < 2 || feature_dim < 2) {
    throw std::invalid_argument(
        "invalid world config: need class_count >= 2 and feature_dim >= 2");
  }
  if (!(view_sigma >= 0.0) || !(noise_sigma >= 0.0) ||
      !std::isfinite(view_sigma) || !std::isfinite(noise_sigma)) {
    throw std::invalid_argument(
        "invalid world config: sigmas must be finite and >= 0");
  }
  World world;
  world.class_count = class_count;
  world.feature_dim = feature_dim;
  world.view_sigma = view_sigma;
  world.noise_sigma = noise_sigma;
  world.seed = seed;

  Rng rng(seed_mix(seed, seed_tag::kPrototypes));
  world.prototypes.reserve(class_count);
  for (int c = 0; c < class_count; ++c) {
    Eigen::VectorXd proto(feature_dim);
    bool distinct = false;
    while (!distinct) {
      for (int j = 0; j < feature_dim; ++j) proto[j] = rng.normal();
      const double norm = proto.norm();
      if (norm < 1e-12) continue;
      proto /= norm;
      distinct = true;
      for (const auto& other : world.prototypes) {
        if ((proto - other).norm() < 1e-9) {
          distinct = false;
          break;
        }
      }
    }
    world.prototypes.push_back(std::move(proto));
  }
  return world;
}

std::optional<ObjectEvent> next_object(const StreamConfig& cfg, Rng& rng) {
  double total = 0.0;
  for (double p : cfg.flow_probabilities) total += p;
  if (total > 1.0 + 1e-12) {
    throw std::invalid_argument(
        "invalid stream config: arrival probabilities sum to " +
        std::to_string(total) + " > 1");
  }
  const double u = rng.uniform();
  if (u >= total) return std::nullopt;

  ObjectEvent ev;
  double acc = 0.0;
  ev.true_class = static_cast<ClassLabel>(cfg.flow_probabilities.size());
  for (std::size_t c = 0; c < cfg.flow_probabilities.size(); ++c) {
    acc += cfg.flow_probabilities[c];
    if (u < acc) {
      ev.true_class = static_cast<ClassLabel>(c + 1);
      break;
    }
  }
  ev.identifier_direction = rng.uniform(0.0, kTwoPi);
  ev.pose_seed = rng.next_u64();
  return ev;
}

double angular_distance(double a, double b) {
  double diff = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(diff, kTwoPi - diff);
}

Instance render_view(const World& world, const ObjectEvent& ev, double angle,
                     int slot, const StreamConfig& cfg) {
  const PoseField field = make_pose_field(world, ev.pose_seed);
  const bool visible =
      angular_distance(angle, ev.identifier_direction) <
      cfg.visibility_halfwidth;
  return render_with_field(world, ev, field, angle, slot, visible);
}

Instance capture_overhead(const World& world, const ObjectEvent& ev,
                          const StreamConfig& cfg) {
  const PoseField field = make_pose_field(world, ev.pose_seed);
  Rng vis_rng(seed_mix(world.seed, seed_tag::kOverhead, ev.pose_seed));
  const bool visible = vis_rng.bernoulli(cfg.overhead_visible_prob);
  return render_with_field(world, ev, field, kOverheadAngle, 0, visible);
}

WeakBundle capture_bundle(const World& world, const ObjectEvent& ev, int n_sub,
                          const StreamConfig& cfg) {
  if (n_sub < 1) {
    throw std::invalid_argument("invalid capture config: n_sub must be >= 1");
  }
  const PoseField field = make_pose_field(world, ev.pose_seed);
  WeakBundle bundle;
  bundle.views.reserve(n_sub);
  for (int v = 0; v < n_sub; ++v) {
    const double angle = sweep_angle(v, n_sub);
    const bool visible =
        angular_distance(angle, ev.identifier_direction) <
        cfg.visibility_halfwidth;
    bundle.views.push_back(
        render_with_field(world, ev, field, angle, /*slot=*/v + 1, visible));
  }
  Rng vis_rng(seed_mix(world.seed, seed_tag::kOverhead, ev.pose_seed));
  bundle.overhead = render_with_field(world, ev, field, kOverheadAngle, 0,
                                      vis_rng.bernoulli(
                                          cfg.overhead_visible_prob));
  return bundle;
}

std::optional<ClassLabel> detect_identifier(const Instance& x,
                                            double miss_rate, Rng& rng) {
  if (!x.identifier_visible) return std::nullopt;
  if (miss_rate > 0.0 && rng.bernoulli(miss_rate)) return std::nullopt;
  return x.true_class;
}

}  // namespace alsim
