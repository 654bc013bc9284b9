#include "crawlnet/crawler_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "crawlnet/errors.hpp"

namespace crawlnet {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

bool touches_ground(const Point2& tip) { return tip.y <= kContactToleranceCm; }

}  // namespace

void validate(const ArmGeometry& geom) {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(geom.link1_len_cm) || !positive(geom.link2_len_cm)) {
    throw ConfigError("link lengths must be finite and positive");
  }
  if (!std::isfinite(geom.shoulder_height_cm) || geom.shoulder_height_cm < 0.0) {
    throw ConfigError("shoulder height must be finite and non-negative");
  }
}

double wrap_heading(double deg) {
  double wrapped = std::fmod(deg, 360.0);
  if (wrapped <= -180.0) wrapped += 360.0;
  if (wrapped > 180.0) wrapped -= 360.0;
  return wrapped;
}

Point2 arm_tip(const ArmGeometry& geom, double theta1_deg, double theta2_deg) {
  const double upper = theta1_deg * kDegToRad;
  const double fore = (theta1_deg + theta2_deg - 180.0) * kDegToRad;
  return {geom.link1_len_cm * std::cos(upper) + geom.link2_len_cm * std::cos(fore),
          geom.shoulder_height_cm + geom.link1_len_cm * std::sin(upper) +
              geom.link2_len_cm * std::sin(fore)};
}

std::pair<BodyPose, CrawlCycleResult> crawl_cycle(const BodyPose& pose, const ArmGeometry& geom,
                                                  const ServoAngles& commanded,
                                                  const ServoAngles& rest) {
  CrawlCycleResult result;
  const Point2 tip = arm_tip(geom, commanded.servo1_deg, commanded.servo2_deg);
  if (touches_ground(tip)) {
    const Point2 rest_tip = arm_tip(geom, rest.servo1_deg, rest.servo2_deg);
    result.displacement_cm = std::max(0.0, rest_tip.x - tip.x);
  }

  BodyPose next = pose;
  const double heading = pose.heading_deg * kDegToRad;
  next.x += result.displacement_cm * std::cos(heading);
  next.y += result.displacement_cm * std::sin(heading);
  next.heading_deg = wrap_heading(pose.heading_deg + result.heading_delta_deg);
  return {next, result};
}

AngleTargets derive_targets(const ArmGeometry& geom, const ServoAngles& rest, double step_deg,
                            DenormMode mode) {
  validate(geom);
  const AngleRange range = angle_range(mode);
  if (!(step_deg > 0.0)) throw ConfigError("grid step must be positive");
  const double steps_real = range.span() / step_deg;
  const double steps_rounded = std::round(steps_real);
  if (std::abs(steps_real - steps_rounded) > 1e-9 * steps_real) {
    throw ConfigError("grid step " + std::to_string(step_deg) + " does not divide the " +
                      std::to_string(range.span()) + " deg angle range");
  }
  const auto steps = static_cast<long>(steps_rounded);

  AngleTargets best{};
  double best_displacement = 0.0;
  const BodyPose origin{};
  for (long a = 0; a <= steps; ++a) {
    const double theta1 = range.lo_deg + static_cast<double>(a) * step_deg;
    for (long b = 0; b <= steps; ++b) {
      const double theta2 = range.lo_deg + static_cast<double>(b) * step_deg;
      const double d = crawl_cycle(origin, geom, {theta1, theta2}, rest).second.displacement_cm;
      if (d > best_displacement) {
        best_displacement = d;
        best = {theta1, theta2};
      }
    }
  }
  if (!(best_displacement > 0.0)) {
    throw ConfigError("no arm pose in the " + std::string(to_string(mode)) +
                      " range reaches the ground behind the rest tip; geometry cannot crawl");
  }
  return best;
}

std::vector<BodyPose> replay_run(const TrainingRun& run, const ArmGeometry& geom,
                                 const ServoAngles& rest) {
  std::vector<BodyPose> trajectory;
  trajectory.reserve(run.records.size());
  BodyPose pose{};
  for (const auto& record : run.records) {
    pose = crawl_cycle(pose, geom, {record.servo1_deg, record.servo2_deg}, rest).first;
    trajectory.push_back(pose);
  }
  return trajectory;
}

}  // namespace crawlnet
