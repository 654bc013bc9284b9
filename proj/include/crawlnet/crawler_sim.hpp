#pragma once

#include <utility>
#include <vector>

#include "crawlnet/net.hpp"
#include "crawlnet/train.hpp"

namespace crawlnet {

// Planar (sagittal) geometry of the two-link arm. The shoulder servo axis
// sits shoulder_height_cm above the ground, at body x = 0.
struct ArmGeometry {
  double link1_len_cm = 5.0;
  double link2_len_cm = 5.0;
  double shoulder_height_cm = 6.0;

  bool operator==(const ArmGeometry&) const = default;
};

void validate(const ArmGeometry& geom);

inline constexpr ArmGeometry kDefaultGeometry{5.0, 5.0, 6.0};
inline constexpr ServoAngles kDefaultRestPose{90.0, 180.0};

// Tip heights at or below this count as ground contact.
inline constexpr double kContactToleranceCm = 1e-6;

struct Point2 {
  double x = 0.0;  // forward
  double y = 0.0;  // up, ground at 0
};

struct BodyPose {
  double x = 0.0;
  double y = 0.0;
  double heading_deg = 0.0;  // (-180, 180]

  bool operator==(const BodyPose&) const = default;
};

struct CrawlCycleResult {
  double displacement_cm = 0.0;
  double heading_delta_deg = 0.0;
};

// Wraps any finite angle into (-180, 180].
double wrap_heading(double deg);

/// Forward kinematics of the arm.
///
/// theta1 is the shoulder angle measured counter-clockwise from the forward
/// horizontal; theta2 is the interior elbow angle, so theta2 = 180 keeps the
/// forearm collinear with the upper arm. The forearm direction is therefore
/// theta1 + theta2 - 180.
Point2 arm_tip(const ArmGeometry& geom, double theta1_deg, double theta2_deg);

/// One arm stroke from the rest pose to the commanded pose and back.
///
/// If the commanded tip touches the ground it anchors there, and returning to
/// the rest pose drags the body forward by the horizontal tip travel,
/// max(0, tip_x(rest) - tip_x(commanded)). No contact, no motion. The model
/// is planar, so heading never changes.
std::pair<BodyPose, CrawlCycleResult> crawl_cycle(const BodyPose& pose, const ArmGeometry& geom,
                                                  const ServoAngles& commanded,
                                                  const ServoAngles& rest);

/// Exhaustive grid search over both servo angles within angle_range(mode)
/// for the pose with the largest crawl_cycle displacement. Ties go to the
/// smallest theta1, then the smallest theta2. Throws ConfigError if no grid
/// point moves the body or if step_deg does not divide the range.
AngleTargets derive_targets(const ArmGeometry& geom, const ServoAngles& rest, double step_deg,
                            DenormMode mode);

// Pose after each record's commanded angles have been applied in order,
// starting from the origin. One pose per record.
std::vector<BodyPose> replay_run(const TrainingRun& run, const ArmGeometry& geom,
                                 const ServoAngles& rest = kDefaultRestPose);

}  // namespace crawlnet
