#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hoik/camera.hpp"
#include "hoik/contact.hpp"
#include "hoik/ik.hpp"
#include "hoik/skeleton.hpp"

namespace hoik {

// Skeleton definition file (JSON):
//   {
//     "parents":  [-1, 0, ...],              one entry per joint
//     "template": [[x, y, z], ...],          rest pose, meters
//     "chains":   [{"name": ..., "joints": [...]}, ...]   five, root-first
//     "parts":    [1..14, ...],              per joint
//     "joints":   ["pelvis", ...]            optional names
//   }
KinematicTree load_skeleton(const std::string& path);
nlohmann::json skeleton_to_json(const KinematicTree& tree);

// Pose file: {"theta": [[x,y,z] per joint], "translation": [x,y,z]}.
// A "beta" field is accepted and ignored (mesh shape is out of scope here).
PoseState pose_from_json(const nlohmann::json& j, int joint_count);
nlohmann::json pose_to_json(const PoseState& pose);
PoseState load_pose(const std::string& path, int joint_count);

std::vector<Eigen::Vector3d> points_from_json(const nlohmann::json& j);
nlohmann::json points_to_json(const std::vector<Eigen::Vector3d>& points);

// OBJ: vertex positions only ("v x y z" lines).
std::vector<Eigen::Vector3d> load_obj_vertices(const std::string& path);
void save_obj_vertices(const std::string& path, const std::vector<Eigen::Vector3d>& vertices);

// Compact binary points: "PTS1", uint32 count, count * 3 float64 (LE).
std::vector<Eigen::Vector3d> load_points_binary(const std::string& path);
void save_points_binary(const std::string& path, const std::vector<Eigen::Vector3d>& points);

// Point source dispatch by extension: .obj / .pts / .json.
std::vector<Eigen::Vector3d> load_points(const std::string& path);

// Contact labels. Binary: "LBL1", uint32 count, count * uint8 class (1..15).
void save_labels_json(const std::string& path, const LabeledPointCloud& cloud);
void save_labels_binary(const std::string& path, const LabeledPointCloud& cloud);
LabeledPointCloud load_labels_json(const std::string& path);
LabeledPointCloud load_labels_binary(const std::string& path);

PinholeCamera camera_from_json(const nlohmann::json& j);
nlohmann::json camera_to_json(const PinholeCamera& camera);

// A scene bundles everything a command may need; commands check the fields
// they require. Relative paths resolve against the scene file's directory.
struct Scene {
    KinematicTree skeleton;
    bool has_skeleton = false;
    std::optional<PoseState> pose;
    std::vector<Eigen::Vector3d> object_points;
    std::optional<PartLabeledMesh> human_mesh;
    PinholeCamera camera;
    std::optional<Eigen::Vector2d> root_2d;
    std::optional<int> target_part;
    std::vector<Eigen::Vector3d> target_points;
    std::optional<PoseState> ground_truth_pose;
};

Scene load_scene(const std::string& path, const std::string& skeleton_override = "");

// Assemble the solver input from a loaded scene; throws ParseError listing
// any missing field.
IKProblem scene_to_ik_problem(const Scene& scene);

}  // namespace hoik
