#include "hoik/io.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hoik/errors.hpp"

namespace hoik {

namespace {

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Eigen::Vector3d vec3_from_json(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3) {
        throw ParseError(what + ": expected a 3-element array");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

nlohmann::json vec3_to_json(const Eigen::Vector3d& v) {
    return nlohmann::json::array({v.x(), v.y(), v.z()});
}

std::string resolve(const std::filesystem::path& base_dir, const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute()) {
        return p.string();
    }
    return (base_dir / p).string();
}

}  // namespace

KinematicTree load_skeleton(const std::string& path) {
    const nlohmann::json j = read_json_file(path);
    KinematicTree tree;
    try {
        for (const auto& p : j.at("parents")) {
            tree.parents.push_back(p.get<int>());
        }
        for (const auto& t : j.at("template")) {
            tree.rest_template.push_back(vec3_from_json(t, "template"));
        }
        for (const auto& c : j.at("chains")) {
            ChainDef def;
            def.name = c.at("name").get<std::string>();
            for (const auto& joint : c.at("joints")) {
                def.joints.push_back(joint.get<int>());
            }
            tree.chains.push_back(std::move(def));
        }
        for (const auto& p : j.at("parts")) {
            tree.part_of_joint.push_back(p.get<int>());
        }
        if (j.contains("joints")) {
            for (const auto& name : j["joints"]) {
                tree.joint_names.push_back(name.get<std::string>());
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        tree.validate_full();
    } catch (const StructuralError& e) {
        throw ParseError(path + ": " + e.what());
    }
    return tree;
}

nlohmann::json skeleton_to_json(const KinematicTree& tree) {
    nlohmann::json j;
    j["parents"] = tree.parents;
    j["template"] = nlohmann::json::array();
    for (const auto& t : tree.rest_template) {
        j["template"].push_back(vec3_to_json(t));
    }
    j["chains"] = nlohmann::json::array();
    for (const auto& c : tree.chains) {
        j["chains"].push_back({{"name", c.name}, {"joints", c.joints}});
    }
    j["parts"] = tree.part_of_joint;
    if (!tree.joint_names.empty()) {
        j["joints"] = tree.joint_names;
    }
    return j;
}

PoseState pose_from_json(const nlohmann::json& j, int joint_count) {
    PoseState pose = PoseState::zero(joint_count);
    try {
        const auto& theta = j.at("theta");
        if (static_cast<int>(theta.size()) != joint_count) {
            throw ParseError("pose: expected " + std::to_string(joint_count) + " theta rows");
        }
        for (int i = 0; i < joint_count; ++i) {
            pose.theta.row(i) = vec3_from_json(theta[i], "theta").transpose();
        }
        if (j.contains("translation")) {
            pose.translation = vec3_from_json(j["translation"], "translation");
        }
        // "beta" (shape) is accepted but has no effect on the skeleton.
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("pose: ") + e.what());
    }
    pose.canonicalize();
    pose.validate(joint_count);
    return pose;
}

nlohmann::json pose_to_json(const PoseState& pose) {
    nlohmann::json j;
    j["theta"] = nlohmann::json::array();
    for (int i = 0; i < pose.theta.rows(); ++i) {
        j["theta"].push_back(vec3_to_json(pose.theta.row(i).transpose()));
    }
    j["translation"] = vec3_to_json(pose.translation);
    return j;
}

PoseState load_pose(const std::string& path, int joint_count) {
    return pose_from_json(read_json_file(path), joint_count);
}

std::vector<Eigen::Vector3d> points_from_json(const nlohmann::json& j) {
    if (!j.is_array()) {
        throw ParseError("points: expected an array");
    }
    std::vector<Eigen::Vector3d> out;
    out.reserve(j.size());
    for (const auto& p : j) {
        out.push_back(vec3_from_json(p, "points"));
    }
    return out;
}

nlohmann::json points_to_json(const std::vector<Eigen::Vector3d>& points) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& p : points) {
        j.push_back(vec3_to_json(p));
    }
    return j;
}

std::vector<Eigen::Vector3d> load_obj_vertices(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    std::vector<Eigen::Vector3d> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.rfind("v ", 0) != 0) {
            continue;
        }
        std::istringstream ss(line.substr(2));
        double x, y, z;
        if (!(ss >> x >> y >> z)) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": malformed vertex line");
        }
        out.emplace_back(x, y, z);
    }
    return out;
}

void save_obj_vertices(const std::string& path, const std::vector<Eigen::Vector3d>& vertices) {
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write " + path);
    }
    out.precision(17);
    for (const auto& v : vertices) {
        out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    }
}

namespace {
constexpr char kPointsMagic[4] = {'P', 'T', 'S', '1'};
constexpr char kLabelsMagic[4] = {'L', 'B', 'L', '1'};
}  // namespace

std::vector<Eigen::Vector3d> load_points_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    char magic[4];
    std::uint32_t count = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&count), 4);
    if (!in || std::memcmp(magic, kPointsMagic, 4) != 0) {
        throw ParseError(path + ": not a PTS1 file");
    }
    std::vector<Eigen::Vector3d> out(count);
    for (auto& p : out) {
        double xyz[3];
        in.read(reinterpret_cast<char*>(xyz), sizeof(xyz));
        if (!in) {
            throw ParseError(path + ": truncated point data");
        }
        p = {xyz[0], xyz[1], xyz[2]};
    }
    return out;
}

void save_points_binary(const std::string& path, const std::vector<Eigen::Vector3d>& points) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot write " + path);
    }
    const std::uint32_t count = static_cast<std::uint32_t>(points.size());
    out.write(kPointsMagic, 4);
    out.write(reinterpret_cast<const char*>(&count), 4);
    for (const auto& p : points) {
        const double xyz[3] = {p.x(), p.y(), p.z()};
        out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    }
}

std::vector<Eigen::Vector3d> load_points(const std::string& path) {
    const auto ext = std::filesystem::path(path).extension().string();
    if (ext == ".obj") {
        return load_obj_vertices(path);
    }
    if (ext == ".pts") {
        return load_points_binary(path);
    }
    if (ext == ".json") {
        return points_from_json(read_json_file(path));
    }
    throw ParseError(path + ": unsupported point format (use .obj, .pts or .json)");
}

void save_labels_json(const std::string& path, const LabeledPointCloud& cloud) {
    nlohmann::json j;
    j["points"] = points_to_json(cloud.points);
    j["labels"] = cloud.labels;
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write " + path);
    }
    out << j.dump(2) << '\n';
}

LabeledPointCloud load_labels_json(const std::string& path) {
    const nlohmann::json j = read_json_file(path);
    LabeledPointCloud cloud;
    try {
        cloud.points = points_from_json(j.at("points"));
        for (const auto& l : j.at("labels")) {
            cloud.labels.push_back(l.get<int>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (cloud.points.size() != cloud.labels.size()) {
        throw ParseError(path + ": point/label count mismatch");
    }
    return cloud;
}

void save_labels_binary(const std::string& path, const LabeledPointCloud& cloud) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot write " + path);
    }
    const std::uint32_t count = static_cast<std::uint32_t>(cloud.labels.size());
    out.write(kLabelsMagic, 4);
    out.write(reinterpret_cast<const char*>(&count), 4);
    for (int l : cloud.labels) {
        const std::uint8_t b = static_cast<std::uint8_t>(l);
        out.write(reinterpret_cast<const char*>(&b), 1);
    }
}

LabeledPointCloud load_labels_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    char magic[4];
    std::uint32_t count = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&count), 4);
    if (!in || std::memcmp(magic, kLabelsMagic, 4) != 0) {
        throw ParseError(path + ": not a LBL1 file");
    }
    LabeledPointCloud cloud;
    cloud.labels.resize(count);
    for (auto& l : cloud.labels) {
        std::uint8_t b = 0;
        in.read(reinterpret_cast<char*>(&b), 1);
        if (!in) {
            throw ParseError(path + ": truncated label data");
        }
        l = b;
    }
    return cloud;
}

PinholeCamera camera_from_json(const nlohmann::json& j) {
    PinholeCamera cam;
    try {
        cam.fx = j.at("fx").get<double>();
        cam.fy = j.at("fy").get<double>();
        cam.cx = j.at("cx").get<double>();
        cam.cy = j.at("cy").get<double>();
        if (j.contains("rotation")) {
            const auto& r = j["rotation"];
            if (!r.is_array() || r.size() != 9) {
                throw ParseError("camera: rotation must be 9 numbers (row-major)");
            }
            for (int i = 0; i < 9; ++i) {
                cam.extrinsic.rotation(i / 3, i % 3) = r[i].get<double>();
            }
        }
        if (j.contains("translation")) {
            cam.extrinsic.translation = vec3_from_json(j["translation"], "camera translation");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("camera: ") + e.what());
    }
    if (!cam.extrinsic.is_valid(1e-6)) {
        throw ParseError("camera: extrinsic rotation is not orthonormal");
    }
    return cam;
}

nlohmann::json camera_to_json(const PinholeCamera& camera) {
    nlohmann::json j;
    j["fx"] = camera.fx;
    j["fy"] = camera.fy;
    j["cx"] = camera.cx;
    j["cy"] = camera.cy;
    nlohmann::json r = nlohmann::json::array();
    for (int i = 0; i < 9; ++i) {
        r.push_back(camera.extrinsic.rotation(i / 3, i % 3));
    }
    j["rotation"] = r;
    j["translation"] = vec3_to_json(camera.extrinsic.translation);
    return j;
}

Scene load_scene(const std::string& path, const std::string& skeleton_override) {
    const nlohmann::json j = read_json_file(path);
    const auto base_dir = std::filesystem::path(path).parent_path();
    Scene scene;
    try {
        std::string skeleton_path = skeleton_override;
        if (skeleton_path.empty() && j.contains("skeleton")) {
            skeleton_path = resolve(base_dir, j["skeleton"].get<std::string>());
        }
        if (!skeleton_path.empty()) {
            scene.skeleton = load_skeleton(skeleton_path);
            scene.has_skeleton = true;
        }

        if (j.contains("pose")) {
            const int n = scene.has_skeleton ? scene.skeleton.joint_count() : kBodyJointCount;
            if (j["pose"].is_string()) {
                scene.pose = load_pose(resolve(base_dir, j["pose"].get<std::string>()), n);
            } else {
                scene.pose = pose_from_json(j["pose"], n);
            }
        }

        if (j.contains("object_points")) {
            if (j["object_points"].is_string()) {
                scene.object_points = load_points(resolve(base_dir, j["object_points"].get<std::string>()));
            } else {
                scene.object_points = points_from_json(j["object_points"]);
            }
        }

        if (j.contains("human_mesh")) {
            const auto& hm = j["human_mesh"];
            PartLabeledMesh mesh;
            if (hm.at("vertices").is_string()) {
                mesh.vertices = load_points(resolve(base_dir, hm["vertices"].get<std::string>()));
            } else {
                mesh.vertices = points_from_json(hm["vertices"]);
            }
            if (hm.at("parts").is_string()) {
                const nlohmann::json pj = read_json_file(resolve(base_dir, hm["parts"].get<std::string>()));
                for (const auto& p : pj) {
                    mesh.parts.push_back(p.get<int>());
                }
            } else {
                for (const auto& p : hm["parts"]) {
                    mesh.parts.push_back(p.get<int>());
                }
            }
            mesh.validate();
            scene.human_mesh = std::move(mesh);
        }

        if (j.contains("camera")) {
            scene.camera = camera_from_json(j["camera"]);
        }
        if (j.contains("root_2d")) {
            const auto& r = j["root_2d"];
            if (!r.is_array() || r.size() != 2) {
                throw ParseError("scene: root_2d must be [u, v]");
            }
            scene.root_2d = Eigen::Vector2d(r[0].get<double>(), r[1].get<double>());
        }
        if (j.contains("target")) {
            const auto& t = j["target"];
            scene.target_part = t.at("part").get<int>();
            if (t.contains("points")) {
                if (t["points"].is_string()) {
                    scene.target_points = load_points(resolve(base_dir, t["points"].get<std::string>()));
                } else {
                    scene.target_points = points_from_json(t["points"]);
                }
            }
        }
        if (j.contains("ground_truth_pose")) {
            const int n = scene.has_skeleton ? scene.skeleton.joint_count() : kBodyJointCount;
            scene.ground_truth_pose = pose_from_json(j["ground_truth_pose"], n);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return scene;
}

IKProblem scene_to_ik_problem(const Scene& scene) {
    if (!scene.pose) {
        throw ParseError("scene: missing 'pose' (required for ik)");
    }
    if (!scene.target_part || scene.target_points.empty()) {
        throw ParseError("scene: missing 'target' part/points (required for ik)");
    }
    if (!scene.root_2d) {
        throw ParseError("scene: missing 'root_2d' (required for ik)");
    }
    IKProblem problem;
    problem.initial_pose = *scene.pose;
    problem.target_points = scene.target_points;
    problem.part_label = *scene.target_part;
    problem.root_2d = *scene.root_2d;
    problem.camera = scene.camera;
    return problem;
}

}  // namespace hoik
