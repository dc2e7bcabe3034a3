#include "repcount/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "repcount/errors.hpp"
#include "repcount/npy.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace repcount {
namespace {

SkeletonFrame frame_from_json(const json& obj, std::size_t line_no) {
  const std::string where = " (line " + std::to_string(line_no) + ")";
  if (!obj.is_object()) {
    throw SchemaError("record is not an object" + where);
  }
  if (!obj.contains("t") || !obj["t"].is_number()) {
    throw SchemaError("missing or non-numeric field 't'" + where);
  }
  if (!obj.contains("person") || !obj["person"].is_string()) {
    throw SchemaError("missing or non-string field 'person'" + where);
  }
  if (!obj.contains("joints") || !obj["joints"].is_array() ||
      obj["joints"].empty()) {
    throw SchemaError("missing or empty field 'joints'" + where);
  }

  SkeletonFrame frame;
  frame.timestamp = obj["t"].get<double>();
  if (frame.timestamp < 0.0) {
    throw SchemaError("field 't' is negative" + where);
  }
  frame.person_id = obj["person"].get<std::string>();

  const auto& joints = obj["joints"];
  std::size_t dim = 0;
  for (const auto& j : joints) {
    if (!j.is_array() || (j.size() != 2 && j.size() != 3)) {
      throw SchemaError("each joint must be [x,y] or [x,y,z]" + where);
    }
    if (dim == 0) {
      dim = j.size();
    } else if (j.size() != dim) {
      throw SchemaError("joints mix 2-D and 3-D entries" + where);
    }
    for (const auto& v : j) {
      if (!v.is_number()) {
        throw SchemaError("joint coordinates must be numbers" + where);
      }
      frame.joints.push_back(v.get<double>());
    }
  }
  frame.joint_count = static_cast<int>(joints.size());
  frame.dim = static_cast<int>(dim);
  validate_frame(frame);
  return frame;
}

double estimated_fps(const std::vector<const SkeletonFrame*>& frames) {
  if (frames.size() < 2) return 30.0;
  const double span = frames.back()->timestamp - frames.front()->timestamp;
  if (span <= 0.0) return 30.0;
  return static_cast<double>(frames.size() - 1) / span;
}

std::vector<double> split_numeric_row(const std::string& line,
                                      const std::string& file,
                                      std::size_t line_no) {
  std::string cleaned = line;
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream in(cleaned);
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  if (!in.eof()) {
    throw ParseError("non-numeric token in '" + file + "' line " +
                     std::to_string(line_no));
  }
  return values;
}

// Normalises the loaded pose array to frames[t] = flat joint-major coords.
// Accepts (T, j, d), the transposed (d, T, j), and flattened (T, j*d).
void pose_array_to_frames(const NpyArray& array, int declared_dim,
                          const std::string& path,
                          std::vector<std::vector<double>>& frames,
                          int& joint_count) {
  if (array.shape.size() == 3) {
    std::size_t t_n, j_n, d_n;
    bool channel_first;
    if (array.shape[2] == 2 || array.shape[2] == 3) {
      t_n = array.shape[0];
      j_n = array.shape[1];
      d_n = array.shape[2];
      channel_first = false;
    } else if (array.shape[0] == 2 || array.shape[0] == 3) {
      d_n = array.shape[0];
      t_n = array.shape[1];
      j_n = array.shape[2];
      channel_first = true;
    } else {
      throw ParseError("cannot identify the coordinate axis of '" + path +
                       "'");
    }
    if (static_cast<int>(d_n) != declared_dim) {
      throw ParseError("'" + path + "' holds " + std::to_string(d_n) +
                       "-D poses, expected " + std::to_string(declared_dim) +
                       "-D");
    }
    joint_count = static_cast<int>(j_n);
    frames.assign(t_n, std::vector<double>(j_n * d_n));
    for (std::size_t t = 0; t < t_n; ++t) {
      for (std::size_t j = 0; j < j_n; ++j) {
        for (std::size_t d = 0; d < d_n; ++d) {
          const std::size_t src = channel_first
                                      ? (d * t_n + t) * j_n + j
                                      : (t * j_n + j) * d_n + d;
          frames[t][j * d_n + d] = array.data[src];
        }
      }
    }
    return;
  }
  if (array.shape.size() == 2) {
    const std::size_t t_n = array.shape[0];
    const std::size_t row = array.shape[1];
    if (row % declared_dim != 0) {
      throw ParseError("'" + path + "' row length " + std::to_string(row) +
                       " is not divisible by " +
                       std::to_string(declared_dim));
    }
    joint_count = static_cast<int>(row / declared_dim);
    frames.assign(t_n, std::vector<double>(row));
    for (std::size_t t = 0; t < t_n; ++t) {
      std::copy_n(array.data.begin() + static_cast<std::ptrdiff_t>(t * row),
                  row, frames[t].begin());
    }
    return;
  }
  throw ParseError("'" + path + "' has unsupported rank " +
                   std::to_string(array.shape.size()));
}

std::vector<LabeledClip> load_one_workout(const fs::path& dir,
                                          bool use_2d) {
  const std::string workout = dir.filename().string();
  const fs::path pose_path =
      dir / (workout + (use_2d ? "_pose_2d.npy" : "_pose_3d.npy"));
  const fs::path labels_path = dir / (workout + "_labels.csv");
  if (!fs::exists(pose_path)) {
    throw MissingFile("missing pose file '" + pose_path.string() + "'");
  }
  if (!fs::exists(labels_path)) {
    throw MissingFile("missing labels file '" + labels_path.string() + "'");
  }

  const NpyArray array = load_npy(pose_path.string());
  const int dim = use_2d ? 2 : 3;
  std::vector<std::vector<double>> frames;
  int joint_count = 0;
  pose_array_to_frames(array, dim, pose_path.string(), frames, joint_count);

  std::ifstream labels(labels_path);
  std::vector<LabeledClip> clips;
  std::string line;
  std::size_t line_no = 0;
  int clip_idx = 0;
  while (std::getline(labels, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::istringstream row(line);
    std::string start_s, end_s, reps_s, exercise;
    if (!std::getline(row, start_s, ',') || !std::getline(row, end_s, ',') ||
        !std::getline(row, reps_s, ',') || !std::getline(row, exercise)) {
      throw MalformedLabels("'" + labels_path.string() + "' line " +
                            std::to_string(line_no) +
                            " needs start,end,reps,exercise");
    }
    long long start, end, reps;
    try {
      start = std::stoll(start_s);
      end = std::stoll(end_s);
      reps = std::stoll(reps_s);
    } catch (const std::exception&) {
      throw MalformedLabels("'" + labels_path.string() + "' line " +
                            std::to_string(line_no) +
                            " has non-integer bounds");
    }
    while (!exercise.empty() &&
           (exercise.back() == '\r' || exercise.back() == ' ')) {
      exercise.pop_back();
    }
    if (start < 0 || end < start ||
        end >= static_cast<long long>(frames.size())) {
      throw MalformedLabels("'" + labels_path.string() + "' line " +
                            std::to_string(line_no) + " spans frames [" +
                            start_s + ", " + end_s + "] outside the " +
                            std::to_string(frames.size()) + "-frame pose");
    }
    if (reps <= 0) {
      throw MalformedLabels("'" + labels_path.string() + "' line " +
                            std::to_string(line_no) +
                            " has a non-positive repetition count");
    }

    LabeledClip clip;
    clip.clip_id = workout + "-" + std::to_string(clip_idx++);
    clip.exercise_name = exercise;
    clip.ground_truth_count = reps;
    clip.source = "mmfit";
    clip.sequence.person_id = workout;
    clip.sequence.fps = 30.0;
    clip.sequence.joint_count = joint_count;
    clip.sequence.dim = dim;
    clip.sequence.frames.assign(
        frames.begin() + static_cast<std::ptrdiff_t>(start),
        frames.begin() + static_cast<std::ptrdiff_t>(end + 1));
    clips.push_back(std::move(clip));
  }
  return clips;
}

}  // namespace

std::vector<SkeletonFrame> load_generic_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw MissingFile("cannot open '" + path + "'");
  }
  std::vector<SkeletonFrame> frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      frames.push_back(parse_jsonl_frame(line, line_no));
    } catch (const ParseError& e) {
      throw ParseError("'" + path + "' " + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError("'" + path + "' " + e.what());
    }
  }
  return frames;
}

SkeletonFrame parse_jsonl_frame(const std::string& line,
                                std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
  }
  return frame_from_json(obj, line_no);
}

void write_generic_jsonl(const std::vector<SkeletonFrame>& frames,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw MissingFile("cannot open '" + path + "' for writing");
  }
  write_generic_jsonl(frames, out);
}

void write_generic_jsonl(const std::vector<SkeletonFrame>& frames,
                         std::ostream& out) {
  for (const auto& frame : frames) {
    json joints = json::array();
    for (int j = 0; j < frame.joint_count; ++j) {
      json joint = json::array();
      for (int d = 0; d < frame.dim; ++d) {
        joint.push_back(frame.joints[static_cast<std::size_t>(j) * frame.dim +
                                     d]);
      }
      joints.push_back(std::move(joint));
    }
    json obj;
    obj["t"] = frame.timestamp;
    obj["person"] = frame.person_id;
    obj["joints"] = std::move(joints);
    out << obj.dump() << '\n';
  }
}

std::vector<SkeletonSequence> group_by_person(
    const std::vector<SkeletonFrame>& frames, double fps_hint) {
  std::vector<std::string> order;
  std::vector<std::vector<const SkeletonFrame*>> buckets;
  for (const auto& frame : frames) {
    std::size_t slot = order.size();
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (order[i] == frame.person_id) {
        slot = i;
        break;
      }
    }
    if (slot == order.size()) {
      order.push_back(frame.person_id);
      buckets.emplace_back();
    }
    buckets[slot].push_back(&frame);
  }

  std::vector<SkeletonSequence> sequences;
  sequences.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    SkeletonSequence seq;
    seq.person_id = order[i];
    seq.fps = (fps_hint > 0.0) ? fps_hint : estimated_fps(buckets[i]);
    seq.joint_count = buckets[i].front()->joint_count;
    seq.dim = buckets[i].front()->dim;
    for (const SkeletonFrame* f : buckets[i]) {
      if (f->joint_count != seq.joint_count || f->dim != seq.dim) {
        throw InconsistentJointLayout("person '" + seq.person_id +
                                      "' changes joint layout mid-stream");
      }
      seq.frames.push_back(f->joints);
    }
    sequences.push_back(std::move(seq));
  }
  return sequences;
}

std::vector<SkeletonFrame> resample_uniform(
    const std::vector<SkeletonFrame>& frames, double fps) {
  if (fps <= 0.0) {
    throw ConfigError("resample fps must be positive");
  }
  if (frames.empty()) return {};
  if (frames.size() == 1) return frames;  // nothing to interpolate between
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].timestamp <= frames[i - 1].timestamp) {
      throw NonMonotonicTimestamps(
          "timestamps must increase strictly; violated at input frame " +
          std::to_string(i));
    }
    if (frames[i].joints.size() != frames[0].joints.size() ||
        frames[i].dim != frames[0].dim) {
      throw InconsistentJointLayout(
          "cannot resample frames with differing joint layouts");
    }
  }

  const double t0 = frames.front().timestamp;
  const double span = frames.back().timestamp - t0;
  const std::size_t samples =
      static_cast<std::size_t>(std::floor(span * fps + 1e-9)) + 1;

  std::vector<SkeletonFrame> out;
  out.reserve(samples);
  std::size_t hi = 1;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = t0 + static_cast<double>(k) / fps;
    while (hi + 1 < frames.size() && frames[hi].timestamp < t) ++hi;
    const auto& a = frames[hi - 1];
    const auto& b = frames[hi];
    double alpha = (t - a.timestamp) / (b.timestamp - a.timestamp);
    alpha = std::clamp(alpha, 0.0, 1.0);

    SkeletonFrame f;
    f.timestamp = t;
    f.person_id = frames.front().person_id;
    f.joint_count = frames.front().joint_count;
    f.dim = frames.front().dim;
    f.joints.resize(a.joints.size());
    for (std::size_t c = 0; c < a.joints.size(); ++c) {
      f.joints[c] = a.joints[c] + alpha * (b.joints[c] - a.joints[c]);
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<LabeledClip> load_mmfit(const std::string& root,
                                    const std::string& workout_id,
                                    bool use_2d) {
  const fs::path base(root);
  if (!fs::exists(base) || !fs::is_directory(base)) {
    throw MissingFile("dataset root '" + root + "' is not a directory");
  }
  if (!workout_id.empty()) {
    return load_one_workout(base / workout_id, use_2d);
  }

  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(base)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (fs::exists(entry.path() / (name + "_labels.csv"))) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) {
    throw MissingFile("no workout directories under '" + root + "'");
  }

  std::vector<LabeledClip> clips;
  for (const auto& dir : dirs) {
    auto part = load_one_workout(dir, use_2d);
    clips.insert(clips.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
  }
  return clips;
}

std::vector<LabeledClip> load_uiprmd(const std::string& root,
                                     const std::string& movement_id) {
  const fs::path base(root);
  if (!fs::exists(base) || !fs::is_directory(base)) {
    throw MissingFile("dataset root '" + root + "' is not a directory");
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(base)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() < 14 || name[0] != 'm') continue;
    if (name.rfind("_positions.txt") != name.size() - 14) continue;
    if (!movement_id.empty() &&
        name.rfind(movement_id + "_", 0) != 0) {
      continue;
    }
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw MissingFile("no movement files matching '" + movement_id +
                      "' under '" + root + "'");
  }

  // Each file records one movement performed 10 times in a row.
  constexpr long long kRepetitionsPerFile = 10;

  std::vector<LabeledClip> clips;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) {
      throw MissingFile("cannot open '" + file.string() + "'");
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
      auto values = split_numeric_row(line, file.string(), line_no);
      if (!rows.empty() && values.size() != rows.front().size()) {
        throw RaggedRow("'" + file.string() + "' line " +
                        std::to_string(line_no) + " holds " +
                        std::to_string(values.size()) + " values, expected " +
                        std::to_string(rows.front().size()));
      }
      rows.push_back(std::move(values));
    }
    if (rows.empty()) {
      throw ParseError("'" + file.string() + "' holds no frames");
    }
    if (rows.front().size() % 3 != 0) {
      throw ParseError("'" + file.string() + "' row length " +
                       std::to_string(rows.front().size()) +
                       " is not divisible by 3");
    }

    const std::string stem = file.stem().string();  // mXX_sYY_positions
    const std::string movement = stem.substr(0, stem.find('_'));

    LabeledClip clip;
    clip.clip_id = stem;
    clip.exercise_name = movement;
    clip.ground_truth_count = kRepetitionsPerFile;
    clip.source = "uiprmd";
    clip.sequence.person_id = stem;
    clip.sequence.fps = 100.0;
    clip.sequence.joint_count = static_cast<int>(rows.front().size() / 3);
    clip.sequence.dim = 3;
    clip.sequence.frames = std::move(rows);
    clips.push_back(std::move(clip));
  }
  return clips;
}

}  // namespace repcount
