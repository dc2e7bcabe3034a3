#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "repcount/synthetic.hpp"
#include "repcount/types.hpp"

namespace repcount {

/// Reads the line-delimited JSON interchange format: one object per line,
/// {"t": <seconds>, "person": "<id>", "joints": [[x,y(,z)], ...]}.
/// Blank lines are skipped. Malformed JSON raises ParseError with the line
/// number; structurally wrong objects (missing keys, ragged joint lists,
/// negative timestamps) raise SchemaError naming the offending field.
std::vector<SkeletonFrame> load_generic_jsonl(const std::string& path);

/// Parses a single interchange line (same schema and errors as
/// load_generic_jsonl); line_no is only used in error messages.
SkeletonFrame parse_jsonl_frame(const std::string& line,
                                std::size_t line_no = 0);

/// Writes frames in the same line-delimited JSON format.
void write_generic_jsonl(const std::vector<SkeletonFrame>& frames,
                         const std::string& path);
void write_generic_jsonl(const std::vector<SkeletonFrame>& frames,
                         std::ostream& out);

/// Splits an interleaved frame list into per-person sequences, preserving
/// first-appearance order. With fps_hint <= 0 the rate is estimated from
/// each person's timestamp span.
std::vector<SkeletonSequence> group_by_person(
    const std::vector<SkeletonFrame>& frames, double fps_hint = 0.0);

/// Linearly resamples one person's frames onto a uniform grid at `fps`.
/// Timestamps must be strictly increasing (NonMonotonicTimestamps
/// otherwise); output samples land exactly on input knots they coincide
/// with.
std::vector<SkeletonFrame> resample_uniform(
    const std::vector<SkeletonFrame>& frames, double fps);

/// Loads MM-Fit-style workouts: <root>/<id>/<id>_pose_3d.npy (or
/// _pose_2d.npy with use_2d) plus <id>_labels.csv rows of
/// "start_frame,end_frame,reps,exercise". An empty workout_id scans every
/// workout directory under root. Label rows that fall outside the pose
/// array raise MalformedLabels.
std::vector<LabeledClip> load_mmfit(const std::string& root,
                                    const std::string& workout_id = "",
                                    bool use_2d = false);

/// Loads UI-PRMD-style movement files: <root>/m<id>_s<subject>_positions.txt
/// holding one whitespace- or comma-separated row of joint coordinates per
/// frame. Every file is one clip of 10 repetitions. An empty movement_id
/// loads all movements.
std::vector<LabeledClip> load_uiprmd(const std::string& root,
                                     const std::string& movement_id = "");

}  // namespace repcount
