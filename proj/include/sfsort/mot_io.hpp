#pragma once

#include "sfsort/adaptation.hpp"
#include "sfsort/scene_features.hpp"
#include "sfsort/tracker.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sfsort {

/// One ground-truth or result entry: identity plus box. Result files also
/// carry a confidence, preserved across a read/write cycle.
struct GtEntry {
    int id = 0;
    BoundingBox box;
    double score = 1.0;
};

/// Per-frame data keyed by 1-based frame number.
using FrameDetections = std::map<int, std::vector<Detection>>;
using FrameEntries = std::map<int, std::vector<GtEntry>>;

/// Sequence metadata with the fields of a seqinfo.ini file.
struct SequenceInfo {
    std::string name;
    SceneMetadata meta;
    int seq_length = 0;
};

/// Everything known about one sequence, loaded from files.
struct SequenceBundle {
    std::string name;
    SceneMetadata meta;
    int seq_length = 0;
    FrameDetections detections;
    std::optional<FrameEntries> ground_truth;
    std::optional<std::array<std::vector<KeypointMatch>, 5>> keypoint_samples;
};

/**
 * Loads a MOT-style sequence directory: seqinfo.ini plus det/det.txt (or a
 * top-level det.txt), with gt/gt.txt and keypoints.csv picked up when
 * present. Frame indices must start at 1 and stay within the declared
 * sequence length.
 */
SequenceBundle load_sequence_dir(const std::filesystem::path& dir, bool rescale = true);

/**
 * Reads a MOTChallenge detection file: CSV lines
 * frame,id,bb_left,bb_top,bb_width,bb_height,conf[,x,y,z]. The id and
 * trailing fields are ignored. When the file's maximum score exceeds 1,
 * all scores are divided by that maximum (percent-style detectors);
 * rescale=false disables this. Malformed lines raise std::runtime_error
 * naming the line number.
 */
FrameDetections read_detections(const std::filesystem::path& path, bool rescale = true);

/// Reads a MOT ground-truth file; rows whose consider flag (column 7) is 0
/// are skipped.
FrameEntries read_ground_truth(const std::filesystem::path& path);

/**
 * Writes tracks in MOT result format:
 * frame,id,bb_left,bb_top,bb_width,bb_height,conf,-1,-1,-1 sorted by frame
 * then id. Numbers use shortest round-trip formatting, so output bytes are
 * deterministic and a write/read cycle is exact.
 */
void write_results(const std::filesystem::path& path, const std::vector<TrackPtr>& tracks);

/// Results file reader (same column layout as detections, id retained).
FrameEntries read_results(const std::filesystem::path& path);

/// Rebuilds Track objects from per-frame entries, grouped by id with
/// frame-sorted histories. Zero-score entries are marked interpolated.
std::vector<TrackPtr> entries_to_tracks(const FrameEntries& entries);

/// Parses a seqinfo.ini; requires frameRate, imWidth and imHeight and
/// reports the first missing key by name.
SequenceInfo read_seqinfo(const std::filesystem::path& path);

/**
 * Reads a keypoint-match file: CSV lines sample_index,prev_x,prev_y,cur_x,cur_y
 * with sample_index in 0..4. Grouping is stable in file order.
 */
std::array<std::vector<KeypointMatch>, 5> read_keypoints(const std::filesystem::path& path);

/// Writes keypoint samples in the format read_keypoints expects.
void write_keypoints(const std::filesystem::path& path,
                     const std::array<std::vector<KeypointMatch>, 5>& samples);

/// Writes per-frame entries in MOT format (gt-file style, flag 1, class 1).
void write_entries(const std::filesystem::path& path, const FrameEntries& entries);

/// Writes detections in MOT det format (id -1).
void write_detections(const std::filesystem::path& path, const FrameDetections& detections);

/// Writes a seqinfo.ini.
void write_seqinfo(const std::filesystem::path& path, const SequenceInfo& info);

}  // namespace sfsort
