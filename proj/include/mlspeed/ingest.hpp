#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "mlspeed/core.hpp"

namespace mlspeed {

// A frame sequence on disk: a directory of numbered PGM/PNG files plus a
// plain-text manifest (`key = value` lines, `#` comments).
struct SequenceManifest {
    std::filesystem::path directory;
    std::vector<std::filesystem::path> files;  // resolved, manifest order
    double frame_rate = 0.0;
    int background_frame_count = 0;
};

// Parses the manifest file and resolves its file glob (default `*.pgm`,
// lexicographic order) against the manifest's directory.
SequenceManifest read_manifest(const std::filesystem::path& manifest_path);

void write_manifest(const std::filesystem::path& manifest_path, double frame_rate,
                    int background_frame_count, const std::string& files_glob = "*.pgm");

// Single-image I/O. Loading scales to [0,1] by the format's max value;
// RGB converts with luma weights 0.299/0.587/0.114.
Frame load_frame(const std::filesystem::path& path);
void save_frame(const Frame& f, const std::filesystem::path& path, int bit_depth = 8);

FrameSequence load_sequence(const SequenceManifest& manifest);

// CSV cells: strings are quoted per RFC 4180 when needed, reals printed
// with 9 significant digits.
using CsvCell = std::variant<std::string, double, long long>;
using CsvRow = std::vector<CsvCell>;

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<CsvRow>& rows);

std::string format_csv_cell(const CsvCell& cell);

// Plain-text key=value files (manifest, ground-truth sidecar, config).
std::vector<std::pair<std::string, std::string>> read_key_values(
    const std::filesystem::path& path);

}  // namespace mlspeed
