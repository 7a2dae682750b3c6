#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fracweyl/eigensolve.hpp"
#include "fracweyl/grid.hpp"

namespace fracweyl {

// All writers are atomic: content goes to a sibling temp file which is then
// renamed over the target, so readers never observe a partial file.  Parent
// directories are created as needed.

// Stable numeric formatting used in every text artifact: %.17g for doubles
// (lossless round-trip), plain decimal for integers.
std::string format_double(double v);
std::string format_int(long long v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC-4180-style escaping: fields containing commas, quotes, or newlines are
// quoted, embedded quotes doubled.  Lines end with '\n'.
std::string csv_escape(const std::string& field);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

// Aligned-column text rendering of the same table shape, for humans.
std::string format_table(const CsvTable& table);

void write_text(const std::filesystem::path& path, const std::string& content);

// Spectrum artifacts: CSV columns (j, lambda); JSON carries the metadata
// block alongside the values.
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);
void write_spectrum_json(const std::filesystem::path& path, const Spectrum& spectrum);

// Grid nodes as (index, x1[, x2]).
void write_grid_csv(const std::filesystem::path& path, const Grid& grid);

// Dense square matrices: 16-byte header (8-byte magic "FWMAT001", 8-byte
// little-endian row count), then row-major 8-byte floats.
void write_matrix_binary(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_binary(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);

// Run manifest.  The wall-clock fields live here and nowhere else, so every
// other artifact of a run is byte-reproducible.  `config_json` must hold an
// already-serialized JSON object; it is embedded, not quoted.
struct RunManifest {
  std::string tool;
  std::string version;
  std::string study;
  std::string config_json = "{}";
  std::uint64_t seed = 0;
  int threads = 1;
  double wall_seconds = 0.0;
  std::string started_utc;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace fracweyl
