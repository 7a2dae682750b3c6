#include "fracweyl/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "fracweyl/errors.hpp"

namespace fracweyl {

namespace {

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const auto parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

nlohmann::ordered_json meta_json(const SpectrumMeta& meta) {
  nlohmann::ordered_json j;
  j["size"] = meta.size;
  j["dimension"] = meta.dimension;
  j["a"] = meta.a;
  j["h"] = meta.h;
  j["shift"] = meta.shift;
  j["domain"] = meta.domain;
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_int(long long v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%lld", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::string content;
  auto emit_row = [&content](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) content += ',';
      content += csv_escape(row[i]);
    }
    content += '\n';
  };
  emit_row(table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw std::invalid_argument("write_csv: row width differs from header");
    emit_row(row);
  }
  atomic_write(path, content);
}

std::string format_table(const CsvTable& table) {
  std::vector<size_t> width(table.header.size(), 0);
  auto widen = [&width](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size() && i < width.size(); ++i)
      width[i] = std::max(width[i], row[i].size());
  };
  widen(table.header);
  for (const auto& row : table.rows) widen(row);
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += "  ";
      out += row[i];
      if (i + 1 < row.size()) out.append(width[i] - row[i].size(), ' ');
    }
    out += '\n';
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  atomic_write(path, content);
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
  CsvTable t;
  t.header = {"j", "lambda"};
  for (Eigen::Index j = 0; j < spectrum.values.size(); ++j)
    t.rows.push_back({format_int(j + 1), format_double(spectrum.values(j))});
  write_csv(path, t);
}

void write_spectrum_json(const std::filesystem::path& path, const Spectrum& spectrum) {
  nlohmann::ordered_json j;
  j["meta"] = meta_json(spectrum.meta);
  std::vector<double> values(spectrum.values.data(),
                             spectrum.values.data() + spectrum.values.size());
  j["values"] = values;
  atomic_write(path, j.dump(2) + "\n");
}

void write_grid_csv(const std::filesystem::path& path, const Grid& grid) {
  CsvTable t;
  t.header = {"index", "x1"};
  if (grid.dimension() == 2) t.header.push_back("x2");
  for (int i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd x = grid.node(i);
    std::vector<double> coords(x.data(), x.data() + x.size());
    std::vector<std::string> row{format_int(i)};
    for (double c : coords) row.push_back(format_double(c));
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

void write_matrix_binary(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("write_matrix_binary: matrix must be square");
  const std::uint64_t n = static_cast<std::uint64_t>(m.rows());
  std::string content;
  content.reserve(16 + sizeof(double) * n * n);
  content.append("FWMAT001", 8);
  char nbuf[8];
  for (int i = 0; i < 8; ++i) nbuf[i] = static_cast<char>((n >> (8 * i)) & 0xff);
  content.append(nbuf, 8);
  // Row-major on disk; Eigen stores column-major, so emit row by row.
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < n; ++j) {
      const double v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      char vbuf[sizeof(double)];
      std::memcpy(vbuf, &v, sizeof(double));
      content.append(vbuf, sizeof(double));
    }
  atomic_write(path, content);
}

Eigen::MatrixXd read_matrix_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "FWMAT001", 8) != 0)
    throw std::runtime_error("bad matrix file magic: " + path.string());
  char nbuf[8];
  in.read(nbuf, 8);
  if (!in) throw std::runtime_error("truncated matrix header: " + path.string());
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i)
    n |= static_cast<std::uint64_t>(static_cast<unsigned char>(nbuf[i])) << (8 * i);
  if (n > (1u << 20))
    throw std::runtime_error("implausible matrix size in: " + path.string());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < n; ++j) {
      double v;
      in.read(reinterpret_cast<char*>(&v), sizeof(double));
      if (!in) throw std::runtime_error("truncated matrix payload: " + path.string());
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  return m;
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  CsvTable t;
  t.header.push_back("i");
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    t.header.push_back("c" + std::to_string(j));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row{format_int(i)};
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(format_double(m(i, j)));
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["tool"] = manifest.tool;
  j["version"] = manifest.version;
  j["study"] = manifest.study;
  nlohmann::ordered_json config;
  try {
    config = nlohmann::ordered_json::parse(manifest.config_json);
  } catch (const nlohmann::json::parse_error&) {
    throw std::invalid_argument("write_manifest: config_json is not valid JSON");
  }
  j["config"] = config;
  j["seed"] = manifest.seed;
  j["threads"] = manifest.threads;
  j["wall_seconds"] = manifest.wall_seconds;
  j["started_utc"] = manifest.started_utc;
  atomic_write(path, j.dump(2) + "\n");
}

}  // namespace fracweyl
