#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "abl/metric_space.hpp"

namespace abl {

enum class InputKind { automatic, matrix, points };

struct LoadedInput {
  std::optional<FiniteMetricSpace> metric;
  std::optional<PointSet> points;

  bool has_points() const { return points.has_value(); }

  // The metric to operate on: either the loaded matrix or the induced one.
  FiniteMetricSpace as_metric() const {
    if (metric) return *metric;
    return points->induced_metric();
  }
};

namespace detail_io {

inline std::vector<std::vector<double>> parse_csv(std::istream& in, const std::string& what) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::invalid_argument(what + ": cannot parse '" + cell + "' on line " +
                                    std::to_string(lineno));
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument(what + ": no data rows");
  const std::size_t w = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != w) throw std::invalid_argument(what + ": ragged rows");
  return rows;
}

inline Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

inline bool looks_like_distance_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 2) return false;
  double dmax = m.cwiseAbs().maxCoeff();
  const double tol = kMetricRelTol * std::max(dmax, 1e-300);
  for (int i = 0; i < m.rows(); ++i) {
    if (std::abs(m(i, i)) > tol) return false;
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j) < -tol || std::abs(m(i, j) - m(j, i)) > tol) return false;
  }
  return true;
}

// Point clouds loaded from files get the same duplicate merge as distance
// matrices.
inline PointSet dedup_points(Eigen::MatrixXd coords, NormKind kind, int* merged_out = nullptr) {
  PointSet raw(std::move(coords), kind);
  const double tol = kDedupRelTol * raw.diam();
  std::vector<int> keep;
  for (int i = 0; i < raw.size(); ++i) {
    bool dup = false;
    for (int k : keep)
      if (raw.distance(i, k) <= tol) {
        dup = true;
        break;
      }
    if (!dup) keep.push_back(i);
  }
  if (merged_out) *merged_out = raw.size() - static_cast<int>(keep.size());
  if (static_cast<int>(keep.size()) == raw.size()) return raw;
  Eigen::MatrixXd out(keep.size(), raw.dim());
  for (std::size_t r = 0; r < keep.size(); ++r) out.row(r) = raw.coords().row(keep[r]);
  return PointSet(std::move(out), kind);
}

}  // namespace detail_io

// Loads a distance matrix or point cloud from CSV, or a point cloud from
// JSON {"points": [[...], ...], "norm": "euclidean"|"sup"}.
inline LoadedInput load_input(const std::string& path, InputKind kind = InputKind::automatic) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  LoadedInput out;

  const bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  if (is_json) {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw std::invalid_argument("JSON parse error in " + path + ": " + e.what());
    }
    if (!j.contains("points") || !j["points"].is_array())
      throw std::invalid_argument(path + ": JSON input needs a \"points\" array");
    const auto& pts = j["points"];
    if (pts.empty()) throw std::invalid_argument(path + ": empty point list");
    Eigen::MatrixXd coords(pts.size(), pts.front().size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].size() != pts.front().size()) throw std::invalid_argument(path + ": ragged point rows");
      for (std::size_t c = 0; c < pts[i].size(); ++c) coords(i, c) = pts[i][c].get<double>();
    }
    NormKind nk = NormKind::euclidean;
    if (j.contains("norm")) {
      const std::string ns = j["norm"].get<std::string>();
      if (ns == "sup")
        nk = NormKind::sup;
      else if (ns != "euclidean")
        throw std::invalid_argument(path + ": norm must be \"euclidean\" or \"sup\"");
    }
    out.points = detail_io::dedup_points(std::move(coords), nk);
    return out;
  }

  auto rows = detail_io::parse_csv(in, path);
  Eigen::MatrixXd m = detail_io::to_matrix(rows);
  const bool as_matrix = kind == InputKind::matrix ||
                         (kind == InputKind::automatic && detail_io::looks_like_distance_matrix(m));
  if (as_matrix)
    out.metric = FiniteMetricSpace::from_matrix(std::move(m));
  else
    out.points = detail_io::dedup_points(std::move(m), NormKind::euclidean);
  return out;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_points_csv(const std::string& path, const PointSet& X) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  for (int i = 0; i < X.size(); ++i) {
    for (int c = 0; c < X.dim(); ++c) {
      if (c) out << ',';
      out << format_double(X.coords()(i, c));
    }
    out << '\n';
  }
}

inline nlohmann::json points_to_json(const PointSet& X) {
  nlohmann::json pts = nlohmann::json::array();
  for (int i = 0; i < X.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < X.dim(); ++c) row.push_back(X.coords()(i, c));
    pts.push_back(std::move(row));
  }
  return nlohmann::json{{"points", std::move(pts)}, {"norm", norm_kind_name(X.norm_kind())}};
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << body;
}

}  // namespace abl
