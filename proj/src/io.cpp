#include "eqtrack/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace eqtrack {

using nlohmann::json;

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool try_parse(std::string_view cell, double& out) {
  cell = trim(cell);
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

}  // namespace

bool is_number(std::string_view cell) {
  double v;
  return try_parse(cell, v);
}

double parse_number(std::string_view cell, const std::string& context) {
  double v;
  if (!try_parse(cell, v)) {
    throw ParseError(context + ": not a number: '" + std::string(cell) + "'");
  }
  return v;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json vector_to_json(const Vector& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

json matrix_to_json(const Matrix& m) {
  json j = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(std::move(row));
  }
  return j;
}

Vector vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(what + ": non-numeric entry");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected nested arrays");
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : j[0].size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError(what + ": ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ParseError(what + ": non-numeric entry");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

json constraint_set_to_json(const ConstraintSet& set) {
  if (set.is_box()) {
    return {{"kind", "box"},
            {"lower", vector_to_json(set.as_box().lower)},
            {"upper", vector_to_json(set.as_box().upper)}};
  }
  return {{"kind", "ball"},
          {"center", vector_to_json(set.as_ball().center)},
          {"radius", set.as_ball().radius}};
}

ConstraintSet constraint_set_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "box") {
    return ConstraintSet::box(vector_from_json(j.at("lower"), "box.lower"),
                              vector_from_json(j.at("upper"), "box.upper"));
  }
  if (kind == "ball") {
    return ConstraintSet::ball(vector_from_json(j.at("center"), "ball.center"),
                               j.at("radius").get<double>());
  }
  throw ParseError("unknown constraint set kind '" + kind + "'");
}

json distributional_map_to_json(const DistributionalMap& map) {
  json base;
  if (const auto* g = std::get_if<GaussianBase>(&map.base())) {
    base = {{"kind", "gaussian"},
            {"mean", vector_to_json(g->mean)},
            {"covariance", matrix_to_json(g->covariance)}};
  } else {
    base = {{"kind", "empirical"},
            {"samples", matrix_to_json(std::get<EmpiricalBase>(map.base()).samples)}};
  }
  return {{"base", base}, {"shift", matrix_to_json(map.shift())}};
}

DistributionalMap distributional_map_from_json(const json& j) {
  const json& base = j.at("base");
  Matrix shift = matrix_from_json(j.at("shift"), "dist_map.shift");
  const std::string kind = base.at("kind").get<std::string>();
  if (kind == "gaussian") {
    return DistributionalMap::gaussian(vector_from_json(base.at("mean"), "base.mean"),
                                       matrix_from_json(base.at("covariance"), "base.covariance"),
                                       std::move(shift));
  }
  if (kind == "point_mass") {
    return DistributionalMap::point_mass(vector_from_json(base.at("mean"), "base.mean"),
                                         std::move(shift));
  }
  if (kind == "empirical") {
    Matrix samples = base.contains("csv")
                         ? load_observations_csv(base.at("csv").get<std::string>())
                         : matrix_from_json(base.at("samples"), "base.samples");
    return DistributionalMap::empirical(std::move(samples), std::move(shift));
  }
  throw ParseError("unknown base distribution kind '" + kind + "'");
}

json problem_to_json(const SaddleProblem& p) {
  const QuadraticFamily* q = p.quadratic();
  if (!q) throw std::invalid_argument("only quadratic problems are serializable");
  const auto& t = q->terms();
  json obj = {{"P", matrix_to_json(t.P)},   {"R", matrix_to_json(t.R)},
              {"S", matrix_to_json(t.S)},   {"qx", vector_to_json(t.qx)},
              {"qy", vector_to_json(t.qy)}, {"Ux", matrix_to_json(t.Ux)},
              {"Uy", matrix_to_json(t.Uy)}};
  return {{"objective", obj},
          {"constraint_x", constraint_set_to_json(p.constraint_x())},
          {"constraint_y", constraint_set_to_json(p.constraint_y())},
          {"dist_map", distributional_map_to_json(p.dist_map())},
          {"gamma", p.gamma()},
          {"L", p.lipschitz_L()}};
}

SaddleProblem problem_from_json(const json& j) {
  const json& o = j.at("objective");
  QuadraticFamily::Terms t;
  t.P = matrix_from_json(o.at("P"), "objective.P");
  t.S = matrix_from_json(o.at("S"), "objective.S");
  t.R = o.contains("R") ? matrix_from_json(o.at("R"), "objective.R")
                        : Matrix::Zero(t.P.rows(), t.S.rows());
  t.qx = o.contains("qx") ? vector_from_json(o.at("qx"), "objective.qx") : Vector::Zero(t.P.rows());
  t.qy = o.contains("qy") ? vector_from_json(o.at("qy"), "objective.qy") : Vector::Zero(t.S.rows());
  t.Ux = matrix_from_json(o.at("Ux"), "objective.Ux");
  t.Uy = matrix_from_json(o.at("Uy"), "objective.Uy");
  auto family = std::make_shared<const QuadraticFamily>(std::move(t));
  std::optional<double> gamma, L;
  if (j.contains("gamma")) gamma = j.at("gamma").get<double>();
  if (j.contains("L")) L = j.at("L").get<double>();
  return SaddleProblem(std::move(family), constraint_set_from_json(j.at("constraint_x")),
                       constraint_set_from_json(j.at("constraint_y")),
                       distributional_map_from_json(j.at("dist_map")), gamma, L);
}

}  // namespace eqtrack
