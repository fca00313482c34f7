#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "eqtrack/problem.hpp"

namespace eqtrack {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::vector<std::vector<std::string>> rows;
};

/// Comma-separated, no quoting. Blank lines are skipped; \r is stripped.
CsvTable read_csv(const std::string& path);

bool is_number(std::string_view cell);
/// Strict: the whole cell must be a number (nan/inf accepted).
double parse_number(std::string_view cell, const std::string& context);
/// Shortest representation that round-trips to the same double.
std::string format_number(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

nlohmann::json vector_to_json(const Vector& v);
nlohmann::json matrix_to_json(const Matrix& m);
Vector vector_from_json(const nlohmann::json& j, const std::string& what);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& what);

nlohmann::json constraint_set_to_json(const ConstraintSet& set);
ConstraintSet constraint_set_from_json(const nlohmann::json& j);

nlohmann::json distributional_map_to_json(const DistributionalMap& map);
DistributionalMap distributional_map_from_json(const nlohmann::json& j);

/// Quadratic problems only:
/// {"objective": {P, R, S, qx, qy, Ux, Uy}, "constraint_x": ..., "constraint_y": ...,
///  "dist_map": {"base": {...}, "shift": [[...]]}, "gamma"?: g, "L"?: l}
nlohmann::json problem_to_json(const SaddleProblem& p);
SaddleProblem problem_from_json(const nlohmann::json& j);

}  // namespace eqtrack
