#pragma once

#include <variant>

#include "eqtrack/types.hpp"

namespace eqtrack {

struct Box {
  Vector lower;
  Vector upper;
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

/// Compact convex set with a closed-form Euclidean projection.
class ConstraintSet {
 public:
  /// Throws std::invalid_argument unless lower <= upper componentwise and
  /// every bound is finite.
  static ConstraintSet box(Vector lower, Vector upper);
  /// Symmetric box [-half_width, half_width]^dim.
  static ConstraintSet box(Eigen::Index dim, double half_width);
  static ConstraintSet ball(Vector center, double radius);

  Vector project(const Vector& v) const;
  bool contains(const Vector& v, double slack = 1e-12) const;

  Eigen::Index dimension() const;
  bool is_box() const { return std::holds_alternative<Box>(kind_); }
  const Box& as_box() const { return std::get<Box>(kind_); }
  const Ball& as_ball() const { return std::get<Ball>(kind_); }

 private:
  explicit ConstraintSet(std::variant<Box, Ball> kind) : kind_(std::move(kind)) {}
  std::variant<Box, Ball> kind_;
};

}  // namespace eqtrack
