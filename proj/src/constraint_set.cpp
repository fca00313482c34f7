#include "eqtrack/constraint_set.hpp"

#include <cmath>

namespace eqtrack {

ConstraintSet ConstraintSet::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw DimensionMismatch("box bounds must be non-empty and of equal length");
  }
  if (!lower.allFinite() || !upper.allFinite()) {
    throw std::invalid_argument("box bounds must be finite");
  }
  if ((lower.array() > upper.array()).any()) {
    throw std::invalid_argument("box lower bound exceeds upper bound");
  }
  return ConstraintSet(Box{std::move(lower), std::move(upper)});
}

ConstraintSet ConstraintSet::box(Eigen::Index dim, double half_width) {
  return box(Vector::Constant(dim, -half_width), Vector::Constant(dim, half_width));
}

ConstraintSet ConstraintSet::ball(Vector center, double radius) {
  if (center.size() == 0) throw DimensionMismatch("ball center must be non-empty");
  if (!(radius > 0.0) || !std::isfinite(radius) || !center.allFinite()) {
    throw std::invalid_argument("ball radius must be positive and finite");
  }
  return ConstraintSet(Ball{std::move(center), radius});
}

Eigen::Index ConstraintSet::dimension() const {
  return std::visit(
      [](const auto& s) -> Eigen::Index {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Box>) {
          return s.lower.size();
        } else {
          return s.center.size();
        }
      },
      kind_);
}

Vector ConstraintSet::project(const Vector& v) const {
  if (v.size() != dimension()) {
    throw DimensionMismatch("projection input has dimension " + std::to_string(v.size()) +
                            ", set has " + std::to_string(dimension()));
  }
  if (const auto* b = std::get_if<Box>(&kind_)) {
    return v.cwiseMax(b->lower).cwiseMin(b->upper);
  }
  const auto& ball = std::get<Ball>(kind_);
  const Vector offset = v - ball.center;
  const double dist = offset.norm();
  // Interior points (including the center itself) are fixed.
  if (dist <= ball.radius) return v;
  return ball.center + offset * (ball.radius / dist);
}

bool ConstraintSet::contains(const Vector& v, double slack) const {
  if (v.size() != dimension()) return false;
  if (const auto* b = std::get_if<Box>(&kind_)) {
    return ((v.array() >= b->lower.array() - slack) && (v.array() <= b->upper.array() + slack))
        .all();
  }
  const auto& ball = std::get<Ball>(kind_);
  return (v - ball.center).norm() <= ball.radius + slack;
}

}  // namespace eqtrack
