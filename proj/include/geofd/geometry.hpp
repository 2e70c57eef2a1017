#pragma once

#include <cmath>
#include <string>

namespace geofd {

// Planar coordinates in meters; x grows east, y grows north.
struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

inline double distance_m(Position a, Position b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::string to_string(Position p);

// Closed axis-aligned rectangle in meters.
struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  bool has_positive_area() const { return width() > 0.0 && height() > 0.0; }

  // Boundary points count as members.
  bool contains(Position p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  bool contains_strictly(Position p) const {
    return p.x > x_min && p.x < x_max && p.y > y_min && p.y < y_max;
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

// True when the intersection of a and b has positive area; rectangles that
// only share an edge or a corner do not overlap.
bool interiors_overlap(const Rect& a, const Rect& b);

// True when the closed segment [p, q] touches the closed rectangle r.
bool segment_intersects(Position p, Position q, const Rect& r);

std::string to_string(const Rect& r);

}  // namespace geofd
