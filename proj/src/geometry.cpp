#include "geofd/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace geofd {

std::string to_string(Position p) {
  std::ostringstream os;
  os << '(' << p.x << ", " << p.y << ')';
  return os.str();
}

std::string to_string(const Rect& r) {
  std::ostringstream os;
  os << "[x " << r.x_min << ".." << r.x_max << ", y " << r.y_min << ".." << r.y_max << ']';
  return os.str();
}

bool interiors_overlap(const Rect& a, const Rect& b) {
  return std::min(a.x_max, b.x_max) > std::max(a.x_min, b.x_min) &&
         std::min(a.y_max, b.y_max) > std::max(a.y_min, b.y_min);
}

bool segment_intersects(Position p, Position q, const Rect& r) {
  // Liang-Barsky clipping of p + t (q - p), t in [0, 1].
  double t0 = 0.0;
  double t1 = 1.0;
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  auto clip = [&](double denom, double num) {
    if (denom == 0.0) return num >= 0.0;
    const double t = num / denom;
    if (denom > 0.0) {
      t1 = std::min(t1, t);
    } else {
      t0 = std::max(t0, t);
    }
    return t0 <= t1;
  };
  return clip(-dx, p.x - r.x_min) && clip(dx, r.x_max - p.x) && clip(-dy, p.y - r.y_min) &&
         clip(dy, r.y_max - p.y);
}

}  // namespace geofd
