#pragma once

#include <string>

#include "tba/evaluation.hpp"
#include "tba/triangulation.hpp"

namespace tba {

/// Map with filled obstacles, goals as dots, and optionally the tour drawn
/// through its geodesic waypoints and a triangulation overlay.
std::string render_svg(const PolygonalMap& map, const GoalSet& goals, const Tour* tour = nullptr,
                       const Triangulation* triangulation = nullptr);

}  // namespace tba
