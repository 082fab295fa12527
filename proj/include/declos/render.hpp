#pragma once

#include "declos/trace.hpp"

#include <string>

namespace declos {

// SVG snapshot of a run: physical obstacles solid, inflated planning
// obstacles dashed, one polyline per agent over all ticks, start crosses,
// square goal regions (the goal ball is an inf-norm ball) and final
// positions as dots.
std::string render_svg(const SimTrace& trace);

void write_svg(const SimTrace& trace, const std::string& path);

}  // namespace declos
