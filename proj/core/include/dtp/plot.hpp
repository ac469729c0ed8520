#pragma once

#include <string>
#include <vector>

#include "dtp/attack.hpp"

namespace dtp {

/// Standalone SVG of distance versus queries spent: a step-after envelope
/// through the trace points with labeled axes. The envelope is
/// non-increasing whenever the trace is (run_attack records running
/// minima). An empty trace renders the frame with a note; a single point
/// renders a marker.
std::string render_convergence_svg(const std::vector<TracePoint>& trace,
                                   const std::string& x_label = "queries",
                                   const std::string& y_label = "best distance (m)");

/// render_convergence_svg written to a file. Throws IoError on failure.
void emit_convergence_plot(const std::vector<TracePoint>& trace,
                           const std::string& path,
                           const std::string& x_label = "queries",
                           const std::string& y_label = "best distance (m)");

}  // namespace dtp
