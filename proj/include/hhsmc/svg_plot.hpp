#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hhsmc/mesh.hpp"

namespace hhsmc {

/// One curve of a line chart.
struct Series {
    std::string label;
    std::string color;
    const std::vector<double>* x = nullptr;
    const std::vector<double>* y = nullptr;
};

/// Writes a simple line chart with axes, ticks and a legend.
void write_line_chart_svg(const std::filesystem::path& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<Series>& series);

/// Writes the field as a colored cell grid (time on the x axis, space on y).
void write_heatmap_svg(const std::filesystem::path& path, const std::string& title,
                       const Mesh& mesh, const StateField& field);

/// Emits the three per-scenario plots: the potential trace at x_fixed, the
/// space-time surface, and the gating traces at x_fixed. Throws on empty
/// fields before touching the filesystem. Returns the written paths.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& out_dir,
                                              const Mesh& mesh,
                                              const StateField& v, const StateField& n,
                                              const StateField& m, const StateField& h,
                                              double x_fixed);

} // namespace hhsmc
