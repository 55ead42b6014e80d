#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pulsedyn/classify.hpp"
#include "pulsedyn/reduced_ode.hpp"

namespace pulsedyn {

// Round-trip decimal formatting (%.17g) so re-reading loses no precision.
std::string format_double(double v);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_events_csv(const std::string& path, const Trajectory& traj);
void write_field_snapshot_csv(const std::string& path, const std::vector<double>& x,
                              const std::vector<double>& v);
void write_uv_snapshot_csv(const std::string& path, const std::vector<double>& x,
                           const std::vector<double>& u, const std::vector<double>& v);
void write_phase_diagram_csv(const std::string& path, const PhaseDiagram& pd);
void write_boundaries_csv(const std::string& path, const std::vector<PhaseBoundary>& bs);
void write_report_csv(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& rows);

// Two-column (x, delta) file for tabulated heterogeneities; '#' comments.
Tabulated read_tabulated_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);

} // namespace pulsedyn
