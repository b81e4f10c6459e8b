#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "hhsmc/run_config.hpp"
#include "hhsmc/sliding_analysis.hpp"

namespace hhsmc {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Field CSV: first row is the xmesh header, first column the saved times,
/// values printed with 17 significant digits.
void write_field_csv(const std::filesystem::path& path, const Mesh& mesh, const StateField& field);

struct FieldCsv {
    std::vector<double> xmesh;
    std::vector<double> tmesh;
    StateField field;
};

FieldCsv read_field_csv(const std::filesystem::path& path);

nlohmann::ordered_json scenario_to_json(const RunConfig& config);

/// Rebuilds a runnable configuration from the parameter block of a summary,
/// so a recorded run can be replayed exactly.
RunConfig config_from_summary(const nlohmann::json& summary);

nlohmann::ordered_json summary_json(const RunConfig& config, const SimulationResult& result,
                                    const SlidingBound& bound, const GatingBounds& gb,
                                    double band, std::optional<double> onset);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

nlohmann::ordered_json sliding_bound_to_json(const SlidingBound& bound, const GatingBounds& gb,
                                             double rho);

} // namespace hhsmc
