#pragma once

#include <string>

#include <json.hpp>

#include "lindspect/model_zoo.hpp"

namespace lindspect {

// Matrices serialize as row-major nested arrays of [re, im] pairs.
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

// Accepts {"builtin": name, "params": {...}} or
// {"hamiltonian": [[...]], "channels": [{"operator": [[...]], "rate": r}]}.
LindbladModel model_from_json(const nlohmann::json& j, const zoo::ParamMap& extra_params = {});
LindbladModel load_model_file(const std::string& path, const zoo::ParamMap& extra_params = {});

// {"basis": [[...]], "sizes": [n, n, m]}
BlockPartition partition_from_json(const nlohmann::json& j);
BlockPartition load_partition_file(const std::string& path);

nlohmann::json report_to_json(const StructureReport& report);
nlohmann::json rstar_to_json(const RStarSolution& solution);
nlohmann::json dfs_to_json(const DfsResult& dfs);

// 17 significant digits, shortest-field %.17g rendering used by all CSV output.
std::string format_sig17(double v);

std::string spectrum_to_csv(const Spectrum& spec);

// rows t,fidelity
std::string trajectory_to_csv(const std::vector<double>& times, const std::vector<double>& fidelities);

}  // namespace lindspect
