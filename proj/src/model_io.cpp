#include "lindspect/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lindspect {

using nlohmann::json;

nlohmann::json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) {
        throw std::invalid_argument("matrix: expected a non-empty array of rows");
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw std::invalid_argument("matrix: ragged rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json& cell = row[static_cast<std::size_t>(c)];
            if (cell.is_number()) {
                m(r, c) = Complex(cell.get<double>(), 0.0);
            } else if (cell.is_array() && cell.size() == 2 && cell[0].is_number() &&
                       cell[1].is_number()) {
                m(r, c) = Complex(cell[0].get<double>(), cell[1].get<double>());
            } else {
                throw std::invalid_argument("matrix: entries must be numbers or [re, im] pairs");
            }
        }
    }
    return m;
}

LindbladModel model_from_json(const nlohmann::json& j, const zoo::ParamMap& extra_params) {
    if (!j.is_object()) throw std::invalid_argument("model: expected a JSON object");

    if (j.contains("builtin")) {
        const std::string name = j.at("builtin").get<std::string>();
        const zoo::ZooEntry* entry = zoo::find_entry(name);
        if (!entry) throw std::invalid_argument("model: unknown builtin '" + name + "'");
        zoo::ParamMap overrides;
        if (j.contains("params")) {
            for (const auto& [key, value] : j.at("params").items()) {
                overrides[key] = value.get<double>();
            }
        }
        for (const auto& [key, value] : extra_params) overrides[key] = value;
        return entry->build(zoo::resolve_params(*entry, overrides));
    }

    if (!j.contains("hamiltonian")) {
        throw std::invalid_argument("model: need either 'builtin' or 'hamiltonian'");
    }
    if (!extra_params.empty() || j.contains("params")) {
        throw std::invalid_argument("model: parameters only apply to builtin models");
    }
    const CMatrix h = matrix_from_json(j.at("hamiltonian"));
    std::vector<JumpChannel> channels;
    if (j.contains("channels")) {
        for (const json& cj : j.at("channels")) {
            JumpChannel ch;
            ch.op = matrix_from_json(cj.at("operator"));
            ch.rate = cj.value("rate", 1.0);
            channels.push_back(std::move(ch));
        }
    }
    return LindbladModel(h, channels);
}

LindbladModel load_model_file(const std::string& path, const zoo::ParamMap& extra_params) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("cannot parse " + path + ": " + e.what());
    }
    return model_from_json(j, extra_params);
}

BlockPartition partition_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("basis") || !j.contains("sizes")) {
        throw std::invalid_argument("partition: expected {\"basis\", \"sizes\"}");
    }
    const json& sizes = j.at("sizes");
    if (!sizes.is_array() || sizes.size() != 3 || sizes[0].get<int>() != sizes[1].get<int>()) {
        throw std::invalid_argument("partition: sizes must be [n, n, m]");
    }
    BlockPartition p;
    p.basis = matrix_from_json(j.at("basis"));
    p.n = sizes[0].get<int>();
    p.m = sizes[2].get<int>();
    if (p.n < 1 || p.m < 0) throw std::invalid_argument("partition: sizes must be positive");
    return p;
}

BlockPartition load_partition_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open partition file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("cannot parse " + path + ": " + e.what());
    }
    return partition_from_json(j);
}

nlohmann::json report_to_json(const StructureReport& report) {
    json j;
    j["structured"] = report.structured;
    if (report.offending_operator) {
        j["offending_operator"] =
            *report.offending_operator < 0 ? json("hamiltonian") : json(*report.offending_operator);
    }
    j["sizes"] = json::array({report.partition.n, report.partition.n, report.partition.m});
    j["max_offblock_residual"] = report.max_offblock_residual;
    j["max_xi_mismatch"] = report.max_xi_mismatch;
    j["tol"] = report.tol;
    j["h_a"] = matrix_to_json(report.h_a);
    j["h_b"] = matrix_to_json(report.h_b);
    if (report.h_res.size() > 0) j["h_res"] = matrix_to_json(report.h_res);
    j["delta_h"] = matrix_to_json(report.delta_h);
    json xi = json::array();
    for (const CMatrix& x : report.xi) xi.push_back(matrix_to_json(x));
    j["xi"] = std::move(xi);
    return j;
}

nlohmann::json rstar_to_json(const RStarSolution& solution) {
    json j;
    j["r_star"] = matrix_to_json(solution.r_star);
    j["condition"] = to_string(solution.condition);
    if (solution.omega) j["omega"] = *solution.omega;
    j["sharp_residual"] = solution.sharp_residual;
    j["null_multiplicity"] = solution.null_multiplicity;
    return j;
}

nlohmann::json dfs_to_json(const DfsResult& dfs) {
    json subspaces = json::array();
    for (const DfsSubspace& sub : dfs.subspaces) {
        json s;
        s["dimension"] = sub.basis.cols();
        s["basis"] = matrix_to_json(sub.basis);
        json xi = json::array();
        for (Complex x : sub.xi) xi.push_back(json::array({x.real(), x.imag()}));
        s["xi"] = std::move(xi);
        s["h_restricted"] = matrix_to_json(sub.h_restricted);
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(sub.h_restricted);
        json levels = json::array();
        for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
            levels.push_back(solver.eigenvalues()(k));
        }
        s["levels"] = std::move(levels);
        subspaces.push_back(std::move(s));
    }
    json j;
    j["subspaces"] = std::move(subspaces);
    return j;
}

std::string format_sig17(double v) {
    if (v == 0.0) return "0";  // keep -0 out of the output
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string spectrum_to_csv(const Spectrum& spec) {
    std::string out = "re,im,class,decay_rate,frequency\n";
    for (const SpectralMode& mode : spec.modes) {
        out += format_sig17(mode.value.real());
        out += ',';
        out += format_sig17(mode.value.imag());
        out += ',';
        out += to_string(mode.mode_class);
        out += ',';
        out += format_sig17(mode.decay_rate);
        out += ',';
        out += format_sig17(mode.frequency);
        out += '\n';
    }
    return out;
}

std::string trajectory_to_csv(const std::vector<double>& times,
                              const std::vector<double>& fidelities) {
    if (times.size() != fidelities.size()) {
        throw std::invalid_argument("trajectory: times and fidelities must align");
    }
    std::string out = "t,fidelity\n";
    for (std::size_t k = 0; k < times.size(); ++k) {
        out += format_sig17(times[k]);
        out += ',';
        out += format_sig17(fidelities[k]);
        out += '\n';
    }
    return out;
}

}  // namespace lindspect
