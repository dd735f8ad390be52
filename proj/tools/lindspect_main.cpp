#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lindspect/errors.hpp"
#include "lindspect/model_io.hpp"
#include "lindspect/model_zoo.hpp"
#include "lindspect/spectral.hpp"
#include "lindspect/structure.hpp"

namespace {

using namespace lindspect;
using nlohmann::json;

struct LoadedModel {
    LindbladModel model;
    const zoo::ZooEntry* entry = nullptr;  // set when the model is a builtin
    zoo::ParamMap params;                  // resolved builtin parameters
};

zoo::ParamMap parse_param_flags(const std::vector<std::string>& raw) {
    zoo::ParamMap out;
    for (const std::string& kv : raw) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw std::invalid_argument("--param expects name=value, got '" + kv + "'");
        }
        const std::string name = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("--param " + name + ": '" + value + "' is not a number");
        }
        if (used != value.size()) {
            throw std::invalid_argument("--param " + name + ": '" + value + "' is not a number");
        }
        out[name] = v;
    }
    return out;
}

LoadedModel load_model(const std::string& spec, const std::vector<std::string>& param_flags) {
    const zoo::ParamMap overrides = parse_param_flags(param_flags);
    if (spec.rfind("builtin:", 0) == 0) {
        const std::string name = spec.substr(8);
        const zoo::ZooEntry* entry = zoo::find_entry(name);
        if (!entry) {
            std::string names;
            for (const zoo::ZooEntry& e : zoo::registry()) {
                if (!names.empty()) names += ", ";
                names += e.name;
            }
            throw std::invalid_argument("unknown builtin '" + name + "' (available: " + names +
                                        ")");
        }
        zoo::ParamMap params = zoo::resolve_params(*entry, overrides);
        return {entry->build(params), entry, std::move(params)};
    }
    return {load_model_file(spec, overrides), nullptr, {}};
}

void write_text(const std::string& out_path, const std::string& text, bool& wrote_to_stdout) {
    wrote_to_stdout = out_path.empty();
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
    out << text;
}

struct ClassCounts {
    int oscillatory = 0, steady = 0, underdamped = 0, overdamped = 0;
};

ClassCounts count_classes(const Spectrum& spec) {
    ClassCounts c;
    for (const SpectralMode& mode : spec.modes) {
        switch (mode.mode_class) {
            case ModeClass::PersistentOscillatory: ++c.oscillatory; break;
            case ModeClass::Steady: ++c.steady; break;
            case ModeClass::Underdamped: ++c.underdamped; break;
            case ModeClass::Overdamped: ++c.overdamped; break;
        }
    }
    return c;
}

double max_im_on_axis(const Spectrum& spec) {
    double worst = 0.0;
    for (const SpectralMode& mode : spec.modes) {
        if (mode.mode_class == ModeClass::PersistentOscillatory ||
            mode.mode_class == ModeClass::Steady) {
            worst = std::max(worst, std::abs(mode.value.imag()));
        }
    }
    return worst;
}

json spectrum_to_json(const Spectrum& spec) {
    json modes = json::array();
    for (const SpectralMode& mode : spec.modes) {
        json m;
        m["re"] = mode.value.real();
        m["im"] = mode.value.imag();
        m["class"] = to_string(mode.mode_class);
        m["decay_rate"] = mode.decay_rate;
        m["frequency"] = mode.frequency;
        modes.push_back(std::move(m));
    }
    json j;
    j["dim"] = spec.dim;
    j["eps_re"] = spec.eps_re;
    j["eps_im"] = spec.eps_im;
    j["spectral_radius"] = spec.spectral_radius;
    j["modes"] = std::move(modes);
    return j;
}

// -------- spectrum --------

struct SpectrumArgs {
    std::string model_spec;
    std::vector<std::string> params;
    std::string out_path;
    std::string format = "csv";
    double eps_re = -1.0, eps_im = -1.0;
};

int run_spectrum(const SpectrumArgs& args) {
    const LoadedModel loaded = load_model(args.model_spec, args.params);
    const Spectrum spec = spectrum(loaded.model, args.eps_re, args.eps_im);

    std::string text;
    if (args.format == "csv") {
        text = spectrum_to_csv(spec);
    } else if (args.format == "json") {
        text = spectrum_to_json(spec).dump(2) + "\n";
    } else {
        throw std::invalid_argument("--format must be csv or json");
    }
    bool on_stdout = false;
    write_text(args.out_path, text, on_stdout);

    const ClassCounts c = count_classes(spec);
    char line[128];
    std::snprintf(line, sizeof(line), "oscillatory=%d steady=%d underdamped=%d overdamped=%d\n",
                  c.oscillatory, c.steady, c.underdamped, c.overdamped);
    // keep stdout clean for piping when the table itself went there
    std::fputs(line, on_stdout ? stderr : stdout);
    return 0;
}

// -------- evolve --------

struct EvolveArgs {
    std::string model_spec;
    std::vector<std::string> params;
    std::string out_path;
    std::string state;
    std::string method = "expansion";
    double t_end = 0.0;
    int t_samples = 201;
    double dt = 1e-3;
};

DensityMatrix resolve_state(const std::string& name, const LoadedModel& loaded) {
    const int d = static_cast<int>(loaded.model.dim());
    auto param = [&](const char* key) {
        const auto it = loaded.params.find(key);
        if (it == loaded.params.end()) {
            throw std::invalid_argument(std::string("state needs model parameter '") + key + "'");
        }
        return it->second;
    };
    if (name == "oscillator_revival_state") return zoo::oscillator_revival_state(d);
    if (name == "oscillator_decaying_state") return zoo::oscillator_decaying_state(d);
    if (name == "xxx_revival_state") {
        return zoo::xxx_revival_state(param("hx"), param("hy"), param("hz"), param("gamma"));
    }
    if (name == "xxx_decaying_state") {
        if (d != 8) throw std::invalid_argument("xxx_decaying_state needs an 8-dimensional model");
        return zoo::xxx_decaying_state();
    }
    // otherwise a JSON file holding the density matrix itself
    std::ifstream in(name);
    if (!in) {
        throw std::invalid_argument("--state: no such named state or file: " + name);
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("cannot parse " + name + ": " + e.what());
    }
    return DensityMatrix::validated(matrix_from_json(j.contains("state") ? j.at("state") : j));
}

int run_evolve(const EvolveArgs& args) {
    if (args.t_end <= 0.0) throw std::invalid_argument("--t-end must be positive");
    if (args.t_samples < 2) throw std::invalid_argument("--t-samples must be at least 2");
    if (args.dt <= 0.0) throw std::invalid_argument("--dt must be positive");

    const LoadedModel loaded = load_model(args.model_spec, args.params);
    const DensityMatrix rho0 = resolve_state(args.state, loaded);
    if (rho0.dim() != loaded.model.dim()) {
        throw std::invalid_argument("initial state dimension does not match the model");
    }

    std::vector<double> times(static_cast<std::size_t>(args.t_samples));
    for (int k = 0; k < args.t_samples; ++k) {
        times[static_cast<std::size_t>(k)] = args.t_end * k / (args.t_samples - 1);
    }

    auto fidelities = [&](const std::vector<DensityMatrix>& traj) {
        std::vector<double> f(traj.size());
        for (std::size_t k = 0; k < traj.size(); ++k) {
            f[k] = fidelity(rho0, traj[k]);
        }
        return f;
    };

    std::vector<double> fvals;
    if (args.method == "expansion" || args.method == "crosscheck") {
        const Spectrum spec = spectrum(loaded.model);
        fvals = fidelities(evolve_expansion(spec, rho0, times));
    }
    if (args.method == "rk4" || args.method == "crosscheck") {
        const std::vector<double> frk =
            fidelities(evolve_rk4(loaded.model, rho0, times, args.dt));
        if (args.method == "crosscheck") {
            double worst = 0.0;
            for (std::size_t k = 0; k < frk.size(); ++k) {
                worst = std::max(worst, std::abs(frk[k] - fvals[k]));
            }
            if (worst > 1e-6) {
                std::fprintf(stderr,
                             "crosscheck failed: integrator and mode expansion disagree by %g\n",
                             worst);
                return 3;
            }
        } else {
            fvals = frk;
        }
    }
    if (fvals.empty()) throw std::invalid_argument("--method must be expansion, rk4 or crosscheck");

    bool on_stdout = false;
    write_text(args.out_path, trajectory_to_csv(times, fvals), on_stdout);
    return 0;
}

// -------- check --------

struct CheckArgs {
    std::string model_spec;
    std::vector<std::string> params;
    std::string out_path;
    std::string partition_path;
    std::vector<std::string> discover_spec;
    bool discover = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int trials = 20;
    double tol = 1e-8;
};

std::uint64_t pick_seed(const CheckArgs& args, std::uint64_t from_discover, bool discover_has_seed) {
    if (discover_has_seed) return from_discover;
    if (args.seed_given) return args.seed;
    if (const char* env = std::getenv("LINDSPECT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("LINDSPECT_SEED is not an integer");
        }
    }
    return 1;
}

int run_check(const CheckArgs& args) {
    const LoadedModel loaded = load_model(args.model_spec, args.params);

    std::uint64_t discover_seed = 0;
    bool discover_has_seed = false;
    int trials = args.trials;
    for (const std::string& part : args.discover_spec) {
        std::stringstream ss(part);
        std::string kv;
        while (std::getline(ss, kv, ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument("--discover expects seed=<n>,trials=<n>");
            }
            const std::string key = kv.substr(0, eq);
            const std::string value = kv.substr(eq + 1);
            if (key == "seed") {
                discover_seed = std::stoull(value);
                discover_has_seed = true;
            } else if (key == "trials") {
                trials = std::stoi(value);
            } else {
                throw std::invalid_argument("--discover: unknown key '" + key + "'");
            }
        }
    }

    std::optional<BlockPartition> partition;
    json meta;
    if (!args.partition_path.empty()) {
        partition = load_partition_file(args.partition_path);
        meta["partition_source"] = "file";
    } else if (args.discover || !args.discover_spec.empty()) {
        const std::uint64_t seed = pick_seed(args, discover_seed, discover_has_seed);
        partition = discover_partition(loaded.model, trials, args.tol, seed);
        meta["partition_source"] = "discovered";
        meta["seed"] = seed;
        meta["trials"] = trials;
        if (!partition) {
            json j = meta;
            j["structured"] = false;
            j["note"] = "no verifying partition found";
            bool on_stdout = false;
            write_text(args.out_path, j.dump(2) + "\n", on_stdout);
            return 4;
        }
    } else if (loaded.entry && loaded.entry->partition) {
        partition = loaded.entry->partition(loaded.params);
        meta["partition_source"] = "builtin";
    }
    if (!partition) {
        throw std::invalid_argument(
            "no partition available; pass --partition <file> or --discover");
    }

    const StructureReport report = verify_block_form(loaded.model, *partition, args.tol);
    json out = report_to_json(report);
    for (const auto& [key, value] : meta.items()) out[key] = value;

    if (!report.structured) {
        bool on_stdout = false;
        write_text(args.out_path, out.dump(2) + "\n", on_stdout);
        return 4;
    }

    std::vector<double> rates;
    for (const JumpChannel& ch : loaded.model.channels()) rates.push_back(ch.rate);
    const RStarSolution solution = solve_rstar(report, rates);
    out["solution"] = rstar_to_json(solution);

    const std::vector<EigenModePair> modes =
        construct_modes(loaded.model, *partition, solution, std::max(args.tol, 1e-7));
    const Spectrum spec = spectrum(loaded.model);
    const double match_tol = 1e-6 * std::max(1.0, spec.spectral_radius);

    bool all_found = true;
    json jmodes = json::array();
    for (const EigenModePair& mode : modes) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const SpectralMode& sm : spec.modes) {
            nearest = std::min(nearest, std::abs(sm.value - mode.value));
        }
        const bool found = nearest <= match_tol;
        all_found = all_found && found;
        json m;
        m["eigenvalue"] = json::array({mode.value.real(), mode.value.imag()});
        m["dissipator_residual"] = dissipator_residual(loaded.model, mode.mode);
        m["in_spectrum"] = found;
        m["spectrum_distance"] = nearest;
        jmodes.push_back(std::move(m));
    }
    out["modes"] = std::move(jmodes);
    out["spectrum_match"] = all_found;

    bool on_stdout = false;
    write_text(args.out_path, out.dump(2) + "\n", on_stdout);
    return all_found ? 0 : 2;
}

// -------- dfs --------

struct DfsArgs {
    std::string model_spec;
    std::vector<std::string> params;
    std::string out_path;
    double tol = 1e-8;
};

int run_dfs(const DfsArgs& args) {
    const LoadedModel loaded = load_model(args.model_spec, args.params);
    const DfsResult dfs = find_dfs(loaded.model, args.tol);

    json out = dfs_to_json(dfs);
    for (json& sub : out["subspaces"]) {
        const auto& levels = sub["levels"];
        json freqs = json::array();
        for (std::size_t u = 0; u < levels.size(); ++u) {
            for (std::size_t v = u + 1; v < levels.size(); ++v) {
                freqs.push_back(levels[v].get<double>() - levels[u].get<double>());
            }
        }
        sub["frequencies"] = std::move(freqs);
    }

    bool on_stdout = false;
    write_text(args.out_path, out.dump(2) + "\n", on_stdout);
    return 0;
}

// -------- sweep --------

struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

SweepAxis parse_sweep(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw std::invalid_argument("--sweep expects name=min:max:steps or name=v1,v2,...");
    }
    SweepAxis axis;
    axis.name = spec.substr(0, eq);
    const std::string body = spec.substr(eq + 1);
    const auto parse_num = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("--sweep " + axis.name + ": '" + s + "' is not a number");
        }
        if (used != s.size()) {
            throw std::invalid_argument("--sweep " + axis.name + ": '" + s + "' is not a number");
        }
        return v;
    };
    if (body.find(':') != std::string::npos) {
        std::stringstream ss(body);
        std::string lo, hi, steps;
        if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') ||
            !std::getline(ss, steps, ':') || !ss.eof()) {
            throw std::invalid_argument("--sweep range form is name=min:max:steps");
        }
        const double vlo = parse_num(lo);
        const double vhi = parse_num(hi);
        const int n = std::stoi(steps);
        if (n < 1) throw std::invalid_argument("--sweep: steps must be at least 1");
        if (n == 1) {
            axis.values.push_back(vlo);
        } else {
            for (int k = 0; k < n; ++k) {
                axis.values.push_back(vlo + (vhi - vlo) * k / (n - 1));
            }
        }
    } else {
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) axis.values.push_back(parse_num(item));
        if (axis.values.empty()) throw std::invalid_argument("--sweep: empty value list");
    }
    return axis;
}

struct SweepArgs {
    std::string model_spec;
    std::vector<std::string> params;
    std::vector<std::string> sweeps;
    std::string out_path;
    double eps_re = -1.0, eps_im = -1.0;
    int jobs = 1;
};

int run_sweep(const SweepArgs& args) {
    if (args.model_spec.rfind("builtin:", 0) != 0) {
        throw std::invalid_argument("sweep needs a builtin model so parameters can vary");
    }
    if (args.sweeps.empty() || args.sweeps.size() > 2) {
        throw std::invalid_argument("sweep takes one or two --sweep axes");
    }
    if (args.jobs < 1) throw std::invalid_argument("--jobs must be at least 1");

    const std::string name = args.model_spec.substr(8);
    const zoo::ZooEntry* entry = zoo::find_entry(name);
    if (!entry) throw std::invalid_argument("unknown builtin '" + name + "'");
    const zoo::ParamMap base = parse_param_flags(args.params);

    std::vector<SweepAxis> axes;
    for (const std::string& spec : args.sweeps) axes.push_back(parse_sweep(spec));
    for (const SweepAxis& axis : axes) {
        zoo::ParamMap probe = base;
        probe[axis.name] = axis.values.front();
        zoo::resolve_params(*entry, probe);  // throws on unknown names
    }

    struct Point {
        std::vector<double> coords;
    };
    std::vector<Point> grid;
    if (axes.size() == 1) {
        for (double v : axes[0].values) grid.push_back({{v}});
    } else {
        for (double v1 : axes[0].values) {
            for (double v2 : axes[1].values) grid.push_back({{v1, v2}});
        }
    }

    std::vector<std::string> rows(grid.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= grid.size()) return;
            std::string row;
            for (std::size_t a = 0; a < axes.size(); ++a) {
                row += format_sig17(grid[k].coords[a]);
                row += ',';
            }
            try {
                zoo::ParamMap params = base;
                for (std::size_t a = 0; a < axes.size(); ++a) {
                    params[axes[a].name] = grid[k].coords[a];
                }
                const LindbladModel model = entry->build(zoo::resolve_params(*entry, params));
                const Spectrum spec = spectrum(model, args.eps_re, args.eps_im);
                row += std::to_string(count_classes(spec).oscillatory);
                row += ',';
                row += format_sig17(max_im_on_axis(spec));
            } catch (const std::exception&) {
                row += "error,error";
            }
            row += '\n';
            rows[k] = std::move(row);
        }
    };

    const std::size_t nthreads =
        std::min<std::size_t>(static_cast<std::size_t>(args.jobs), grid.size());
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::string text = axes[0].name;
    if (axes.size() == 2) {
        text += ',';
        text += axes[1].name;
    }
    text += ",n_oscillatory,max_im_on_axis\n";
    for (const std::string& row : rows) text += row;

    bool on_stdout = false;
    write_text(args.out_path, text, on_stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lindblad eigenspectra, oscillatory-mode structure, and dynamics"};
    app.require_subcommand(1);

    SpectrumArgs spectrum_args;
    CLI::App* sp = app.add_subcommand("spectrum", "Classify the full eigenvalue spectrum");
    sp->add_option("--model", spectrum_args.model_spec, "Model file or builtin:<name>")
        ->required();
    sp->add_option("--param", spectrum_args.params, "Override a model parameter, name=value");
    sp->add_option("--out", spectrum_args.out_path, "Output path (default: stdout)");
    sp->add_option("--format", spectrum_args.format, "csv or json");
    sp->add_option("--eps-re", spectrum_args.eps_re, "Real-axis classification width");
    sp->add_option("--eps-im", spectrum_args.eps_im, "Imaginary-axis classification width");

    EvolveArgs evolve_args;
    CLI::App* ev = app.add_subcommand("evolve", "Integrate dynamics and report fidelity");
    ev->add_option("--model", evolve_args.model_spec, "Model file or builtin:<name>")->required();
    ev->add_option("--param", evolve_args.params, "Override a model parameter, name=value");
    ev->add_option("--out", evolve_args.out_path, "Output path (default: stdout)");
    ev->add_option("--state", evolve_args.state, "Named initial state or a JSON matrix file")
        ->required();
    ev->add_option("--t-end", evolve_args.t_end, "Final time")->required();
    ev->add_option("--t-samples", evolve_args.t_samples, "Number of sample points");
    ev->add_option("--dt", evolve_args.dt, "Integrator step size");
    ev->add_option("--method", evolve_args.method, "expansion, rk4 or crosscheck");

    CheckArgs check_args;
    CLI::App* ck = app.add_subcommand("check", "Verify block structure and build modes");
    ck->add_option("--model", check_args.model_spec, "Model file or builtin:<name>")->required();
    ck->add_option("--param", check_args.params, "Override a model parameter, name=value");
    ck->add_option("--out", check_args.out_path, "Output path (default: stdout)");
    ck->add_option("--partition", check_args.partition_path, "Partition JSON file");
    ck->add_option("--discover", check_args.discover_spec,
                   "Search for a partition, optionally seed=<n>,trials=<n>")
        ->expected(0, 1);
    ck->add_option("--seed", check_args.seed, "Random seed for discovery");
    ck->add_option("--trials", check_args.trials, "Discovery attempts");
    ck->add_option("--tol", check_args.tol, "Verification tolerance");

    DfsArgs dfs_args;
    CLI::App* df = app.add_subcommand("dfs", "Find subspaces the dissipators leave alone");
    df->add_option("--model", dfs_args.model_spec, "Model file or builtin:<name>")->required();
    df->add_option("--param", dfs_args.params, "Override a model parameter, name=value");
    df->add_option("--out", dfs_args.out_path, "Output path (default: stdout)");
    df->add_option("--tol", dfs_args.tol, "Subspace tolerance");

    SweepArgs sweep_args;
    CLI::App* sw = app.add_subcommand("sweep", "Scan parameters and count oscillatory modes");
    sw->add_option("--model", sweep_args.model_spec, "builtin:<name>")->required();
    sw->add_option("--param", sweep_args.params, "Fix a model parameter, name=value");
    sw->add_option("--sweep", sweep_args.sweeps,
                   "Axis as name=min:max:steps or name=v1,v2,... (up to two)");
    sw->add_option("--out", sweep_args.out_path, "Output path (default: stdout)");
    sw->add_option("--eps-re", sweep_args.eps_re, "Real-axis classification width");
    sw->add_option("--eps-im", sweep_args.eps_im, "Imaginary-axis classification width");
    sw->add_option("--jobs", sweep_args.jobs, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    check_args.discover = ck->count("--discover") > 0;
    check_args.seed_given = ck->count("--seed") > 0;

    try {
        if (sp->parsed()) return run_spectrum(spectrum_args);
        if (ev->parsed()) return run_evolve(evolve_args);
        if (ck->parsed()) return run_check(check_args);
        if (df->parsed()) return run_dfs(dfs_args);
        if (sw->parsed()) return run_sweep(sweep_args);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
