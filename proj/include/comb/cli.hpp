#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "comb/oracle.hpp"

namespace comb::cli {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// start:stop:count sweep axis
struct SweepAxis {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;

    std::vector<double> values() const {
        std::vector<double> v(count);
        for (int i = 0; i < count; ++i)
            v[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
        return v;
    }
};

inline SweepAxis parse_sweep(const std::string& text, const std::string& field) {
    SweepAxis ax;
    char extra;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &ax.start, &ax.stop, &ax.count, &extra) != 3)
        throw config_error(field + ": expected start:stop:count, got '" + text + "'");
    if (ax.count < 1) throw config_error(field + ": count must be at least 1");
    return ax;
}

struct RunConfig {
    std::string command;
    std::string model_kind = "ddp";  // ddp | pt | free
    double w0 = 0.0, w1 = 0.0, eps = 0.5, a = 1.0;
    double T = 1.0;
    std::optional<SweepAxis> a_sweep, t_sweep;
    double gamma_angle = constants::pi / 8.0;
    double rel_tol = 1e-8;
    int theta_nodes = 64;
    int n_bands = 3;
    int n_theta = 65;
    bool include_vacuum_part = false;
    std::string output;  // default: <command>.csv
    std::string format = "csv";

    CombModel model() const {
        if (model_kind == "pt") return {a, TruncatedPoschlTeller{eps}};
        if (model_kind == "free") return {a, DeltaDeltaPrime{0.0, 0.0}};
        return {a, DeltaDeltaPrime{w0, w1}};
    }

    ContourSpec contour(double m) const {
        ContourSpec c;
        c.gamma_angle = gamma_angle;
        c.m_offset = m;
        c.quad.rel_tol = rel_tol;
        c.theta_nodes = theta_nodes;
        return c;
    }
};

namespace detail {

// key = value config file, '#' comments; keys match the long flag names
inline std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config file '" + path + "' not readable");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error(path + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = val;
    }
    return kv;
}

inline void apply_file_value(RunConfig& cfg, const std::string& key, const std::string& val) {
    auto num = [&](double& dst) {
        try {
            std::size_t pos = 0;
            dst = std::stod(val, &pos);
            if (pos != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw config_error("config field '" + key + "': '" + val + "' is not a number");
        }
    };
    auto integer = [&](int& dst) {
        try {
            std::size_t pos = 0;
            dst = std::stoi(val, &pos);
            if (pos != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw config_error("config field '" + key + "': '" + val + "' is not an integer");
        }
    };
    if (key == "command") cfg.command = val;
    else if (key == "model") cfg.model_kind = val;
    else if (key == "w0") num(cfg.w0);
    else if (key == "w1") num(cfg.w1);
    else if (key == "eps") num(cfg.eps);
    else if (key == "a") num(cfg.a);
    else if (key == "T") num(cfg.T);
    else if (key == "a-sweep") cfg.a_sweep = parse_sweep(val, "a-sweep");
    else if (key == "T-sweep") cfg.t_sweep = parse_sweep(val, "T-sweep");
    else if (key == "gamma-angle") num(cfg.gamma_angle);
    else if (key == "rel-tol") num(cfg.rel_tol);
    else if (key == "theta-nodes") integer(cfg.theta_nodes);
    else if (key == "n-bands") integer(cfg.n_bands);
    else if (key == "n-theta") integer(cfg.n_theta);
    else if (key == "include-vacuum-part") cfg.include_vacuum_part = (val == "true" || val == "1");
    else if (key == "output") cfg.output = val;
    else if (key == "format") cfg.format = val;
    else throw config_error("config field '" + key + "' is not recognised");
}

}  // namespace detail

inline void validate(const RunConfig& cfg) {
    static const std::vector<std::string> commands{
        "bands", "casimir", "free-energy", "entropy", "pressure", "sweep", "verify"};
    if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end())
        throw config_error("command must be one of bands, casimir, free-energy, entropy, "
                           "pressure, sweep, verify");
    if (cfg.model_kind != "ddp" && cfg.model_kind != "pt" && cfg.model_kind != "free")
        throw config_error("model: expected 'ddp', 'pt' or 'free'");
    if (!(cfg.a > 0.0)) throw config_error("a: lattice spacing must be positive");
    if (cfg.model_kind == "ddp" && std::abs(std::abs(cfg.w1) - 1.0) < 1e-12)
        throw config_error(
            "w1 = +-1 makes the node fully opaque: the transmission amplitude vanishes "
            "identically, so the Bloch discriminant h_V = (e^{-ika} + e^{ika} det S)/(2t) "
            "is undefined and the band analysis breaks down; choose |w1| != 1");
    if (cfg.model_kind == "pt") {
        if (!(cfg.eps > 0.0)) throw config_error("eps: potential support must be positive");
        if (cfg.eps > cfg.a)
            throw config_error("eps: the potential support must fit inside the unit cell "
                               "(eps <= a)");
    }
    if (!(cfg.gamma_angle > 0.0 && cfg.gamma_angle < constants::pi / 4.0))
        throw config_error("gamma-angle: contour angle must lie strictly inside (0, pi/4)");
    if (!(cfg.rel_tol > 0.0)) throw config_error("rel-tol must be positive");
    if (cfg.theta_nodes < 4) throw config_error("theta-nodes must be at least 4");
    if (cfg.n_bands < 1) throw config_error("n-bands must be at least 1");
    if (cfg.n_theta < 2) throw config_error("n-theta must be at least 2");
    if (!(cfg.T > 0.0)) throw config_error("T must be positive");
    if (cfg.command == "sweep" && !cfg.a_sweep && !cfg.t_sweep)
        throw config_error("sweep: at least one of --a-sweep / --T-sweep is required");
    if (cfg.format != "csv" && cfg.format != "json")
        throw config_error("format: expected 'csv' or 'json'");
    for (const auto& [ax, name] :
         {std::pair{cfg.a_sweep, "a-sweep"}, std::pair{cfg.t_sweep, "T-sweep"}}) {
        if (!ax) continue;
        if (!(ax->start > 0.0) || !(ax->stop > 0.0))
            throw config_error(std::string(name) + ": values must be positive");
    }
}

// Flags override config-file values; the file itself is plain key = value.
inline RunConfig parse_config(const std::vector<std::string>& args) {
    RunConfig cfg;

    // first pass: locate --config and apply the file as defaults
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw config_error("--config: missing file path");
            for (const auto& [k, v] : detail::read_config_file(args[i + 1]))
                detail::apply_file_value(cfg, k, v);
        }
    }

    CLI::App app{"band spectra and Casimir thermodynamics of comb potentials"};
    app.require_subcommand(0, 1);
    app.fallthrough();
    std::string cfg_path, a_sweep_text, t_sweep_text;
    app.add_option("--config", cfg_path, "key = value config file; flags override it");
    app.add_option("--model", cfg.model_kind, "node potential: ddp | pt | free");
    app.add_option("--w0", cfg.w0, "delta coupling w0");
    app.add_option("--w1", cfg.w1, "delta' coupling w1");
    app.add_option("--eps", cfg.eps, "PT support width");
    app.add_option("--a", cfg.a, "lattice spacing");
    app.add_option("--T", cfg.T, "temperature");
    app.add_option("--a-sweep", a_sweep_text, "spacing sweep start:stop:count");
    app.add_option("--T-sweep", t_sweep_text, "temperature sweep start:stop:count");
    app.add_option("--gamma-angle", cfg.gamma_angle, "contour rotation angle, in (0, pi/4)");
    app.add_option("--rel-tol", cfg.rel_tol, "quadrature relative tolerance");
    app.add_option("--theta-nodes", cfg.theta_nodes, "Gauss-Legendre nodes per theta panel");
    app.add_option("--n-bands", cfg.n_bands, "number of bands (bands command)");
    app.add_option("--n-theta", cfg.n_theta, "theta grid points (bands command)");
    app.add_flag("--include-vacuum-part", cfg.include_vacuum_part,
                 "add the T = 0 part to the pressure");
    app.add_option("--output", cfg.output, "output file (default <command>.csv)");
    app.add_option("--format", cfg.format, "csv | json");
    for (const char* name :
         {"bands", "casimir", "free-energy", "entropy", "pressure", "sweep", "verify"})
        app.add_subcommand(name);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        throw config_error(e.what());
    }
    for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    if (!a_sweep_text.empty()) cfg.a_sweep = parse_sweep(a_sweep_text, "a-sweep");
    if (!t_sweep_text.empty()) cfg.t_sweep = parse_sweep(t_sweep_text, "T-sweep");
    if (cfg.output.empty()) cfg.output = cfg.command + "." + cfg.format;
    validate(cfg);
    return cfg;
}

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline void write_table(const Table& t, const RunConfig& cfg) {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw config_error("cannot open output file '" + cfg.output + "'");
    if (cfg.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : t.rows) {
            nlohmann::json row;
            for (std::size_t i = 0; i < t.header.size(); ++i) row[t.header[i]] = r[i];
            rows.push_back(row);
        }
        out << rows.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < t.header.size(); ++i)
            out << (i ? "," : "") << t.header[i];
        out << "\n";
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
            out << "\n";
        }
    }
}

// JSON sidecar with the fully resolved configuration, for provenance
inline void write_sidecar(const RunConfig& cfg) {
    nlohmann::json j;
    j["command"] = cfg.command;
    j["model"] = cfg.model_kind;
    if (cfg.model_kind == "ddp") {
        j["w0"] = cfg.w0;
        j["w1"] = cfg.w1;
    } else if (cfg.model_kind == "pt") {
        j["eps"] = cfg.eps;
    }
    j["a"] = cfg.a;
    j["T"] = cfg.T;
    if (cfg.a_sweep)
        j["a_sweep"] = {{"start", cfg.a_sweep->start},
                        {"stop", cfg.a_sweep->stop},
                        {"count", cfg.a_sweep->count}};
    if (cfg.t_sweep)
        j["T_sweep"] = {{"start", cfg.t_sweep->start},
                        {"stop", cfg.t_sweep->stop},
                        {"count", cfg.t_sweep->count}};
    j["gamma_angle"] = cfg.gamma_angle;
    j["rel_tol"] = cfg.rel_tol;
    j["theta_nodes"] = cfg.theta_nodes;
    j["include_vacuum_part"] = cfg.include_vacuum_part;
    j["output"] = cfg.output;
    j["format"] = cfg.format;
    std::ofstream out(cfg.output + ".config.json", std::ios::binary);
    out << j.dump(2) << "\n";
}

inline int worker_count() {
    if (const char* env = std::getenv("COMB_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

// fan work items out to COMB_WORKERS threads; results land in input order
template <class Out, class Fn>
std::vector<Out> parallel_map(std::size_t n, Fn&& fn) {
    std::vector<Out> out(n);
    const int workers = std::min<std::size_t>(worker_count(), n == 0 ? 1 : n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

inline Table run_bands(const RunConfig& cfg) {
    const auto bs = band_structure(cfg.model(), cfg.n_bands, cfg.n_theta);
    Table t;
    t.header = {"theta", "band_index", "k", "E", "error_estimate"};
    for (const auto& band : bs.bands)
        for (std::size_t j = 0; j < band.theta.size(); ++j)
            t.rows.push_back({fmt(band.theta[j]), std::to_string(band.index), fmt(band.k[j]),
                              fmt(band.energy[j]), fmt(1e-12)});
    return t;
}

inline Table run_casimir(const RunConfig& cfg) {
    const std::vector<double> as = cfg.a_sweep ? cfg.a_sweep->values()
                                               : std::vector<double>{cfg.a};
    Table t;
    t.header = {"a", "E0_per_area", "bound_part", "contour_part", "im_residue",
                "error_estimate"};
    auto rows = parallel_map<std::vector<std::string>>(as.size(), [&](std::size_t i) {
        CombModel mdl = cfg.model();
        mdl.a = as[i];
        const auto res = casimir_energy(mdl, cfg.contour(mass(mdl)));
        return std::vector<std::string>{fmt(as[i]), fmt(res.e0_per_area), fmt(res.bound_part),
                                        fmt(res.contour_part), fmt(res.im_residue),
                                        fmt(res.quad_error)};
    });
    t.rows = std::move(rows);
    return t;
}

inline Table run_thermo_scalar(const RunConfig& cfg) {
    const std::vector<double> ts = cfg.t_sweep ? cfg.t_sweep->values()
                                               : std::vector<double>{cfg.T};
    const CombModel mdl = cfg.model();
    const ContourSpec contour = cfg.contour(mass(mdl));
    Table t;
    t.header = {"T", "value", "error_estimate"};
    auto rows = parallel_map<std::vector<std::string>>(ts.size(), [&](std::size_t i) {
        double err = 0.0, val = 0.0;
        if (cfg.command == "free-energy") {
            val = delta_f(mdl, ts[i], contour, &err);
        } else if (cfg.command == "entropy") {
            delta_f(mdl, ts[i], contour, &err);
            val = entropy(mdl, ts[i], contour);
        } else {
            delta_f(mdl, ts[i], contour, &err);
            val = pressure(mdl, ts[i], contour, cfg.include_vacuum_part);
        }
        return std::vector<std::string>{fmt(ts[i]), fmt(val), fmt(err)};
    });
    t.rows = std::move(rows);
    return t;
}

inline Table run_sweep(const RunConfig& cfg) {
    const std::vector<double> as = cfg.a_sweep ? cfg.a_sweep->values()
                                               : std::vector<double>{cfg.a};
    const std::vector<double> ts = cfg.t_sweep ? cfg.t_sweep->values()
                                               : std::vector<double>{cfg.T};
    Table t;
    t.header = {"a", "T", "delta_f_per_area", "entropy_per_area", "pressure",
                "error_estimate"};
    const std::size_t n = as.size() * ts.size();
    auto rows = parallel_map<std::vector<std::string>>(n, [&](std::size_t i) {
        const double a = as[i / ts.size()];
        const double T = ts[i % ts.size()];
        CombModel mdl = cfg.model();
        mdl.a = a;
        const auto p = thermo_point(mdl, T, cfg.contour(mass(mdl)), cfg.include_vacuum_part);
        return std::vector<std::string>{fmt(a), fmt(T), fmt(p.delta_f_per_area),
                                        fmt(p.entropy_per_area), fmt(p.pressure),
                                        fmt(p.quad_error)};
    });
    t.rows = std::move(rows);
    return t;
}

inline Table run_verify(const RunConfig& cfg, bool& all_pass) {
    const CombModel mdl = cfg.model();
    Table t;
    t.header = {"check", "residual", "threshold", "status"};
    auto row = [&](const std::string& name, double residual, double threshold) {
        const bool ok = residual < threshold;
        all_pass = all_pass && ok;
        t.rows.push_back({name, fmt(residual), fmt(threshold), ok ? "pass" : "FAIL"});
    };

    double uni = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double k = 1e-2 * std::pow(50.0 / 1e-2, i / 199.0);
        const auto amp = amplitudes(mdl, {k, 0.0});
        uni = std::max(uni, std::abs(std::norm(amp.t) + std::norm(amp.r_R) - 1.0));
        uni = std::max(uni, std::abs(std::abs(det_s(mdl, {k, 0.0})) - 1.0));
    }
    row("scattering_unitarity", uni, 1e-10);

    if (mdl.is_pt()) {
        const double eps = std::get<TruncatedPoschlTeller>(mdl.potential).eps;
        double worst = 0.0;
        for (double k : {0.5, 1.0, 2.0, 5.0}) {
            const auto ode = oracle::transfer_matrix_amplitudes(eps, k);
            const auto cf = amplitudes(mdl, {k, 0.0});
            worst = std::max(worst, std::abs(ode.t - cf.t) / std::abs(cf.t));
        }
        row("closed_form_vs_ode", worst, 1e-6);
    }

    {
        // dispersion roots against the algebraic discriminant at theta = pi/2
        const auto main_roots = dispersion(mdl, constants::pi / 2.0, 3);
        auto f = [&](double k) {
            return -oracle::discriminant_real(mdl, k);
        };
        const auto scan = oracle::dense_scan_roots(f, 1e-4, 5.0 * constants::pi / mdl.a,
                                                   constants::pi / (4000.0 * mdl.a));
        double worst = 0.0;
        for (std::size_t i = 0; i < main_roots.size() && i < scan.size(); ++i)
            worst = std::max(worst, std::abs(main_roots[i] - scan[i]));
        row("dispersion_vs_scan", worst, 1e-9);
    }

    {
        const double m = mass(mdl);
        const double cf = delta_f(mdl, 1.0, cfg.contour(m));
        const double bs = oracle::band_sum_free_energy(mdl, 1.0, 14);
        row("delta_f_vs_band_sum", std::abs(cf - bs) / std::abs(bs), 1e-4);
    }
    return t;
}

}  // namespace detail

// Executes the configured command; returns a process exit status.
inline int run(const RunConfig& cfg, std::ostream& log) {
    try {
        detail::Table t;
        bool all_pass = true;
        if (cfg.command == "bands") t = detail::run_bands(cfg);
        else if (cfg.command == "casimir") t = detail::run_casimir(cfg);
        else if (cfg.command == "sweep") t = detail::run_sweep(cfg);
        else if (cfg.command == "verify") t = detail::run_verify(cfg, all_pass);
        else t = detail::run_thermo_scalar(cfg);
        detail::write_table(t, cfg);
        detail::write_sidecar(cfg);
        log << cfg.command << ": wrote " << t.rows.size() << " rows to " << cfg.output << "\n";
        if (cfg.command == "verify" && !all_pass) {
            log << "verify: residuals above threshold\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = e.what();
        err["command"] = cfg.command;
        log << err.dump() << "\n";
        return 1;
    }
}

}  // namespace comb::cli
