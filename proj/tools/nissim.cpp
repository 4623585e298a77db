// nissim: run, validate and batch-judge switched-LAN immune-layer simulations.
//
// Exit codes: 0 = success / every verdict as expected
//             1 = an attack scenario deviated from its expected verdict
//             2 = configuration or I/O problem

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <vector>

#include "CLI11.hpp"

#include "nis/scenario.hpp"

namespace fs = std::filesystem;

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> duration;
    std::optional<std::uint32_t> drop_threshold;
    std::string trace_path;
    std::string metrics_path;
};

void add_override_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--seed", o.seed, "override the configured RNG seed");
    cmd->add_option("--duration", o.duration, "override the configured run length (ticks)");
    cmd->add_option("--drop-threshold", o.drop_threshold,
                    "override the server's report threshold for port shutdown");
}

// re-parses the mutated document so overrides face the same validation as
// hand-written configs
nis::ScenarioConfig load_with_overrides(const std::string& path, const Overrides& o) {
    nis::ScenarioConfig cfg = nis::load_config(path);
    cfg.seed = o.seed.value_or(cfg.seed);
    cfg.duration = o.duration.value_or(cfg.duration);
    cfg.timers.drop_threshold = o.drop_threshold.value_or(cfg.timers.drop_threshold);
    if (!o.trace_path.empty()) cfg.outputs.trace = o.trace_path;
    if (!o.metrics_path.empty()) cfg.outputs.metrics = o.metrics_path;
    return nis::parse_config(cfg.to_json());
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write '" << path << "'\n";
        return false;
    }
    out << content;
    return true;
}

std::string tick_or_dash(const std::optional<nis::Tick>& t) {
    return t ? std::to_string(*t) : "-";
}

int write_outputs(const nis::ScenarioConfig& cfg, const std::string& trace_jsonl,
                  const nis::Json& metrics) {
    if (!cfg.outputs.trace.empty() && !write_file(cfg.outputs.trace, trace_jsonl)) return 2;
    if (!cfg.outputs.metrics.empty() &&
        !write_file(cfg.outputs.metrics, metrics.dump(2) + "\n"))
        return 2;
    return 0;
}

int run_one(const nis::ScenarioConfig& cfg) {
    if (cfg.scenario) {
        nis::ScenarioResult r = nis::run_scenario(cfg);
        if (int rc = write_outputs(cfg, r.trace_jsonl, r.metrics)) return rc;
        std::cout << "scenario " << cfg.scenario->id << ": verdict=" << r.verdict
                  << " expected=" << r.expected_verdict
                  << (r.as_expected ? "" : "  <-- DEVIATION") << "\n";
        std::cout << "  attack frames sent=" << r.outcome.frames_sent
                  << " dropped=" << r.outcome.frames_dropped
                  << " captured=" << r.outcome.frames_delivered_to_attacker
                  << " reports=" << r.outcome.reports_generated
                  << " port_shut_at=" << tick_or_dash(r.outcome.port_shut_at)
                  << " cache_poisoned=" << (r.outcome.victim_cache_poisoned ? "yes" : "no");
        if (r.outcome.window_ticks)
            std::cout << " window_ticks=" << *r.outcome.window_ticks;
        std::cout << "\n";
        return r.as_expected ? 0 : 1;
    }

    auto sim = nis::build_simulation(cfg);
    sim->finish(cfg.duration - 1);
    nis::Json metrics = nis::compute_metrics(sim->trace(), cfg.to_json());
    if (int rc = write_outputs(cfg, sim->trace().to_jsonl(), metrics)) return rc;
    const auto& frames = metrics["frames"];
    std::cout << "run complete: " << metrics["total_ticks"] << " ticks, "
              << frames["delivered_honest"] << "/" << frames["sent_honest"]
              << " data frames delivered (rate "
              << metrics["delivery_rate"].get<double>() << "), downtime "
              << metrics["downtime_fraction"].get<double>() << ", conservation "
              << (metrics["conservation"]["holds"].get<bool>() ? "holds" : "BROKEN") << "\n";
    return 0;
}

int do_validate(const std::string& path) {
    nis::ScenarioConfig cfg = nis::load_config(path); // throws on any problem
    std::cout << "valid: " << cfg.topo.hosts.size() << " host(s), "
              << cfg.topo.ports << " port(s)"
              << (cfg.topo.attacker ? ", attacker present" : "") << ", duration "
              << cfg.duration;
    if (cfg.scenario) std::cout << ", scenario " << cfg.scenario->id;
    std::cout << "\n";
    return 0;
}

int do_matrix(const std::string& dir, const Overrides& o, const std::string& json_out) {
    std::error_code ec;
    fs::directory_iterator it(dir, ec);
    if (ec) {
        std::cerr << "error: cannot read directory '" << dir << "': " << ec.message() << "\n";
        return 2;
    }
    std::vector<fs::path> files;
    for (const auto& entry : it)
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    struct Row {
        std::string file;
        int id;
        nis::ScenarioResult result;
    };
    std::vector<Row> rows;
    for (const auto& f : files) {
        nis::ScenarioConfig cfg = load_with_overrides(f.string(), o);
        if (!cfg.scenario) continue; // plain configs are not part of the matrix
        rows.push_back({f.filename().string(), cfg.scenario->id, nis::run_scenario(cfg)});
    }
    if (rows.empty()) {
        std::cerr << "error: no scenario configs found in '" << dir << "'\n";
        return 2;
    }

    std::printf("%-20s %3s  %-26s %-26s %6s %9s %10s  %s\n", "CONFIG", "ID", "VERDICT",
                "EXPECTED", "SENT", "CAPTURED", "PORT_SHUT", "STATUS");
    bool all_ok = true;
    for (const auto& row : rows) {
        const auto& r = row.result;
        std::printf("%-20s %3d  %-26s %-26s %6llu %9llu %10s  %s\n", row.file.c_str(), row.id,
                    r.verdict.c_str(), r.expected_verdict.c_str(),
                    static_cast<unsigned long long>(r.outcome.frames_sent),
                    static_cast<unsigned long long>(r.outcome.frames_delivered_to_attacker),
                    tick_or_dash(r.outcome.port_shut_at).c_str(),
                    r.as_expected ? "ok" : "DEVIATION");
        all_ok = all_ok && r.as_expected;
    }
    std::printf("%zu scenario(s), %s\n", rows.size(),
                all_ok ? "all as expected" : "verdict deviation detected");

    if (!json_out.empty()) {
        nis::Json doc = nis::Json::array();
        for (const auto& row : rows) {
            const auto& r = row.result;
            doc.push_back(
                {{"file", row.file},
                 {"id", row.id},
                 {"verdict", r.verdict},
                 {"expected_verdict", r.expected_verdict},
                 {"as_expected", r.as_expected},
                 {"outcome",
                  {{"frames_sent", r.outcome.frames_sent},
                   {"frames_dropped", r.outcome.frames_dropped},
                   {"frames_delivered_to_attacker", r.outcome.frames_delivered_to_attacker},
                   {"reports_generated", r.outcome.reports_generated},
                   {"port_shut_at", r.outcome.port_shut_at ? nis::Json(*r.outcome.port_shut_at)
                                                           : nis::Json(nullptr)},
                   {"victim_cache_poisoned", r.outcome.victim_cache_poisoned},
                   {"window_ticks", r.outcome.window_ticks ? nis::Json(*r.outcome.window_ticks)
                                                           : nis::Json(nullptr)}}}});
        }
        if (!write_file(json_out, doc.dump(2) + "\n")) return 2;
    }
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic simulator of an identifier-rewriting switched LAN "
                 "with registration-based port defense"};
    app.require_subcommand(1);

    std::string config_path;
    std::string matrix_dir;
    std::string json_out;
    Overrides o;

    CLI::App* run = app.add_subcommand("run", "execute one configuration");
    run->add_option("config", config_path, "scenario JSON document")->required();
    add_override_options(run, o);
    run->add_option("--trace", o.trace_path, "write the event log (JSONL) here");
    run->add_option("--metrics", o.metrics_path, "write the metrics document here");

    CLI::App* validate = app.add_subcommand("validate", "check a configuration and exit");
    validate->add_option("config", config_path, "scenario JSON document")->required();

    CLI::App* matrix = app.add_subcommand(
        "attack-matrix", "run every scenario config in a directory and judge the verdicts");
    matrix->add_option("dir", matrix_dir, "directory holding scenario JSON documents")
        ->required();
    add_override_options(matrix, o);
    matrix->add_option("--json", json_out, "write machine-readable results here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2; // --help exits 0; any bad invocation is a config error
    }

    try {
        if (run->parsed()) return run_one(load_with_overrides(config_path, o));
        if (validate->parsed()) return do_validate(config_path);
        return do_matrix(matrix_dir, o, json_out);
    } catch (const nis::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}
