// fdboot: simulate GP samples, run coverage experiments, and compute
// bootstrap confidence bands for functional descriptive statistics.

#include "fdboot/boot.hpp"
#include "fdboot/io.hpp"
#include "fdboot/sim.hpp"
#include "fdboot/stats.hpp"
#include "fdboot/svg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#ifndef FDBOOT_VERSION
#define FDBOOT_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct Common {
    std::string config;
    std::string manifest;
    std::string out;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

struct StatisticOptions {
    std::string statistic = "mean";
    std::string depth = "fm";
    double alpha = 0.5;
    double gamma = 0.05;
    std::string metric = "l2";
    std::string bootstrap = "plain";
    double beta = 0.05;
};

struct GpOptions {
    std::size_t n = 100;
    std::size_t T = 101;
    std::string kernel = "exp";
    double scale = 0.3;
    double amplitude = 1.0;
};

void add_common(CLI::App* cmd, Common& c, bool needs_seed) {
    cmd->add_option("--config", c.config, "key=value file with option defaults");
    cmd->add_option("--manifest", c.manifest, "also append the JSON manifest line to this file");
    cmd->add_option("-o,--out", c.out, "output CSV path (required)");
    if (needs_seed) {
        cmd->add_option("--seed", c.seed, "random seed (default from FDBOOT_SEED, else 1)");
        cmd->add_option("--threads", c.threads, "worker threads, 0 = all cores");
    }
}

void add_statistic(CLI::App* cmd, StatisticOptions& s, bool with_bootstrap) {
    cmd->add_option("--statistic", s.statistic,
                    "mean, variance, median, trimmed, or median-fm / median-radius / trimmed-fm / trimmed-radius");
    cmd->add_option("--depth", s.depth, "depth for median and trimmed: fm or radius");
    cmd->add_option("--alpha", s.alpha, "alpha-radius depth parameter");
    cmd->add_option("--gamma", s.gamma, "trimming proportion");
    cmd->add_option("--metric", s.metric, "l2 or linf");
    if (with_bootstrap) {
        cmd->add_option("--bootstrap", s.bootstrap, "plain or smooth");
        cmd->add_option("--beta", s.beta, "smooth bootstrap noise scale");
    }
}

void add_gp(CLI::App* cmd, GpOptions& g) {
    cmd->add_option("-n,--n", g.n, "curves per sample");
    cmd->add_option("-T,--T", g.T, "grid points on [0, 1]");
    cmd->add_option("--kernel", g.kernel, "exp or brownian");
    cmd->add_option("--scale", g.scale, "exponential kernel length scale");
    cmd->add_option("--amplitude", g.amplitude, "kernel multiplier");
}

fdboot::DepthMethod resolve_depth(const std::string& name, double alpha) {
    if (name == "fm") return fdboot::DepthMethod::fraiman_muniz();
    if (name == "radius") return fdboot::DepthMethod::alpha_radius(alpha);
    throw fdboot::ValidationError(fmt::format("unknown depth '{}' (expected fm or radius)", name));
}

fdboot::StatisticKind resolve_statistic(const StatisticOptions& s) {
    std::string name = s.statistic;
    std::string depth = s.depth;
    if (const auto dash = name.find('-'); dash != std::string::npos) {
        depth = name.substr(dash + 1);
        name = name.substr(0, dash);
    }
    if (name == "mean") return fdboot::StatisticKind::mean();
    if (name == "variance") return fdboot::StatisticKind::variance();
    if (name == "median") return fdboot::StatisticKind::median(resolve_depth(depth, s.alpha));
    if (name == "trimmed") return fdboot::StatisticKind::trimmed_mean(resolve_depth(depth, s.alpha), s.gamma);
    throw fdboot::ValidationError(fmt::format("unknown statistic '{}'", s.statistic));
}

fdboot::GpSpec resolve_gp(const GpOptions& g) {
    return {fdboot::parse_kernel(g.kernel, g.scale), fdboot::make_grid(fdboot::Grid::uniform(g.T)), g.n,
            g.amplitude};
}

std::vector<double> parse_levels(const std::string& text) {
    std::vector<double> levels;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            levels.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw fdboot::InfeasibleParameterError("levels", fmt::format("'{}' is not a number", item));
        }
    }
    return levels;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(const std::string& text) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        try {
            if (colon == std::string::npos) throw std::invalid_argument(item);
            pairs.emplace_back(std::stoul(item.substr(0, colon)), std::stoul(item.substr(colon + 1)));
        } catch (const std::exception&) {
            throw fdboot::InfeasibleParameterError("pairs", fmt::format("'{}' is not B1:B2", item));
        }
    }
    return pairs;
}

fs::path svg_path(const std::string& csv) { return fs::path(csv).replace_extension(".svg"); }

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw fdboot::IoError(fmt::format("cannot open config '{}'", path));
    std::map<std::string, std::string> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw fdboot::ValidationError(fmt::format("config line {}: expected key=value", line_no));
        }
        const auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        values[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
    }
    return values;
}

std::string option_key(const CLI::Option* opt) {
    const auto& longs = opt->get_lnames();
    return longs.empty() ? opt->get_single_name() : longs.front();
}

// Fills options the user left unset: FDBOOT_SEED for --seed, then the config file.
void apply_defaults(CLI::App* cmd, const Common& common) {
    std::map<std::string, std::string> config;
    if (!common.config.empty()) config = read_config(common.config);
    std::map<std::string, bool> known;
    for (CLI::Option* opt : cmd->get_options()) {
        const std::string key = option_key(opt);
        known[key] = true;
        if (opt->count() > 0 || key == "help" || key == "config") continue;
        std::string value;
        if (const char* env = std::getenv("FDBOOT_SEED"); key == "seed" && env != nullptr && *env) {
            value = env;
        } else if (const auto it = config.find(key); it != config.end()) {
            value = it->second;
        } else {
            continue;
        }
        opt->add_result(value);
        opt->run_callback();
    }
    for (const auto& [key, value] : config) {
        if (!known.count(key)) {
            throw fdboot::ValidationError(fmt::format("config key '{}' is not an option of '{}'", key,
                                                      cmd->get_name()));
        }
    }
}

json echo_options(CLI::App* cmd) {
    json echo = json::object();
    for (CLI::Option* opt : cmd->get_options()) {
        const std::string key = option_key(opt);
        if (key == "help" || key == "manifest" || key == "config") continue;
        if (opt->count() > 0) {
            const auto& results = opt->results();
            echo[key] = results.size() == 1 ? json(results.front()) : json(results);
        } else {
            echo[key] = opt->get_default_str();
        }
    }
    return echo;
}

void write_text(const fs::path& path, const std::string& content) { fdboot::write_file(path, content); }

int cmd_simulate(const Common& c, const GpOptions& g, std::vector<std::string>& outputs) {
    const auto spec = resolve_gp(g);
    fdboot::RngStream rng(c.seed, fdboot::stream_id(fdboot::StreamRole::Simulation, 0));
    const auto sample = fdboot::simulate_gp(spec, rng);
    std::ostringstream out;
    fdboot::write_dataset(out, sample, fdboot::default_ids(sample.size()));
    write_text(c.out, out.str());
    outputs.push_back(c.out);
    return kExitOk;
}

fdboot::ExperimentConfig experiment(const Common& c, const GpOptions& g, const StatisticOptions& s,
                                    std::size_t B1, std::size_t B2, std::size_t R, const std::string& levels) {
    fdboot::ExperimentConfig config;
    config.gp = resolve_gp(g);
    config.statistic = resolve_statistic(s);
    config.metric = fdboot::parse_metric(s.metric);
    config.bootstrap = fdboot::parse_bootstrap(s.bootstrap, s.beta);
    config.B1 = B1;
    config.B2 = B2;
    config.R = R;
    config.nominal_levels = levels.empty() ? fdboot::default_levels() : parse_levels(levels);
    config.seed = c.seed;
    config.threads = c.threads;
    fdboot::validate(config);
    return config;
}

std::string coverage_title(const fdboot::ExperimentConfig& config) {
    const std::string depth(fdboot::depth_label(config.statistic));
    return fmt::format("Coverage: {}{}, {}, {} bootstrap, n={}, R={}", fdboot::statistic_label(config.statistic),
                       depth == "none" ? "" : " (" + depth + ")", fdboot::to_string(config.metric),
                       fdboot::to_string(config.bootstrap.kind), config.gp.n, config.R);
}

void emit_table(const Common& c, const fdboot::ExperimentConfig& config, const fdboot::CoverageTable& table,
                std::vector<std::string>& outputs, json& extra) {
    std::ostringstream csv;
    fdboot::write_coverage_csv(csv, table);
    write_text(c.out, csv.str());
    const fs::path svg = svg_path(c.out);
    write_text(svg, fdboot::coverage_svg(table, coverage_title(config)));
    outputs.push_back(c.out);
    outputs.push_back(svg.string());
    extra["degenerate_replications"] = table.degenerate_replications;
    if (table.degenerate_replications > 0) {
        std::cerr << fmt::format("fdboot: warning: {} degenerate replication(s) counted as non-covering\n",
                                 table.degenerate_replications);
    }
}

int cmd_ci(const Common& c, const StatisticOptions& s, const std::string& input, double level, std::size_t B1,
           std::size_t B2, std::vector<std::string>& outputs) {
    const fdboot::Dataset data = fdboot::read_dataset(input);
    const fdboot::BootstrapSpec spec{resolve_statistic(s), fdboot::parse_metric(s.metric),
                                     fdboot::parse_bootstrap(s.bootstrap, s.beta), B1, B2, c.threads};
    if (B1 < 1) throw fdboot::InfeasibleParameterError("B1", "must be at least 1");
    if (!(level > 0.0 && level < 1.0)) {
        throw fdboot::InfeasibleParameterError("level", fmt::format("{} is outside (0, 1)", level));
    }
    fdboot::check_feasible(spec.statistic, data.sample.size());
    const auto bands = fdboot::confidence_band(data.sample, spec, level, {c.seed, 0});
    std::ostringstream csv;
    fdboot::write_band_csv(csv, bands);
    write_text(c.out, csv.str());
    const fs::path svg = svg_path(c.out);
    const std::string depth(fdboot::depth_label(spec.statistic));
    const std::string title =
        fmt::format("{:g}% bands: {}{}, {}", 100.0 * level, fdboot::statistic_label(spec.statistic),
                    depth == "none" ? "" : " (" + depth + ")", fdboot::to_string(spec.metric));
    write_text(svg, fdboot::band_svg(data.sample, bands, title));
    outputs.push_back(c.out);
    outputs.push_back(svg.string());
    return kExitOk;
}

int cmd_depth(const Common& c, const std::string& input, const std::string& method, double alpha,
              const std::string& metric, std::vector<std::string>& outputs) {
    const fdboot::Dataset data = fdboot::read_dataset(input);
    fdboot::DepthMethod depth = resolve_depth(method, alpha);
    depth.metric = fdboot::parse_metric(metric);
    const auto scores = fdboot::compute_depth(data.sample, depth);
    std::ostringstream csv;
    fdboot::write_depth_csv(csv, scores, data.ids);
    write_text(c.out, csv.str());
    outputs.push_back(c.out);
    return kExitOk;
}

void append_manifest(const std::string& path, const std::string& line) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw fdboot::IoError(fmt::format("cannot open manifest '{}'", path));
    out << line << '\n';
    if (!out) throw fdboot::IoError(fmt::format("failed writing manifest '{}'", path));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bootstrap confidence bands for functional descriptive statistics"};
    app.set_version_flag("--version", FDBOOT_VERSION);
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    Common common;
    GpOptions gp;
    StatisticOptions stat;
    std::size_t B1 = 399;
    std::size_t B2 = 399;
    std::size_t R = 200;
    std::string levels;
    std::string pairs = "99:99,99:199,199:99,199:199";
    std::string input;
    double level = 0.95;
    std::string depth_method = "fm";
    double depth_alpha = 0.5;
    std::string depth_metric = "l2";

    auto* simulate = app.add_subcommand("simulate", "write a simulated GP sample as a dataset CSV");
    add_common(simulate, common, true);
    add_gp(simulate, gp);

    auto* coverage = app.add_subcommand("coverage", "Monte Carlo coverage of single and double bootstrap bands");
    add_common(coverage, common, true);
    add_gp(coverage, gp);
    add_statistic(coverage, stat, true);
    coverage->add_option("--B1", B1, "first-level bootstrap samples");
    coverage->add_option("--B2", B2, "second-level samples per first-level sample");
    coverage->add_option("-R,--R", R, "Monte Carlo replications");
    coverage->add_option("--levels", levels, "comma-separated nominal levels (default 0.5,0.55,...,0.95)");

    auto* sensitivity = app.add_subcommand("sensitivity", "coverage over several (B1, B2) pairs");
    add_common(sensitivity, common, true);
    add_gp(sensitivity, gp);
    add_statistic(sensitivity, stat, true);
    sensitivity->add_option("--pairs", pairs, "comma-separated B1:B2 pairs");
    sensitivity->add_option("-R,--R", R, "Monte Carlo replications");
    sensitivity->add_option("--levels", levels, "comma-separated nominal levels");

    auto* ci = app.add_subcommand("ci", "confidence bands for a dataset CSV");
    add_common(ci, common, true);
    add_statistic(ci, stat, true);
    ci->add_option("-i,--input", input, "dataset CSV (required)");
    ci->add_option("--level", level, "confidence level");
    ci->add_option("--B1", B1, "first-level bootstrap samples");
    ci->add_option("--B2", B2, "second-level samples, 0 for the single band only");

    auto* depth = app.add_subcommand("depth", "depth scores and ranks for a dataset CSV");
    add_common(depth, common, false);
    depth->add_option("-i,--input", input, "dataset CSV (required)");
    depth->add_option("--method", depth_method, "fm or radius");
    depth->add_option("--alpha", depth_alpha, "alpha-radius depth parameter");
    depth->add_option("--metric", depth_metric, "distance for alpha-radius depth: l2 or linf");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    CLI::App* cmd = app.get_subcommands().front();
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> outputs;
    json extra = json::object();
    try {
        apply_defaults(cmd, common);
        if (common.out.empty()) throw fdboot::ValidationError("--out is required");
        if ((cmd == ci || cmd == depth) && input.empty()) throw fdboot::ValidationError("--input is required");
        if (cmd == simulate) {
            cmd_simulate(common, gp, outputs);
        } else if (cmd == coverage) {
            const auto config = experiment(common, gp, stat, B1, B2, R, levels);
            emit_table(common, config, fdboot::run_coverage_experiment(config), outputs, extra);
        } else if (cmd == sensitivity) {
            const auto list = parse_pairs(pairs);
            if (list.empty()) throw fdboot::InfeasibleParameterError("pairs", "no (B1, B2) pairs given");
            const auto config = experiment(common, gp, stat, list.front().first, list.front().second, R, levels);
            emit_table(common, config, fdboot::run_sensitivity(config, list), outputs, extra);
        } else if (cmd == ci) {
            cmd_ci(common, stat, input, level, B1, B2, outputs);
        } else {
            cmd_depth(common, input, depth_method, depth_alpha, depth_metric, outputs);
        }

        json manifest;
        manifest["command"] = cmd->get_name();
        manifest["version"] = FDBOOT_VERSION;
        manifest["config"] = echo_options(cmd);
        manifest["outputs"] = outputs;
        for (const auto& [key, value] : extra.items()) manifest[key] = value;
        manifest["wall_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const std::string line = manifest.dump();
        std::cout << line << '\n';
        if (!common.manifest.empty()) append_manifest(common.manifest, line);
    } catch (const fdboot::IoError& e) {
        std::cerr << "fdboot: I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const fdboot::ValidationError& e) {
        std::cerr << "fdboot: error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const CLI::Error& e) {
        std::cerr << "fdboot: error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "fdboot: error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}
