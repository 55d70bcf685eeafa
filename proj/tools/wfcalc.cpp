// wfcalc: command-line front end for the waste-factor library.

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"
#include "wastefactor/config.hpp"

namespace {

std::optional<std::uint64_t> seed_from_env() {
    const char* raw = std::getenv("WF_SEED");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    const std::string s(raw);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw wfcalc::UsageError("WF_SEED must be a non-negative integer, got '" + s + "'");
    }
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Waste factor calculator: cascades, system sweeps, fits, metrics and network simulation"};
    app.require_subcommand(1);

    // Formats are parsed as text so usage errors list the plain choices.
    std::string format_text = "csv";
    std::string fit_format_text = "json";
    std::string path;
    wfcalc::SimulateOptions sim;

    auto add_format = [&](CLI::App* sub, std::string* target) {
        sub->add_option("--format", *target, "Output format")
            ->check(CLI::IsMember({"csv", "json"}, CLI::ignore_case))
            ->capture_default_str();
    };

    auto* cascade = app.add_subcommand("cascade", "Power flow through [stage] sections and/or the [ru]/[ue] chains");
    cascade->add_option("config", path, "Config file")->required();
    add_format(cascade, &format_text);

    auto* system = app.add_subcommand("system", "System waste figure versus channel loss for four hardware strategies");
    system->add_option("config", path, "Config file")->required();
    add_format(system, &format_text);

    auto* fit = app.add_subcommand("fit", "Fit W and non-path power to a total-vs-signal power log");
    fit->add_option("csv", path, "Power log CSV")->required();
    add_format(fit, &fit_format_text);

    auto* metrics = app.add_subcommand("metrics", "Standard EE metrics, W and strategy quadrants");
    metrics->add_option("config", path, "Config file")->required();
    add_format(metrics, &format_text);

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo campaign over frequency, antenna mode and BS count");
    simulate->add_option("config", path, "Config file")->required();
    simulate->add_option("--seeds", sim.seeds, "Drops per grid cell")->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--jobs", sim.jobs, "Worker threads (0 = logical cores)")->check(CLI::NonNegativeNumber);
    simulate->add_option("--out", sim.out_dir, "Directory for drops.csv and aggregate.csv")->capture_default_str();
    simulate->add_option("--format", format_text, "Output format (csv only)")
        ->check(CLI::IsMember({"csv"}, CLI::ignore_case))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto to_format = [](const std::string& text) {
        return CLI::detail::to_lower(text) == "json" ? wfcalc::Format::Json : wfcalc::Format::Csv;
    };
    const wfcalc::Format format = to_format(format_text);
    const wfcalc::Format fit_format = to_format(fit_format_text);

    try {
        if (app.got_subcommand(cascade)) return wfcalc::cmd_cascade(path, format, std::cout);
        if (app.got_subcommand(system)) return wfcalc::cmd_system(path, format, std::cout);
        if (app.got_subcommand(fit)) return wfcalc::cmd_fit(path, fit_format, std::cout);
        if (app.got_subcommand(metrics)) return wfcalc::cmd_metrics(path, format, std::cout);
        if (app.got_subcommand(simulate)) {
            sim.seed_override = seed_from_env();
            return wfcalc::cmd_simulate(path, sim, std::cout);
        }
    } catch (const wastefactor::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const wfcalc::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
