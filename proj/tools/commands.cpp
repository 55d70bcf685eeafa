#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "wastefactor/components.hpp"
#include "wastefactor/config.hpp"
#include "wastefactor/estimate.hpp"
#include "wastefactor/metrics.hpp"
#include "wastefactor/netsim.hpp"

namespace wfcalc {

using nlohmann::ordered_json;
namespace wf = wastefactor;

namespace {

struct Chain {
    std::string name;
    std::vector<wf::Stage> stages;
    double source_power_w = 1.0;
};

std::string num(double v) { return fmt::format("{:.10g}", v); }

// Passive stages consume W*P_out - P_in = 0 exactly in theory; rounding
// leaves residues like -1e-16 that only clutter the report.
wf::CascadeReport power_flow_tidy(const std::vector<wf::Stage>& stages, double p_source_w) {
    wf::CascadeReport rep = wf::power_flow(stages, p_source_w);
    for (auto& s : rep.stages) {
        const double scale = std::max(s.p_in_w, s.p_out_w);
        if (std::abs(s.p_consumed_w) <= 1e-12 * scale) s.p_consumed_w = 0.0;
        if (std::abs(s.p_wasted_w) <= 1e-12 * scale) s.p_wasted_w = 0.0;
    }
    return rep;
}

void write_json(std::ostream& out, const ordered_json& j) { out << j.dump(2) << '\n'; }

ordered_json flow_json(const wf::CascadeReport& rep, const wf::Stage& composite) {
    ordered_json stages = ordered_json::array();
    for (const auto& s : rep.stages) {
        stages.push_back({{"label", s.label},
                          {"p_in_w", s.p_in_w},
                          {"p_out_w", s.p_out_w},
                          {"p_consumed_w", s.p_consumed_w},
                          {"p_wasted_w", s.p_wasted_w}});
    }
    return {{"stages", stages},
            {"total",
             {{"w", composite.w()},
              {"wf_db", composite.wf_db()},
              {"g", composite.g()},
              {"p_source_w", rep.p_source_w},
              {"p_signal_w", rep.p_signal_w},
              {"p_consumed_path_w", rep.p_consumed_path_w},
              {"p_wasted_w", rep.p_wasted_w}}}};
}

}  // namespace

int cmd_cascade(const std::string& config_path, Format format, std::ostream& out) {
    const wf::ConfigDocument doc = wf::load_config(config_path);
    wf::check_config(doc);
    std::vector<Chain> chains;
    const auto explicit_stages = wf::cascade_from(doc);
    if (explicit_stages) {
        chains.push_back(Chain{"cascade", explicit_stages->stages, explicit_stages->source_power_w});
    }
    const bool has_ru = doc.find("ru") != nullptr;
    const bool has_ue = doc.find("ue") != nullptr;
    const auto ru = wf::build_ru(wf::ru_spec_from(doc));
    const auto ue = wf::build_ue(wf::ue_spec_from(doc));
    const double p_src = explicit_stages ? explicit_stages->source_power_w : 1.0;
    if (has_ru) chains.push_back(Chain{"ru", ru.stages, p_src});
    if (has_ue) chains.push_back(Chain{"ue", ue.stages, p_src});
    if (chains.empty()) {
        throw wf::ConfigError(fmt::format("{}: nothing to cascade; add [stage] sections, [ru] or [ue]", doc.source));
    }

    if (format == Format::Json) {
        ordered_json j = ordered_json::array();
        for (const auto& c : chains) {
            const auto rep = power_flow_tidy(c.stages, c.source_power_w);
            ordered_json cj = flow_json(rep, wf::cascade(c.stages, c.name));
            cj["chain"] = c.name;
            j.push_back(cj);
        }
        write_json(out, j);
        return 0;
    }
    out << "chain,label,w,g,p_in_w,p_out_w,p_consumed_w,p_wasted_w\n";
    for (const auto& c : chains) {
        const auto rep = power_flow_tidy(c.stages, c.source_power_w);
        for (std::size_t i = 0; i < c.stages.size(); ++i) {
            const auto& s = rep.stages[i];
            out << fmt::format("{},{},{},{},{},{},{},{}\n", c.name, s.label, num(c.stages[i].w()), num(c.stages[i].g()),
                               num(s.p_in_w), num(s.p_out_w), num(s.p_consumed_w), num(s.p_wasted_w));
        }
        const wf::Stage total = wf::cascade(c.stages, c.name);
        out << fmt::format("{},W={},{},{},{},{},{},{}\n", c.name, num(total.w()), num(total.w()), num(total.g()),
                           num(rep.p_source_w), num(rep.p_signal_w), num(rep.p_consumed_path_w), num(rep.p_wasted_w));
    }
    return 0;
}

int cmd_system(const std::string& config_path, Format format, std::ostream& out) {
    const wf::ConfigDocument doc = wf::load_config(config_path);
    wf::check_config(doc);
    const auto ru = wf::build_ru(wf::ru_spec_from(doc));
    const auto ue = wf::build_ue(wf::ue_spec_from(doc));
    const auto grid = wf::wf_c_grid_from(doc);
    const auto rows = wf::strategy_sweep(ru.stage, ue.stage, grid);

    struct Series {
        const char* name;
        double wf::StrategyRow::*field;
    };
    const Series series[] = {{"baseline", &wf::StrategyRow::baseline_db},
                             {"half_w_ru", &wf::StrategyRow::half_w_ru_db},
                             {"half_w_ue", &wf::StrategyRow::half_w_ue_db},
                             {"double_g_ue", &wf::StrategyRow::double_g_ue_db}};
    if (format == Format::Json) {
        ordered_json j = {{"w_ru", ru.stage.w()}, {"w_ue", ue.stage.w()}, {"g_ue", ue.stage.g()}};
        ordered_json js = ordered_json::array();
        for (const auto& s : series) {
            for (const auto& r : rows) js.push_back({{"strategy", s.name}, {"wf_c_db", r.wf_c_db}, {"wf_system_db", r.*s.field}});
        }
        j["series"] = js;
        write_json(out, j);
        return 0;
    }
    out << "strategy,wf_c_db,wf_system_db\n";
    for (const auto& s : series) {
        for (const auto& r : rows) out << fmt::format("{},{:g},{:.6f}\n", s.name, r.wf_c_db, r.*s.field);
    }
    return 0;
}

int cmd_fit(const std::string& csv_path, Format format, std::ostream& out) {
    std::vector<wf::PowerSample> samples;
    try {
        samples = wf::load_power_log(csv_path);
    } catch (const std::runtime_error& e) {
        throw wf::ConfigError(e.what());
    }
    const wf::WasteFit fit = wf::fit_waste_factor(samples);
    if (format == Format::Csv) {
        out << "w,p_non_path_w,r_squared,n_samples,physical\n";
        out << fmt::format("{},{},{},{},{}\n", num(fit.w), num(fit.p_non_path_w), num(fit.r_squared), fit.n_samples,
                           fit.physical ? "true" : "false");
        return 0;
    }
    ordered_json j = {{"w", fit.w},
                      {"p_non_path_w", fit.p_non_path_w},
                      {"r_squared", fit.r_squared},
                      {"n_samples", fit.n_samples},
                      {"physical", fit.physical}};
    out << j.dump() << '\n';
    return 0;
}

int cmd_metrics(const std::string& config_path, Format format, std::ostream& out) {
    const wf::ConfigDocument doc = wf::load_config(config_path);
    wf::check_config(doc);
    const wf::MetricsInput in = wf::metrics_from(doc);

    struct Row {
        std::string item;
        std::string metric;
        std::string value;
        ordered_json json_value;
    };
    std::vector<Row> rows;
    auto add = [&rows](const std::string& item, const std::string& metric, double v) {
        rows.push_back(Row{item, metric, num(v), v});
    };
    for (const auto& b : in.bs_loads) {
        add(b.name, "energy_wh", b.energy_wh());
        add(b.name, "ee_bs_gb_per_wh", wf::ee_bs(b.data_volume_gb, b.energy_wh()));
        add(b.name, "path_energy_per_gb_wh", b.path_energy_per_gb_wh);
    }
    for (const auto& r : in.readings) {
        add(r.name, "p_consumed_total_w", r.reading.p_consumed_total_w());
        add(r.name, "ee_ru", wf::ee_ru(r.reading));
        if (r.reading.p_signal_w > 0.0) {
            add(r.name, "w", r.reading.waste_factor());
            add(r.name, "p_wasted_w", wf::wasted_power(r.reading.waste_factor(), r.reading.p_signal_w));
        }
        if (r.reading.data_volume_gb) {
            add(r.name, "ee_bs_gb_per_wh",
                wf::ee_bs(*r.reading.data_volume_gb, r.reading.energy_wh(r.reading.p_consumed_total_w())));
        }
    }
    if (in.ee_sweep) {
        const wf::Stage ru(in.ee_sweep->w, 1.0, "ru");
        for (const auto& row : wf::ee_vs_wf_sweep(ru, in.ee_sweep->p_non_path_w, in.ee_sweep->p_signal_w)) {
            const std::string item = fmt::format("ee_sweep@{}W", num(row.p_signal_w));
            add(item, "ee_ru", row.ee_ru);
            add(item, "wf_db", row.wf_db);
        }
    }
    for (const auto& q : in.strategies) {
        const auto s = wf::classify_strategy(q.axis_high, q.w_high, q.figure);
        rows.push_back(Row{q.name, std::string(wf::to_string(q.figure)), std::string(wf::to_string(s)),
                           std::string(wf::to_string(s))});
    }
    if (rows.empty()) {
        throw wf::ConfigError(fmt::format("{}: no [reading], [bs_reading], [ee_sweep] or [strategy] section", doc.source));
    }
    if (format == Format::Json) {
        ordered_json j = ordered_json::array();
        for (const auto& r : rows) j.push_back({{"item", r.item}, {"metric", r.metric}, {"value", r.json_value}});
        write_json(out, j);
        return 0;
    }
    out << "item,metric,value\n";
    for (const auto& r : rows) out << fmt::format("{},{},{}\n", r.item, r.metric, r.value);
    return 0;
}

int cmd_simulate(const std::string& config_path, const SimulateOptions& opts, std::ostream& out) {
    const wf::ConfigDocument doc = wf::load_config(config_path);
    wf::check_config(doc);
    wf::CampaignGrid grid = wf::campaign_from(doc);
    grid.n_seeds = opts.seeds;
    if (opts.seed_override) grid.base.seed = *opts.seed_override;

    const wf::CampaignResult result = wf::run_campaign(grid, opts.jobs);

    const std::filesystem::path dir(opts.out_dir);
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "drops.csv", std::ios::binary);
        if (!f) throw std::runtime_error(fmt::format("cannot write {}", (dir / "drops.csv").string()));
        wf::write_drops_csv(f, result);
    }
    {
        std::ofstream f(dir / "aggregate.csv", std::ios::binary);
        if (!f) throw std::runtime_error(fmt::format("cannot write {}", (dir / "aggregate.csv").string()));
        wf::write_aggregate_csv(f, result);
    }
    wf::write_aggregate_csv(out, result);
    return 0;
}

}  // namespace wfcalc
