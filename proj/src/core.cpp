#include "wastefactor/core.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "wastefactor/units.hpp"

namespace wastefactor {

Stage::Stage(double w, double g, std::string label) : w_(w), g_(g), label_(std::move(label)) {
    if (!std::isfinite(w) || !(w >= 1.0)) {
        throw std::invalid_argument(fmt::format("stage '{}': waste factor must be finite and >= 1, got {}", label_, w));
    }
    if (!std::isfinite(g) || !(g > 0.0)) {
        throw std::invalid_argument(fmt::format("stage '{}': gain must be finite and > 0, got {}", label_, g));
    }
}

Stage Stage::passive(double loss, std::string label) {
    if (!std::isfinite(loss) || !(loss >= 1.0)) {
        throw std::invalid_argument(fmt::format("passive stage '{}': loss must be >= 1 (0 dB), got {}", label, loss));
    }
    return Stage(loss, 1.0 / loss, std::move(label));
}

Stage Stage::passive_db(double loss_db, std::string label) {
    if (!(loss_db >= 0.0)) {
        throw std::invalid_argument(fmt::format("passive stage '{}': loss must be >= 0 dB, got {}", label, loss_db));
    }
    return passive(db_to_linear(loss_db), std::move(label));
}

double Stage::wf_db() const { return linear_to_db(w_); }
double Stage::gain_db() const { return linear_to_db(g_); }

Stage cascade(std::span<const Stage> stages, std::string label) {
    if (stages.empty()) {
        throw std::invalid_argument("cascade: stage list is empty");
    }
    // Fold source-first: appending stage b to a composite a gives
    // W = W_b + (W_a - 1) / G_b, G = G_a G_b.
    double w = stages.front().w();
    double g = stages.front().g();
    for (std::size_t i = 1; i < stages.size(); ++i) {
        const Stage& s = stages[i];
        w = s.w() + (w - 1.0) / s.g();
        g *= s.g();
    }
    return Stage(w, g, std::move(label));
}

Stage cascade(std::initializer_list<Stage> stages, std::string label) {
    return cascade(std::span<const Stage>(stages.begin(), stages.size()), std::move(label));
}

CascadeReport power_flow(std::span<const Stage> stages, double p_source_w) {
    if (stages.empty()) {
        throw std::invalid_argument("power_flow: stage list is empty");
    }
    if (!(p_source_w > 0.0) || !std::isfinite(p_source_w)) {
        throw std::invalid_argument(fmt::format("power_flow: source power must be > 0 W, got {}", p_source_w));
    }
    CascadeReport report;
    report.p_source_w = p_source_w;
    report.stages.reserve(stages.size());

    double p_in = p_source_w;
    double consumed = 0.0;
    double wasted = 0.0;
    for (const Stage& s : stages) {
        StageFlow flow;
        flow.label = s.label();
        flow.p_in_w = p_in;
        flow.p_out_w = p_in * s.g();
        flow.p_consumed_w = s.w() * flow.p_out_w - p_in;
        flow.p_wasted_w = (s.w() - 1.0) * flow.p_out_w;
        consumed += flow.p_consumed_w;
        wasted += flow.p_wasted_w;
        p_in = flow.p_out_w;
        report.stages.push_back(std::move(flow));
    }
    report.p_signal_w = p_in;
    report.p_consumed_path_w = consumed + p_source_w;
    report.p_wasted_w = wasted;
    report.w = report.p_consumed_path_w / report.p_signal_w;
    report.g = report.p_signal_w / p_source_w;
    return report;
}

double wasted_power(double w, double p_signal_w) {
    if (!(w >= 1.0)) {
        throw std::invalid_argument(fmt::format("wasted_power: W must be >= 1, got {}", w));
    }
    if (!(p_signal_w >= 0.0)) {
        throw std::invalid_argument(fmt::format("wasted_power: signal power must be >= 0, got {}", p_signal_w));
    }
    return (w - 1.0) * p_signal_w;
}

double total_consumed_power(double w, double p_signal_w, double p_non_path_w) {
    if (!(w >= 1.0)) {
        throw std::invalid_argument(fmt::format("total_consumed_power: W must be >= 1, got {}", w));
    }
    if (!(p_signal_w >= 0.0) || !(p_non_path_w >= 0.0)) {
        throw std::invalid_argument("total_consumed_power: powers must be >= 0");
    }
    return w * p_signal_w + p_non_path_w;
}

}  // namespace wastefactor
