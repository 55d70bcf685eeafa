#pragma once

#include <span>
#include <string>
#include <vector>

namespace wastefactor {

/**
 * @brief One element of a signal path: waste factor W and power gain G.
 *
 * W is the ratio of power consumed on the signal path to the power delivered
 * at the stage output. W = 1 is the physical floor (nothing wasted), so the
 * constructor rejects W < 1 and any non-positive or non-finite gain.
 */
class Stage {
public:
    Stage(double w, double g, std::string label = {});

    /// Passive element with linear loss L >= 1: W = L, G = 1/L.
    static Stage passive(double loss, std::string label = {});
    static Stage passive_db(double loss_db, std::string label = {});

    double w() const { return w_; }
    double g() const { return g_; }
    const std::string& label() const { return label_; }

    /// Waste figure, 10 log10 W.
    double wf_db() const;
    double gain_db() const;

    Stage with_label(std::string label) const { return Stage(w_, g_, std::move(label)); }

private:
    double w_;
    double g_;
    std::string label_;
};

struct StageFlow {
    std::string label;
    double p_in_w = 0.0;
    double p_out_w = 0.0;
    double p_consumed_w = 0.0;  ///< standalone signal-path consumption, W_i*P_out,i - P_in,i
    double p_wasted_w = 0.0;    ///< (W_i - 1) * P_out,i
};

/**
 * @brief Stage-by-stage power bookkeeping for a cascade driven by a source.
 *
 * Totals are derived purely from the flows, never from the closed-form
 * cascade rule, which makes this report usable as an oracle.
 */
struct CascadeReport {
    std::vector<StageFlow> stages;
    double p_source_w = 0.0;
    double p_signal_w = 0.0;          ///< power leaving the last stage
    double p_consumed_path_w = 0.0;   ///< sum of stage consumption plus source output
    double p_wasted_w = 0.0;
    double w = 1.0;                   ///< p_consumed_path / p_signal
    double g = 1.0;                   ///< p_signal / p_source
};

/// Compose stages ordered source-first into one stage.
/// Throws std::invalid_argument for an empty list.
Stage cascade(std::span<const Stage> stages, std::string label = "cascade");
Stage cascade(std::initializer_list<Stage> stages, std::string label = "cascade");

/// Inject p_source_w at the input of the first stage and trace the powers.
CascadeReport power_flow(std::span<const Stage> stages, double p_source_w);

/// (W - 1) * P_signal.
double wasted_power(double w, double p_signal_w);

/// W * P_signal + P_non-path.
double total_consumed_power(double w, double p_signal_w, double p_non_path_w);

}  // namespace wastefactor
