#include "wastefactor/components.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "wastefactor/units.hpp"

namespace wastefactor {

namespace {

[[noreturn]] void bad(const std::string& label, const std::string& what) {
    throw std::invalid_argument(label.empty() ? what : fmt::format("{}: {}", label, what));
}

void require_efficiency(double eta, const std::string& label, const char* name) {
    if (!(eta > 0.0 && eta <= 1.0)) bad(label, fmt::format("{} must be in (0, 1], got {}", name, eta));
}

void require_loss_db(double db, const std::string& label, const char* name) {
    if (!(db >= 0.0) || !std::isfinite(db)) bad(label, fmt::format("{} must be >= 0 dB, got {}", name, db));
}

void require_positive(double v, const std::string& label, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) bad(label, fmt::format("{} must be > 0, got {}", name, v));
}

void require_non_negative(double v, const std::string& label, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) bad(label, fmt::format("{} must be >= 0, got {}", name, v));
}

Stage active_stage(const OperatingPoint& op, const std::string& label) {
    require_positive(op.p_dc_w, label, "p_dc");
    require_positive(op.p_in_w, label, "p_in");
    require_positive(op.p_out_w, label, "p_out");
    const double consumed = op.p_dc_w + op.p_in_w;
    // Equality is the lossless floor (W = 1); anything above it creates power.
    if (op.p_out_w > consumed) {
        bad(label, fmt::format("p_out ({} W) exceeds p_dc + p_in ({} W)", op.p_out_w, consumed));
    }
    return Stage(consumed / op.p_out_w, op.p_out_w / op.p_in_w, label);
}

struct StageVisitor {
    const std::string& label;

    DeviceStage operator()(const Mixer& m) const {
        require_loss_db(m.conversion_loss_db, label, "conversion loss");
        require_loss_db(m.insertion_loss_db, label, "insertion loss");
        return {Stage::passive_db(m.conversion_loss_db + m.insertion_loss_db, label), 0.0};
    }

    DeviceStage operator()(const PhaseShifter& ps) const {
        require_loss_db(ps.insertion_loss_db, label, "insertion loss");
        double reflect_db = 0.0;
        if (ps.reflection_loss_db) {
            reflect_db = *ps.reflection_loss_db;
            require_loss_db(reflect_db, label, "reflection loss");
        } else if (ps.vswr) {
            reflect_db = return_loss_db(*ps.vswr);
            if (!std::isfinite(reflect_db)) bad(label, "VSWR of 1 gives an unbounded reflection loss");
        }
        return {Stage::passive_db(reflect_db + ps.insertion_loss_db, label), 0.0};
    }

    DeviceStage operator()(const Antenna& a) const {
        require_efficiency(a.radiation_efficiency, label, "radiation efficiency");
        double eta = a.radiation_efficiency;
        if (a.include_mismatch) {
            const double gamma = reflection_coefficient(a.vswr);
            eta *= 1.0 - gamma * gamma;
        } else if (!(a.vswr >= 1.0)) {
            bad(label, fmt::format("VSWR must be >= 1, got {}", a.vswr));
        }
        return {Stage::passive(1.0 / eta, label), 0.0};
    }

    DeviceStage operator()(const PowerAmplifier& pa) const {
        require_non_negative(pa.quiescent_w, label, "quiescent power");
        if (const auto* r = std::get_if<PaeRating>(&pa.rating)) {
            require_efficiency(r->pae, label, "PAE");
            return {Stage(1.0 / r->pae, db_to_linear(r->gain_db), label), pa.quiescent_w};
        }
        return {active_stage(std::get<OperatingPoint>(pa.rating), label), pa.quiescent_w};
    }

    DeviceStage operator()(const Lna& lna) const {
        require_non_negative(lna.quiescent_w, label, "quiescent power");
        const double g = db_to_linear(lna.gain_db);
        if (std::holds_alternative<LnaIdeal>(lna.model)) {
            return {Stage(1.0, g, label), lna.quiescent_w};
        }
        const auto& f = std::get<LnaFom>(lna.model);
        require_positive(f.fom_per_w, label, "LNA FoM");
        require_positive(f.snr_in, label, "input SNR");
        require_positive(f.input_noise_w, label, "input noise power");
        if (!(f.noise_factor > 1.0)) bad(label, fmt::format("noise factor must be > 1, got {}", f.noise_factor));
        const double p_additive_noise = (f.noise_factor - 1.0) * g * f.input_noise_w;
        const double w = g / (f.fom_per_w * f.snr_in * p_additive_noise);
        if (!(w >= 1.0)) {
            bad(label, fmt::format("FoM model gives W = {} < 1 (LNA draws less than its output power)", w));
        }
        return {Stage(w, g, label), lna.quiescent_w};
    }

    DeviceStage operator()(const Dac& d) const {
        require_efficiency(d.efficiency, label, "efficiency");
        return {Stage(1.0 / d.efficiency, 1.0, label), 0.0};
    }

    DeviceStage operator()(const Adc& a) const {
        require_positive(a.fom_j, label, "FoM");
        require_positive(a.sample_rate_hz, label, "sample rate");
        if (a.bits < 1) bad(label, fmt::format("bits must be >= 1, got {}", a.bits));
        return {Stage(1.0, 1.0, label), a.fom_j * a.sample_rate_hz * std::ldexp(1.0, a.bits)};
    }

    DeviceStage operator()(const GenericActive& a) const {
        return {active_stage(OperatingPoint{a.p_dc_w, a.p_in_w, a.p_out_w}, label), 0.0};
    }

    DeviceStage operator()(const GenericPassive& p) const {
        require_loss_db(p.loss_db, label, "loss");
        return {Stage::passive_db(p.loss_db, label), 0.0};
    }
};

}  // namespace

DeviceStage stage_of(const DeviceSpec& spec, std::string label) {
    return std::visit(StageVisitor{label}, spec);
}

double reflection_coefficient(double vswr) {
    if (!(vswr >= 1.0) || !std::isfinite(vswr)) {
        throw std::invalid_argument(fmt::format("VSWR must be finite and >= 1, got {}", vswr));
    }
    return (vswr - 1.0) / (vswr + 1.0);
}

double mismatch_loss_db(double vswr) {
    const double gamma = reflection_coefficient(vswr);
    return -10.0 * std::log10(1.0 - gamma * gamma);
}

double return_loss_db(double vswr) {
    const double gamma = reflection_coefficient(vswr);
    if (gamma == 0.0) return std::numeric_limits<double>::infinity();
    return -20.0 * std::log10(gamma);
}

double pae_from_walker(double pae2, double p_in_w, double p_dc_w, double gain) {
    if (!(pae2 > 0.0 && pae2 <= 1.0)) {
        throw std::invalid_argument(fmt::format("PAE2 must be in (0, 1], got {}", pae2));
    }
    if (!(gain > 1.0)) {
        throw std::invalid_argument(fmt::format("Walker form needs gain > 1, got {}", gain));
    }
    if (!(p_dc_w > 0.0) || !(p_in_w >= 0.0)) {
        throw std::invalid_argument("Walker form needs p_dc > 0 and p_in >= 0");
    }
    return (1.0 / pae2) * (1.0 + p_in_w / p_dc_w) * (1.0 - 1.0 / gain);
}

ChainResult build_ru(const RuSpec& spec) {
    if (spec.n_tx < 1) throw std::invalid_argument(fmt::format("n_tx must be >= 1, got {}", spec.n_tx));
    const DeviceStage dac = stage_of(spec.dac, "dac");
    const DeviceStage mixer = stage_of(spec.mixer, "mixer");
    const DeviceStage ps = stage_of(spec.phase_shifter, "phase_shifter");
    const DeviceStage pa = stage_of(spec.pa, "pa");
    const DeviceStage ant = stage_of(spec.antenna, "antenna");

    // The N_TX chains are identical, so the parallel group collapses to one
    // chain; only per-chain non-path draw scales with N_TX.
    std::vector<Stage> stages{dac.stage, mixer.stage, ps.stage, pa.stage, ant.stage};
    ChainResult out{cascade(stages, "ru"), 0.0, stages};
    out.non_path_w = dac.non_path_w + mixer.non_path_w +
                     spec.n_tx * (ps.non_path_w + pa.non_path_w + ant.non_path_w) + spec.lo_power_w.value_or(0.0);
    return out;
}

ChainResult build_ue(const UeSpec& spec) {
    if (spec.n_rx < 1) throw std::invalid_argument(fmt::format("n_rx must be >= 1, got {}", spec.n_rx));
    const DeviceStage ant = stage_of(spec.antenna, "antenna");
    const DeviceStage lna = stage_of(spec.lna, "lna");
    const DeviceStage ps = stage_of(spec.phase_shifter, "phase_shifter");
    const DeviceStage mixer = stage_of(spec.mixer, "mixer");

    std::vector<Stage> stages{ant.stage, lna.stage, ps.stage, mixer.stage};
    ChainResult out{cascade(stages, "ue"), 0.0, stages};
    out.non_path_w = spec.n_rx * (ant.non_path_w + lna.non_path_w + ps.non_path_w) + mixer.non_path_w +
                     spec.lo_power_w.value_or(0.0);
    if (spec.adc) {
        out.non_path_w += stage_of(*spec.adc, "adc").non_path_w;
    }
    return out;
}

RuSpec reference_ru(bool include_mismatch) {
    RuSpec ru;
    ru.dac = Dac{0.91};
    ru.mixer = Mixer{8.2, 0.0};
    ru.phase_shifter = PhaseShifter{3.5, 14.0, 1.5};
    ru.pa = PowerAmplifier{PaeRating{0.48, 50.0}, 0.0};
    ru.antenna = Antenna{0.6, 1.5, include_mismatch};
    return ru;
}

UeSpec reference_ue(bool include_mismatch) {
    UeSpec ue;
    ue.antenna = Antenna{0.7, 1.5, include_mismatch};
    ue.lna = Lna{20.0, LnaIdeal{}, 0.0};
    ue.phase_shifter = PhaseShifter{6.0, std::nullopt, std::nullopt};
    ue.mixer = Mixer{6.7, 0.0};
    return ue;
}

Stage end_to_end(const Stage& ru, const Stage& channel, const Stage& ue) {
    const double w = ue.w() + (channel.w() - 1.0) / ue.g() + (ru.w() - 1.0) / (channel.g() * ue.g());
    return Stage(w, ru.g() * channel.g() * ue.g(), "system");
}

Stage channel_stage_db(double wf_c_db) { return Stage::passive_db(wf_c_db, "channel"); }

std::vector<StrategyRow> strategy_sweep(const Stage& ru, const Stage& ue, std::span<const double> wf_c_db) {
    const Stage half_ru(std::max(1.0, ru.w() / 2.0), ru.g(), ru.label());
    const Stage half_ue(std::max(1.0, ue.w() / 2.0), ue.g(), ue.label());
    const Stage double_g_ue(ue.w(), ue.g() * 2.0, ue.label());
    std::vector<StrategyRow> rows;
    rows.reserve(wf_c_db.size());
    for (double wf_c : wf_c_db) {
        const Stage ch = channel_stage_db(wf_c);
        rows.push_back(StrategyRow{wf_c, end_to_end(ru, ch, ue).wf_db(), end_to_end(half_ru, ch, ue).wf_db(),
                                   end_to_end(ru, ch, half_ue).wf_db(), end_to_end(ru, ch, double_g_ue).wf_db()});
    }
    return rows;
}

}  // namespace wastefactor
