#include "wastefactor/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

namespace wastefactor {

namespace {

const std::set<std::string> kKnownSections{"ru",    "ue",      "channel",    "scenario",    "sweep",   "cascade",
                                           "stage", "reading", "bs_reading", "ee_sweep", "strategy"};
const std::set<std::string> kRepeatableSections{"stage", "reading", "bs_reading", "strategy"};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

bool valid_identifier(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_';
    });
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = value.find(',', start);
        out.push_back(trim(std::string_view(value).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<double> to_double(const std::string& s) {
    double v = 0.0;
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), last, v);
    if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

// ---------------------------------------------------------------- document

const ConfigSection* ConfigDocument::find(const std::string& name) const {
    const ConfigSection* found = nullptr;
    for (const auto& s : sections) {
        if (s.name != name) continue;
        if (found) {
            throw ConfigError(fmt::format("{}:{}: section [{}] repeated (first at line {})", source, s.line, name,
                                          found->line));
        }
        found = &s;
    }
    return found;
}

std::vector<const ConfigSection*> ConfigDocument::all(const std::string& name) const {
    std::vector<const ConfigSection*> out;
    for (const auto& s : sections) {
        if (s.name == name) out.push_back(&s);
    }
    return out;
}

ConfigDocument parse_config(std::istream& in, const std::string& source_name) {
    ConfigDocument doc;
    doc.source = source_name;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        const std::string t = trim(std::string_view(line).substr(0, comment));
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(fmt::format("{}:{}: unterminated section header", source_name, line_no));
            const std::string name = trim(std::string_view(t).substr(1, t.size() - 2));
            if (!kKnownSections.count(name)) {
                throw ConfigError(fmt::format("{}:{}: unknown section [{}]", source_name, line_no, name));
            }
            if (!kRepeatableSections.count(name)) {
                for (const auto& s : doc.sections) {
                    if (s.name == name) {
                        throw ConfigError(fmt::format("{}:{}: section [{}] repeated (first at line {})", source_name,
                                                      line_no, name, s.line));
                    }
                }
            }
            doc.sections.push_back(ConfigSection{name, line_no, {}});
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(fmt::format("{}:{}: expected 'key = value', got '{}'", source_name, line_no, t));
        }
        if (doc.sections.empty()) {
            throw ConfigError(fmt::format("{}:{}: key outside of any section", source_name, line_no));
        }
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        if (!valid_identifier(key)) {
            throw ConfigError(fmt::format("{}:{}: invalid key '{}' (use snake_case)", source_name, line_no, key));
        }
        auto& section = doc.sections.back();
        for (const auto& e : section.entries) {
            if (e.key == key) {
                throw ConfigError(fmt::format("{}:{}: key '{}' repeated (first at line {})", source_name, line_no, key,
                                              e.line));
            }
        }
        section.entries.push_back(ConfigEntry{key, value, line_no});
    }
    return doc;
}

ConfigDocument load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
    return parse_config(in, path.string());
}

// ---------------------------------------------------------------- reader

SectionReader::SectionReader(const ConfigDocument& doc, const ConfigSection* section) : doc_(doc), section_(section) {}

const ConfigEntry* SectionReader::entry(const std::string& key) {
    used_.insert(key);
    if (!section_) return nullptr;
    for (const auto& e : section_->entries) {
        if (e.key == key) return &e;
    }
    return nullptr;
}

bool SectionReader::has(const std::string& key) const {
    if (!section_) return false;
    return std::any_of(section_->entries.begin(), section_->entries.end(),
                       [&](const ConfigEntry& e) { return e.key == key; });
}

std::string SectionReader::where(const std::string& key) const {
    if (section_) {
        for (const auto& e : section_->entries) {
            if (e.key == key) return fmt::format("{}:{}: [{}] {}", doc_.source, e.line, section_->name, key);
        }
        return fmt::format("{}:{}: [{}] {}", doc_.source, section_->line, section_->name, key);
    }
    return fmt::format("{}: {}", doc_.source, key);
}

void SectionReader::fail(const std::string& key, const std::string& message) const {
    throw ConfigError(fmt::format("{}: {}", where(key), message));
}

std::optional<double> SectionReader::number(const std::string& key) {
    const ConfigEntry* e = entry(key);
    if (!e) return std::nullopt;
    const auto v = to_double(e->value);
    if (!v) fail(key, fmt::format("'{}' is not a number", e->value));
    return v;
}

double SectionReader::number(const std::string& key, double fallback) { return number(key).value_or(fallback); }

int SectionReader::integer(const std::string& key, int fallback) {
    const auto v = number(key);
    if (!v) return fallback;
    if (*v != std::floor(*v) || std::abs(*v) > 1e9) fail(key, fmt::format("'{}' is not an integer", *v));
    return static_cast<int>(*v);
}

std::uint64_t SectionReader::unsigned64(const std::string& key, std::uint64_t fallback) {
    const ConfigEntry* e = entry(key);
    if (!e) return fallback;
    std::uint64_t v = 0;
    const char* last = e->value.data() + e->value.size();
    auto [ptr, ec] = std::from_chars(e->value.data(), last, v);
    if (e->value.empty() || ec != std::errc() || ptr != last) {
        fail(key, fmt::format("'{}' is not a non-negative integer", e->value));
    }
    return v;
}

bool SectionReader::flag(const std::string& key, bool fallback) {
    const ConfigEntry* e = entry(key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "on" || e->value == "yes" || e->value == "1") return true;
    if (e->value == "false" || e->value == "off" || e->value == "no" || e->value == "0") return false;
    fail(key, fmt::format("'{}' is not a boolean (true/false)", e->value));
}

std::string SectionReader::text(const std::string& key, const std::string& fallback) {
    const ConfigEntry* e = entry(key);
    if (!e) return fallback;
    std::string v = e->value;
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    return v;
}

std::optional<std::vector<double>> SectionReader::numbers(const std::string& key) {
    const ConfigEntry* e = entry(key);
    if (!e) return std::nullopt;
    std::vector<double> out;
    for (const auto& item : split_list(e->value)) {
        const auto v = to_double(item);
        if (!v) fail(key, fmt::format("list item '{}' is not a number", item));
        out.push_back(*v);
    }
    return out;
}

std::optional<std::vector<std::string>> SectionReader::words(const std::string& key) {
    const ConfigEntry* e = entry(key);
    if (!e) return std::nullopt;
    auto out = split_list(e->value);
    for (const auto& w : out) {
        if (w.empty()) fail(key, "empty list item");
    }
    return out;
}

void SectionReader::finish() const {
    if (!section_) return;
    for (const auto& e : section_->entries) {
        if (!used_.count(e.key)) {
            throw ConfigError(fmt::format("{}:{}: unknown key '{}' in [{}]", doc_.source, e.line, e.key, section_->name));
        }
    }
}

// ---------------------------------------------------------------- schemas

namespace {

template <typename Fn>
auto guarded(const SectionReader& r, const std::string& key, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        r.fail(key, e.what());
    }
}

Antenna read_antenna(SectionReader& r, Antenna a) {
    a.radiation_efficiency = r.number("antenna_radiation_efficiency", a.radiation_efficiency);
    a.vswr = r.number("antenna_vswr", a.vswr);
    a.include_mismatch = r.flag("antenna_include_mismatch", a.include_mismatch);
    return a;
}

Mixer read_mixer(SectionReader& r, Mixer m) {
    m.conversion_loss_db = r.number("mixer_conversion_loss_db", m.conversion_loss_db);
    m.insertion_loss_db = r.number("mixer_insertion_loss_db", m.insertion_loss_db);
    return m;
}

PhaseShifter read_phase_shifter(SectionReader& r, PhaseShifter ps) {
    ps.insertion_loss_db = r.number("phase_shifter_insertion_loss_db", ps.insertion_loss_db);
    const auto vswr = r.number("phase_shifter_vswr");
    const auto reflect = r.number("phase_shifter_reflection_loss_db");
    if (vswr) {
        ps.vswr = *vswr;
        // A VSWR without an explicit reflection loss means "derive it".
        if (!reflect) ps.reflection_loss_db.reset();
    }
    if (reflect) ps.reflection_loss_db = *reflect;
    return ps;
}

}  // namespace

RuSpec ru_spec_from(const ConfigDocument& doc) {
    SectionReader r(doc, doc.find("ru"));
    RuSpec ru = reference_ru(true);
    ru.dac.efficiency = r.number("dac_efficiency", ru.dac.efficiency);
    ru.mixer = read_mixer(r, ru.mixer);
    ru.phase_shifter = read_phase_shifter(r, ru.phase_shifter);

    const auto p_dc = r.number("pa_p_dc_w");
    const auto p_in = r.number("pa_p_in_w");
    const auto p_out = r.number("pa_p_out_w");
    const auto pae = r.number("pa_pae");
    const auto gain = r.number("pa_gain_db");
    if (p_dc || p_in || p_out) {
        if (!(p_dc && p_in && p_out)) r.fail("pa_p_dc_w", "operating point needs pa_p_dc_w, pa_p_in_w and pa_p_out_w");
        if (pae || gain) r.fail("pa_pae", "give either pa_pae/pa_gain_db or an operating point, not both");
        ru.pa.rating = OperatingPoint{*p_dc, *p_in, *p_out};
    } else {
        auto rating = std::get<PaeRating>(ru.pa.rating);
        rating.pae = pae.value_or(rating.pae);
        rating.gain_db = gain.value_or(rating.gain_db);
        ru.pa.rating = rating;
    }
    ru.pa.quiescent_w = r.number("pa_quiescent_w", ru.pa.quiescent_w);
    ru.antenna = read_antenna(r, ru.antenna);
    ru.n_tx = r.integer("n_tx", ru.n_tx);
    if (const auto lo = r.number("lo_power_w")) ru.lo_power_w = *lo;
    r.finish();
    guarded(r, "ru", [&] { return build_ru(ru); });
    return ru;
}

UeSpec ue_spec_from(const ConfigDocument& doc) {
    SectionReader r(doc, doc.find("ue"));
    UeSpec ue = reference_ue(true);
    ue.antenna = read_antenna(r, ue.antenna);
    ue.lna.gain_db = r.number("lna_gain_db", ue.lna.gain_db);
    const std::string model = r.text("lna_model", "ideal");
    const auto fom = r.number("lna_fom_per_w");
    const auto nf = r.number("lna_noise_factor");
    const auto snr = r.number("lna_snr_in");
    const auto noise = r.number("lna_input_noise_w");
    if (model == "fom") {
        if (!(fom && nf && snr && noise)) {
            r.fail("lna_model", "fom model needs lna_fom_per_w, lna_noise_factor, lna_snr_in and lna_input_noise_w");
        }
        ue.lna.model = LnaFom{*fom, *nf, *snr, *noise};
    } else if (model == "ideal") {
        if (fom || nf || snr || noise) r.fail("lna_model", "FoM parameters given but lna_model is 'ideal'");
    } else {
        r.fail("lna_model", fmt::format("unknown LNA model '{}' (expected ideal or fom)", model));
    }
    ue.lna.quiescent_w = r.number("lna_quiescent_w", ue.lna.quiescent_w);
    ue.phase_shifter = read_phase_shifter(r, ue.phase_shifter);
    ue.mixer = read_mixer(r, ue.mixer);
    const auto adc_fom = r.number("adc_fom_j");
    const auto adc_fs = r.number("adc_sample_rate_hz");
    const int adc_bits = r.integer("adc_bits", 0);
    if (adc_fom || adc_fs || adc_bits) {
        if (!(adc_fom && adc_fs && adc_bits)) r.fail("adc_fom_j", "ADC needs adc_fom_j, adc_sample_rate_hz and adc_bits");
        ue.adc = Adc{*adc_fom, *adc_fs, adc_bits};
    }
    ue.n_rx = r.integer("n_rx", ue.n_rx);
    if (const auto lo = r.number("lo_power_w")) ue.lo_power_w = *lo;
    r.finish();
    guarded(r, "ue", [&] { return build_ue(ue); });
    return ue;
}

Scenario scenario_from(const ConfigDocument& doc) {
    Scenario s;
    {
        SectionReader r(doc, doc.find("scenario"));
        s.n_ue = r.integer("n_ue", s.n_ue);
        s.n_bs = r.integer("n_bs", s.n_bs);
        s.region_radius_m = r.number("region_radius_m", s.region_radius_m);
        s.bs_height_m = r.number("bs_height_m", s.bs_height_m);
        s.ue_height_m = r.number("ue_height_m", s.ue_height_m);
        s.min_bs_separation_m = r.number("min_bs_separation_m", s.min_bs_separation_m);
        s.serving_radius_m = r.number("serving_radius_m", s.serving_radius_m);
        s.bandwidth_hz = r.number("bandwidth_hz", s.bandwidth_hz);
        s.target_snr_db = r.number("target_snr_db", s.target_snr_db);
        s.ue_noise_figure_db = r.number("ue_noise_figure_db", s.ue_noise_figure_db);
        s.per_link_cap_dbm = r.number("per_link_cap_dbm", s.per_link_cap_dbm);
        s.per_bs_budget_dbm = r.number("per_bs_budget_dbm", s.per_bs_budget_dbm);
        s.w_bs = r.number("w_bs", s.w_bs);
        s.g_bs_db = r.number("g_bs_db", s.g_bs_db);
        s.w_ue = r.number("w_ue", s.w_ue);
        s.g_ue_db = r.number("g_ue_db", s.g_ue_db);
        s.p_non_path_bs_w = r.number("p_non_path_bs_w", s.p_non_path_bs_w);
        s.p_non_path_ue_w = r.number("p_non_path_ue_w", s.p_non_path_ue_w);
        const double f_ghz = r.number("frequency_ghz", s.frequency_hz / 1e9);
        s = guarded(r, "frequency_ghz", [&] { return s.at_frequency(f_ghz); });
        const std::string mode = r.text("antenna_mode", std::string(to_string(s.antenna_mode)));
        s.antenna_mode = guarded(r, "antenna_mode", [&] { return antenna_mode_from_string(mode); });
        const std::string fallback = r.text("fallback", std::string(to_string(s.fallback)));
        s.fallback = guarded(r, "fallback", [&] { return fallback_mode_from_string(fallback); });
        const std::string alloc = r.text("power_allocation", std::string(to_string(s.allocation)));
        s.allocation = guarded(r, "power_allocation", [&] { return power_allocation_from_string(alloc); });
        s.shadowing = r.flag("shadowing", s.shadowing);
        s.normalize_non_path_by_area = r.flag("normalize_non_path_by_area", s.normalize_non_path_by_area);
        s.seed = r.unsigned64("seed", s.seed);
        r.finish();
    }
    {
        SectionReader r(doc, doc.find("channel"));
        s.bs_antenna.efficiency = r.number("bs_antenna_efficiency", s.bs_antenna.efficiency);
        s.bs_antenna.physical_area_m2 = r.number("bs_antenna_area_m2", s.bs_antenna.physical_area_m2);
        s.ue_antenna.efficiency = r.number("ue_antenna_efficiency", s.ue_antenna.efficiency);
        s.ue_antenna.physical_area_m2 = r.number("ue_antenna_area_m2", s.ue_antenna.physical_area_m2);
        r.finish();
    }
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("{}: {}", doc.source, e.what()));
    }
    return s;
}

namespace {

const char* const kSweepKeys[] = {"frequencies_ghz", "antenna_modes",  "n_bs_list",     "omni_per_link_cap_dbm",
                                  "wf_c_start_db",   "wf_c_stop_db",   "wf_c_step_db"};

void touch_all(SectionReader& r) {
    for (const char* k : kSweepKeys) (void)r.has(k), (void)r.text(k, "");
}

}  // namespace

CampaignGrid campaign_from(const ConfigDocument& doc) {
    CampaignGrid grid;
    grid.base = scenario_from(doc);
    grid.omni_per_link_cap_dbm = 30.0;
    SectionReader r(doc, doc.find("sweep"));
    if (const auto f = r.numbers("frequencies_ghz")) {
        for (double x : *f) {
            if (!reference_path_loss(x)) r.fail("frequencies_ghz", fmt::format("no reference path-loss row for {} GHz", x));
        }
        grid.frequencies_ghz = *f;
    }
    if (const auto m = r.words("antenna_modes")) {
        grid.modes.clear();
        for (const auto& w : *m) grid.modes.push_back(guarded(r, "antenna_modes", [&] { return antenna_mode_from_string(w); }));
    }
    if (const auto n = r.numbers("n_bs_list")) {
        grid.n_bs.clear();
        for (double x : *n) {
            if (x != std::floor(x) || x < 1) r.fail("n_bs_list", fmt::format("'{}' is not a positive integer", x));
            grid.n_bs.push_back(static_cast<int>(x));
        }
    }
    if (const auto cap = r.number("omni_per_link_cap_dbm")) grid.omni_per_link_cap_dbm = *cap;
    touch_all(r);
    r.finish();
    return grid;
}

std::vector<double> wf_c_grid_from(const ConfigDocument& doc) {
    SectionReader r(doc, doc.find("sweep"));
    const double start = r.number("wf_c_start_db", 60.0);
    const double stop = r.number("wf_c_stop_db", 120.0);
    const double step = r.number("wf_c_step_db", 5.0);
    touch_all(r);
    r.finish();
    if (!(step > 0.0)) r.fail("wf_c_step_db", "step must be > 0");
    if (!(stop >= start)) r.fail("wf_c_stop_db", "stop must be >= start");
    if (!(start >= 0.0)) r.fail("wf_c_start_db", "channel waste figure must be >= 0 dB");
    std::vector<double> grid;
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    for (int i = 0; i <= n; ++i) grid.push_back(start + i * step);
    return grid;
}

std::optional<CascadeInput> cascade_from(const ConfigDocument& doc) {
    CascadeInput input;
    {
        SectionReader r(doc, doc.find("cascade"));
        input.source_power_w = r.number("source_power_w", 1.0);
        r.finish();
        if (!(input.source_power_w > 0.0)) r.fail("source_power_w", "must be > 0");
    }
    const auto stages = doc.all("stage");
    if (stages.empty()) return std::nullopt;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        SectionReader r(doc, stages[i]);
        const std::string label = r.text("label", fmt::format("stage{}", i + 1));
        const auto loss = r.number("loss_db");
        const auto w = r.number("w");
        const auto g = r.number("g");
        const auto g_db = r.number("g_db");
        r.finish();
        if (loss) {
            if (w || g || g_db) r.fail("loss_db", "a passive stage takes loss_db alone");
            input.stages.push_back(guarded(r, "loss_db", [&] { return Stage::passive_db(*loss, label); }));
            continue;
        }
        if (!w) r.fail("w", "stage needs w (with g or g_db) or loss_db");
        if (g && g_db) r.fail("g", "give g or g_db, not both");
        const double gain = g ? *g : (g_db ? std::pow(10.0, *g_db / 10.0) : 1.0);
        input.stages.push_back(guarded(r, "w", [&] { return Stage(*w, gain, label); }));
    }
    return input;
}

MetricsInput metrics_from(const ConfigDocument& doc) {
    MetricsInput in;
    for (const ConfigSection* s : doc.all("reading")) {
        SectionReader r(doc, s);
        NamedReading nr;
        nr.name = r.text("name", fmt::format("reading{}", in.readings.size() + 1));
        nr.reading.p_signal_w = r.number("p_signal_w", 0.0);
        nr.reading.p_non_signal_w = r.number("p_non_signal_w", 0.0);
        nr.reading.p_non_path_w = r.number("p_non_path_w", 0.0);
        nr.reading.duration_h = r.number("duration_h", 1.0);
        if (const auto dv = r.number("data_volume_gb")) nr.reading.data_volume_gb = *dv;
        r.finish();
        guarded(r, "name", [&] { nr.reading.validate(); return 0; });
        in.readings.push_back(nr);
    }
    for (const ConfigSection* s : doc.all("bs_reading")) {
        SectionReader r(doc, s);
        BsLoad b;
        b.name = r.text("name", fmt::format("bs{}", in.bs_loads.size() + 1));
        b.data_volume_gb = r.number("data_volume_gb", 0.0);
        b.non_path_energy_wh = r.number("non_path_energy_wh", 0.0);
        b.path_energy_per_gb_wh = r.number("path_energy_per_gb_wh", 0.0);
        r.finish();
        if (!(b.data_volume_gb >= 0.0) || !(b.non_path_energy_wh >= 0.0) || !(b.path_energy_per_gb_wh >= 0.0)) {
            r.fail("name", "values must be >= 0");
        }
        in.bs_loads.push_back(b);
    }
    if (const ConfigSection* s = doc.find("ee_sweep")) {
        SectionReader r(doc, s);
        EeSweepInput e;
        e.w = r.number("w", 1.0);
        e.p_non_path_w = r.number("p_non_path_w", 0.0);
        const auto grid = r.numbers("p_signal_w");
        r.finish();
        if (!grid) r.fail("p_signal_w", "missing signal-power grid");
        e.p_signal_w = *grid;
        in.ee_sweep = e;
    }
    for (const ConfigSection* s : doc.all("strategy")) {
        SectionReader r(doc, s);
        StrategyQuery q;
        q.name = r.text("name", fmt::format("strategy{}", in.strategies.size() + 1));
        const std::string fig = r.text("figure", "rate_w");
        if (fig == "rate_w") q.figure = StrategyFigure::RateW;
        else if (fig == "power_w") q.figure = StrategyFigure::PowerW;
        else r.fail("figure", fmt::format("unknown figure '{}' (expected rate_w or power_w)", fig));
        q.axis_high = r.flag("axis_high", false);
        q.w_high = r.flag("w_high", false);
        r.finish();
        in.strategies.push_back(q);
    }
    return in;
}

void check_config(const ConfigDocument& doc) {
    (void)ru_spec_from(doc);
    (void)ue_spec_from(doc);
    (void)campaign_from(doc);
    (void)wf_c_grid_from(doc);
    (void)cascade_from(doc);
    (void)metrics_from(doc);
}

}  // namespace wastefactor
