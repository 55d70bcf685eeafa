#include "wastefactor/netsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "wastefactor/parallel.hpp"
#include "wastefactor/rng.hpp"
#include "wastefactor/units.hpp"

namespace wastefactor {

namespace {

// Stream ids of the counter-based generator.
constexpr std::uint32_t kStreamUe = 1;
constexpr std::uint32_t kStreamBs = 2;
constexpr std::uint32_t kStreamShadow = 3;

constexpr int kMaxPlacementAttempts = 100000;

double horizontal_distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point uniform_in_disk(const CounterRng& rng, std::uint32_t stream, std::uint32_t index, double radius) {
    const auto [u1, u2] = rng.uniform2(stream, index);
    const double r = radius * std::sqrt(u1);
    const double theta = 2.0 * std::numbers::pi * u2;
    return Point{r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace

std::string_view to_string(AntennaMode m) { return m == AntennaMode::Omni ? "omni" : "directional"; }

std::string_view to_string(FallbackMode m) {
    switch (m) {
        case FallbackMode::Nearest: return "nearest";
        case FallbackMode::Strongest: return "strongest";
        case FallbackMode::Exclude: return "exclude";
    }
    return "unknown";
}

std::string_view to_string(PowerAllocation a) { return a == PowerAllocation::Equal ? "equal" : "proportional"; }

AntennaMode antenna_mode_from_string(std::string_view s) {
    if (s == "omni") return AntennaMode::Omni;
    if (s == "directional") return AntennaMode::Directional;
    throw std::invalid_argument(fmt::format("unknown antenna mode '{}' (expected omni or directional)", s));
}

FallbackMode fallback_mode_from_string(std::string_view s) {
    if (s == "nearest") return FallbackMode::Nearest;
    if (s == "strongest") return FallbackMode::Strongest;
    if (s == "exclude") return FallbackMode::Exclude;
    throw std::invalid_argument(fmt::format("unknown fallback '{}' (expected nearest, strongest or exclude)", s));
}

PowerAllocation power_allocation_from_string(std::string_view s) {
    if (s == "equal") return PowerAllocation::Equal;
    if (s == "proportional") return PowerAllocation::Proportional;
    throw std::invalid_argument(fmt::format("unknown power allocation '{}' (expected equal or proportional)", s));
}

std::optional<PathLossRow> reference_path_loss(double frequency_ghz) {
    static constexpr PathLossRow rows[] = {{3.5, 1.82, 4.89}, {17.0, 2.00, 6.60}, {28.0, 2.02, 8.98}};
    for (const auto& row : rows) {
        if (std::abs(row.frequency_ghz - frequency_ghz) < 1e-9) return row;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- Scenario

Scenario Scenario::at_frequency(double frequency_ghz) const {
    const auto row = reference_path_loss(frequency_ghz);
    if (!row) {
        throw std::invalid_argument(
            fmt::format("no reference path-loss row for {} GHz (tabulated: 3.5, 17, 28)", frequency_ghz));
    }
    Scenario s = *this;
    s.frequency_hz = frequency_ghz * 1e9;
    s.ple = row->ple;
    s.sigma_db = row->sigma_db;
    return s;
}

double Scenario::bs_antenna_gain_db() const {
    return antenna_mode == AntennaMode::Omni ? 0.0 : aperture_gain(bs_antenna, frequency_hz);
}

double Scenario::ue_antenna_gain_db() const {
    return antenna_mode == AntennaMode::Omni ? 0.0 : aperture_gain(ue_antenna, frequency_hz);
}

double Scenario::noise_power_w() const { return dbm_to_watts(noise_power_dbm(bandwidth_hz, ue_noise_figure_db)); }

double Scenario::target_rx_power_w() const {
    return dbm_to_watts(noise_power_dbm(bandwidth_hz, ue_noise_figure_db) + target_snr_db);
}

double Scenario::area_km2() const {
    const double r_km = region_radius_m / 1000.0;
    return std::numbers::pi * r_km * r_km;
}

void Scenario::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("scenario: " + msg); };
    if (n_ue < 1) fail(fmt::format("n_ue must be >= 1, got {}", n_ue));
    if (n_bs < 1) fail(fmt::format("n_bs must be >= 1, got {}", n_bs));
    if (!(region_radius_m > 0.0)) fail("region_radius_m must be > 0");
    if (!(serving_radius_m > 0.0)) fail("serving_radius_m must be > 0");
    if (!(min_bs_separation_m >= 0.0)) fail("min_bs_separation_m must be >= 0");
    if (!(min_bs_separation_m < 2.0 * region_radius_m)) fail("min_bs_separation_m must be < 2 * region_radius_m");
    if (!(bs_height_m >= 0.0) || !(ue_height_m >= 0.0)) fail("heights must be >= 0");
    if (!(bandwidth_hz > 0.0)) fail("bandwidth_hz must be > 0");
    if (!(w_bs >= 1.0)) fail(fmt::format("w_bs must be >= 1, got {}", w_bs));
    if (!(w_ue >= 1.0)) fail(fmt::format("w_ue must be >= 1, got {}", w_ue));
    if (!(p_non_path_bs_w >= 0.0) || !(p_non_path_ue_w >= 0.0)) fail("non-path powers must be >= 0");
    if (!(frequency_hz > 0.0)) fail("frequency must be > 0");
    path_loss_model().validate();
    if (antenna_mode == AntennaMode::Directional) {
        (void)bs_antenna_gain_db();
        (void)ue_antenna_gain_db();
    }
}

// ---------------------------------------------------------------- layout

Layout generate_layout(const Scenario& scenario) {
    scenario.validate();
    const CounterRng rng(scenario.seed);
    Layout layout;
    layout.ue.reserve(static_cast<std::size_t>(scenario.n_ue));
    for (int i = 0; i < scenario.n_ue; ++i) {
        layout.ue.push_back(uniform_in_disk(rng, kStreamUe, static_cast<std::uint32_t>(i), scenario.region_radius_m));
    }
    layout.bs.reserve(static_cast<std::size_t>(scenario.n_bs));
    for (int attempt = 0; static_cast<int>(layout.bs.size()) < scenario.n_bs; ++attempt) {
        if (attempt >= kMaxPlacementAttempts) {
            throw std::runtime_error(fmt::format("could not place {} BSs {} m apart after {} attempts", scenario.n_bs,
                                                 scenario.min_bs_separation_m, kMaxPlacementAttempts));
        }
        const Point p =
            uniform_in_disk(rng, kStreamBs, static_cast<std::uint32_t>(attempt), scenario.region_radius_m);
        const bool ok = std::all_of(layout.bs.begin(), layout.bs.end(), [&](const Point& q) {
            return horizontal_distance(p, q) >= scenario.min_bs_separation_m;
        });
        if (ok) layout.bs.push_back(p);
    }
    return layout;
}

std::vector<std::vector<int>> assign_serving_sets(const Layout& layout, double serving_radius_m, FallbackMode fallback,
                                                  const std::vector<std::vector<double>>* effective_loss_db) {
    if (layout.bs.empty()) throw std::invalid_argument("assign_serving_sets: layout has no BS");
    if (fallback == FallbackMode::Strongest && effective_loss_db == nullptr) {
        throw std::invalid_argument("assign_serving_sets: strongest-link fallback needs the path-loss matrix");
    }
    std::vector<std::vector<int>> sets(layout.ue.size());
    for (std::size_t u = 0; u < layout.ue.size(); ++u) {
        int nearest = 0;
        double nearest_d = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < layout.bs.size(); ++b) {
            const double d = horizontal_distance(layout.ue[u], layout.bs[b]);
            if (d <= serving_radius_m) sets[u].push_back(static_cast<int>(b));
            if (d < nearest_d) {
                nearest_d = d;
                nearest = static_cast<int>(b);
            }
        }
        if (!sets[u].empty()) continue;
        if (fallback == FallbackMode::Nearest) {
            sets[u].push_back(nearest);
        } else if (fallback == FallbackMode::Strongest) {
            const auto& row = (*effective_loss_db)[u];
            sets[u].push_back(static_cast<int>(std::min_element(row.begin(), row.end()) - row.begin()));
        }
    }
    return sets;
}

// ---------------------------------------------------------------- power control

PowerControlResult power_control(const std::vector<std::vector<Link>>& links, int n_bs, double target_rx_w,
                                 double cap_w, double budget_w, PowerAllocation allocation) {
    if (!(target_rx_w > 0.0)) throw std::invalid_argument("power_control: target power must be > 0");
    if (!(cap_w > 0.0) || !(budget_w > 0.0)) throw std::invalid_argument("power_control: caps must be > 0");
    PowerControlResult out;
    out.tx_w.resize(links.size());
    out.rx_w.assign(links.size(), 0.0);
    std::vector<double> bs_load(static_cast<std::size_t>(n_bs), 0.0);

    for (std::size_t u = 0; u < links.size(); ++u) {
        const auto& ue_links = links[u];
        auto& tx = out.tx_w[u];
        tx.resize(ue_links.size());
        if (ue_links.empty()) continue;
        // Received power is sum_l P_l G_l with G_l = 1/loss_l.
        double sum_g = 0.0;
        double sum_g2 = 0.0;
        for (const Link& l : ue_links) {
            if (l.bs < 0 || l.bs >= n_bs) throw std::invalid_argument(fmt::format("power_control: bad BS index {}", l.bs));
            if (!(l.loss > 0.0)) throw std::invalid_argument("power_control: link loss must be > 0");
            const double g = 1.0 / l.loss;
            sum_g += g;
            sum_g2 += g * g;
        }
        for (std::size_t k = 0; k < ue_links.size(); ++k) {
            const double g = 1.0 / ue_links[k].loss;
            double p = allocation == PowerAllocation::Equal ? target_rx_w / sum_g : target_rx_w * g / sum_g2;
            if (p > cap_w) {
                p = cap_w;
                ++out.n_capped_links;
            }
            tx[k] = p;
            bs_load[static_cast<std::size_t>(ue_links[k].bs)] += p;
        }
    }

    std::vector<double> scale(bs_load.size(), 1.0);
    for (std::size_t b = 0; b < bs_load.size(); ++b) {
        if (bs_load[b] > budget_w) {
            scale[b] = budget_w / bs_load[b];
            ++out.n_scaled_bs;
        }
    }
    for (std::size_t u = 0; u < links.size(); ++u) {
        for (std::size_t k = 0; k < links[u].size(); ++k) {
            out.tx_w[u][k] *= scale[static_cast<std::size_t>(links[u][k].bs)];
            out.rx_w[u] += out.tx_w[u][k] / links[u][k].loss;
        }
    }
    return out;
}

// ---------------------------------------------------------------- evaluation

double PowerAudit::relative_error() const {
    const double denom = std::max(std::abs(top_down_w), std::abs(bottom_up_w));
    return denom > 0.0 ? std::abs(top_down_w - bottom_up_w) / denom : 0.0;
}

DropResult evaluate_links(const Scenario& scenario, const std::vector<std::vector<Link>>& links) {
    scenario.validate();
    if (static_cast<int>(links.size()) != scenario.n_ue) {
        throw std::invalid_argument(
            fmt::format("evaluate_links: {} link lists for {} UEs", links.size(), scenario.n_ue));
    }
    const PowerControlResult pc =
        power_control(links, scenario.n_bs, scenario.target_rx_power_w(), dbm_to_watts(scenario.per_link_cap_dbm),
                      dbm_to_watts(scenario.per_bs_budget_dbm), scenario.allocation);

    const Stage bs_stage(scenario.w_bs, db_to_linear(scenario.g_bs_db), "bs");
    const Stage ue_stage(scenario.w_ue, db_to_linear(scenario.g_ue_db), "ue");
    const double noise_w = scenario.noise_power_w();

    DropResult r;
    std::vector<double> rx_served;
    std::vector<double> w_parallel;
    std::vector<double> snr_db;
    rx_served.reserve(links.size());
    w_parallel.reserve(links.size());
    snr_db.reserve(links.size());
    if (scenario.record_per_ue) r.per_ue.resize(links.size());

    double bottom_up = 0.0;
    std::vector<Branch> branches;
    for (std::size_t u = 0; u < links.size(); ++u) {
        if (links[u].empty()) continue;
        branches.clear();
        for (std::size_t k = 0; k < links[u].size(); ++k) {
            const Link& l = links[u][k];
            // Channel stage: W never below 1, gain keeps the true value.
            const bool clamped = l.loss < 1.0;
            const Stage ch(clamped ? 1.0 : l.loss, 1.0 / l.loss, "channel");
            if (clamped) ++r.n_clamped_links;
            const Stage link_cascade = cascade({bs_stage, ch}, "link");
            const double p_t = pc.tx_w[u][k];
            const double p_r = p_t * ch.g();
            branches.push_back(Branch{link_cascade, p_r});

            // Standalone consumption: source feeding the BS, BS, channel.
            const double p_src = p_t / bs_stage.g();
            bottom_up += p_src + (bs_stage.w() * p_t - p_src) + (ch.w() * p_r - p_t);
            ++r.n_links;
        }
        const double p_r_ue = pc.rx_w[u];
        const double w_par = combine_branches(branches, CombiningMode::NonCoherent);
        bottom_up += ue_stage.w() * ue_stage.g() * p_r_ue - p_r_ue;

        const double snr = linear_to_db(p_r_ue / noise_w);
        rx_served.push_back(p_r_ue);
        w_parallel.push_back(w_par);
        snr_db.push_back(snr);
        if (scenario.record_per_ue) {
            r.per_ue[u] = UeDiagnostics{static_cast<int>(links[u].size()), p_r_ue, snr, w_par};
        }
    }
    if (rx_served.empty()) {
        throw std::runtime_error("drop has no served UE; nothing to evaluate");
    }
    r.n_served_ue = static_cast<int>(rx_served.size());
    r.n_capped_links = pc.n_capped_links;
    r.n_scaled_bs = pc.n_scaled_bs;

    r.w_first_stage = mino_first_stage(rx_served, w_parallel);
    r.w_system = mino_compose(r.w_first_stage, ue_stage);
    r.wf_system_db = linear_to_db(r.w_system);
    double sum_rx = 0.0;
    for (double p : rx_served) sum_rx += p;
    r.p_out_w = ue_stage.g() * sum_rx;
    r.p_consumed_path_w = r.w_system * r.p_out_w;
    r.audit = PowerAudit{r.p_consumed_path_w, bottom_up};

    r.p_non_path_w = scenario.n_bs * scenario.p_non_path_bs_w + scenario.n_ue * scenario.p_non_path_ue_w;
    const double area = scenario.area_km2();
    r.p_signal_path_per_km2_w = r.p_consumed_path_w / area;
    r.p_non_path_per_km2_w = scenario.normalize_non_path_by_area ? r.p_non_path_w / area : r.p_non_path_w;
    r.p_total_per_km2_w = r.p_signal_path_per_km2_w + r.p_non_path_per_km2_w;

    double sum_snr = 0.0;
    int meeting = 0;
    for (double s : snr_db) {
        sum_snr += s;
        if (s >= scenario.target_snr_db - 1e-9) ++meeting;
    }
    r.snr.mean_db = sum_snr / static_cast<double>(snr_db.size());
    r.snr.fraction_meeting_target = static_cast<double>(meeting) / static_cast<double>(snr_db.size());
    std::vector<double> sorted = snr_db;
    std::sort(sorted.begin(), sorted.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(sorted.size())));
    r.snr.p5_db = sorted[rank == 0 ? 0 : rank - 1];
    return r;
}

DropResult evaluate_drop(const Scenario& scenario) {
    const Layout layout = generate_layout(scenario);
    const CounterRng rng(scenario.seed);
    const PathLossModel model = scenario.path_loss_model();
    const double g_tx = scenario.bs_antenna_gain_db();
    const double g_rx = scenario.ue_antenna_gain_db();
    const double dh = scenario.bs_height_m - scenario.ue_height_m;

    // Effective loss (dB) of every BS-UE pair; shadowing is a standard normal
    // per (UE, BS) scaled by sigma, shared across carriers for the same seed.
    std::vector<std::vector<double>> eff_db(layout.ue.size(), std::vector<double>(layout.bs.size()));
    for (std::size_t u = 0; u < layout.ue.size(); ++u) {
        for (std::size_t b = 0; b < layout.bs.size(); ++b) {
            const double d2 = horizontal_distance(layout.ue[u], layout.bs[b]);
            const double d3 = std::sqrt(d2 * d2 + dh * dh);
            const double shadow = scenario.shadowing
                                      ? model.sigma_db * rng.normal(kStreamShadow, static_cast<std::uint32_t>(u),
                                                                    static_cast<std::uint32_t>(b))
                                      : 0.0;
            eff_db[u][b] = path_loss(model, d3, shadow) - g_tx - g_rx;
        }
    }
    const auto sets = assign_serving_sets(layout, scenario.serving_radius_m, scenario.fallback, &eff_db);

    std::vector<std::vector<Link>> links(layout.ue.size());
    int n_fallback = 0;
    for (std::size_t u = 0; u < layout.ue.size(); ++u) {
        bool in_range = false;
        for (int b : sets[u]) {
            links[u].push_back(Link{b, db_to_linear(eff_db[u][static_cast<std::size_t>(b)])});
            in_range = in_range ||
                       horizontal_distance(layout.ue[u], layout.bs[static_cast<std::size_t>(b)]) <= scenario.serving_radius_m;
        }
        if (!sets[u].empty() && !in_range) ++n_fallback;
    }
    DropResult r = evaluate_links(scenario, links);
    r.n_fallback_ue = n_fallback;
    return r;
}

// ---------------------------------------------------------------- campaigns

Scenario cell_scenario(const CampaignGrid& grid, double frequency_ghz, AntennaMode mode, int n_bs, int seed_index) {
    Scenario s = grid.base.at_frequency(frequency_ghz);
    s.antenna_mode = mode;
    s.n_bs = n_bs;
    s.seed = grid.base.seed + static_cast<std::uint64_t>(seed_index);
    s.record_per_ue = false;
    if (mode == AntennaMode::Omni && grid.omni_per_link_cap_dbm) {
        s.per_link_cap_dbm = *grid.omni_per_link_cap_dbm;
    }
    return s;
}

CampaignResult run_campaign(const CampaignGrid& grid, int jobs) {
    if (grid.frequencies_ghz.empty() || grid.modes.empty() || grid.n_bs.empty()) {
        throw std::invalid_argument("campaign grid is empty");
    }
    if (grid.n_seeds < 1) throw std::invalid_argument(fmt::format("n_seeds must be >= 1, got {}", grid.n_seeds));

    CampaignResult result;
    for (double f : grid.frequencies_ghz) {
        for (AntennaMode m : grid.modes) {
            for (int n : grid.n_bs) {
                for (int k = 0; k < grid.n_seeds; ++k) {
                    DropRecord rec;
                    rec.frequency_ghz = f;
                    rec.mode = m;
                    rec.n_bs = n;
                    rec.seed = grid.base.seed + static_cast<std::uint64_t>(k);
                    result.drops.push_back(rec);
                }
            }
        }
    }
    // Validate every cell up front so configuration errors surface before work starts.
    for (std::size_t i = 0; i < result.drops.size(); i += static_cast<std::size_t>(grid.n_seeds)) {
        const auto& d = result.drops[i];
        cell_scenario(grid, d.frequency_ghz, d.mode, d.n_bs, 0).validate();
    }

    if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    jobs = std::min<int>(jobs, static_cast<int>(result.drops.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= result.drops.size()) return;
            DropRecord& rec = result.drops[i];
            try {
                const int seed_index = static_cast<int>(rec.seed - grid.base.seed);
                rec.result = evaluate_drop(cell_scenario(grid, rec.frequency_ghz, rec.mode, rec.n_bs, seed_index));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(result.drops.size());
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    for (std::size_t i = 0; i < result.drops.size(); i += static_cast<std::size_t>(grid.n_seeds)) {
        CellSummary c;
        c.frequency_ghz = result.drops[i].frequency_ghz;
        c.mode = result.drops[i].mode;
        c.n_bs = result.drops[i].n_bs;
        c.n_seeds = grid.n_seeds;
        double sum_w = 0.0, sum_db = 0.0, sum_db2 = 0.0, sum_p = 0.0, sum_p2 = 0.0, sum_np = 0.0, sum_snr = 0.0,
               sum_frac = 0.0;
        for (int k = 0; k < grid.n_seeds; ++k) {
            const DropResult& r = result.drops[i + static_cast<std::size_t>(k)].result;
            sum_w += r.w_system;
            sum_db += r.wf_system_db;
            sum_db2 += r.wf_system_db * r.wf_system_db;
            const double p_kw = r.p_total_per_km2_w / 1000.0;
            sum_p += p_kw;
            sum_p2 += p_kw * p_kw;
            sum_np += r.p_non_path_per_km2_w / 1000.0;
            sum_snr += r.snr.mean_db;
            sum_frac += r.snr.fraction_meeting_target;
            c.max_audit_error = std::max(c.max_audit_error, r.audit.relative_error());
        }
        const double n = grid.n_seeds;
        auto sample_std = [n](double s, double s2) {
            if (n < 2) return 0.0;
            const double mean = s / n;
            return std::sqrt(std::max(0.0, (s2 - n * mean * mean) / (n - 1)));
        };
        c.wf_mean_db = linear_to_db(sum_w / n);
        c.wf_std_db = sample_std(sum_db, sum_db2);
        c.p_total_mean_kw_per_km2 = sum_p / n;
        c.p_total_std_kw_per_km2 = sample_std(sum_p, sum_p2);
        c.p_nonpath_kw_per_km2 = sum_np / n;
        c.mean_snr_db = sum_snr / n;
        c.frac_ue_meeting_target = sum_frac / n;
        result.cells.push_back(c);
    }
    return result;
}

void write_drops_csv(std::ostream& out, const CampaignResult& result) {
    out << "frequency_ghz,antenna_mode,n_bs,seed,wf_system_db,p_total_kw_per_km2,p_nonpath_kw_per_km2,mean_snr_db,"
           "frac_ue_meeting_target\n";
    for (const auto& d : result.drops) {
        const auto& r = d.result;
        out << fmt::format("{:g},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", d.frequency_ghz, to_string(d.mode),
                           d.n_bs, d.seed, r.wf_system_db, r.p_total_per_km2_w / 1000.0,
                           r.p_non_path_per_km2_w / 1000.0, r.snr.mean_db, r.snr.fraction_meeting_target);
    }
}

void write_aggregate_csv(std::ostream& out, const CampaignResult& result) {
    out << "frequency_ghz,antenna_mode,n_bs,n_seeds,wf_mean_db,wf_std_db,p_total_mean_kw_per_km2,"
           "p_total_std_kw_per_km2,p_nonpath_kw_per_km2,mean_snr_db,frac_ue_meeting_target\n";
    for (const auto& c : result.cells) {
        out << fmt::format("{:g},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n", c.frequency_ghz,
                           to_string(c.mode), c.n_bs, c.n_seeds, c.wf_mean_db, c.wf_std_db, c.p_total_mean_kw_per_km2,
                           c.p_total_std_kw_per_km2, c.p_nonpath_kw_per_km2, c.mean_snr_db, c.frac_ue_meeting_target);
    }
}

}  // namespace wastefactor
