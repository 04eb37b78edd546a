#include "mmgeo/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "mmgeo/errors.hpp"
#include "mmgeo/first_order.hpp"
#include "mmgeo/montecarlo.hpp"
#include "mmgeo/pdp.hpp"

namespace mmgeo {

namespace {

std::string cell(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

constexpr double kLn10Over10 = 0.23025850929940457;

/// Relative error against the reference value, tolerant of the
/// no-coupling case where both sides are infinite (or zero).
double rel_err(double ref, double val)
{
    if (std::isinf(ref) && std::isinf(val)) return 0.0;
    if (ref == val) return 0.0;
    if (ref == 0.0 || std::isinf(ref)) return std::numeric_limits<double>::infinity();
    return std::abs(val - ref) / std::abs(ref);
}

/// 1 when the analytic value falls outside mc +/- 2 se (linear scale).
int flag_2se(double ref, double mc, double se)
{
    if (std::isinf(ref) && std::isinf(mc)) return 0;
    if (std::isinf(ref) || std::isinf(mc)) return 1;
    return std::abs(ref - mc) > 2.0 * se ? 1 : 0;
}

struct DelayCells {
    double tau_mean_ns = std::numeric_limits<double>::quiet_NaN();
    double tau_rms_ns = std::numeric_limits<double>::quiet_NaN();
    double bc_mhz = std::numeric_limits<double>::quiet_NaN();
};

DelayCells delay_cells(const Scenario& s)
{
    DelayCells out;
    try {
        const DelayStats ds = delay_stats(s);
        out.tau_mean_ns = ds.tau_mean * 1e9;
        out.tau_rms_ns = ds.tau_rms * 1e9;
        out.bc_mhz = ds.b_c / 1e6;
    } catch (const domain_error&) {
        // No coupled paths: the delay profile carries no mass.
    }
    return out;
}

void analyze_row(std::ostringstream& csv, double sweep_value, const RunConfig& cfg)
{
    const Scenario& s = cfg.scenario;
    const double nr_exact = avg_first_order_exact(s);
    const double nr_closed = avg_first_order_closed(s);
    const double pl_db_exact = to_db(path_loss_exact(s));
    const double pl_db_closed = to_db(path_loss_closed(s));
    const DelayCells d = delay_cells(s);
    csv << cell(sweep_value) << ',' << cell(nr_exact) << ',' << cell(nr_closed) << ','
        << cell(pl_db_exact) << ',' << cell(pl_db_closed) << ',' << cell(d.tau_mean_ns) << ','
        << cell(d.tau_rms_ns) << ',' << cell(d.bc_mhz) << '\n';
}

struct McPathLoss {
    double pl = 0.0;     ///< linear path loss
    double se = 0.0;     ///< standard error of the linear path loss
    double pl_db = 0.0;
    double se_db = 0.0;
};

McPathLoss mc_path_loss(const Scenario& s, const SceneConfig& scene)
{
    McPathLoss out;
    const auto r = std::get<EstimateWithCI>(estimate(s, scene, EstimateKind::PathLoss));
    out.pl = r.mean;
    out.se = r.se;
    out.pl_db = to_db(r.mean);
    out.se_db = std::isfinite(r.mean) && r.mean > 0.0
                    ? r.se / (r.mean * kLn10Over10)
                    : std::numeric_limits<double>::infinity();
    return out;
}

void simulate_row(std::ostringstream& csv, double sweep_value, const RunConfig& cfg)
{
    const auto count = std::get<EstimateWithCI>(estimate(cfg.scenario, cfg.scene, EstimateKind::Count));
    const McPathLoss pl = mc_path_loss(cfg.scenario, cfg.scene);
    const auto ds = std::get<McDelayStats>(estimate(cfg.scenario, cfg.scene, EstimateKind::DelayStatsEmpirical));
    csv << cell(sweep_value) << ',' << cell(count.mean) << ',' << cell(count.se) << ','
        << cell(pl.pl_db) << ',' << cell(pl.se_db) << ',' << cell(ds.tau_rms * 1e9) << '\n';
}

void compare_row(std::ostringstream& csv, double sweep_value, const RunConfig& cfg)
{
    const Scenario& s = cfg.scenario;
    const double nr_exact = avg_first_order_exact(s);
    const auto count = std::get<EstimateWithCI>(estimate(s, cfg.scene, EstimateKind::Count));
    const double pl_exact = path_loss_exact(s);
    const McPathLoss pl = mc_path_loss(s, cfg.scene);
    csv << cell(sweep_value) << ',' << cell(nr_exact) << ',' << cell(count.mean) << ','
        << cell(count.se) << ',' << cell(rel_err(nr_exact, count.mean)) << ','
        << flag_2se(nr_exact, count.mean, count.se) << ',' << cell(to_db(pl_exact)) << ','
        << cell(pl.pl_db) << ',' << cell(pl.se_db) << ',' << cell(rel_err(pl_exact, pl.pl)) << ','
        << flag_2se(pl_exact, pl.pl, pl.se) << '\n';
}

const char* header_for(RunMode mode)
{
    switch (mode) {
        case RunMode::Analyze:
            return "sweep_value,n_r_exact,n_r_closed,pl_db_exact,pl_db_closed,"
                   "tau_mean_ns,tau_rms_ns,bc_mhz";
        case RunMode::Simulate:
            return "sweep_value,n_r_mc,n_r_se,pl_db_mc,pl_db_se,tau_rms_ns_mc";
        case RunMode::Compare:
            return "sweep_value,n_r_exact,n_r_mc,n_r_se,n_r_rel_err,n_r_flagged,"
                   "pl_db_exact,pl_db_mc,pl_db_se,pl_rel_err,pl_flagged";
    }
    return "";
}

}  // namespace

int run(const RunSpec& spec, std::ostream& log)
{
    RunConfig base;
    try {
        base = load_config(spec.config_path);
    } catch (const io_error& e) {
        log << "error: " << e.what() << '\n';
        return 4;
    } catch (const config_error& e) {
        log << "error: " << e.what() << '\n';
        return 2;
    }
    if (spec.seed) base.scene.master_seed = *spec.seed;
    if (spec.realizations) {
        if (*spec.realizations < 1) {
            log << "error: realizations must be >= 1\n";
            return 2;
        }
        base.scene.realizations = *spec.realizations;
    }

    std::vector<double> sweep_values;
    if (spec.sweep) {
        const SweepSpec& sw = *spec.sweep;
        if (sw.steps < 2) {
            log << "error: sweep requires at least 2 steps\n";
            return 2;
        }
        {
            RunConfig probe = base;
            if (!apply_sweep_value(probe, sw.key, sw.start)) {
                log << "error: unknown sweep key '" << sw.key << "'\n";
                return 2;
            }
        }
        sweep_values.reserve(static_cast<std::size_t>(sw.steps));
        for (int k = 0; k < sw.steps; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(sw.steps - 1);
            sweep_values.push_back(sw.start + t * (sw.stop - sw.start));
        }
    } else {
        sweep_values.push_back(0.0);
    }

    std::ostringstream csv;
    csv << "# schema=1\n" << header_for(spec.mode) << '\n';
    for (double v : sweep_values) {
        RunConfig cfg = base;
        if (spec.sweep) {
            apply_sweep_value(cfg, spec.sweep->key, v);
            try {
                validate(cfg.scenario);
            } catch (const scenario_error& e) {
                log << "error: sweep value " << v << ": " << e.what() << '\n';
                return 2;
            }
        }
        try {
            switch (spec.mode) {
                case RunMode::Analyze: analyze_row(csv, v, cfg); break;
                case RunMode::Simulate: simulate_row(csv, v, cfg); break;
                case RunMode::Compare: compare_row(csv, v, cfg); break;
            }
        } catch (const scenario_error& e) {
            log << "error: sweep value " << v << ": " << e.what() << '\n';
            return 2;
        } catch (const numerical_error& e) {
            log << "error: sweep value " << v << ": " << e.what() << '\n';
            return 3;
        }
    }

    std::ofstream out(spec.out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        log << "error: cannot open output file: " << spec.out_path << '\n';
        return 4;
    }
    out << csv.str();
    out.flush();
    if (!out) {
        log << "error: failed writing output file: " << spec.out_path << '\n';
        return 4;
    }
    log << "wrote " << sweep_values.size() << " data row" << (sweep_values.size() == 1 ? "" : "s")
        << " to " << spec.out_path << '\n';
    return 0;
}

}  // namespace mmgeo
