#include "pmot/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmot/barycenter.hpp"
#include "pmot/experiments.hpp"
#include "pmot/io.hpp"
#include "pmot/measure.hpp"
#include "pmot/representations.hpp"
#include "pmot/transport.hpp"

namespace pmot {

namespace {

// --out paths are taken relative to PMOT_OUT_DIR when that is set.
std::string resolve_out_path(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* dir = std::getenv("PMOT_OUT_DIR");
    if (dir == nullptr || *dir == '\0') return path;
    std::string joined(dir);
    if (joined.back() != '/') joined += '/';
    return joined + path;
}

// Writes through a buffer so a failed computation never leaves a truncated file.
void deliver(const std::string& out_path, const std::string& payload, std::ostream& fallback) {
    if (out_path.empty()) {
        fallback << payload;
        return;
    }
    const auto resolved = resolve_out_path(out_path);
    std::ofstream f(resolved);
    if (!f) throw std::invalid_argument("cannot open output file '" + resolved + "'");
    f << payload;
}

std::vector<int> parse_n_values(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        try {
            if (colon == std::string::npos) {
                out.push_back(std::stoi(item));
            } else {
                const int lo = std::stoi(item.substr(0, colon));
                const int hi = std::stoi(item.substr(colon + 1));
                if (hi < lo) throw std::invalid_argument(item);
                for (int n = lo; n <= hi; ++n) out.push_back(n);
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("--n expects values like '16' or '2:50', got '" + item + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument("--n produced no sample sizes");
    return out;
}

Grid1D auto_grid_1d(const PersistenceMeasure& mu, std::optional<double> t_min,
                    std::optional<double> t_max, std::size_t samples) {
    double lo = 0.0, hi = 1.0;
    if (!mu.empty()) {
        lo = mu.atoms().front().point.birth;
        hi = lo;
        for (const auto& a : mu.atoms()) {
            lo = std::min(lo, a.point.birth);
            hi = std::max(hi, a.point.death);
        }
        const double pad = 0.05 * (hi - lo + 1.0);
        lo -= pad;
        hi += pad;
    }
    return Grid1D(t_min.value_or(lo), t_max.value_or(hi), samples);
}

const char* plot_script_body = R"(#!/usr/bin/env python3
import csv, sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "lln.csv"
ns, med, p10, p90 = [], [], [], []
with open(path) as f:
    for row in csv.DictReader(r for r in f if not r.startswith("#")):
        ns.append(int(row["n"]))
        med.append(float(row["median"]))
        p10.append(float(row["p10"]))
        p90.append(float(row["p90"]))

fig, ax = plt.subplots(figsize=(6, 4))
ax.fill_between(ns, p10, p90, alpha=0.25, label="10-90%")
ax.plot(ns, med, marker="o", ms=3, label="median")
ax.set_xlabel("n")
ax.set_ylabel("distance to limit")
ax.set_xscale("log")
ax.set_yscale("log")
ax.legend()
fig.tight_layout()
out = path.rsplit(".", 1)[0] + ".png"
fig.savefig(out, dpi=150)
print(out)
)";

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"optimal partial transport for persistence data"};
    app.require_subcommand(1);

    std::string out_path;

    // dist
    auto* dist = app.add_subcommand("dist", "transport distance between two measures");
    std::vector<std::string> dist_files;
    double dist_p = 2.0;
    std::string plan_path;
    dist->add_option("files", dist_files, "two measure files")->required()->expected(2);
    dist->add_option("--p", dist_p, "cost exponent, finite >= 1")->capture_default_str();
    dist->add_option("--plan", plan_path, "also write the optimal plan as JSON to this file");

    // bottleneck
    auto* bott = app.add_subcommand("bottleneck", "bottleneck distance between two diagrams");
    std::vector<std::string> bott_files;
    bott->add_option("files", bott_files, "two diagram files")->required()->expected(2);

    // barycenter
    auto* bary = app.add_subcommand("barycenter", "weighted mean of a family of measures");
    std::vector<std::string> bary_files;
    std::vector<double> bary_weights;
    double bary_p = 2.0;
    bool bary_exact = false;
    int bary_random_starts = 1, bary_max_iter = 100;
    std::uint64_t bary_seed = 0;
    bary->add_option("files", bary_files, "input measure files")->required()->expected(-1);
    bary->add_option("--weights", bary_weights, "one positive weight per input, summing to 1")
        ->delimiter(',');
    bary->add_option("--p", bary_p, "cost exponent, finite > 1")->capture_default_str();
    bary->add_flag("--exact", bary_exact, "solve the small-instance linear program instead");
    bary->add_option("--random-starts", bary_random_starts, "extra perturbed seeds")
        ->capture_default_str();
    bary->add_option("--max-iter", bary_max_iter, "iteration cap per start")->capture_default_str();
    bary->add_option("--seed", bary_seed, "seed for the random starts")->capture_default_str();

    // surface
    auto* surf = app.add_subcommand("surface", "persistence surface on a 2D grid");
    std::string surf_file;
    double surf_bandwidth = 0.0, surf_power = 1.0;
    std::optional<double> sx_min, sx_max, sy_min, sy_max;
    std::size_t surf_nx = 64, surf_ny = 64;
    surf->add_option("file", surf_file, "measure file")->required();
    surf->add_option("--bandwidth", surf_bandwidth, "Gaussian kernel width, > 0")->required();
    surf->add_option("--power", surf_power, "persistence weight exponent, >= 1")
        ->capture_default_str();
    surf->add_option("--x-min", sx_min, "grid bound (default: data box, padded)");
    surf->add_option("--x-max", sx_max, "grid bound");
    surf->add_option("--y-min", sy_min, "grid bound");
    surf->add_option("--y-max", sy_max, "grid bound");
    surf->add_option("--nx", surf_nx, "grid resolution in x")->capture_default_str();
    surf->add_option("--ny", surf_ny, "grid resolution in y")->capture_default_str();

    // silhouette
    auto* silh = app.add_subcommand("silhouette", "weighted tent summary on a 1D grid");
    std::string silh_file;
    double silh_p = 2.0;
    std::optional<double> silh_t_min, silh_t_max;
    std::size_t silh_samples = 256;
    silh->add_option("file", silh_file, "measure file")->required();
    silh->add_option("--p", silh_p, "weight exponent, >= 1")->capture_default_str();
    silh->add_option("--t-min", silh_t_min, "grid bound (default: data range, padded)");
    silh->add_option("--t-max", silh_t_max, "grid bound");
    silh->add_option("--samples", silh_samples, "grid resolution")->capture_default_str();

    // betti
    auto* betti = app.add_subcommand("betti", "weighted live-mass curve on a 1D grid");
    std::string betti_file;
    double betti_p = 1.0, betti_q = 1.0;
    std::optional<double> betti_t_min, betti_t_max;
    std::size_t betti_samples = 256;
    betti->add_option("file", betti_file, "measure file")->required();
    betti->add_option("--p", betti_p, "weight exponent, >= 1")->capture_default_str();
    betti->add_option("--q", betti_q, "norm exponent, >= 1")->capture_default_str();
    betti->add_option("--t-min", betti_t_min, "grid bound (default: data range, padded)");
    betti->add_option("--t-max", betti_t_max, "grid bound");
    betti->add_option("--samples", betti_samples, "grid resolution")->capture_default_str();

    // lln
    auto* lln = app.add_subcommand("lln", "convergence of rescaled gap diagrams to their limit");
    std::string lln_n = "2:50";
    int lln_trials = 100, lln_m = 1000;
    double lln_p = 2.0;
    std::uint64_t lln_seed = 42;
    std::string lln_plot;
    lln->add_option("--n", lln_n, "sample sizes: comma list and/or lo:hi ranges")
        ->capture_default_str();
    lln->add_option("--trials", lln_trials, "repetitions per n")->capture_default_str();
    lln->add_option("--p", lln_p, "cost exponent")->capture_default_str();
    lln->add_option("--m", lln_m, "limit discretization size")->capture_default_str();
    lln->add_option("--seed", lln_seed, "base seed")->capture_default_str();
    lln->add_option("--plot-script", lln_plot, "also write a python plotting script here");

    for (auto* sub : {dist, bott, bary, surf, silh, betti, lln})
        sub->add_option("--out", out_path, "output file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 1;
    }

    std::ostringstream payload;
    if (*dist) {
        const auto a = load_measure_auto_file(dist_files[0]);
        const auto b = load_measure_auto_file(dist_files[1]);
        const Exponent p(dist_p);
        payload << format_double(ot_distance(a, b, p)) << '\n';
        if (!plan_path.empty()) {
            const auto plan = optimal_plan(a, b, p);
            std::ofstream pf(resolve_out_path(plan_path));
            if (!pf) throw std::invalid_argument("cannot open plan file '" + plan_path + "'");
            pf << plan_to_json(plan, a, b) << '\n';
        }
    } else if (*bott) {
        const auto a = load_measure_auto_file(bott_files[0]);
        const auto b = load_measure_auto_file(bott_files[1]);
        payload << format_double(bottleneck_distance(a, b)) << '\n';
    } else if (*bary) {
        std::vector<PersistenceMeasure> inputs;
        for (const auto& f : bary_files) inputs.push_back(load_measure_auto_file(f));
        std::vector<double> weights = bary_weights;
        if (weights.empty())
            weights.assign(inputs.size(), 1.0 / static_cast<double>(inputs.size()));
        BarycenterProblem problem(std::move(inputs), std::move(weights), bary_p);

        nlohmann::json trace;
        PersistenceMeasure result;
        if (bary_exact) {
            result = exact_barycenter_lp(problem);
            trace["energy"] = frechet_energy(result, problem);
            trace["trace"] = nlohmann::json::array();
            trace["converged"] = true;
        } else {
            std::mt19937_64 rng(bary_seed);
            FrechetOptions options;
            options.max_iterations = bary_max_iter;
            auto state = multistart_frechet_mean(problem, rng, bary_random_starts, options);
            result = state.candidate;
            trace["energy"] = state.energy;
            trace["trace"] = state.energy_trace;
            trace["converged"] = state.converged;
        }
        std::ostringstream m;
        save_measure(m, result);
        payload << m.str() << "# energy_trace " << trace.dump() << '\n';
    } else if (*surf) {
        const auto mu = load_measure_auto_file(surf_file);
        double lo_x = 0.0, hi_x = 1.0, lo_y = 0.0, hi_y = 1.0;
        if (!mu.empty()) {
            lo_x = hi_x = mu.atoms().front().point.birth;
            lo_y = hi_y = mu.atoms().front().point.death;
            for (const auto& a : mu.atoms()) {
                lo_x = std::min(lo_x, a.point.birth);
                hi_x = std::max(hi_x, a.point.birth);
                lo_y = std::min(lo_y, a.point.death);
                hi_y = std::max(hi_y, a.point.death);
            }
            lo_x -= 3 * surf_bandwidth;
            hi_x += 3 * surf_bandwidth;
            lo_y -= 3 * surf_bandwidth;
            hi_y += 3 * surf_bandwidth;
        }
        const Grid2D grid(sx_min.value_or(lo_x), sx_max.value_or(hi_x), sy_min.value_or(lo_y),
                          sy_max.value_or(hi_y), surf_nx, surf_ny);
        const auto values = persistence_surface(mu, {surf_bandwidth, surf_power}, grid);
        write_surface_csv(payload, grid, values);
    } else if (*silh) {
        const auto mu = load_measure_auto_file(silh_file);
        const auto grid = auto_grid_1d(mu, silh_t_min, silh_t_max, silh_samples);
        write_curve_csv(payload, grid, silhouette(mu, silh_p, grid));
    } else if (*betti) {
        const auto mu = load_measure_auto_file(betti_file);
        const auto grid = auto_grid_1d(mu, betti_t_min, betti_t_max, betti_samples);
        write_curve_csv(payload, grid, betti_curve(mu, betti_p, betti_q, grid));
    } else if (*lln) {
        ExperimentConfig config;
        config.n_values = parse_n_values(lln_n);
        config.trials = lln_trials;
        config.p = lln_p;
        config.limit_atoms = lln_m;
        config.seed = lln_seed;
        const auto rows = convergence_experiment(config);
        write_experiment_csv(payload, config, rows);
        if (!lln_plot.empty()) {
            std::ofstream pf(resolve_out_path(lln_plot));
            if (!pf) throw std::invalid_argument("cannot open plot script file '" + lln_plot + "'");
            pf << plot_script_body;
        }
    }

    deliver(out_path, payload.str(), out);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(argc, argv, out, err);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace pmot
