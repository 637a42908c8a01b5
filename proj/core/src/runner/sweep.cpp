#include "mechsq/runner/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "mechsq/parallel.hpp"
#include "mechsq/runner/experiment.hpp"

namespace mechsq::runner {

const std::vector<std::string>& sweep_axes() {
    static const std::vector<std::string> axes = {"omega_m", "omega_a", "g",         "gamma",
                                                  "n_th",    "dt_measure", "n_intervals"};
    return axes;
}

ExperimentConfig with_axis_value(const ExperimentConfig& config, const std::string& axis, Real value) {
    ExperimentConfig c = config;
    auto& p = c.params;
    if (axis == "omega_m") {
        p.omega_m = value;
    } else if (axis == "omega_a") {
        p.omega_a = value;
    } else if (axis == "g") {
        p.g = value;
    } else if (axis == "gamma") {
        p.gamma = value;
    } else if (axis == "n_th") {
        p.n_th = value;
    } else if (axis == "dt_measure" || axis == "n_intervals") {
        if (!uses_schedule(c.engine)) {
            throw InvalidArgument("axis '" + axis + "' needs a feedback engine, config uses " +
                                  std::string(to_string(c.engine)));
        }
        if (axis == "dt_measure") {
            c.dt_measure = value;
            // Keep the horizon fixed unless the interval count was pinned.
            if (!config.n_intervals) c.n_intervals.reset();
        } else {
            if (value < 1 || value != std::floor(value)) throw InvalidArgument("n_intervals must be a positive integer");
            c.n_intervals = static_cast<int>(value);
        }
    } else {
        throw InvalidArgument("unknown sweep axis '" + axis + "'");
    }
    c.name = config.name + "_" + axis + "_" + format_number(value);
    check(c);
    return c;
}

SweepReport run_sweep(const ExperimentConfig& config, const std::string& axis, const std::vector<Real>& values,
                      const RunOptions& options) {
    if (std::find(sweep_axes().begin(), sweep_axes().end(), axis) == sweep_axes().end()) {
        throw InvalidArgument("unknown sweep axis '" + axis + "'");
    }
    SweepReport report;
    report.manifest.scenario = config.name + "_sweep_" + axis;
    report.points.resize(values.size());

    struct Outcome {
        std::optional<ExperimentConfig> config;
        std::optional<ExperimentResult> result;
    };
    std::vector<Outcome> outcomes(values.size());
    parallel_for(values.size(), options.threads, [&](size_t i) {
        auto& pt = report.points[i];
        pt.value = values[i];
        try {
            auto c = with_axis_value(config, axis, values[i]);
            if (options.cutoff && uses_fock(c.engine)) c.cutoff = options.cutoff;
            outcomes[i].config = c;
            outcomes[i].result = run_experiment(c);
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
    });

    report.summary.header = {"value", "status", "steady", "steady_var_x1", "steady_var_x1_db", "steady_renorm_db",
                             "final_purity", "final_p_e", "error"};
    for (size_t i = 0; i < values.size(); ++i) {
        auto& pt = report.points[i];
        const auto& out = outcomes[i];
        std::vector<std::string> row = {format_number(pt.value)};
        if (!out.result) {
            row.insert(row.end(), {"failed", "", "", "", "", "", "", pt.error});
            report.summary.rows.push_back(std::move(row));
            ManifestEntry e;
            e.curve = config.name + "_" + axis + "_" + format_number(pt.value);
            e.ok = false;
            e.error = pt.error;
            if (out.config) e.inputs = describe(*out.config);
            report.manifest.entries.push_back(std::move(e));
            continue;
        }
        const auto& res = *out.result;
        const auto& cfg = *out.config;
        pt.ok = true;
        const auto& last = res.series.rows.back();
        pt.final_purity = last.purity;
        pt.final_p_e = last.p_e;
        // Short runs fall back to the last sample.
        pt.steady = res.steady && res.steady->steady;
        pt.steady_var_x1 = res.steady ? res.steady->value : last.var_x1;

        const auto file = options.out_dir / (cfg.name + ".csv");
        write_csv(file, res.series);
        ManifestEntry e{cfg.name, file, sha256_file(file), true, {}, describe(cfg)};
        for (const auto& a : res.advisories) e.inputs.emplace_back("advisory", a);
        report.manifest.entries.push_back(std::move(e));
        report.files.push_back(file);

        row.insert(row.end(), {"ok", pt.steady ? "1" : "0", format_number(pt.steady_var_x1),
                               format_number(to_db(pt.steady_var_x1)),
                               format_number(to_db(renormalize(pt.steady_var_x1, cfg.params.n_th))),
                               format_number(pt.final_purity), pt.final_p_e ? format_number(*pt.final_p_e) : "", ""});
        report.summary.rows.push_back(std::move(row));
    }

    const auto summary_file = options.out_dir / (report.manifest.scenario + ".csv");
    write_csv(summary_file, report.summary);
    report.files.push_back(summary_file);
    ManifestEntry s{report.manifest.scenario, summary_file, sha256_file(summary_file), true, {}, describe(config)};
    s.inputs.emplace_back("axis", axis);
    std::string list;
    for (Real v : values) list += (list.empty() ? "" : ",") + format_number(v);
    s.inputs.emplace_back("values", list);
    report.manifest.entries.push_back(std::move(s));

    const auto manifest_file = options.out_dir / (report.manifest.scenario + "_manifest.txt");
    report.manifest.write(manifest_file);
    report.files.push_back(manifest_file);
    return report;
}

}  // namespace mechsq::runner
