#include "mechsq/runner/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "mechsq/feedback.hpp"
#include "mechsq/fock_space.hpp"
#include "mechsq/parallel.hpp"
#include "mechsq/runner/experiment.hpp"
#include "mechsq/runner/time_series.hpp"

namespace mechsq::runner {

namespace {

constexpr Real kFeedbackHorizon = 150.0;
constexpr Real kFullModelHorizon = 100.0;
constexpr Real kCadence = 0.5;

SystemParams working_point(Real omega_a, Real n_th) { return {0.1, omega_a, 1.0, 0.1, n_th}; }

std::string tag(Real v) { return format_number(v); }

ExperimentConfig make(const std::string& name, Engine engine, const SystemParams& p, Real horizon) {
    ExperimentConfig c;
    c.name = name;
    c.engine = engine;
    c.params = p;
    c.horizon = horizon;
    c.sample_cadence = kCadence;
    return c;
}

// Above the critical coupling sqrt(omega_a omega_m) / 2 the decaying qubit pumps
// the unmeasured oscillator far above the bath, so the thermal default cutoff is
// not enough. Sized so the top-level guard holds to the end of the run.
int no_feedback_cutoff(const SystemParams& p) {
    if (p.g <= 0.5 * std::sqrt(p.omega_a * p.omega_m)) return default_cutoff(p.n_th);
    return p.n_th <= 0.5 ? 160 : (p.n_th <= 1.0 ? 200 : 240);
}

std::vector<CurveSpec> full_model_curves(const std::string& scenario, Real omega_a) {
    std::vector<CurveSpec> out;
    for (Real n : {0.2, 0.3, 0.4, 3.0}) {
        const std::string stem = scenario + "_full_nth" + tag(n);
        auto c = make(stem, Engine::fock_full, working_point(omega_a, n), kFullModelHorizon);
        c.cutoff = no_feedback_cutoff(c.params);
        out.push_back({stem, c});
    }
    out.push_back({scenario + "_effective",
                   make(scenario + "_effective", Engine::gaussian_effective, working_point(omega_a, 0.0),
                        kFullModelHorizon)});
    return out;
}

CurveSpec feedback_curve(const std::string& scenario, Real n_th, bool enabled) {
    const std::string stem = scenario + (enabled ? "_feedback" : "_no_feedback") + "_nth" + tag(n_th);
    auto c = make(stem, enabled ? Engine::fock_feedback : Engine::fock_no_feedback, working_point(8.0, n_th),
                  kFeedbackHorizon);
    if (!enabled) c.cutoff = no_feedback_cutoff(c.params);
    c.outputs = {"time_series", "steady_state"};
    return {stem, c};
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"fig1", "fig2a", "fig2b", "fig3a", "fig3b", "fig4",
                                                   "fig5", "fig6a", "fig6b", "fig7"};
    return names;
}

std::vector<Real> dt_sweep_grid(const SystemParams& params, int points, Real max_periods) {
    if (points < 1) throw InvalidArgument("dt grid needs at least one point");
    const Real period = optimal_dt(params, 1);
    std::vector<Real> grid;
    grid.reserve(static_cast<size_t>(points));
    for (int k = 1; k <= points; ++k) grid.push_back(max_periods * period * k / points);
    return grid;
}

ScenarioPlan plan_scenario(const std::string& name) {
    ScenarioPlan plan;
    plan.name = name;
    if (name.rfind("custom:", 0) == 0) {
        auto cfg = parse_config(name.substr(7));
        plan.name = cfg.name.empty() ? "custom" : cfg.name;
        // output_path, when given, replaces the stem (relative paths land under --out).
        const std::string stem = cfg.output_path.empty() ? plan.name : cfg.output_path.string();
        plan.curves.push_back({stem, cfg});
    } else if (name == "fig1") {
        plan.curves.push_back(
            {"fig1_effective", make("fig1_effective", Engine::gaussian_effective, working_point(15.0, 0.0), kFeedbackHorizon)});
    } else if (name == "fig2a") {
        plan.curves = full_model_curves(name, 50.0);
    } else if (name == "fig2b") {
        plan.curves = full_model_curves(name, 8.0);
    } else if (name == "fig3a") {
        auto base = make("fig3a_dt_sweep", Engine::fock_feedback, working_point(8.0, 0.0), kFeedbackHorizon);
        plan.dt_grid = dt_sweep_grid(base.params);
        plan.dt_sweep_base = base;
    } else if (name == "fig3b" || name == "fig5") {
        plan.curves.push_back(feedback_curve(name, 0.0, true));
        plan.curves.push_back(feedback_curve(name, 0.0, false));
        if (name == "fig3b") {
            plan.curves.push_back({name + "_effective", make(name + "_effective", Engine::gaussian_effective,
                                                             working_point(8.0, 0.0), kFeedbackHorizon)});
        }
    } else if (name == "fig4") {
        auto c = make("fig4_feedback", Engine::fock_feedback, working_point(8.0, 0.0), 75.0);
        c.wigner = WignerRequest{{0.0, 7.0, 70.0}};
        c.outputs = {"time_series", "wigner"};
        plan.curves.push_back({"fig4_feedback", c});
    } else if (name == "fig6a" || name == "fig6b") {
        for (Real n : {0.2, 0.3, 0.4, 1.0, 3.0, 5.0}) plan.curves.push_back(feedback_curve(name, n, true));
        plan.curves.push_back({name + "_effective", make(name + "_effective", Engine::gaussian_effective,
                                                         working_point(8.0, 0.0), kFeedbackHorizon)});
    } else if (name == "fig7") {
        for (Real n : {0.0, 0.2, 1.0, 3.0}) {
            plan.curves.push_back(feedback_curve(name, n, true));
            plan.curves.push_back(feedback_curve(name, n, false));
        }
    } else {
        throw InvalidArgument("unknown scenario '" + name + "'");
    }
    return plan;
}

namespace {

struct CurveOutcome {
    std::optional<ExperimentResult> result;
    std::string error;
};

void apply_overrides(ExperimentConfig& c, const RunOptions& options) {
    if (options.cutoff && uses_fock(c.engine)) c.cutoff = options.cutoff;
}

ScenarioReport run_dt_sweep(const ScenarioPlan& plan, const RunOptions& options) {
    ScenarioReport report;
    report.manifest.scenario = plan.name;
    auto base = *plan.dt_sweep_base;
    apply_overrides(base, options);
    const FockSpace space(base.resolved_cutoff());

    DtSweepOptions sopt;
    sopt.criterion = base.steady_state;
    sopt.threads = options.threads;
    const auto points = sweep_dt(base.params, space, plan.dt_grid, base.horizon, sopt);

    const Real period = optimal_dt(base.params, 1);
    Table table{{"dt", "dt_over_T", "converged", "steady_var_x1", "steady_var_x1_db", "error"}, {}};
    ManifestEntry entry;
    entry.curve = base.name;
    entry.inputs = describe(base);
    entry.inputs.emplace_back("dt_grid_points", std::to_string(plan.dt_grid.size()));
    for (const auto& p : points) {
        const bool ok = p.error.empty();
        table.rows.push_back({format_number(p.dt), format_number(p.dt / period), p.converged ? "1" : "0",
                              ok ? format_number(p.steady_var_x1) : "", ok ? format_number(to_db(p.steady_var_x1)) : "",
                              p.error});
        if (!ok) {
            entry.ok = false;
            entry.error = "dt = " + format_number(p.dt) + ": " + p.error;
        }
    }
    entry.file = options.out_dir / (base.name + ".csv");
    write_csv(entry.file, table);
    entry.sha256 = sha256_file(entry.file);
    report.files.push_back(entry.file);
    report.manifest.entries.push_back(entry);
    return report;
}

}  // namespace

ScenarioReport run_plan(const ScenarioPlan& plan, const RunOptions& options) {
    ScenarioReport report;
    if (plan.dt_sweep_base) {
        report = run_dt_sweep(plan, options);
    } else {
        report.manifest.scenario = plan.name;
        std::vector<CurveSpec> curves = plan.curves;
        for (auto& c : curves) apply_overrides(c.config, options);

        std::vector<CurveOutcome> outcomes(curves.size());
        parallel_for(curves.size(), options.threads, [&](size_t i) {
            try {
                outcomes[i].result = run_experiment(curves[i].config);
            } catch (const std::exception& e) {
                outcomes[i].error = e.what();
            }
        });

        Table summary{{"curve", "status", "steady", "steady_var_x1", "steady_var_x1_db", "steady_renorm_db",
                       "final_purity", "final_p_e"},
                      {}};
        for (size_t i = 0; i < curves.size(); ++i) {
            const auto& spec = curves[i];
            const auto& out = outcomes[i];
            if (!out.result) {
                report.manifest.entries.push_back({spec.stem, {}, {}, false, out.error, describe(spec.config)});
                summary.rows.push_back({spec.stem, "failed", "", "", "", "", "", ""});
                continue;
            }
            const auto& res = *out.result;
            const auto& cfg = spec.config;
            auto record = [&](const std::string& curve, const std::filesystem::path& file) {
                ManifestEntry e{curve, file, sha256_file(file), true, {}, describe(cfg)};
                for (const auto& a : res.advisories) e.inputs.emplace_back("advisory", a);
                report.manifest.entries.push_back(std::move(e));
                report.files.push_back(file);
            };
            const auto wants = [&](const char* o) {
                return std::find(cfg.outputs.begin(), cfg.outputs.end(), o) != cfg.outputs.end();
            };
            if (wants("time_series")) {
                const auto file = options.out_dir / (spec.stem + ".csv");
                write_csv(file, res.series);
                record(spec.stem, file);
            }
            for (const auto& w : res.wigner) {
                const std::string stem = spec.stem + "_wigner_t" + format_number(w.time);
                const auto file = options.out_dir / (stem + ".grid");
                write_wigner(file, w.grid);
                record(stem, file);
            }
            const auto& last = res.series.rows.back();
            std::vector<std::string> row = {spec.stem, "ok"};
            if (res.steady) {
                row.push_back(res.steady->steady ? "1" : "0");
                row.push_back(format_number(res.steady->value));
                row.push_back(format_number(to_db(res.steady->value)));
                row.push_back(format_number(to_db(renormalize(res.steady->value, cfg.params.n_th))));
            } else {
                row.insert(row.end(), {"", "", "", ""});
            }
            row.push_back(format_number(last.purity));
            row.push_back(last.p_e ? format_number(*last.p_e) : "");
            summary.rows.push_back(std::move(row));
        }
        const auto summary_file = options.out_dir / (plan.name + "_summary.csv");
        write_csv(summary_file, summary);
        report.files.push_back(summary_file);
        report.manifest.entries.push_back({plan.name + "_summary", summary_file, sha256_file(summary_file), true, {}, {}});
    }
    const auto manifest_file = options.out_dir / (plan.name + "_manifest.txt");
    report.manifest.write(manifest_file);
    report.files.push_back(manifest_file);
    return report;
}

ScenarioReport run_scenario(const std::string& name, const RunOptions& options) {
    return run_plan(plan_scenario(name), options);
}

}  // namespace mechsq::runner
