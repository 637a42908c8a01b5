#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <optional>

#include "mechsq/runner/scenarios.hpp"
#include "mechsq/runner/sweep.hpp"

namespace mechsq::cli {

std::vector<Real> parse_value_list(const std::string& text) {
    std::vector<Real> values;
    size_t pos = 0;
    const auto is_space = [](char c) { return c == ' ' || c == '\t'; };
    if (text.find_first_not_of(" \t") == std::string::npos) return values;
    while (pos <= text.size()) {
        size_t end = text.find(',', pos);
        if (end == std::string::npos) end = text.size();
        size_t a = pos, b = end;
        while (a < b && is_space(text[a])) ++a;
        while (b > a && is_space(text[b - 1])) --b;
        Real v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data() + a, text.data() + b, v);
        if (a == b || ec != std::errc{} || ptr != text.data() + b) {
            throw InvalidArgument("bad value '" + text.substr(a, b - a) + "' in list '" + text + "'");
        }
        values.push_back(v);
        pos = end + 1;
    }
    return values;
}

namespace {

void print_report(std::ostream& out, std::ostream& err, const runner::Manifest& manifest,
                  const std::vector<std::filesystem::path>& files) {
    for (const auto& f : files) out << f.string() << '\n';
    for (const auto& e : manifest.entries) {
        if (!e.ok) err << "failed: " << e.curve << ": " << e.error << '\n';
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Feedback-assisted squeezing of a qubit-coupled oscillator"};
    app.require_subcommand(1);
    app.fallthrough();

    runner::RunOptions options;
    std::optional<int> cutoff;
    app.add_option("--out", options.out_dir, "Output directory")->capture_default_str();
    app.add_option("--cutoff", cutoff, "Fock cutoff for every Fock-space run")->check(CLI::PositiveNumber);
    app.add_option("--threads", options.threads, "Concurrent runs")->check(CLI::PositiveNumber)->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "Run a figure preset or a custom config");
    std::string scenario;
    std::string custom_path;
    simulate->add_option("scenario", scenario, "fig1 fig2a fig2b fig3a fig3b fig4 fig5 fig6a fig6b fig7 | custom")
        ->required();
    simulate->add_option("config", custom_path, "Config file (with 'custom')");

    auto* sweep = app.add_subcommand("sweep", "Run one config over a list of axis values");
    std::string sweep_config;
    std::string axis;
    std::string values_text;
    sweep->add_option("config", sweep_config, "Config file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--axis", axis, "omega_m omega_a g gamma n_th dt_measure n_intervals")->required();
    sweep->add_option("--values", values_text, "Comma-separated values")->required();

    std::vector<std::string> args(argv + 1, argv + argc);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kFatal;
    }

    try {
        options.cutoff = cutoff;
        if (*simulate) {
            if (scenario == "custom") {
                if (custom_path.empty()) throw InvalidArgument("simulate custom needs a config path");
                scenario = "custom:" + custom_path;
            } else if (!custom_path.empty()) {
                throw InvalidArgument("unexpected argument '" + custom_path + "'");
            }
            const auto report = runner::run_scenario(scenario, options);
            print_report(out, err, report.manifest, report.files);
            return report.all_ok() ? kSuccess : kPartial;
        }
        const auto config = runner::parse_config(sweep_config);
        const auto report = runner::run_sweep(config, axis, parse_value_list(values_text), options);
        print_report(out, err, report.manifest, report.files);
        return report.all_ok() ? kSuccess : kPartial;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFatal;
    }
}

}  // namespace mechsq::cli
