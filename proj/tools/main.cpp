#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fraudkit/config.hpp"
#include "fraudkit/dataset.hpp"
#include "fraudkit/error.hpp"
#include "fraudkit/metrics.hpp"
#include "fraudkit/pipeline.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_override;
};

fraudkit::PipelineConfig load_effective_config(const CommonArgs& args) {
    if (args.config_path.empty()) {
        throw fraudkit::ConfigError("--config <path> is required");
    }
    fraudkit::PipelineConfig config = fraudkit::parse_config_file(args.config_path);
    if (args.seed_override) config.seed = *args.seed_override;
    if (args.out_override) config.out_dir = *args.out_override;
    if (const char* env_out = std::getenv("FRAUDKIT_OUT_DIR"); env_out && !args.out_override) {
        config.out_dir = env_out;
    }
    config.validate();
    return config;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "path to the pipeline config file");
    cmd->add_option("--seed", args.seed_override, "override the config seed");
    cmd->add_option("--out", args.out_override, "override the output directory");
}

int cmd_generate(const CommonArgs& args) {
    const fraudkit::PipelineConfig config = load_effective_config(args);
    const fraudkit::Dataset data = fraudkit::generate_synthetic(
        config.synthetic, config.seed + fraudkit::seed_offset::kGenerate);

    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) {
        throw fraudkit::IoError("cannot create output directory '" + config.out_dir + "'");
    }
    const std::string path = (std::filesystem::path(config.out_dir) / "dataset.csv").string();
    fraudkit::write_csv(data, path, config.label_column);

    const fraudkit::ClassCounts counts = fraudkit::class_counts(data);
    std::cout << "wrote " << path << " (" << data.n_rows() << " rows, " << data.n_features()
              << " features, " << counts.positives << " positives)\n";
    return 0;
}

int cmd_inspect(const CommonArgs& args, const std::string& csv_path,
                const std::string& label_column) {
    if (!csv_path.empty()) {
        std::cout << fraudkit::inspect_csv(csv_path, label_column);
        return 0;
    }
    std::cout << fraudkit::inspect_input(load_effective_config(args));
    return 0;
}

int cmd_run(const CommonArgs& args, const std::string& format_name) {
    const fraudkit::PipelineConfig config = load_effective_config(args);
    const fraudkit::ReportFormat format = fraudkit::report_format_from_name(format_name);
    const fraudkit::PipelineResult result = fraudkit::run_pipeline(config);
    for (const auto& warning : result.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    std::cout << fraudkit::render_report(result.reports, format);
    if (format == fraudkit::ReportFormat::Table) {
        std::cout << "artifacts in " << config.out_dir << " (" << result.written_files.size()
                  << " files)\n";
    }
    return 0;
}

int cmd_report(const std::string& out_dir, const std::string& format_name) {
    const std::string manifest_path =
        (std::filesystem::path(out_dir) / "manifest.json").string();
    const fraudkit::ReportFormat format = fraudkit::report_format_from_name(format_name);
    std::cout << fraudkit::render_report_from_manifest(manifest_path, format);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic fraud-detection pipeline: undersample, scale, "
                 "train four classifiers, evaluate"};
    app.require_subcommand(1);

    CommonArgs gen_args;
    CLI::App* generate = app.add_subcommand("generate", "write a synthetic dataset CSV");
    add_common(generate, gen_args);

    CommonArgs inspect_args;
    std::string inspect_csv_path;
    std::string inspect_label = "class";
    CLI::App* inspect = app.add_subcommand("inspect", "summarize the configured input");
    add_common(inspect, inspect_args);
    inspect->add_option("--csv", inspect_csv_path, "inspect a CSV directly instead of a config");
    inspect->add_option("--label-column", inspect_label, "label column for --csv");

    CommonArgs run_args;
    std::string run_format = "table";
    CLI::App* run = app.add_subcommand("run", "run the full pipeline and write artifacts");
    add_common(run, run_args);
    run->add_option("--format", run_format, "stdout rendering: table, json, or csv");

    std::string report_out = "out";
    std::string report_format = "table";
    CLI::App* report = app.add_subcommand("report", "re-render the report from a manifest");
    report->add_option("--out", report_out, "output directory holding manifest.json");
    report->add_option("--format", report_format, "table, json, or csv");

    try {
        app.parse(argc, argv);
        if (generate->parsed()) return cmd_generate(gen_args);
        if (inspect->parsed()) return cmd_inspect(inspect_args, inspect_csv_path, inspect_label);
        if (run->parsed()) return cmd_run(run_args, run_format);
        if (report->parsed()) return cmd_report(report_out, report_format);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage problems are config errors
    } catch (const fraudkit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
