#include "rabi_floquet/cli.hpp"

#include "rabi_floquet/config.hpp"
#include "rabi_floquet/spectrum.hpp"
#include "rabi_floquet/tasks.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace rabi_floquet {

namespace {

struct Options {
    std::string config;
    std::string model;
    std::string out;
    std::vector<std::string> sets;
    bool plot{false};
};

void add_options(CLI::App* sub, Options& o) {
    sub->add_option("--config,-c", o.config, "config file (sections [model] [truncation] [task] [sweep] [output])");
    sub->add_option("--model,-m", o.model, "airm or asrm, overrides model.model");
    sub->add_option("--out,-o", o.out, "output directory, overrides output.dir");
    sub->add_option("--set,-s", o.sets, "section.key=value override, repeatable")->take_all();
    sub->add_flag("--plot", o.plot, "also write a matplotlib script");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Floquet quasi-energies and driven dynamics of anisotropic and asymmetric Rabi models",
                 "rabi-floquet"};
    app.require_subcommand(1);
    Options opt;
    for (const char* name : {"spectrum", "dynamics", "fourier", "sweep"}) {
        add_options(app.add_subcommand(name, std::string("run the ") + name + " task"), opt);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    const std::string task = app.get_subcommands().front()->get_name();

    RunConfig cfg;
    try {
        ConfigTable table = opt.config.empty() ? ConfigTable{} : load_config_file(opt.config);
        if (!opt.model.empty()) apply_override(table, "model.model=" + opt.model);
        if (!opt.out.empty()) apply_override(table, "output.dir=" + opt.out);
        if (opt.plot) apply_override(table, "output.plot=true");
        for (const auto& s : opt.sets) apply_override(table, s);
        apply_override(table, "task.task=" + task);
        cfg = build_run_config(table);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        const TaskOutput result = run_task(cfg);
        write_outputs(result, cfg.output_dir);
        for (const auto& f : result.files) out << cfg.output_dir << "/" << f.name << "\n";
        if (result.failed_rows > 0) {
            err << "error: " << result.failed_rows << " row(s) failed numerically\n";
            return kExitNumerical;
        }
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace rabi_floquet
