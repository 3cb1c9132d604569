// srsim: link-level symbiotic-radio experiments driven by JSON configs or
// built-in presets. Data goes to the CSV given by --out / the config; logs go
// to stderr. Exit codes: 0 ok, 2 config error, 3 infeasible allocation.

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "sr/experiment.hpp"

namespace {

struct SubArgs {
    std::string config_path;
    std::string preset_name;
    std::optional<std::uint64_t> seed;
    std::string out_override;
    bool dump_config = false;
};

void add_common(CLI::App* sub, SubArgs& args) {
    sub->add_option("--config", args.config_path, "JSON experiment config (// comments allowed)");
    sub->add_option("--preset", args.preset_name, "built-in preset name");
    sub->add_option("--seed", args.seed, "override the config seed");
    sub->add_option("--out", args.out_override, "override the output CSV path");
    sub->add_flag("--dump-config", args.dump_config,
                  "print the effective config as JSON and exit");
}

int run_sub(const SubArgs& args, sr::ExperimentKind expected) {
    if (args.config_path.empty() == args.preset_name.empty()) {
        std::cerr << "error: exactly one of --config or --preset is required\n";
        return 2;
    }

    if (args.preset_name == "oracles") {
        const std::uint64_t seed = args.seed.value_or(1);
        const auto rows = sr::run_oracle_suite(seed);
        const std::string out = args.out_override.empty() ? "oracles.csv" : args.out_override;
        sr::write_results(rows, out);
        std::cerr << "oracle suite -> " << out << " (" << rows.size() << " rows)\n";
        return 0;
    }

    sr::ExperimentConfig cfg = args.preset_name.empty() ? sr::load_config_file(args.config_path)
                                                        : sr::preset(args.preset_name);
    if (cfg.experiment != expected)
        throw sr::ConfigError("config experiment '" + sr::to_string(cfg.experiment) +
                              "' does not match the '" + sr::to_string(expected) +
                              "' subcommand");
    if (args.seed) {
        cfg.seed = *args.seed;
        cfg.system.seed = *args.seed;
    }
    if (!args.out_override.empty()) cfg.out = args.out_override;

    if (args.dump_config) {
        std::cout << sr::config_to_json_string(cfg);
        return 0;
    }

    std::cerr << "running " << cfg.effective_label() << " (seed " << cfg.seed << ", trials "
              << cfg.trials << ")\n";
    const auto rows = sr::run_experiment(cfg);
    sr::write_results(rows, cfg.out);
    std::cerr << "wrote " << rows.size() << " rows to " << cfg.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbiotic radio link-level simulator"};
    app.require_subcommand(1);

    struct Entry {
        const char* name;
        const char* help;
        sr::ExperimentKind kind;
        SubArgs args;
    };
    Entry entries[] = {
        {"ber", "Monte Carlo BER sweeps (joint detectors)", sr::ExperimentKind::BerSweep, {}},
        {"rate", "ergodic achievable-rate sweeps", sr::ExperimentKind::RateSweep, {}},
        {"alloc", "SISO/MISO resource allocation", sr::ExperimentKind::Allocation, {}},
        {"ris", "RIS passive-beamforming SNR scaling", sr::ExperimentKind::RisScaling, {}},
        {"fdsr", "full-duplex SR cancellation sweeps", sr::ExperimentKind::FdsrSweep, {}},
    };
    for (Entry& e : entries) add_common(app.add_subcommand(e.name, e.help), e.args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        for (Entry& e : entries)
            if (app.get_subcommand(e.name)->parsed()) return run_sub(e.args, e.kind);
        return 2;
    } catch (const sr::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what();
        if (!e.binding.empty()) std::cerr << " (binding: " << e.binding << ")";
        std::cerr << "\n";
        return 3;
    } catch (const sr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
