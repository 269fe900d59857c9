#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sdgnet/errors.hpp"
#include "sdgnet/model.hpp"
#include "sdgnet/pipeline.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::string country;
    std::string out_dir;
    std::uint64_t seed = 0;
    double strong_threshold = 0.0;
    bool seed_set = false;
    bool threshold_set = false;
    bool paper_model = false;
};

sdgnet::PipelineConfig build_config(const CliArgs& args) {
    sdgnet::PipelineConfig cfg;
    if (!args.config_path.empty())
        cfg = sdgnet::PipelineConfig::from_json_file(args.config_path);
    if (!args.country.empty()) cfg.country_filter = args.country;
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (args.seed_set) cfg.seed = args.seed;
    if (args.threshold_set) cfg.strong_threshold = args.strong_threshold;
    if (args.paper_model) cfg.model_source = "paper-fixture";
    return cfg;
}

int dispatch(const CliArgs& args, sdgnet::Verb verb) {
    const sdgnet::PipelineConfig cfg = build_config(args);
    const sdgnet::Manifest manifest = sdgnet::run_verb(cfg, verb);
    for (const auto& entry : manifest.files)
        std::cout << entry.digest << "  " << cfg.output_dir << '/' << entry.path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SDG indicator network classifier: builds per-country signed correlation "
                 "networks, computes direct/indirect effects, fits or applies the logistic "
                 "model, and emits the report artifacts."};
    app.require_subcommand(1);
    app.fallthrough();

    CliArgs args;
    app.add_option("--config", args.config_path, "JSON config file");
    app.add_option("--country", args.country, "restrict report outputs to one country code");
    app.add_option("--seed", args.seed, "split seed override")->each([&](const std::string&) {
        args.seed_set = true;
    });
    app.add_option("--strong-threshold", args.strong_threshold,
                   "strong-edge correlation threshold override")
        ->each([&](const std::string&) { args.threshold_set = true; });
    app.add_flag("--paper-model", args.paper_model,
                 "classify with the published coefficient fixture instead of refitting");
    app.add_option("--out", args.out_dir, "output directory override");

    std::pair<const char*, sdgnet::Verb> verbs[] = {
        {"ingest", sdgnet::Verb::Ingest},       {"network", sdgnet::Verb::Network},
        {"features", sdgnet::Verb::Features},   {"fit", sdgnet::Verb::Fit},
        {"evaluate", sdgnet::Verb::Evaluate},   {"classify", sdgnet::Verb::Classify},
        {"report", sdgnet::Verb::Report},       {"run", sdgnet::Verb::Run},
    };
    const char* descriptions[] = {
        "parse and clean the panel, write the drop log",
        "write node list and correlation heatmap per country",
        "write the per-indicator feature table per country",
        "fit the pooled logistic model, write model.json",
        "fit and evaluate on the held-out stratified split",
        "classify indicators, write report_<country>.csv",
        "classification report plus per-goal, bar and pie outputs",
        "full pipeline with manifest.json",
    };
    sdgnet::Verb chosen = sdgnet::Verb::Run;
    int vi = 0;
    for (const auto& [name, verb] : verbs) {
        CLI::App* sub = app.add_subcommand(name, descriptions[vi++]);
        sub->callback([&chosen, verb] { chosen = verb; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        return dispatch(args, chosen);
    } catch (const sdgnet::FitError& e) {
        std::cerr << "fit error: " << e.what() << '\n';
        return 3;
    } catch (const sdgnet::DomainError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 1;
    } catch (const sdgnet::ParseError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const sdgnet::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const sdgnet::IoError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
