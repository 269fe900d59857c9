#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sdgnet/ingest.hpp"

namespace sdgnet {

// Everything a pipeline run needs, loadable from a JSON config file. CLI
// flags override individual fields after loading.
struct PipelineConfig {
    std::string panel_csv;
    std::string scores_csv;
    std::string panel_format = "long";  // "long" | "wide"
    YearWindow window{2000, 2024};
    double strong_threshold = 0.8;
    double train_fraction = 0.8;
    std::uint64_t seed = 42;
    double probability_threshold = 0.5;
    double category_cutoff_low = 50.0;
    double category_cutoff_high = 80.0;
    std::string model_source = "fit";  // "fit" | "paper-fixture"
    std::string output_dir = "out";
    std::string country_filter;  // empty = all usable countries
    bool emit_svg = true;

    static PipelineConfig from_json_file(const std::filesystem::path& path);
    static PipelineConfig from_json_text(const std::string& text);

    // Throws DomainError on any out-of-range field.
    void validate() const;
};

struct ManifestEntry {
    std::string path;    // relative to the output directory
    std::string digest;  // fnv1a-64 of the file bytes, lowercase hex
};

struct Manifest {
    std::vector<ManifestEntry> files;  // sorted by path
};

enum class Verb { Ingest, Network, Features, Fit, Evaluate, Classify, Report, Run };

// Runs the stages the verb needs and writes its outputs under
// config.output_dir. Verb::Run executes everything and writes manifest.json;
// the returned manifest lists what was written either way. On error the
// partial outputs of this invocation are removed and the failure is rethrown
// with the stage name prefixed.
Manifest run_verb(const PipelineConfig& config, Verb verb);

inline Manifest run_pipeline(const PipelineConfig& config) {
    return run_verb(config, Verb::Run);
}

}  // namespace sdgnet
