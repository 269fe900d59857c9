#include "sdgnet/pipeline.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sdgnet/csv.hpp"
#include "sdgnet/errors.hpp"
#include "sdgnet/features.hpp"
#include "sdgnet/model.hpp"
#include "sdgnet/network.hpp"
#include "sdgnet/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sdgnet {

namespace {

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hex64(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Tracks what a run writes so a failed run can remove its partial outputs.
class OutputRecorder {
public:
    explicit OutputRecorder(fs::path root) : root_(std::move(root)) {}

    fs::path path_for(const std::string& name) const { return root_ / name; }

    void record(const std::string& name) { names_.push_back(name); }

    std::ofstream open(const std::string& name) {
        std::ofstream out(path_for(name), std::ios::binary);
        if (!out) throw IoError("cannot open " + path_for(name).string() + " for writing");
        record(name);
        return out;
    }

    void cleanup() {
        std::error_code ec;
        for (const auto& name : names_) fs::remove(root_ / name, ec);
        names_.clear();
    }

    // Names are recorded before their files are written, so skip any that an
    // export legitimately decided not to produce (e.g. a skipped pie chart).
    Manifest manifest() const {
        Manifest m;
        std::vector<std::string> sorted = names_;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (const auto& name : sorted) {
            if (!fs::exists(root_ / name)) continue;
            m.files.push_back({name, hex64(fnv1a64(read_file(root_ / name)))});
        }
        return m;
    }

private:
    fs::path root_;
    std::vector<std::string> names_;
};

json model_to_json(const FittedModel& model, std::uint64_t seed, double train_fraction) {
    json j;
    j["beta"] = model.beta;
    j["covariance"] = model.covariance;
    j["standard_errors"] = model.standard_errors;
    j["ci95"] = model.ci95;
    j["p_values"] = model.p_values;
    j["vif"] = model.vif;
    j["log_likelihood"] = model.log_likelihood;
    j["iterations"] = model.iterations;
    j["converged"] = model.converged;
    j["seed"] = seed;
    j["train_fraction"] = train_fraction;
    return j;
}

std::map<std::string, double> read_scores_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read scores file " + path.string());
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError("line 1: missing header in " + path.string());
    csv::strip_cr(line);
    if (line != "country_code,sdg_index_score")
        throw ParseError("line 1: unexpected scores header \"" + line + "\"");

    std::map<std::string, double> scores;
    while (std::getline(in, line)) {
        ++line_no;
        csv::strip_cr(line);
        const auto fields = csv::split(line);
        if (fields.size() != 2)
            throw ParseError("line " + std::to_string(line_no) + ": expected 2 fields");
        double score = 0.0;
        if (!csv::parse_double(fields[1], score))
            throw ParseError("line " + std::to_string(line_no) + ": unparsable score \"" +
                             fields[1] + "\"");
        if (score < 0.0 || score > 100.0)
            throw DataError("line " + std::to_string(line_no) + ": SDG Index score " +
                            fields[1] + " outside [0,100]");
        if (!scores.emplace(fields[0], score).second)
            throw DataError("line " + std::to_string(line_no) + ": duplicate country " +
                            fields[0]);
    }
    return scores;
}

template <typename T>
void maybe_read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

PipelineConfig PipelineConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DomainError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw DomainError("config: top level must be a JSON object");

    PipelineConfig cfg;
    try {
        maybe_read(j, "panel_csv", cfg.panel_csv);
        maybe_read(j, "scores_csv", cfg.scores_csv);
        maybe_read(j, "panel_format", cfg.panel_format);
        maybe_read(j, "year_start", cfg.window.first);
        maybe_read(j, "year_end", cfg.window.last);
        maybe_read(j, "strong_threshold", cfg.strong_threshold);
        maybe_read(j, "train_fraction", cfg.train_fraction);
        maybe_read(j, "seed", cfg.seed);
        maybe_read(j, "probability_threshold", cfg.probability_threshold);
        if (j.contains("category_cutoffs")) {
            const auto cutoffs = j.at("category_cutoffs").get<std::vector<double>>();
            if (cutoffs.size() != 2)
                throw DomainError("config: category_cutoffs must hold exactly 2 values");
            cfg.category_cutoff_low = cutoffs[0];
            cfg.category_cutoff_high = cutoffs[1];
        }
        maybe_read(j, "model_source", cfg.model_source);
        maybe_read(j, "output_dir", cfg.output_dir);
        maybe_read(j, "country_filter", cfg.country_filter);
        maybe_read(j, "emit_svg", cfg.emit_svg);
    } catch (const json::exception& e) {
        throw DomainError(std::string("config: ") + e.what());
    }
    return cfg;
}

PipelineConfig PipelineConfig::from_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

void PipelineConfig::validate() const {
    if (panel_csv.empty()) throw DomainError("config: panel_csv is required");
    if (panel_format != "long" && panel_format != "wide")
        throw DomainError("config: panel_format must be \"long\" or \"wide\"");
    if (window.size() < 2) throw DomainError("config: year window must span at least 2 years");
    if (!(strong_threshold > 0.0 && strong_threshold <= 1.0))
        throw DomainError("config: strong_threshold must lie in (0, 1]");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw DomainError("config: train_fraction must lie strictly in (0, 1)");
    if (!(probability_threshold >= 0.0 && probability_threshold <= 1.0))
        throw DomainError("config: probability_threshold must lie in [0, 1]");
    if (!(category_cutoff_low < category_cutoff_high))
        throw DomainError("config: category cutoffs must be strictly increasing");
    if (model_source != "fit" && model_source != "paper-fixture")
        throw DomainError("config: model_source must be \"fit\" or \"paper-fixture\"");
    if (output_dir.empty()) throw DomainError("config: output_dir is required");
}

namespace {

struct StageGuard {
    const char* name = "setup";
};

[[noreturn]] void rethrow_with_stage(const StageGuard& stage, OutputRecorder& rec) {
    rec.cleanup();
    const std::string prefix = std::string("stage '") + stage.name + "': ";
    try {
        throw;
    } catch (const DomainError& e) {
        throw DomainError(prefix + e.what());
    } catch (const ParseError& e) {
        throw ParseError(prefix + e.what());
    } catch (const DataError& e) {
        throw DataError(prefix + e.what());
    } catch (const IoError& e) {
        throw IoError(prefix + e.what());
    } catch (const FitError& e) {
        throw FitError(prefix + e.what(), e.last_iterate());
    } catch (const std::exception& e) {
        throw DataError(prefix + e.what());
    }
}

bool needs_fitted_model(const PipelineConfig& cfg, Verb verb) {
    if (verb == Verb::Fit || verb == Verb::Evaluate) return true;
    if (verb == Verb::Classify || verb == Verb::Report || verb == Verb::Run)
        return cfg.model_source == "fit";
    return false;
}

}  // namespace

Manifest run_verb(const PipelineConfig& cfg, Verb verb) {
    cfg.validate();
    fs::create_directories(cfg.output_dir);
    OutputRecorder rec(cfg.output_dir);
    StageGuard stage;

    try {
        // --- ingest ---------------------------------------------------
        stage.name = "ingest";
        std::vector<RawRecord> records;
        {
            std::ifstream in(cfg.panel_csv, std::ios::binary);
            if (!in) throw IoError("cannot read panel file " + cfg.panel_csv);
            if (cfg.panel_format == "long") {
                records = parse_long_csv(in);
            } else {
                records = normalize_wide(in, cfg.window).records;
            }
        }
        CleanResult clean = clean_panel(records, cfg.window);

        if (verb == Verb::Ingest || verb == Verb::Run) {
            auto out = rec.open("drops.csv");
            write_drop_log(out, clean.drop_log);
        }
        if (verb == Verb::Ingest) return rec.manifest();

        if (!cfg.country_filter.empty()) {
            const bool usable =
                std::any_of(clean.panels.begin(), clean.panels.end(), [&](const CountryPanel& p) {
                    return p.country_code == cfg.country_filter;
                });
            if (!usable)
                throw DataError("country " + cfg.country_filter +
                                " has no usable panel (absent or < 2 retained indicators)");
        }

        const bool fitting = needs_fitted_model(cfg, verb);
        const auto selected = [&](const CountryPanel& p) {
            return cfg.country_filter.empty() || p.country_code == cfg.country_filter;
        };

        // --- networks & features --------------------------------------
        stage.name = "network";
        std::map<std::string, IndicatorNetwork> networks;
        std::map<std::string, std::vector<NodeFeatures>> features;
        for (const auto& panel : clean.panels) {
            if (!fitting && !selected(panel)) continue;
            IndicatorNetwork net = build_network(panel);
            features.emplace(panel.country_code, feature_table(net, cfg.strong_threshold));
            networks.emplace(panel.country_code, std::move(net));
        }

        // --- model -----------------------------------------------------
        std::array<double, 3> beta = kPublishedBeta;
        if (fitting) {
            stage.name = "strata";
            if (cfg.scores_csv.empty())
                throw DomainError("config: scores_csv is required when fitting");
            const auto scores = read_scores_csv(cfg.scores_csv);
            std::map<std::string, PerformanceCategory> strata;
            for (const auto& panel : clean.panels) {
                const auto it = scores.find(panel.country_code);
                if (it == scores.end())
                    throw DataError("no SDG Index score for country " + panel.country_code);
                strata.emplace(panel.country_code,
                               categorize_country(it->second, cfg.category_cutoff_low,
                                                  cfg.category_cutoff_high));
            }

            stage.name = "fit";
            std::vector<Observation> pooled;
            std::vector<std::string> tags;
            for (const auto& [country, rows] : features) {
                for (const auto& f : rows) {
                    pooled.push_back({f.x_d, f.x_h, f.y_label});
                    tags.push_back(country);
                }
            }
            const SplitPlan split =
                stratified_split(tags, strata, cfg.train_fraction, cfg.seed);
            std::vector<Observation> train, test;
            for (std::size_t i = 0; i < pooled.size(); ++i)
                (split.in_train[i] ? train : test).push_back(pooled[i]);

            const FittedModel model = fit_logistic(train);
            beta = model.beta;
            if (verb == Verb::Fit || verb == Verb::Evaluate || verb == Verb::Run) {
                auto out = rec.open("model.json");
                out << model_to_json(model, cfg.seed, cfg.train_fraction).dump(2) << '\n';
            }
            if (verb == Verb::Fit) return rec.manifest();

            stage.name = "evaluate";
            if (verb == Verb::Evaluate || verb == Verb::Run) {
                const EvalReport eval = evaluate(model, test, cfg.probability_threshold);
                json j;
                j["tp"] = eval.tp;
                j["fn"] = eval.fn;
                j["fp"] = eval.fp;
                j["tn"] = eval.tn;
                j["accuracy"] = eval.accuracy;
                auto out = rec.open("eval.json");
                out << j.dump(2) << '\n';
            }
            if (verb == Verb::Evaluate) return rec.manifest();
        }

        // --- per-country artifacts --------------------------------------
        stage.name = "report";
        for (const auto& [country, net] : networks) {
            if (!selected(*std::find_if(clean.panels.begin(), clean.panels.end(),
                                        [&](const CountryPanel& p) {
                                            return p.country_code == country;
                                        })))
                continue;
            const auto& rows = features.at(country);

            if (verb == Verb::Network || verb == Verb::Run) {
                auto out = rec.open("nodes_" + country + ".csv");
                write_node_list_csv(out, net);
                rec.record("heatmap_" + country + ".csv");
                if (cfg.emit_svg) rec.record("heatmap_" + country + ".csv.svg");
                heatmap_export(net, rec.path_for("heatmap_" + country + ".csv"), cfg.emit_svg);
            }
            if (verb == Verb::Network) continue;

            if (verb == Verb::Features || verb == Verb::Run) {
                auto out = rec.open("features_" + country + ".csv");
                write_feature_csv(out, rows);
            }
            if (verb == Verb::Features) continue;

            const CountryReport report =
                country_report(beta, rows, cfg.probability_threshold);
            {
                auto out = rec.open("report_" + country + ".csv");
                write_report_csv(out, report);
            }
            if (verb == Verb::Classify) continue;

            {
                auto out = rec.open("per_goal_" + country + ".csv");
                write_per_goal_csv(out, report);
            }
            rec.record("bars_" + country + ".csv");
            rec.record("pie_" + country + ".csv");
            if (cfg.emit_svg) {
                rec.record("bars_" + country + ".csv.svg");
                rec.record("pie_" + country + ".csv.svg");
            }
            distribution_export(report, rec.path_for("bars_" + country + ".csv"),
                                rec.path_for("pie_" + country + ".csv"), cfg.emit_svg);
        }

        // --- manifest ----------------------------------------------------
        stage.name = "manifest";
        Manifest manifest = rec.manifest();
        if (verb == Verb::Run) {
            json j;
            j["files"] = json::array();
            for (const auto& entry : manifest.files)
                j["files"].push_back({{"path", entry.path}, {"digest", entry.digest}});
            auto out = rec.open("manifest.json");
            out << j.dump(2) << '\n';
        }
        return manifest;
    } catch (...) {
        rethrow_with_stage(stage, rec);
    }
}

}  // namespace sdgnet
