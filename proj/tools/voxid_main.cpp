// Copyright 2026 The Voxid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// voxid: speaker enrollment, training, identification, evaluation and
// solver benchmarking from the command line.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "voxid/bench.hpp"
#include "voxid/config.hpp"
#include "voxid/corpus.hpp"
#include "voxid/errors.hpp"
#include "voxid/evaluate.hpp"
#include "voxid/features.hpp"
#include "voxid/kernels.hpp"
#include "voxid/model_store.hpp"
#include "voxid/svm.hpp"

namespace {

using json = nlohmann::json;
using namespace voxid;

struct KernelFlags {
    std::string kind = "rbf";
    double gamma = 0.0;  // 0 = 1/feature_dim, resolved at training time
    int degree = 3;
    double coef0 = 1.0;

    svm::KernelSpec resolve(std::size_t feature_dim) const {
        if (kind == "linear") return svm::KernelSpec::linear();
        if (kind == "rbf") {
            const double g = gamma > 0.0 ? gamma : 1.0 / double(feature_dim);
            return svm::KernelSpec::rbf(g);
        }
        if (kind == "poly" || kind == "polynomial")
            return svm::KernelSpec::polynomial(degree, coef0);
        throw BadConfig("unknown kernel '" + kind + "'");
    }
};

struct SolverFlags {
    std::string name = "smo";
    std::size_t chunk_m = 50;
    std::size_t fixed_q = 50;
    std::size_t fixed_swap = 10;

    svm::SolverChoice resolve() const { return resolve_name(name); }

    svm::SolverChoice resolve_name(const std::string& n) const {
        svm::SolverChoice choice;
        choice.chunk_m = chunk_m;
        choice.fixed_q = fixed_q;
        choice.fixed_swap = fixed_swap;
        if (n == "smo")
            choice.kind = svm::SolverChoice::Kind::smo;
        else if (n == "chunking")
            choice.kind = svm::SolverChoice::Kind::chunking;
        else if (n == "fixed-size")
            choice.kind = svm::SolverChoice::Kind::fixed_size;
        else
            throw BadConfig("unknown solver '" + n +
                            "' (expected smo, chunking or fixed-size)");
        return choice;
    }
};

void add_kernel_flags(CLI::App* cmd, KernelFlags& flags) {
    cmd->add_option("--kernel", flags.kind, "Kernel: linear, rbf or poly")
        ->capture_default_str();
    cmd->add_option("--gamma", flags.gamma,
                    "rbf gamma (default 1/feature_dim)");
    cmd->add_option("--degree", flags.degree, "polynomial degree")
        ->capture_default_str();
    cmd->add_option("--coef0", flags.coef0, "polynomial offset")
        ->capture_default_str();
}

void add_solver_flags(CLI::App* cmd, SolverFlags& flags) {
    cmd->add_option("--chunk-M", flags.chunk_m,
                    "chunking: violators added per step")
        ->capture_default_str();
    cmd->add_option("--fs-q", flags.fixed_q, "fixed-size: working-set size")
        ->capture_default_str();
    cmd->add_option("--fs-swap", flags.fixed_swap,
                    "fixed-size: examples swapped per step")
        ->capture_default_str();
}

features::LabeledDataset extract_manifest(const std::string& manifest_path,
                                          const ExtractionConfig& cfg,
                                          bool skip_bad) {
    const auto entries = corpus::read_manifest(manifest_path);
    features::LabeledDataset dataset;
    bool any_failed = false;
    for (const corpus::ManifestEntry& entry : entries) {
        try {
            const audio::AudioClip clip = audio::load_wav(entry.path);
            features::LabeledRow row;
            row.label = entry.label;
            row.features = features::extract_utterance(clip, cfg.mfcc,
                                                       cfg.frame_ms, cfg.hop_ms);
            if (dataset.feature_dim == 0) dataset.feature_dim = row.features.dim();
            dataset.rows.push_back(std::move(row));
        } catch (const Error& e) {
            if (!skip_bad) throw;
            any_failed = true;
            std::cerr << "warning: skipping " << entry.path << ": " << e.what()
                      << "\n";
        }
    }
    if (dataset.rows.empty())
        throw EmptyDataset("no utterances could be extracted from " +
                           manifest_path + (any_failed ? " (all failed)" : ""));
    return dataset;
}

store::SpeakerRegistry registry_from_dataset(const features::LabeledDataset& ds) {
    store::SpeakerRegistry registry;
    const std::string stamp = store::now_utc_iso8601();
    for (const features::LabeledRow& row : ds.rows) {
        auto [it, fresh] = registry.entries.try_emplace(row.label);
        if (fresh) {
            it->second.name = "speaker-" + std::to_string(row.label);
            it->second.enrolled_at = stamp;
        }
        ++it->second.utterance_count;
    }
    return registry;
}

bool looks_like_feature_csv(const std::string& path) {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    return first.rfind("label,f0", 0) == 0;
}

void print_report(const eval::EvaluationReport& report, bool as_json,
                  const std::string& csv_path) {
    if (as_json) {
        json j;
        j["solver"] = report.solver_name;
        j["rows"] = json::array();
        for (const auto& r : report.rows)
            j["rows"].push_back({{"speaker_id", r.speaker_id},
                                 {"total", r.total},
                                 {"correct", r.correct},
                                 {"false", r.false_count},
                                 {"success_pct", r.success_pct}});
        j["aggregate"] = {{"total", report.total},
                          {"correct", report.correct},
                          {"false", report.false_count},
                          {"success_pct", report.success_pct}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << eval::render_table(report) << "\n";
    }
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw IoFailure("cannot open for writing: " + csv_path);
        out << eval::to_csv(report);
    }
}

// Per-speaker split: the first ceil(frac * n) utterances of each speaker
// (in dataset order) train, the rest test.
void split_dataset(const features::LabeledDataset& all, double frac,
                   features::LabeledDataset& train,
                   features::LabeledDataset& test) {
    std::map<int, std::size_t> counts, taken;
    for (const auto& row : all.rows) ++counts[row.label];
    train.feature_dim = test.feature_dim = all.feature_dim;
    for (const auto& row : all.rows) {
        const auto want =
            std::size_t(std::ceil(frac * double(counts[row.label])));
        if (taken[row.label] < want) {
            train.rows.push_back(row);
            ++taken[row.label];
        } else {
            test.rows.push_back(row);
        }
    }
}

int cmd_gen_corpus(const std::string& out_dir, corpus::CorpusOptions options) {
    const auto entries = corpus::generate_corpus(out_dir, options);
    std::cout << "wrote " << entries.size() << " WAV files and manifest.csv to "
              << out_dir << "\n";
    return 0;
}

int cmd_extract(const std::string& manifest, const std::string& out_csv,
                const ExtractionConfig& cfg, bool skip_bad) {
    const features::LabeledDataset dataset =
        extract_manifest(manifest, cfg, skip_bad);
    store::write_dataset_csv(dataset, out_csv);
    std::cout << "wrote " << dataset.rows.size() << " rows x "
              << dataset.feature_dim << " features to " << out_csv << "\n";
    return 0;
}

int cmd_train(const std::string& data_csv, const std::string& model_out,
              const SolverFlags& solver_flags, const KernelFlags& kernel_flags,
              double C, double tol, const ExtractionConfig& cfg,
              std::uint64_t /*seed*/) {
    const features::LabeledDataset dataset = store::read_dataset_csv(data_csv);
    if (dataset.rows.empty()) throw EmptyDataset("no rows in " + data_csv);

    const svm::KernelSpec kernel = kernel_flags.resolve(dataset.feature_dim);
    const svm::SolverChoice choice = solver_flags.resolve();
    const svm::MulticlassModel mc =
        svm::train_one_vs_rest(dataset, C, kernel, choice, tol);

    for (std::size_t k = 0; k < mc.models.size(); ++k) {
        const svm::SvmModel& m = mc.models[k];
        std::cout << "speaker " << mc.speaker_ids[k] << ": " << m.iterations
                  << " steps, " << m.support_vectors.size() << " SVs, "
                  << m.train_seconds << " s"
                  << (m.truncated ? " (truncated)" : "") << "\n";
    }

    store::StoredModel stored;
    stored.model = mc;
    stored.registry = registry_from_dataset(dataset);
    stored.extraction = cfg;
    store::save_model(stored, model_out);
    std::cout << "wrote model for " << mc.speaker_ids.size() << " speakers to "
              << model_out << "\n";
    return 0;
}

int cmd_identify(const std::string& model_path, const std::string& wav_path,
                 bool as_json) {
    const store::StoredModel stored = store::load_model(model_path);
    const audio::AudioClip clip = audio::load_wav(wav_path);
    const features::UtteranceFeatures feats = features::extract_utterance(
        clip, stored.extraction.mfcc, stored.extraction.frame_ms,
        stored.extraction.hop_ms);
    const svm::Identification result = svm::identify(stored.model, feats);
    const std::string& name = stored.registry.entries.at(result.speaker_id).name;

    if (as_json) {
        json j;
        j["speaker_id"] = result.speaker_id;
        j["name"] = name;
        j["scores"] = json::array();
        for (std::size_t k = 0; k < result.scores.size(); ++k) {
            const int id = stored.model.speaker_ids[k];
            j["scores"].push_back({{"speaker_id", id},
                                   {"name", stored.registry.entries.at(id).name},
                                   {"score", result.scores[k]}});
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "speaker " << result.speaker_id << " (" << name << ")\n";
        for (std::size_t k = 0; k < result.scores.size(); ++k) {
            const int id = stored.model.speaker_ids[k];
            std::printf("  %-4d %-16s %+.6f\n", id,
                        stored.registry.entries.at(id).name.c_str(),
                        result.scores[k]);
        }
    }
    return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& test_path,
                 bool as_json, const std::string& csv_path) {
    const store::StoredModel stored = store::load_model(model_path);
    features::LabeledDataset test;
    if (looks_like_feature_csv(test_path))
        test = store::read_dataset_csv(test_path);
    else
        test = extract_manifest(test_path, stored.extraction, false);
    const eval::EvaluationReport report = eval::evaluate(
        stored.model, test, stored.model.models.front().solver_name);
    print_report(report, as_json, csv_path);
    return 0;
}

int cmd_evaluate_protocol(const std::string& manifest, double train_frac,
                          const std::vector<std::string>& solver_names,
                          const SolverFlags& solver_flags,
                          const KernelFlags& kernel_flags, double C, double tol,
                          const ExtractionConfig& cfg, bool as_json,
                          const std::string& csv_path) {
    const features::LabeledDataset all = extract_manifest(manifest, cfg, false);
    features::LabeledDataset train, test;
    split_dataset(all, train_frac, train, test);
    std::cerr << "protocol: " << train.rows.size() << " train / "
              << test.rows.size() << " test utterances\n";

    const svm::KernelSpec kernel = kernel_flags.resolve(all.feature_dim);
    std::string csv_all;
    for (const std::string& name : solver_names) {
        const svm::SolverChoice choice = solver_flags.resolve_name(name);
        const svm::MulticlassModel mc =
            svm::train_one_vs_rest(train, C, kernel, choice, tol);
        const eval::EvaluationReport report = eval::evaluate(mc, test, name);
        print_report(report, as_json, "");
        csv_all += eval::to_csv(report);
    }
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw IoFailure("cannot open for writing: " + csv_path);
        out << csv_all;
    }
    return 0;
}

int cmd_bench(const bench::BenchOptions& options, const std::string& csv_path) {
    const bench::BenchReport report = bench::run_bench(options, &std::cerr);
    std::cout << bench::render_table(report);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw IoFailure("cannot open for writing: " + csv_path);
        out << bench::to_csv(report);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"voxid: MFCC + SVM speaker identification toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path,
                   "key=value front-end configuration file")
        ->check(CLI::ExistingFile);

    // gen-corpus
    auto* gen = app.add_subcommand("gen-corpus",
                                   "Synthesize a seeded speaker corpus");
    std::string gen_out;
    corpus::CorpusOptions gen_options;
    gen->add_option("--out", gen_out, "output directory (must exist)")->required();
    gen->add_option("--speakers", gen_options.speakers, "speaker count")
        ->capture_default_str();
    gen->add_option("--utterances", gen_options.utterances,
                    "utterances per speaker")
        ->capture_default_str();
    gen->add_option("--duration", gen_options.duration_s,
                    "nominal utterance seconds")
        ->capture_default_str();
    gen->add_option("--sample-rate", gen_options.sample_rate, "Hz")
        ->capture_default_str();
    gen->add_option("--seed", gen_options.seed, "corpus seed")
        ->capture_default_str();

    // extract
    auto* extract = app.add_subcommand(
        "extract", "Extract utterance features from a WAV manifest");
    std::string extract_manifest_path, extract_out;
    bool extract_skip_bad = false;
    extract->add_option("--manifest", extract_manifest_path,
                        "label,path manifest")
        ->required()
        ->check(CLI::ExistingFile);
    extract->add_option("--out", extract_out, "output dataset CSV")->required();
    extract->add_flag("--skip-bad", extract_skip_bad,
                      "warn on unreadable files instead of failing");

    // train
    auto* train = app.add_subcommand("train", "Train a one-vs-rest model");
    std::string train_data, train_out;
    SolverFlags train_solver;
    KernelFlags train_kernel;
    double train_c = 10.0, train_tol = 1e-3;
    std::uint64_t train_seed = 0;
    train->add_option("--data", train_data, "dataset CSV")
        ->required()
        ->check(CLI::ExistingFile);
    train->add_option("--out", train_out, "output model file")->required();
    train->add_option("--solver", train_solver.name,
                      "smo, chunking or fixed-size")
        ->capture_default_str();
    train->add_option("--C", train_c, "box constraint")->capture_default_str();
    train->add_option("--tol", train_tol, "KKT tolerance")->capture_default_str();
    train->add_option("--seed", train_seed, "solver heuristic seed")
        ->capture_default_str();
    add_kernel_flags(train, train_kernel);
    add_solver_flags(train, train_solver);

    // identify
    auto* identify = app.add_subcommand("identify", "Identify one WAV file");
    std::string identify_model, identify_wav;
    bool identify_json = false;
    identify->add_option("--model", identify_model, "model file")
        ->required()
        ->check(CLI::ExistingFile);
    identify->add_option("wav", identify_wav, "utterance WAV file")->required();
    identify->add_flag("--json", identify_json, "JSON output");

    // evaluate
    auto* evaluate = app.add_subcommand(
        "evaluate", "Per-speaker success rates on a labeled test set");
    std::string eval_model, eval_test, eval_csv, eval_manifest;
    bool eval_json = false, eval_protocol = false;
    double eval_train_frac = 0.5, eval_c = 10.0, eval_tol = 1e-3;
    std::vector<std::string> eval_solvers{"smo", "chunking"};
    SolverFlags eval_solver_flags;
    KernelFlags eval_kernel;
    evaluate->add_option("--model", eval_model, "model file");
    evaluate->add_option("--test", eval_test,
                         "labeled feature CSV or WAV manifest");
    evaluate->add_flag("--protocol", eval_protocol,
                       "split/train/evaluate a manifest end to end");
    evaluate->add_option("--manifest", eval_manifest,
                         "WAV manifest (protocol mode)");
    evaluate->add_option("--train-frac", eval_train_frac,
                         "per-speaker training fraction (protocol mode)")
        ->capture_default_str();
    evaluate->add_option("--solvers", eval_solvers,
                         "solvers to compare (protocol mode)")
        ->delimiter(',')
        ->capture_default_str();
    evaluate->add_option("--C", eval_c, "box constraint (protocol mode)")
        ->capture_default_str();
    evaluate->add_option("--tol", eval_tol, "KKT tolerance (protocol mode)")
        ->capture_default_str();
    evaluate->add_flag("--json", eval_json, "JSON output");
    evaluate->add_option("--csv", eval_csv, "also write the report as CSV");
    add_kernel_flags(evaluate, eval_kernel);
    add_solver_flags(evaluate, eval_solver_flags);

    // bench
    auto* bench_cmd = app.add_subcommand(
        "bench", "Time the solvers on seeded synthetic data");
    bench::BenchOptions bench_options;
    std::vector<std::string> bench_solvers{"smo", "chunking"};
    SolverFlags bench_solver_flags;
    std::string bench_kernel = "linear", bench_csv;
    bench_cmd->add_option("--sizes", bench_options.sizes, "training set sizes")
        ->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--solvers", bench_solvers, "solvers to time")
        ->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--kernel", bench_kernel, "linear or rbf")
        ->capture_default_str();
    bench_cmd->add_option("--gamma", bench_options.gamma, "rbf gamma")
        ->capture_default_str();
    bench_cmd->add_option("--C", bench_options.C, "box constraint")
        ->capture_default_str();
    bench_cmd->add_option("--tol", bench_options.tol, "KKT tolerance")
        ->capture_default_str();
    bench_cmd->add_option("--dim", bench_options.dim, "feature dimension")
        ->capture_default_str();
    bench_cmd->add_option("--seed", bench_options.seed, "data seed")
        ->capture_default_str();
    bench_cmd->add_option("--repeats", bench_options.repeats,
                          "timing repeats (median reported)")
        ->capture_default_str();
    bench_cmd->add_option("--max-steps", bench_options.max_steps,
                          "two-multiplier step budget per solver run")
        ->capture_default_str();
    bench_cmd->add_option("--csv", bench_csv, "also write rows as CSV");
    add_solver_flags(bench_cmd, bench_solver_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        ExtractionConfig cfg;
        if (!config_path.empty()) cfg = load_config_file(config_path);

        if (gen->parsed()) return cmd_gen_corpus(gen_out, gen_options);
        if (extract->parsed())
            return cmd_extract(extract_manifest_path, extract_out, cfg,
                               extract_skip_bad);
        if (train->parsed())
            return cmd_train(train_data, train_out, train_solver, train_kernel,
                             train_c, train_tol, cfg, train_seed);
        if (identify->parsed())
            return cmd_identify(identify_model, identify_wav, identify_json);
        if (evaluate->parsed()) {
            if (eval_protocol) {
                if (eval_manifest.empty())
                    throw BadConfig("--protocol needs --manifest");
                return cmd_evaluate_protocol(eval_manifest, eval_train_frac,
                                             eval_solvers, eval_solver_flags,
                                             eval_kernel, eval_c, eval_tol, cfg,
                                             eval_json, eval_csv);
            }
            if (eval_model.empty() || eval_test.empty())
                throw BadConfig("evaluate needs --model and --test "
                                "(or --protocol with --manifest)");
            return cmd_evaluate(eval_model, eval_test, eval_json, eval_csv);
        }
        if (bench_cmd->parsed()) {
            if (bench_kernel == "rbf")
                bench_options.kernel = svm::KernelKind::rbf;
            else if (bench_kernel != "linear")
                throw BadConfig("bench kernel must be linear or rbf");
            for (const std::string& name : bench_solvers)
                bench_options.solvers.push_back(
                    bench_solver_flags.resolve_name(name));
            return cmd_bench(bench_options, bench_csv);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
