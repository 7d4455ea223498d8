// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0
//
// glosskit command-line interface.
//
//   glosskit train          train a glossing model on an IGT file
//   glosskit predict        write an IGT file with predicted \g lines
//   glosskit evaluate       score predictions against gold glosses
//   glosskit stats          corpus statistics
//   glosskit gen-synthetic  deterministic toy-language corpus
//
// Exit codes: 0 success, 2 data error (unparseable/misaligned inputs),
// 3 configuration error (bad flags, missing files, track mismatches).

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "glosskit/glosskit.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 2;
constexpr int kExitConfigError = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw glosskit::ConfigError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw glosskit::ConfigError("cannot open file for writing: " + path);
    out << content;
    if (!out) throw glosskit::ConfigError("write failed: " + path);
}

std::vector<glosskit::IgtEntry> parse_igt_file(const std::string& path) {
    std::vector<glosskit::ParseWarning> warnings;
    std::vector<glosskit::IgtEntry> entries = glosskit::parse_igt(read_file(path), &warnings);
    for (const auto& w : warnings) {
        std::cerr << path << ":" << w.line << ": warning: " << w.message << "\n";
    }
    return entries;
}

nlohmann::json load_json_config(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw glosskit::ConfigError("bad config file " + path + ": " + e.what());
    }
}

// Flags win over config-file values: a key is consulted only when the
// matching flag was not given on the command line.
template <class T>
void apply_json(const nlohmann::json& cfg, const CLI::Option* opt, const char* key, T& value) {
    if (opt != nullptr && opt->count() > 0) return;
    if (!cfg.contains(key)) return;
    try {
        value = cfg.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw glosskit::ConfigError(std::string("bad config value for '") + key + "': " + e.what());
    }
}

std::set<std::string> load_gram_inventory(const std::string& path) {
    std::set<std::string> inventory;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string token = glosskit::detail::trim(line);
        if (!token.empty()) inventory.insert(std::move(token));
    }
    return inventory;
}

struct TrainArgs {
    std::string train_path, checkpoint_path, loss_log_path, config_path;
    std::string track = "closed";
    std::string preset = "desk";
    std::uint64_t seed = 0;
    std::uint64_t shuffle_seed = 0;
    bool shuffle_seed_set = false;
    double lr = 0.0;
    bool lr_set = false;
    std::size_t epochs = 80;
    std::size_t batch_size = 16;
    double weight_decay = 0.01;
    std::size_t min_count = 1;
    std::size_t layers = 0, hidden = 0, heads = 0, ffn_dim = 0, max_len = 0;
    bool no_lowercase = false;
    bool skip_flagged = false;
};

int run_train(const TrainArgs& a) {
    glosskit::ModelConfig model_config;
    glosskit::TrainConfig train_config;
    if (a.preset == "desk") {
        model_config = glosskit::desk_model_config();
        train_config = glosskit::desk_train_config();
    } else if (a.preset == "paper") {
        model_config = glosskit::paper_model_config();
        train_config = glosskit::paper_train_config();
    } else {
        throw glosskit::ConfigError("unknown preset '" + a.preset + "' (expected desk|paper)");
    }
    if (a.layers) model_config.layers = a.layers;
    if (a.hidden) model_config.hidden = a.hidden;
    if (a.heads) model_config.heads = a.heads;
    if (a.ffn_dim) model_config.ffn_dim = a.ffn_dim;
    if (a.max_len) model_config.max_len = a.max_len;
    model_config.seed = a.seed;

    if (a.lr_set) train_config.lr = a.lr;
    train_config.epochs = a.epochs;
    train_config.batch_size = a.batch_size;
    train_config.weight_decay = a.weight_decay;
    train_config.min_count = a.min_count;
    train_config.shuffle_seed = a.shuffle_seed_set ? a.shuffle_seed : a.seed;
    train_config.lowercase_translation = !a.no_lowercase;
    train_config.skip_flagged = a.skip_flagged;

    const glosskit::Track track = glosskit::track_from_name(a.track);
    const std::vector<glosskit::IgtEntry> corpus = parse_igt_file(a.train_path);

    glosskit::TrainResult result = glosskit::train(corpus, track, model_config, train_config);
    for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";

    glosskit::save_checkpoint(result.checkpoint, a.checkpoint_path);

    const std::string loss_path =
        a.loss_log_path.empty() ? a.checkpoint_path + ".loss.tsv" : a.loss_log_path;
    std::ostringstream log;
    log.setf(std::ios::fmtflags(0), std::ios::floatfield);
    log << std::setprecision(9);
    for (std::size_t e = 0; e < result.epoch_losses.size(); ++e) {
        log << (e + 1) << "\t" << result.epoch_losses[e] << "\n";
    }
    write_file(loss_path, log.str());

    std::cout << "trained " << result.checkpoint.train_meta.epochs_completed << " epochs, final loss "
              << std::setprecision(6) << result.checkpoint.train_meta.final_loss << "\n";
    std::cout << "checkpoint: " << a.checkpoint_path << "\n";
    return kExitOk;
}

struct PredictArgs {
    std::string checkpoint_path, input_path, output_path, config_path;
    std::string track;  // empty = use the checkpoint's
};

int run_predict(const PredictArgs& a) {
    const glosskit::ModelCheckpoint ckpt = glosskit::load_checkpoint_file(a.checkpoint_path);
    const glosskit::Track track =
        a.track.empty() ? ckpt.track : glosskit::track_from_name(a.track);

    std::vector<glosskit::IgtEntry> entries = parse_igt_file(a.input_path);
    const std::vector<std::string> lines = glosskit::predict(ckpt, entries, track);
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i].gloss = lines[i];
    write_file(a.output_path, glosskit::serialize_igt(entries));
    std::cout << "predicted " << entries.size() << " entries -> " << a.output_path << "\n";
    return kExitOk;
}

struct EvaluateArgs {
    std::string pred_path, gold_path, report_path, table_path, inventory_path, config_path;
    std::string track = "closed";
    bool smooth_bleu = false;
};

int run_evaluate(const EvaluateArgs& a) {
    const std::vector<glosskit::IgtEntry> pred = parse_igt_file(a.pred_path);
    const std::vector<glosskit::IgtEntry> gold = parse_igt_file(a.gold_path);

    std::optional<std::set<std::string>> inventory;
    if (!a.inventory_path.empty()) inventory = load_gram_inventory(a.inventory_path);

    glosskit::eval::BleuOptions bleu_options;
    bleu_options.add_one_smoothing = a.smooth_bleu;
    const glosskit::eval::MetricsReport report =
        glosskit::eval::evaluate(pred, gold, glosskit::track_from_name(a.track),
                                 inventory ? &*inventory : nullptr, bleu_options);

    const std::string json_text = glosskit::eval::report_to_json(report).dump(2) + "\n";
    if (!a.report_path.empty()) {
        write_file(a.report_path, json_text);
    } else {
        std::cout << json_text;
    }
    const std::string table = glosskit::eval::report_table(report);
    if (!a.table_path.empty()) {
        write_file(a.table_path, table);
    } else {
        std::cout << table;
    }
    for (const std::string& w : report.warnings) std::cerr << "warning: " << w << "\n";
    return kExitOk;
}

struct StatsArgs {
    std::string input_path, config_path;
    std::string track = "closed";
};

int run_stats(const StatsArgs& a) {
    const std::vector<glosskit::IgtEntry> entries = parse_igt_file(a.input_path);
    const glosskit::CorpusStats stats =
        glosskit::corpus_stats(entries, glosskit::track_from_name(a.track));
    std::cout << "entries: " << stats.entry_count << "\n"
              << "words: " << stats.word_count << "\n"
              << "morphemes: " << stats.morpheme_count << "\n"
              << "distinct word labels: " << stats.distinct_word_labels << "\n"
              << "distinct morpheme labels: " << stats.distinct_morpheme_labels << "\n"
              << "entries missing gloss: " << stats.entries_missing_gloss << "\n";
    return kExitOk;
}

struct GenArgs {
    std::string output_path, config_path;
    std::string profile = "agglutinative";
    std::uint64_t seed = 0;
    std::size_t size = 0;
};

int run_gen_synthetic(const GenArgs& a) {
    const std::vector<glosskit::IgtEntry> entries =
        glosskit::gen_synthetic(a.seed, a.size, glosskit::synth_profile_from_name(a.profile));
    write_file(a.output_path, glosskit::serialize_igt(entries));
    std::cout << "wrote " << entries.size() << " entries -> " << a.output_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IGT glossing toolkit: train/predict/evaluate gloss lines"};
    app.require_subcommand(1);

    TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "Train a glossing model");
    train->add_option("--train", train_args.train_path, "Training IGT file")->required();
    train->add_option("--checkpoint", train_args.checkpoint_path, "Output checkpoint path")->required();
    train->add_option("--loss-log", train_args.loss_log_path,
                      "Loss log path (default: <checkpoint>.loss.tsv)");
    auto* t_track = train->add_option("--track", train_args.track, "open|closed");
    auto* t_config = train->add_option("--config", train_args.config_path, "JSON config file");
    auto* t_preset = train->add_option("--preset", train_args.preset, "desk|paper (default desk)");
    auto* t_seed = train->add_option("--seed", train_args.seed, "Model init + shuffle seed");
    auto* t_shuffle = train->add_option("--shuffle-seed", train_args.shuffle_seed,
                                        "Epoch shuffle seed (default: --seed)");
    auto* t_lr = train->add_option("--lr", train_args.lr, "Learning rate");
    auto* t_epochs = train->add_option("--epochs", train_args.epochs, "Training epochs");
    auto* t_batch = train->add_option("--batch-size", train_args.batch_size, "Batch size");
    auto* t_wd = train->add_option("--weight-decay", train_args.weight_decay, "Decoupled weight decay");
    auto* t_minc = train->add_option("--min-count", train_args.min_count,
                                     "Source/translation vocabulary frequency cutoff");
    auto* t_layers = train->add_option("--layers", train_args.layers, "Encoder layers");
    auto* t_hidden = train->add_option("--hidden", train_args.hidden, "Hidden size");
    auto* t_heads = train->add_option("--heads", train_args.heads, "Attention heads");
    auto* t_ffn = train->add_option("--ffn-dim", train_args.ffn_dim, "Feed-forward size");
    auto* t_maxlen = train->add_option("--max-len", train_args.max_len, "Maximum encoded length");
    auto* t_nolower = train->add_flag("--no-lowercase", train_args.no_lowercase,
                                      "Keep translation case");
    auto* t_skip = train->add_flag("--skip-flagged", train_args.skip_flagged,
                                   "Skip entries with any validation issue");

    PredictArgs predict_args;
    CLI::App* predict = app.add_subcommand("predict", "Predict gloss lines for an IGT file");
    predict->add_option("--checkpoint", predict_args.checkpoint_path, "Model checkpoint")->required();
    predict->add_option("--input", predict_args.input_path, "Input IGT file")->required();
    predict->add_option("--output", predict_args.output_path, "Output IGT file")->required();
    auto* p_track = predict->add_option("--track", predict_args.track,
                                        "open|closed (must match the checkpoint)");
    auto* p_config = predict->add_option("--config", predict_args.config_path, "JSON config file");

    EvaluateArgs eval_args;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Score predictions against gold glosses");
    evaluate->add_option("--pred", eval_args.pred_path, "Predicted IGT file")->required();
    evaluate->add_option("--gold", eval_args.gold_path, "Gold IGT file")->required();
    evaluate->add_option("--report", eval_args.report_path, "Write metrics JSON here (default stdout)");
    evaluate->add_option("--table", eval_args.table_path, "Write text table here (default stdout)");
    auto* e_inv = evaluate->add_option("--gram-inventory", eval_args.inventory_path,
                                       "File of gram pieces, one per line");
    auto* e_track = evaluate->add_option("--track", eval_args.track, "open|closed");
    auto* e_smooth = evaluate->add_flag("--smooth-bleu", eval_args.smooth_bleu, "Add-one BLEU smoothing");
    auto* e_config = evaluate->add_option("--config", eval_args.config_path, "JSON config file");

    StatsArgs stats_args;
    CLI::App* stats = app.add_subcommand("stats", "Print corpus statistics");
    stats->add_option("--input", stats_args.input_path, "IGT file")->required();
    auto* s_track = stats->add_option("--track", stats_args.track, "open|closed");
    auto* s_config = stats->add_option("--config", stats_args.config_path, "JSON config file");

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen-synthetic", "Generate a synthetic IGT corpus");
    gen->add_option("--output", gen_args.output_path, "Output IGT file")->required();
    gen->add_option("--size", gen_args.size, "Number of entries")->required();
    auto* g_seed = gen->add_option("--seed", gen_args.seed, "Generator seed");
    auto* g_profile = gen->add_option("--profile", gen_args.profile, "agglutinative|isolating");
    auto* g_config = gen->add_option("--config", gen_args.config_path, "JSON config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (*train) {
            const nlohmann::json cfg = load_json_config(train_args.config_path);
            (void)t_config;
            apply_json(cfg, t_track, "track", train_args.track);
            apply_json(cfg, t_preset, "preset", train_args.preset);
            apply_json(cfg, t_seed, "seed", train_args.seed);
            apply_json(cfg, t_lr, "lr", train_args.lr);
            if (t_lr->count() > 0 || cfg.contains("lr")) train_args.lr_set = true;
            apply_json(cfg, t_shuffle, "shuffle_seed", train_args.shuffle_seed);
            if (t_shuffle->count() > 0 || cfg.contains("shuffle_seed")) train_args.shuffle_seed_set = true;
            apply_json(cfg, t_epochs, "epochs", train_args.epochs);
            apply_json(cfg, t_batch, "batch_size", train_args.batch_size);
            apply_json(cfg, t_wd, "weight_decay", train_args.weight_decay);
            apply_json(cfg, t_minc, "min_count", train_args.min_count);
            apply_json(cfg, t_layers, "layers", train_args.layers);
            apply_json(cfg, t_hidden, "hidden", train_args.hidden);
            apply_json(cfg, t_heads, "heads", train_args.heads);
            apply_json(cfg, t_ffn, "ffn_dim", train_args.ffn_dim);
            apply_json(cfg, t_maxlen, "max_len", train_args.max_len);
            apply_json(cfg, t_nolower, "no_lowercase", train_args.no_lowercase);
            apply_json(cfg, t_skip, "skip_flagged", train_args.skip_flagged);
            return run_train(train_args);
        }
        if (*predict) {
            const nlohmann::json cfg = load_json_config(predict_args.config_path);
            (void)p_config;
            apply_json(cfg, p_track, "track", predict_args.track);
            return run_predict(predict_args);
        }
        if (*evaluate) {
            const nlohmann::json cfg = load_json_config(eval_args.config_path);
            (void)e_config;
            apply_json(cfg, e_track, "track", eval_args.track);
            apply_json(cfg, e_inv, "gram_inventory", eval_args.inventory_path);
            apply_json(cfg, e_smooth, "smooth_bleu", eval_args.smooth_bleu);
            return run_evaluate(eval_args);
        }
        if (*stats) {
            const nlohmann::json cfg = load_json_config(stats_args.config_path);
            (void)s_config;
            apply_json(cfg, s_track, "track", stats_args.track);
            return run_stats(stats_args);
        }
        if (*gen) {
            const nlohmann::json cfg = load_json_config(gen_args.config_path);
            (void)g_config;
            apply_json(cfg, g_seed, "seed", gen_args.seed);
            apply_json(cfg, g_profile, "profile", gen_args.profile);
            return run_gen_synthetic(gen_args);
        }
    } catch (const glosskit::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitConfigError;
}
