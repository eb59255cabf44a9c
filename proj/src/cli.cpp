#include "increparse/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "increparse/evaluation.hpp"
#include "increparse/pipeline.hpp"

namespace increparse {

namespace {

constexpr std::uint64_t kDefaultSeed = 1729;

struct SchemeOrSystem {
    std::optional<Scheme> scheme;  // empty means arc-eager
    bool arc_eager() const { return !scheme.has_value(); }
};

SchemeOrSystem parse_scheme_flag(const std::string& name) {
    if (name == "arc-eager") return {};
    auto s = scheme_from_name(name);
    if (!s)
        throw CLI::ValidationError("--scheme",
                                   "expected one of abs, rel, pos, 1p, 2p, arc-eager");
    return {s};
}

// Output stream that is either stdout ("-") or a file.
class OutFile {
public:
    explicit OutFile(const std::string& path) {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw DataError("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

// ---- encode ----------------------------------------------------------------

int cmd_encode(const std::string& input, const std::string& scheme_flag,
               const std::string& out_path, bool skip_invalid) {
    const SchemeOrSystem what = parse_scheme_flag(scheme_flag);
    const std::vector<DepTree> trees = parse_conllu_file(input, {.skip_invalid = skip_invalid});
    OutFile out(out_path);

    if (what.arc_eager()) {
        for (const DepTree& tree : trees) {
            const OracleRun run = run_oracle(tree);
            write_transitions_tsv(tree.sentence_id, run.transitions, out.stream());
        }
        return 0;
    }

    std::vector<LabelSequence> encoded;
    encoded.reserve(trees.size());
    for (const DepTree& tree : trees) encoded.push_back(encode(tree, *what.scheme));
    write_label_tsv(encoded, out.stream());

    if (*what.scheme == Scheme::Bracket1P || *what.scheme == Scheme::Bracket2P) {
        std::size_t arcs = 0, covered = 0, full = 0;
        for (const DepTree& tree : trees) {
            const double c = coverage(tree, *what.scheme);
            arcs += static_cast<std::size_t>(tree.size());
            covered += static_cast<std::size_t>(
                c * static_cast<double>(tree.size()) + 0.5);
            if (c == 1.0) ++full;
        }
        std::fprintf(stderr,
                     "coverage report: %.2f%% of arcs representable, %.2f%% of sentences "
                     "fully representable (%zu sentences)\n",
                     arcs ? 100.0 * static_cast<double>(covered) / static_cast<double>(arcs)
                          : 100.0,
                     trees.empty() ? 100.0
                                   : 100.0 * static_cast<double>(full) /
                                         static_cast<double>(trees.size()),
                     trees.size());
    }
    return 0;
}

// ---- decode ----------------------------------------------------------------

int cmd_decode(const std::string& input, const std::string& scheme_flag,
               const std::string& out_path) {
    const SchemeOrSystem what = parse_scheme_flag(scheme_flag);
    if (what.arc_eager())
        throw CLI::ValidationError("--scheme",
                                   "decode expects a labeling scheme; the transition dump "
                                   "carries no token surface to rebuild");
    std::ifstream in(input);
    if (!in) throw DataError("cannot open " + input);
    const std::vector<LabelSequence> sentences = read_label_tsv(*what.scheme, in);
    std::vector<DepTree> trees;
    trees.reserve(sentences.size());
    for (const LabelSequence& seq : sentences) trees.push_back(decode(seq));
    OutFile out(out_path);
    write_conllu(trees, out.stream());
    return 0;
}

// ---- train -----------------------------------------------------------------

int cmd_train(const std::string& input, const std::string& scheme_flag, int delay, int epochs,
              std::uint64_t seed, bool gold_pos, bool skip_invalid,
              const std::string& out_path) {
    const SchemeOrSystem what = parse_scheme_flag(scheme_flag);
    const std::vector<DepTree> trees = parse_conllu_file(input, {.skip_invalid = skip_invalid});
    if (trees.empty()) throw DataError("training treebank is empty");

    TrainOptions options{epochs, seed};
    std::vector<Model> bundle;
    TrainReport report;
    if (what.arc_eager()) {
        TrainingData data = build_tb_corpus(trees, delay);
        bundle.push_back(train(PredictorKind::TransitionScorer, std::nullopt, delay,
                               std::move(data.classes), data.instances, options, &report));
    } else {
        TrainingData data = build_sl_corpus(trees, *what.scheme, delay);
        bundle.push_back(train(PredictorKind::SequenceLabeler, what.scheme, delay,
                               std::move(data.classes), data.instances, options, &report));
    }
    for (std::size_t e = 0; e < report.epoch_accuracy.size(); ++e) {
        std::fprintf(stderr, "epoch %zu: training accuracy %.2f%%\n", e + 1,
                     100.0 * report.epoch_accuracy[e]);
    }
    if (!gold_pos) {
        TrainingData pos = build_pos_corpus(trees, 0);
        // Tagger seed offset keeps the two shuffles decoupled but reproducible.
        bundle.push_back(train(PredictorKind::PosTagger, std::nullopt, 0,
                               std::move(pos.classes), pos.instances,
                               TrainOptions{epochs, seed + 1}, nullptr));
    }
    save_bundle_file(bundle, out_path);
    return 0;
}

// ---- parse -----------------------------------------------------------------

struct LoadedModel {
    std::optional<SlPipeline> sl;
    std::optional<TbPipeline> tb;

    static LoadedModel from_file(const std::string& path) {
        std::vector<Model> models = load_bundle_file(path);
        std::optional<Model> main, tagger;
        for (Model& m : models) {
            if (m.kind() == PredictorKind::PosTagger)
                tagger = std::move(m);
            else
                main = std::move(m);
        }
        if (!main) throw DataError("model file holds no parser model");
        LoadedModel loaded;
        if (main->kind() == PredictorKind::SequenceLabeler)
            loaded.sl.emplace(std::move(*main), std::move(tagger));
        else
            loaded.tb.emplace(std::move(*main), std::move(tagger));
        return loaded;
    }

    PipelineResult parse(const DepTree& sentence, bool gold_pos,
                         const PipelineOptions& options) const {
        std::vector<std::string> forms;
        std::vector<std::string> upos;
        for (const Token& t : sentence.tokens) {
            forms.push_back(t.form);
            upos.push_back(t.upos);
        }
        const std::vector<std::string>* gold = gold_pos ? &upos : nullptr;
        if (sl) return sl->parse(forms, gold, options, sentence.sentence_id);
        return tb->parse(forms, gold, options, sentence.sentence_id);
    }
};

int cmd_parse(const std::string& input, const std::string& model_path, bool gold_pos,
              const std::string& out_path) {
    const LoadedModel model = LoadedModel::from_file(model_path);
    ConlluOptions read_options;
    read_options.headless_ok = true;
    const std::vector<DepTree> sentences = parse_conllu_file(input, read_options);
    std::vector<DepTree> parsed;
    parsed.reserve(sentences.size());
    for (const DepTree& sentence : sentences)
        parsed.push_back(model.parse(sentence, gold_pos, {}).tree);
    OutFile out(out_path);
    write_conllu(parsed, out.stream());
    return 0;
}

// ---- eval ------------------------------------------------------------------

int cmd_eval(const std::string& gold_path, const std::string& pred_path,
             const std::string& out_prefix) {
    const std::vector<DepTree> gold = parse_conllu_file(gold_path);
    const std::vector<DepTree> pred = parse_conllu_file(pred_path);
    const Metrics metrics = score(gold, pred);
    const DisplacementCurve curve = displacement_curve(gold, pred);
    write_metrics_tsv(metrics, std::cout);
    if (!out_prefix.empty()) {
        {
            std::ofstream out(out_prefix + ".metrics.tsv");
            write_metrics_tsv(metrics, out);
        }
        {
            std::ofstream out(out_prefix + ".metrics.json");
            write_metrics_json(metrics, out);
        }
        {
            std::ofstream out(out_prefix + ".displacement.csv");
            write_displacement_csv(curve, /*merged=*/true, out);
        }
        {
            std::ofstream out(out_prefix + ".displacement_raw.csv");
            write_displacement_csv(curve, /*merged=*/false, out);
        }
    }
    return 0;
}

// ---- verify ----------------------------------------------------------------

ParseTrace trace_from_json(const nlohmann::json& object) {
    ParseTrace trace;
    trace.sentence_id = object.value("sentence_id", "");
    trace.n = object.at("n").get<int>();
    trace.declared_delay = object.value("delay", 0);
    for (const auto& snapshot : object.at("snapshots")) {
        std::vector<Arc> arcs;
        for (const auto& arc : snapshot) arcs.push_back({arc.at(0), arc.at(1)});
        std::sort(arcs.begin(), arcs.end());
        trace.snapshots.push_back(std::move(arcs));
    }
    for (const auto& arc : object.at("final")) trace.final_arcs.push_back({arc.at(0), arc.at(1)});
    std::sort(trace.final_arcs.begin(), trace.final_arcs.end());
    return trace;
}

int cmd_verify(const std::string& input, const std::string& scheme_flag, int delay,
               const std::string& model_path, bool gold_pos, const std::string& traces_path,
               const std::string& dump_path, bool skip_invalid) {
    std::vector<ParseTrace> traces;
    if (!traces_path.empty()) {
        std::ifstream in(traces_path);
        if (!in) throw DataError("cannot open " + traces_path);
        std::string line;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            traces.push_back(trace_from_json(nlohmann::json::parse(line)));
        }
    } else {
        const std::vector<DepTree> trees =
            parse_conllu_file(input, {.skip_invalid = skip_invalid});
        if (!model_path.empty()) {
            const LoadedModel model = LoadedModel::from_file(model_path);
            PipelineOptions options;
            options.record_trace = true;
            options.enforce_contract = true;
            for (const DepTree& tree : trees)
                traces.push_back(model.parse(tree, gold_pos, options).trace);
        } else {
            const SchemeOrSystem what = parse_scheme_flag(scheme_flag);
            for (const DepTree& tree : trees)
                traces.push_back(what.arc_eager()
                                     ? gold_tb_trace(tree, delay)
                                     : gold_sl_trace(tree, *what.scheme, delay));
        }
    }

    std::size_t monotonic_fail = 0, delay_fail = 0;
    double connected_sum = 0.0;
    for (const ParseTrace& trace : traces) {
        const Verdict monotonic = check_monotonic(trace);
        const Verdict delayed = check_delay(trace, delay);
        connected_sum += connected_fraction(trace);
        if (!monotonic.pass) {
            ++monotonic_fail;
            std::cout << "FAIL monotonic " << trace.sentence_id << ": " << monotonic.detail
                      << "\n";
        }
        if (!delayed.pass) {
            ++delay_fail;
            std::cout << "FAIL delay " << trace.sentence_id << ": " << delayed.detail << "\n";
        }
    }
    if (!dump_path.empty()) {
        std::ofstream out(dump_path);
        if (!out) throw DataError("cannot open " + dump_path + " for writing");
        write_trace_jsonl(traces, out);
    }
    std::cout << "sentences\t" << traces.size() << "\n";
    std::cout << "monotonic_pass\t" << traces.size() - monotonic_fail << "\n";
    std::cout << "delay_pass\t" << traces.size() - delay_fail << "\n";
    std::printf("connected_snapshots_pct\t%.2f\n",
                traces.empty() ? 100.0
                               : 100.0 * connected_sum / static_cast<double>(traces.size()));
    return monotonic_fail + delay_fail == 0 ? 0 : 3;
}

// ---- stats ------------------------------------------------------------------

int cmd_stats(const std::string& input, bool as_json, bool skip_invalid) {
    const std::vector<DepTree> trees = parse_conllu_file(input, {.skip_invalid = skip_invalid});
    const TreebankStats stats = branching_stats(trees);
    if (as_json) {
        nlohmann::json object;
        object["n_sentences"] = stats.n_sentences;
        object["n_tokens"] = stats.n_tokens;
        object["pct_left_arcs"] = stats.pct_left_arcs;
        object["pct_right_arcs"] = stats.pct_right_arcs;
        object["pct_nonprojective_sentences"] = stats.pct_nonprojective_sentences;
        std::cout << object.dump(2) << "\n";
    } else {
        std::cout << "sentences\t" << stats.n_sentences << "\n";
        std::cout << "tokens\t" << stats.n_tokens << "\n";
        std::printf("pct_left_arcs\t%.2f\n", stats.pct_left_arcs);
        std::printf("pct_right_arcs\t%.2f\n", stats.pct_right_arcs);
        std::printf("pct_nonprojective_sentences\t%.2f\n", stats.pct_nonprojective_sentences);
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Fully incremental dependency parsing toolkit"};
    app.require_subcommand(1);

    std::string input, gold_path, pred_path, scheme = "abs", out = "-", model_path,
                traces_path, dump_path, out_prefix;
    int delay = 0, epochs = 5;
    std::uint64_t seed = kDefaultSeed;
    bool gold_pos = false, skip_invalid = false, as_json = false;

    auto* encode_cmd = app.add_subcommand("encode", "Encode a treebank into labels");
    encode_cmd->add_option("input", input, "CoNLL-U input")->required();
    encode_cmd->add_option("--scheme", scheme, "abs|rel|pos|1p|2p|arc-eager")->required();
    encode_cmd->add_option("--out", out, "output path or -");
    encode_cmd->add_flag("--skip-invalid", skip_invalid, "skip invalid sentences with a warning");

    auto* decode_cmd = app.add_subcommand("decode", "Decode a label file into trees");
    decode_cmd->add_option("input", input, "label TSV input")->required();
    decode_cmd->add_option("--scheme", scheme, "abs|rel|pos|1p|2p")->required();
    decode_cmd->add_option("--out", out, "output path or -");

    auto* train_cmd = app.add_subcommand("train", "Train an incremental parser model");
    train_cmd->add_option("input", input, "CoNLL-U training treebank")->required();
    train_cmd->add_option("--scheme", scheme, "abs|rel|pos|1p|2p|arc-eager")->required();
    train_cmd->add_option("--delay", delay, "lookahead window k")->check(CLI::NonNegativeNumber);
    train_cmd->add_option("--epochs", epochs, "training epochs")->check(CLI::PositiveNumber);
    train_cmd->add_option("--seed", seed, "shuffle seed (default 1729)");
    train_cmd->add_flag("--gold-pos", gold_pos,
                        "rely on gold PoS tags at parse time; skip tagger training");
    train_cmd->add_flag("--skip-invalid", skip_invalid, "skip invalid sentences");
    train_cmd->add_option("--out", out, "model output path")->required();

    auto* parse_cmd = app.add_subcommand("parse", "Parse sentences with a trained model");
    parse_cmd->add_option("input", input, "CoNLL-U input (heads may be empty)")->required();
    parse_cmd->add_option("--model", model_path, "model file")->required();
    parse_cmd->add_flag("--gold-pos", gold_pos, "use the UPOS column instead of tagging");
    parse_cmd->add_option("--out", out, "output path or -");

    auto* eval_cmd = app.add_subcommand("eval", "Score a prediction against gold");
    eval_cmd->add_option("gold", gold_path, "gold CoNLL-U")->required();
    eval_cmd->add_option("pred", pred_path, "predicted CoNLL-U")->required();
    eval_cmd->add_option("--out", out_prefix, "prefix for metrics/displacement files");

    auto* verify_cmd =
        app.add_subcommand("verify", "Check monotonicity and delay-k incrementality");
    verify_cmd->add_option("input", input, "CoNLL-U treebank");
    verify_cmd->add_option("--scheme", scheme, "abs|rel|pos|1p|2p|arc-eager (gold mode)");
    verify_cmd->add_option("--delay", delay, "delay k to verify")->check(CLI::NonNegativeNumber);
    verify_cmd->add_option("--model", model_path, "verify a trained pipeline instead");
    verify_cmd->add_flag("--gold-pos", gold_pos, "feed gold PoS tags to the model");
    verify_cmd->add_option("--traces", traces_path, "check a recorded JSONL trace dump");
    verify_cmd->add_option("--dump-traces", dump_path, "write the recorded traces as JSONL");
    verify_cmd->add_flag("--skip-invalid", skip_invalid, "skip invalid sentences");

    auto* stats_cmd = app.add_subcommand("stats", "Treebank branching statistics");
    stats_cmd->add_option("input", input, "CoNLL-U treebank")->required();
    stats_cmd->add_flag("--json", as_json, "emit JSON instead of TSV");
    stats_cmd->add_flag("--skip-invalid", skip_invalid, "skip invalid sentences");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (encode_cmd->parsed()) return cmd_encode(input, scheme, out, skip_invalid);
        if (decode_cmd->parsed()) return cmd_decode(input, scheme, out);
        if (train_cmd->parsed())
            return cmd_train(input, scheme, delay, epochs, seed, gold_pos, skip_invalid, out);
        if (parse_cmd->parsed()) return cmd_parse(input, model_path, gold_pos, out);
        if (eval_cmd->parsed()) return cmd_eval(gold_path, pred_path, out_prefix);
        if (verify_cmd->parsed()) {
            if (traces_path.empty() && input.empty())
                throw CLI::ValidationError("verify", "either an input treebank or --traces");
            return cmd_verify(input, scheme, delay, model_path, gold_pos, traces_path,
                              dump_path, skip_invalid);
        }
        if (stats_cmd->parsed()) return cmd_stats(input, as_json, skip_invalid);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace increparse
