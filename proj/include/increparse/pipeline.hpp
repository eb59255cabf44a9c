#pragma once

#include <optional>
#include <string>
#include <vector>

#include "increparse/arc_eager.hpp"
#include "increparse/encodings.hpp"
#include "increparse/incrementality.hpp"
#include "increparse/perceptron.hpp"

namespace increparse {

// ---- Training corpus construction ----------------------------------------

struct TrainingData {
    std::vector<std::string> classes;
    std::vector<Instance> instances;
};

// One instance per token: features in the window [i-3, i+k], gold label from
// encode(tree, scheme). Uses gold UPOS in the feature view.
TrainingData build_sl_corpus(const std::vector<DepTree>& trees, Scheme scheme, int k);

// One instance per oracle step on the (projectivized) gold trees, with the
// legality mask of the source configuration.
TrainingData build_tb_corpus(const std::vector<DepTree>& trees, int k);

// One instance per token for the delay-k tagger.
TrainingData build_pos_corpus(const std::vector<DepTree>& trees, int k);

// ---- Parsing pipelines -----------------------------------------------------

struct PipelineResult {
    DepTree tree;
    ParseTrace trace;
    std::vector<Label> labels;  // sequence-labeling pipelines only
};

struct PipelineOptions {
    bool record_trace = false;
    // Enforce the declared horizon on every token access (verify mode).
    bool enforce_contract = false;
};

// Strictly left-to-right parser: a delay-0 tagger fills UPOS as tokens
// arrive (unless gold tags are supplied), the labeler emits the label of
// token i once i+k tokens are accessible, and labels stream into the raw
// incremental decoder. Sentence-final repairs produce the output tree.
class SlPipeline {
public:
    SlPipeline(Model labeler, std::optional<Model> tagger);

    Scheme scheme() const { return *labeler_.scheme(); }
    int delay() const { return labeler_.delay(); }
    bool needs_gold_pos() const { return !tagger_.has_value(); }

    PipelineResult parse(const std::vector<std::string>& forms,
                         const std::vector<std::string>* gold_upos,
                         const PipelineOptions& options = {},
                         const std::string& sentence_id = {}) const;

private:
    Model labeler_;
    std::optional<Model> tagger_;
};

// Greedy arc-eager parser under the same contract: transition features see
// the first stack word and buffer words up to buffer_front + k.
class TbPipeline {
public:
    TbPipeline(Model scorer, std::optional<Model> tagger);

    int delay() const { return scorer_.delay(); }
    bool needs_gold_pos() const { return !tagger_.has_value(); }

    PipelineResult parse(const std::vector<std::string>& forms,
                         const std::vector<std::string>* gold_upos,
                         const PipelineOptions& options = {},
                         const std::string& sentence_id = {}) const;

private:
    Model scorer_;
    std::optional<Model> tagger_;
};

// ---- Gold-aware trace pipelines (no model required) ------------------------

// Streams the gold label sequence of `gold` through the raw decoder;
// snapshot i is the raw decode of labels 1..i.
ParseTrace gold_sl_trace(const DepTree& gold, Scheme scheme, int declared_delay);

// Runs the static oracle; snapshot i is the partial parse of the first
// configuration whose access horizon buffer_front + k exceeds i.
ParseTrace gold_tb_trace(const DepTree& gold, int declared_delay);

}  // namespace increparse
