#include "increparse/pipeline.hpp"

#include <algorithm>

namespace increparse {

namespace {

std::vector<std::string> forms_of(const DepTree& tree) {
    std::vector<std::string> forms;
    forms.reserve(tree.tokens.size());
    for (const Token& t : tree.tokens) forms.push_back(t.form);
    return forms;
}

std::vector<std::string> upos_of(const DepTree& tree) {
    std::vector<std::string> upos;
    upos.reserve(tree.tokens.size());
    for (const Token& t : tree.tokens) upos.push_back(t.upos);
    return upos;
}

// Interns a class string, first-seen order.
std::uint32_t intern(std::vector<std::string>& classes, const std::string& name) {
    for (std::uint32_t i = 0; i < classes.size(); ++i)
        if (classes[i] == name) return i;
    classes.push_back(name);
    return static_cast<std::uint32_t>(classes.size() - 1);
}

}  // namespace

TrainingData build_sl_corpus(const std::vector<DepTree>& trees, Scheme scheme, int k) {
    TrainingData data;
    for (const DepTree& tree : trees) {
        const LabelSequence seq = encode(tree, scheme);
        SentenceView view(forms_of(tree), upos_of(tree));
        for (int i = 1; i <= tree.size(); ++i) {
            Instance instance;
            instance.features = extract_features_sl(view, i, k);
            instance.gold = intern(data.classes,
                                   seq.labels[static_cast<std::size_t>(i) - 1].to_string());
            data.instances.push_back(std::move(instance));
        }
    }
    return data;
}

TrainingData build_tb_corpus(const std::vector<DepTree>& trees, int k) {
    TrainingData data;
    for (const DepTree& tree : trees) {
        const OracleRun run = run_oracle(tree);
        SentenceView view(forms_of(tree), upos_of(tree));
        Configuration c = initial_config(tree.size());
        for (const Transition& t : run.transitions) {
            const LegalSet legal = legal_transitions(c);
            Instance instance;
            instance.features = extract_features_tb(view, c, k);
            instance.gold = intern(data.classes, t.to_string());
            instance.legal.bits[0] = legal.shift;
            instance.legal.bits[1] = legal.left_arc;
            instance.legal.bits[2] = legal.right_arc;
            instance.legal.bits[3] = legal.reduce;
            data.instances.push_back(std::move(instance));
            c = apply_transition(c, t);
        }
    }
    return data;
}

TrainingData build_pos_corpus(const std::vector<DepTree>& trees, int k) {
    TrainingData data;
    for (const DepTree& tree : trees) {
        SentenceView view(forms_of(tree));
        std::string prev = "<s>", prev2 = "<s>";
        for (int i = 1; i <= tree.size(); ++i) {
            Instance instance;
            instance.features = extract_features_pos(view, i, k, prev, prev2);
            instance.gold = intern(data.classes, tree.token(i).upos);
            data.instances.push_back(std::move(instance));
            prev2 = prev;
            prev = tree.token(i).upos;
        }
    }
    return data;
}

// ---- model-driven pipelines -------------------------------------------------

namespace {

// Streams a delay-0 tagger over the sentence as the horizon advances.
class StreamingTagger {
public:
    StreamingTagger(const Model* model, SentenceView& view, bool gold)
        : model_(model), view_(view), gold_(gold) {}

    // Ensures tokens 1..min(j, n) carry a UPOS tag.
    void ensure(int j) {
        if (gold_) return;
        const int stop = std::min(j, view_.size());
        for (; tagged_ < stop;) {
            ++tagged_;
            FeatureVector fv = extract_features_pos(view_, tagged_, 0, prev_, prev2_);
            const std::string& tag = model_->classes()[model_->predict(fv)];
            view_.set_upos(tagged_, tag);
            prev2_ = prev_;
            prev_ = tag;
        }
    }

private:
    const Model* model_;
    SentenceView& view_;
    bool gold_;
    int tagged_ = 0;
    std::string prev_ = "<s>";
    std::string prev2_ = "<s>";
};

std::vector<std::string> view_upos(const SentenceView& view) {
    std::vector<std::string> upos;
    upos.reserve(static_cast<std::size_t>(view.size()));
    for (int i = 1; i <= view.size(); ++i) upos.emplace_back(view.upos(i));
    return upos;
}

Transition transition_from_string(const std::string& text) {
    Transition t;
    if (text == "SHIFT") return t;
    if (text == "REDUCE") {
        t.kind = TransitionKind::Reduce;
        return t;
    }
    std::size_t colon = text.find(':');
    std::string head = colon == std::string::npos ? text : text.substr(0, colon);
    if (head == "LEFTARC") t.kind = TransitionKind::LeftArc;
    else if (head == "RIGHTARC") t.kind = TransitionKind::RightArc;
    else throw DataError("bad transition class '" + text + "'");
    if (colon != std::string::npos) t.deprel = text.substr(colon + 1);
    return t;
}

}  // namespace

SlPipeline::SlPipeline(Model labeler, std::optional<Model> tagger)
    : labeler_(std::move(labeler)), tagger_(std::move(tagger)) {
    if (labeler_.kind() != PredictorKind::SequenceLabeler || !labeler_.scheme())
        throw DataError("SlPipeline: model is not a sequence labeler");
    if (tagger_ && tagger_->kind() != PredictorKind::PosTagger)
        throw DataError("SlPipeline: companion model is not a PoS tagger");
}

PipelineResult SlPipeline::parse(const std::vector<std::string>& forms,
                                 const std::vector<std::string>* gold_upos,
                                 const PipelineOptions& options,
                                 const std::string& sentence_id) const {
    const int n = static_cast<int>(forms.size());
    const int k = delay();
    if (!gold_upos && !tagger_)
        throw DataError("sentence '" + sentence_id +
                        "': model was trained for gold PoS tags but none were supplied");

    SentenceView view = gold_upos ? SentenceView(forms, *gold_upos) : SentenceView(forms);
    StreamingTagger tagger(tagger_ ? &*tagger_ : nullptr, view, gold_upos != nullptr);
    IncrementalDecoder decoder(scheme());
    TraceRecorder recorder(n, k, sentence_id);

    PipelineResult result;
    for (int i = 1; i <= n; ++i) {
        if (options.enforce_contract) view.set_access_limit(i + k);
        tagger.ensure(i + k);
        FeatureVector fv = extract_features_sl(view, i, k);
        Label label =
            Label::from_string(scheme(), labeler_.classes()[labeler_.predict(fv)]);
        decoder.feed(label, std::string(view.upos(i)));
        result.labels.push_back(std::move(label));
        if (options.record_trace) recorder.commit(std::min(i + k, n), decoder.committed());
    }
    view.set_access_limit(std::nullopt);

    const std::vector<int> heads = decoder.finish();
    DepTree tree;
    tree.sentence_id = sentence_id;
    for (int i = 1; i <= n; ++i) {
        Token t;
        t.id = i;
        t.form = forms[static_cast<std::size_t>(i) - 1];
        t.upos = std::string(view.upos(i));
        t.head = heads[static_cast<std::size_t>(i) - 1];
        t.deprel = "dep";
        tree.tokens.push_back(std::move(t));
    }
    result.tree = std::move(tree);
    if (options.record_trace) {
        recorder.set_final(arcs_of(result.tree));
        result.trace = std::move(recorder).build();
    }
    return result;
}

TbPipeline::TbPipeline(Model scorer, std::optional<Model> tagger)
    : scorer_(std::move(scorer)), tagger_(std::move(tagger)) {
    if (scorer_.kind() != PredictorKind::TransitionScorer)
        throw DataError("TbPipeline: model is not a transition scorer");
    if (tagger_ && tagger_->kind() != PredictorKind::PosTagger)
        throw DataError("TbPipeline: companion model is not a PoS tagger");
}

PipelineResult TbPipeline::parse(const std::vector<std::string>& forms,
                                 const std::vector<std::string>* gold_upos,
                                 const PipelineOptions& options,
                                 const std::string& sentence_id) const {
    const int n = static_cast<int>(forms.size());
    const int k = delay();
    if (!gold_upos && !tagger_)
        throw DataError("sentence '" + sentence_id +
                        "': model was trained for gold PoS tags but none were supplied");

    PipelineResult result;
    SentenceView view = gold_upos ? SentenceView(forms, *gold_upos) : SentenceView(forms);
    TraceRecorder recorder(n, k, sentence_id);
    if (n == 0) {
        result.tree.sentence_id = sentence_id;
        return result;
    }

    StreamingTagger tagger(tagger_ ? &*tagger_ : nullptr, view, gold_upos != nullptr);
    Configuration c = initial_config(n);
    while (true) {
        const LegalSet legal = legal_transitions(c);
        if (!legal.any()) break;
        if (options.enforce_contract) view.set_access_limit(c.buffer_front + k);
        tagger.ensure(c.buffer_front + k);
        FeatureVector fv = extract_features_tb(view, c, k);
        KindMask mask;
        mask.bits[0] = legal.shift;
        mask.bits[1] = legal.left_arc;
        mask.bits[2] = legal.right_arc;
        mask.bits[3] = legal.reduce;
        const int accessed = std::min(c.buffer_front + k, n);
        Transition t =
            transition_from_string(scorer_.classes()[scorer_.predict(fv, mask)]);
        c = apply_transition(c, t);
        if (options.record_trace) {
            std::vector<Arc> arcs;
            arcs.reserve(c.arcs.size());
            for (const Dependency& a : c.arcs) arcs.push_back({a.head, a.dep});
            recorder.commit(accessed, arcs);
        }
    }
    view.set_access_limit(std::nullopt);

    result.tree = finalize_tree(c, forms, view_upos(view), sentence_id);
    if (options.record_trace) {
        recorder.set_final(arcs_of(result.tree));
        result.trace = std::move(recorder).build();
    }
    return result;
}

// ---- gold-driven trace pipelines ----------------------------------------------

ParseTrace gold_sl_trace(const DepTree& gold, Scheme scheme, int declared_delay) {
    const LabelSequence seq = encode(gold, scheme);
    IncrementalDecoder decoder(scheme);
    TraceRecorder recorder(gold.size(), declared_delay, gold.sentence_id);
    for (int i = 1; i <= gold.size(); ++i) {
        decoder.feed(seq.labels[static_cast<std::size_t>(i) - 1],
                     seq.upos[static_cast<std::size_t>(i) - 1]);
        recorder.commit(i, decoder.committed());
    }
    const std::vector<int> heads = decoder.finish();
    std::vector<Arc> final_arcs;
    for (int d = 1; d <= gold.size(); ++d)
        final_arcs.push_back({heads[static_cast<std::size_t>(d) - 1], d});
    recorder.set_final(final_arcs);
    return std::move(recorder).build();
}

ParseTrace gold_tb_trace(const DepTree& gold, int declared_delay) {
    const OracleRun run = run_oracle(gold);
    const int n = gold.size();
    TraceRecorder recorder(n, declared_delay, gold.sentence_id);
    Configuration c = initial_config(n);
    for (const Transition& t : run.transitions) {
        const int accessed = std::min(c.buffer_front + declared_delay, n);
        c = apply_transition(c, t);
        std::vector<Arc> arcs;
        arcs.reserve(c.arcs.size());
        for (const Dependency& a : c.arcs) arcs.push_back({a.head, a.dep});
        recorder.commit(accessed, arcs);
    }
    recorder.set_final(arcs_of(run.tree));
    return std::move(recorder).build();
}

}  // namespace increparse
