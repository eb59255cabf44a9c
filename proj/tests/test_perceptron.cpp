#include <random>
#include <sstream>

#include "doctest.h"
#include "increparse/perceptron.hpp"
#include "increparse/pipeline.hpp"
#include "support/synth.hpp"
#include "support/treegen.hpp"

using namespace increparse;

namespace {

FeatureVector fv(std::initializer_list<FeatureId> ids) {
    FeatureVector v;
    v.ids.assign(ids);
    std::sort(v.ids.begin(), v.ids.end());
    return v;
}

std::string save_to_string(const std::vector<Model>& models) {
    std::ostringstream out;
    save_bundle(models, out);
    return out.str();
}

}  // namespace

TEST_CASE("training rejects an empty corpus") {
    CHECK_THROWS_AS(train(PredictorKind::SequenceLabeler, Scheme::AbsIdx, 0, {"0"}, {},
                          TrainOptions{}),
                    DataError);
}

TEST_CASE("one-instance corpus is memorized after one epoch") {
    std::vector<Instance> corpus{{fv({1, 2, 3}), 1, KindMask::all()}};
    const Model model = train(PredictorKind::SequenceLabeler, Scheme::AbsIdx, 0, {"a", "b"},
                              corpus, TrainOptions{1, 7});
    CHECK(model.predict(fv({1, 2, 3})) == 1);
}

TEST_CASE("same corpus and seed give byte-identical model files") {
    synth::Options options;
    options.n_sentences = 40;
    const auto trees = synth::corpus(options);
    const TrainingData data = build_sl_corpus(trees, Scheme::RelIdx, 1);
    const TrainOptions topt{3, 12345};
    const Model a = train(PredictorKind::SequenceLabeler, Scheme::RelIdx, 1, data.classes,
                          data.instances, topt);
    const Model b = train(PredictorKind::SequenceLabeler, Scheme::RelIdx, 1, data.classes,
                          data.instances, topt);
    CHECK(save_to_string({a}) == save_to_string({b}));

    // A different seed shuffles differently and changes the file.
    const Model c = train(PredictorKind::SequenceLabeler, Scheme::RelIdx, 1, data.classes,
                          data.instances, TrainOptions{3, 54321});
    CHECK(save_to_string({a}) != save_to_string({c}));
}

TEST_CASE("prediction ties break by vocabulary order and masks apply") {
    // A zero-weight model prefers the first class.
    std::vector<Instance> corpus{{fv({9}), 0, KindMask::all()}};
    Model model = train(PredictorKind::SequenceLabeler, std::nullopt, 0, {"first", "second"},
                        corpus, TrainOptions{1, 1});
    CHECK(model.predict(fv({1234567})) == 0);  // unseen features, all scores zero

    // Transition model: the mask restricts argmax to legal kinds.
    std::vector<Instance> tb_corpus{
        {fv({1}), 0, KindMask::all()},
        {fv({2}), 1, KindMask::all()},
    };
    const Model tb = train(PredictorKind::TransitionScorer, std::nullopt, 0,
                           {"SHIFT", "LEFTARC:nsubj", "RIGHTARC:obj", "REDUCE"}, tb_corpus,
                           TrainOptions{2, 3});
    KindMask only_reduce;
    only_reduce.bits[0] = only_reduce.bits[1] = only_reduce.bits[2] = false;
    CHECK(tb.predict(fv({1}), only_reduce) == 3);
    KindMask none;
    none.bits[0] = none.bits[1] = none.bits[2] = none.bits[3] = false;
    CHECK_THROWS_AS(tb.predict(fv({1}), none), DataError);
}

TEST_CASE("hand-built weights pick the larger dot product") {
    // Two instances that force known weight directions, then check argmax.
    std::vector<Instance> corpus{
        {fv({10}), 0, KindMask::all()},
        {fv({20}), 1, KindMask::all()},
    };
    const Model model = train(PredictorKind::SequenceLabeler, std::nullopt, 0, {"x", "y"},
                              corpus, TrainOptions{4, 5});
    CHECK(model.predict(fv({10})) == 0);
    CHECK(model.predict(fv({20})) == 1);
    std::vector<double> scores;
    model.scores(fv({10}), scores);
    CHECK(scores[0] > scores[1]);
}

TEST_CASE("training accuracy reaches 100% on a separable toy corpus") {
    std::mt19937_64 rng(77);
    std::vector<Instance> corpus;
    for (int i = 0; i < 200; ++i) {
        const std::uint32_t cls = static_cast<std::uint32_t>(i % 3);
        // Class-specific feature plus shared noise features.
        corpus.push_back({fv({100 + cls, 7, rng() % 5}), cls, KindMask::all()});
    }
    TrainReport report;
    train(PredictorKind::PosTagger, std::nullopt, 0, {"A", "B", "C"}, corpus,
          TrainOptions{6, 9}, &report);
    REQUIRE(report.epoch_accuracy.size() == 6);
    CHECK(report.epoch_accuracy.back() == doctest::Approx(1.0));
    CHECK(report.epoch_accuracy.front() <= report.epoch_accuracy.back());
}

TEST_CASE("model save/load round trip preserves predictions") {
    synth::Options options;
    options.n_sentences = 30;
    const auto trees = synth::corpus(options);
    const TrainingData data = build_pos_corpus(trees, 0);
    const Model model = train(PredictorKind::PosTagger, std::nullopt, 0, data.classes,
                              data.instances, TrainOptions{3, 11});
    std::stringstream io;
    save_bundle({model}, io);
    const auto loaded = load_bundle(io);
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].classes() == model.classes());
    CHECK(loaded[0].kind() == PredictorKind::PosTagger);
    // Identical output file after a round trip.
    CHECK(save_to_string({loaded[0]}) == save_to_string({model}));

    std::istringstream garbage("not a model\n");
    CHECK_THROWS_AS(load_bundle(garbage), DataError);
}

TEST_CASE("tag_pos is greedy left-to-right and memorizes its training data") {
    synth::Options options;
    options.n_sentences = 80;
    const auto trees = synth::corpus(options);
    const TrainingData data = build_pos_corpus(trees, 0);
    const Model model = train(PredictorKind::PosTagger, std::nullopt, 0, data.classes,
                              data.instances, TrainOptions{8, 13});

    std::size_t hits = 0, total = 0;
    for (std::size_t s = 0; s < 20; ++s) {
        std::vector<std::string> forms;
        for (const Token& t : trees[s].tokens) forms.push_back(t.form);
        SentenceView view(std::move(forms));
        const auto tags = tag_pos(model, view, 0);
        for (int i = 1; i <= trees[s].size(); ++i) {
            ++total;
            if (tags[static_cast<std::size_t>(i) - 1] == trees[s].token(i).upos) ++hits;
        }
    }
    CHECK(static_cast<double>(hits) / static_cast<double>(total) > 0.95);

    const Model not_a_tagger =
        train(PredictorKind::SequenceLabeler, Scheme::AbsIdx, 0, {"0"},
              {{fv({1}), 0, KindMask::all()}}, TrainOptions{1, 1});
    SentenceView one_word(std::vector<std::string>{"w"});
    CHECK_THROWS_AS(tag_pos(not_a_tagger, one_word, 0), DataError);
}

TEST_CASE("feature extraction respects the window contract") {
    // Identical sentences truncated at i+k produce identical vectors at i.
    std::vector<std::string> forms{"a", "b", "c", "d", "e", "f"};
    std::vector<std::string> tags{"A", "B", "C", "D", "E", "F"};
    for (int k = 0; k <= 2; ++k) {
        for (int i = 1; i <= 4; ++i) {
            SentenceView full(forms, tags);
            std::vector<std::string> cut_forms(forms.begin(), forms.begin() + i + k);
            std::vector<std::string> cut_tags(tags.begin(), tags.begin() + i + k);
            SentenceView cut(cut_forms, cut_tags);
            // Beyond-window tokens differ entirely, vectors must not.
            CHECK(extract_features_sl(full, i, k).ids == extract_features_sl(cut, i, k).ids);
            CHECK(full.high_water() <= i + k);
        }
    }
    // Edge case: window at the last token pads with boundary symbols.
    SentenceView view(forms, tags);
    const auto fv_end = extract_features_sl(view, 6, 2);
    CHECK_FALSE(fv_end.ids.empty());

    // The access guard trips when a feature would look past the horizon.
    SentenceView guarded(forms, tags);
    guarded.set_access_limit(2);
    CHECK_THROWS_AS(static_cast<void>(extract_features_sl(guarded, 2, 1)), ContractViolation);
    guarded.set_access_limit(3);
    CHECK_NOTHROW(static_cast<void>(extract_features_sl(guarded, 2, 1)));
}

TEST_CASE("transition features only touch the allowed window") {
    std::vector<std::string> forms{"a", "b", "c", "d", "e"};
    std::vector<std::string> tags{"A", "B", "C", "D", "E"};
    for (int k = 0; k <= 2; ++k) {
        SentenceView view(forms, tags);
        Configuration c = initial_config(5);
        c = apply_transition(c, {TransitionKind::Shift, {}});
        view.reset_high_water();
        static_cast<void>(extract_features_tb(view, c, k));
        CHECK(view.high_water() <= c.buffer_front + k);
    }
}
