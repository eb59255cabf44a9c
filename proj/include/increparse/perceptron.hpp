#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "increparse/encodings.hpp"
#include "increparse/features.hpp"

namespace increparse {

enum class PredictorKind { SequenceLabeler, TransitionScorer, PosTagger };

const char* predictor_kind_name(PredictorKind kind);

// Legality mask over transition kinds, in TransitionKind order. Instances of
// non-transition predictors leave it all-ones.
struct KindMask {
    bool bits[4] = {true, true, true, true};
    static KindMask all();
    bool any() const { return bits[0] || bits[1] || bits[2] || bits[3]; }
};

struct Instance {
    FeatureVector features;
    std::uint32_t gold = 0;
    KindMask legal = KindMask::all();
};

struct TrainOptions {
    int epochs = 5;
    std::uint64_t seed = 1729;
};

struct TrainReport {
    std::vector<double> epoch_accuracy;
};

// Averaged multiclass perceptron over hashed sparse features. The class
// vocabulary is closed at training time; prediction always returns a member,
// with ties broken by vocabulary order.
class Model {
public:
    Model() = default;
    Model(PredictorKind kind, std::optional<Scheme> scheme, int delay,
          std::vector<std::string> classes);

    PredictorKind kind() const { return kind_; }
    std::optional<Scheme> scheme() const { return scheme_; }
    int delay() const { return delay_; }
    const std::vector<std::string>& classes() const { return classes_; }
    std::uint32_t class_id(std::string_view name) const;  // throws DataError if absent

    // For transition models: the kind of each class, used to apply masks.
    TransitionKind kind_of_class(std::uint32_t cls) const;

    // Argmax of averaged weights over classes allowed by the mask. Throws
    // DataError when the mask excludes every class.
    std::uint32_t predict(const FeatureVector& fv, const KindMask& legal = KindMask::all()) const;
    void scores(const FeatureVector& fv, std::vector<double>& out) const;

    void save(std::ostream& out) const;
    static Model load(std::istream& in);

    friend Model train(PredictorKind kind, std::optional<Scheme> scheme, int delay,
                       std::vector<std::string> classes, const std::vector<Instance>& corpus,
                       const TrainOptions& options, TrainReport* report);

private:
    PredictorKind kind_ = PredictorKind::SequenceLabeler;
    std::optional<Scheme> scheme_;
    int delay_ = 0;
    std::vector<std::string> classes_;
    std::vector<TransitionKind> class_kinds_;
    // class -> (weight) rows keyed by feature id; rows sorted by class id.
    std::unordered_map<FeatureId, std::vector<std::pair<std::uint32_t, double>>> weights_;

    void rebuild_class_kinds();
};

// Deterministic averaged-perceptron training: instance order is shuffled by a
// generator seeded from options.seed, and the stored weights are the running
// averages. Throws DataError on an empty corpus.
Model train(PredictorKind kind, std::optional<Scheme> scheme, int delay,
            std::vector<std::string> classes, const std::vector<Instance>& corpus,
            const TrainOptions& options, TrainReport* report = nullptr);

// Greedy left-to-right tagging with a PosTagger model: the tag of token i
// uses tokens up to i+k and previously predicted tags only.
std::vector<std::string> tag_pos(const Model& model, SentenceView& sentence, int k);

// Model files hold one or more predictors (a parser model optionally bundled
// with the tagger it was trained with).
void save_bundle(const std::vector<Model>& models, std::ostream& out);
void save_bundle_file(const std::vector<Model>& models, const std::string& path);
std::vector<Model> load_bundle(std::istream& in);
std::vector<Model> load_bundle_file(const std::string& path);

}  // namespace increparse
