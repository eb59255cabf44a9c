#include "increparse/perceptron.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace increparse {

const char* predictor_kind_name(PredictorKind kind) {
    switch (kind) {
        case PredictorKind::SequenceLabeler: return "sl";
        case PredictorKind::TransitionScorer: return "tb";
        case PredictorKind::PosTagger: return "pos";
    }
    return "?";
}

KindMask KindMask::all() { return KindMask{}; }

Model::Model(PredictorKind kind, std::optional<Scheme> scheme, int delay,
             std::vector<std::string> classes)
    : kind_(kind), scheme_(scheme), delay_(delay), classes_(std::move(classes)) {
    rebuild_class_kinds();
}

void Model::rebuild_class_kinds() {
    class_kinds_.clear();
    if (kind_ != PredictorKind::TransitionScorer) return;
    class_kinds_.reserve(classes_.size());
    for (const std::string& c : classes_) {
        if (c.rfind("LEFTARC", 0) == 0) class_kinds_.push_back(TransitionKind::LeftArc);
        else if (c.rfind("RIGHTARC", 0) == 0) class_kinds_.push_back(TransitionKind::RightArc);
        else if (c == "REDUCE") class_kinds_.push_back(TransitionKind::Reduce);
        else class_kinds_.push_back(TransitionKind::Shift);
    }
}

std::uint32_t Model::class_id(std::string_view name) const {
    for (std::uint32_t i = 0; i < classes_.size(); ++i)
        if (classes_[i] == name) return i;
    throw DataError("unknown class '" + std::string(name) + "'");
}

TransitionKind Model::kind_of_class(std::uint32_t cls) const {
    return class_kinds_.empty() ? TransitionKind::Shift
                                : class_kinds_[static_cast<std::size_t>(cls)];
}

void Model::scores(const FeatureVector& fv, std::vector<double>& out) const {
    out.assign(classes_.size(), 0.0);
    for (FeatureId id : fv.ids) {
        auto it = weights_.find(id);
        if (it == weights_.end()) continue;
        for (const auto& [cls, w] : it->second) out[cls] += w;
    }
}

std::uint32_t Model::predict(const FeatureVector& fv, const KindMask& legal) const {
    static thread_local std::vector<double> score;
    scores(fv, score);
    bool found = false;
    std::uint32_t best = 0;
    double best_score = 0.0;
    for (std::uint32_t c = 0; c < classes_.size(); ++c) {
        if (kind_ == PredictorKind::TransitionScorer &&
            !legal.bits[static_cast<int>(class_kinds_[c])])
            continue;
        if (!found || score[c] > best_score) {
            found = true;
            best = c;
            best_score = score[c];
        }
    }
    if (!found) throw DataError("prediction mask excludes every class");
    return best;
}

// ---- training ----------------------------------------------------------------

namespace {

struct Cell {
    std::uint32_t cls = 0;
    double weight = 0.0;
    double accumulated = 0.0;
    std::uint64_t last_step = 0;
};

class Trainer {
public:
    Trainer(std::size_t n_classes) : n_classes_(n_classes) {}

    void score(const FeatureVector& fv, std::vector<double>& out) const {
        out.assign(n_classes_, 0.0);
        for (FeatureId id : fv.ids) {
            auto it = cells_.find(id);
            if (it == cells_.end()) continue;
            for (const Cell& cell : it->second) out[cell.cls] += cell.weight;
        }
    }

    void update(const FeatureVector& fv, std::uint32_t cls, double delta, std::uint64_t step) {
        for (FeatureId id : fv.ids) {
            auto& row = cells_[id];
            auto it = std::find_if(row.begin(), row.end(),
                                   [cls](const Cell& c) { return c.cls == cls; });
            if (it == row.end()) {
                row.push_back(Cell{cls, 0.0, 0.0, 0});
                it = row.end() - 1;
            }
            it->accumulated += it->weight * static_cast<double>(step - it->last_step);
            it->weight += delta;
            it->last_step = step;
        }
    }

    // Averaged post-update weights over the `total` steps, dropping exact
    // zeros. `accumulated` holds sums of w_after_t for steps last_step..t-1,
    // so the tail span last_step..total still needs total+1-last_step terms.
    void finalize(std::uint64_t total,
                  std::unordered_map<FeatureId,
                                     std::vector<std::pair<std::uint32_t, double>>>& out) {
        for (auto& [id, row] : cells_) {
            std::vector<std::pair<std::uint32_t, double>> averaged;
            for (Cell& cell : row) {
                cell.accumulated +=
                    cell.weight * static_cast<double>(total + 1 - cell.last_step);
                double avg = cell.accumulated / static_cast<double>(total);
                if (avg != 0.0) averaged.emplace_back(cell.cls, avg);
            }
            if (averaged.empty()) continue;
            std::sort(averaged.begin(), averaged.end());
            out.emplace(id, std::move(averaged));
        }
    }

private:
    std::size_t n_classes_;
    std::unordered_map<FeatureId, std::vector<Cell>> cells_;
};

}  // namespace

Model train(PredictorKind kind, std::optional<Scheme> scheme, int delay,
            std::vector<std::string> classes, const std::vector<Instance>& corpus,
            const TrainOptions& options, TrainReport* report) {
    if (corpus.empty()) throw DataError("train: empty corpus");
    if (classes.empty()) throw DataError("train: empty class vocabulary");

    Model model(kind, scheme, delay, std::move(classes));
    Trainer trainer(model.classes().size());

    std::vector<std::size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(options.seed);

    std::vector<double> score;
    std::uint64_t step = 0;
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        std::size_t correct = 0;
        for (std::size_t idx : order) {
            const Instance& instance = corpus[idx];
            ++step;
            trainer.score(instance.features, score);
            bool found = false;
            std::uint32_t best = 0;
            double best_score = 0.0;
            for (std::uint32_t c = 0; c < model.classes().size(); ++c) {
                if (kind == PredictorKind::TransitionScorer &&
                    !instance.legal.bits[static_cast<int>(model.kind_of_class(c))])
                    continue;
                if (!found || score[c] > best_score) {
                    found = true;
                    best = c;
                    best_score = score[c];
                }
            }
            if (!found) throw DataError("train: instance mask excludes every class");
            if (best == instance.gold) {
                ++correct;
            } else {
                trainer.update(instance.features, instance.gold, +1.0, step);
                trainer.update(instance.features, best, -1.0, step);
            }
        }
        double accuracy = static_cast<double>(correct) / static_cast<double>(corpus.size());
        if (report) report->epoch_accuracy.push_back(accuracy);
        log_info("epoch " + std::to_string(epoch + 1) + ": training accuracy " +
                 std::to_string(100.0 * accuracy) + "%");
    }
    trainer.finalize(step, model.weights_);
    return model;
}

std::vector<std::string> tag_pos(const Model& model, SentenceView& sentence, int k) {
    if (model.kind() != PredictorKind::PosTagger)
        throw DataError("tag_pos: model is not a PoS tagger");
    std::vector<std::string> tags;
    std::string prev = "<s>", prev2 = "<s>";
    for (int i = 1; i <= sentence.size(); ++i) {
        FeatureVector fv = extract_features_pos(sentence, i, k, prev, prev2);
        const std::string& tag = model.classes()[model.predict(fv)];
        sentence.set_upos(i, tag);
        prev2 = prev;
        prev = tag;
        tags.push_back(tag);
    }
    return tags;
}

// ---- serialization -------------------------------------------------------------

namespace {

std::string read_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw DataError(std::string("model file: missing ") + what);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::string expect_field(std::istream& in, const std::string& key) {
    std::string line = read_line(in, key.c_str());
    if (line.rfind(key + " ", 0) != 0)
        throw DataError("model file: expected '" + key + "', got '" + line + "'");
    return line.substr(key.size() + 1);
}

}  // namespace

void Model::save(std::ostream& out) const {
    out << "increparse-model 1\n";
    out << "kind " << predictor_kind_name(kind_) << "\n";
    out << "scheme " << (scheme_ ? scheme_name(*scheme_) : "-") << "\n";
    out << "delay " << delay_ << "\n";
    out << "classes " << classes_.size() << "\n";
    for (const std::string& c : classes_) out << c << "\n";

    std::vector<FeatureId> ids;
    ids.reserve(weights_.size());
    for (const auto& [id, row] : weights_) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    out << "features " << ids.size() << "\n";
    out << std::setprecision(17);
    for (FeatureId id : ids) {
        out << id;
        for (const auto& [cls, w] : weights_.at(id)) out << ' ' << cls << ':' << w;
        out << "\n";
    }
    out << "end increparse-model\n";
    if (!out) throw DataError("model write failed");
}

Model Model::load(std::istream& in) {
    if (read_line(in, "magic") != "increparse-model 1")
        throw DataError("model file: bad magic");
    std::string kind_name = expect_field(in, "kind");
    PredictorKind kind;
    if (kind_name == "sl") kind = PredictorKind::SequenceLabeler;
    else if (kind_name == "tb") kind = PredictorKind::TransitionScorer;
    else if (kind_name == "pos") kind = PredictorKind::PosTagger;
    else throw DataError("model file: unknown kind '" + kind_name + "'");

    std::string scheme_field = expect_field(in, "scheme");
    std::optional<Scheme> scheme;
    if (scheme_field != "-") {
        scheme = scheme_from_name(scheme_field);
        if (!scheme) throw DataError("model file: unknown scheme '" + scheme_field + "'");
    }
    int delay = 0;
    if (!parse_int(expect_field(in, "delay"), delay) || delay < 0)
        throw DataError("model file: bad delay");
    int n_classes = 0;
    if (!parse_int(expect_field(in, "classes"), n_classes) || n_classes < 1)
        throw DataError("model file: bad class count");
    std::vector<std::string> classes;
    classes.reserve(static_cast<std::size_t>(n_classes));
    for (int i = 0; i < n_classes; ++i) classes.push_back(read_line(in, "class"));

    Model model(kind, scheme, delay, std::move(classes));

    int n_features = 0;
    if (!parse_int(expect_field(in, "features"), n_features) || n_features < 0)
        throw DataError("model file: bad feature count");
    for (int i = 0; i < n_features; ++i) {
        std::istringstream row(read_line(in, "feature row"));
        FeatureId id = 0;
        if (!(row >> id)) throw DataError("model file: bad feature id");
        std::vector<std::pair<std::uint32_t, double>> cells;
        std::string cell;
        while (row >> cell) {
            std::size_t colon = cell.find(':');
            int cls = 0;
            if (colon == std::string::npos || !parse_int(cell.substr(0, colon), cls) ||
                cls < 0 || cls >= n_classes)
                throw DataError("model file: bad weight cell '" + cell + "'");
            cells.emplace_back(static_cast<std::uint32_t>(cls), std::stod(cell.substr(colon + 1)));
        }
        model.weights_.emplace(id, std::move(cells));
    }
    if (read_line(in, "trailer") != "end increparse-model")
        throw DataError("model file: missing trailer");
    return model;
}

void save_bundle(const std::vector<Model>& models, std::ostream& out) {
    out << "increparse-bundle 1\n";
    out << "models " << models.size() << "\n";
    for (const Model& m : models) m.save(out);
    out << "end increparse-bundle\n";
    if (!out) throw DataError("bundle write failed");
}

void save_bundle_file(const std::vector<Model>& models, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    save_bundle(models, out);
}

std::vector<Model> load_bundle(std::istream& in) {
    if (read_line(in, "magic") != "increparse-bundle 1")
        throw DataError("model file: bad bundle magic");
    int count = 0;
    if (!parse_int(expect_field(in, "models"), count) || count < 1)
        throw DataError("model file: bad bundle size");
    std::vector<Model> models;
    models.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) models.push_back(Model::load(in));
    if (read_line(in, "bundle trailer") != "end increparse-bundle")
        throw DataError("model file: missing bundle trailer");
    return models;
}

std::vector<Model> load_bundle_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return load_bundle(in);
}

}  // namespace increparse
