#include "increparse/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace increparse {

Metrics score(const std::vector<DepTree>& gold, const std::vector<DepTree>& pred) {
    if (gold.size() != pred.size())
        throw DataError("score: corpora have " + std::to_string(gold.size()) + " vs " +
                        std::to_string(pred.size()) + " sentences");
    Metrics metrics;
    std::size_t head_hits = 0, both_hits = 0;
    for (std::size_t s = 0; s < gold.size(); ++s) {
        const DepTree& g = gold[s];
        const DepTree& p = pred[s];
        if (g.size() != p.size())
            throw DataError("score: sentence '" + g.sentence_id + "' has " +
                            std::to_string(g.size()) + " gold vs " + std::to_string(p.size()) +
                            " predicted tokens");
        for (int i = 1; i <= g.size(); ++i) {
            ++metrics.n_tokens;
            if (g.head_of(i) != p.head_of(i)) continue;
            ++head_hits;
            if (g.token(i).deprel == p.token(i).deprel) ++both_hits;
        }
    }
    if (metrics.n_tokens > 0) {
        metrics.uas = static_cast<double>(head_hits) / static_cast<double>(metrics.n_tokens);
        metrics.las = static_cast<double>(both_hits) / static_cast<double>(metrics.n_tokens);
    }
    return metrics;
}

double BucketStats::precision() const {
    return pred_count == 0 ? 0.0
                           : static_cast<double>(true_positives) /
                                 static_cast<double>(pred_count);
}

double BucketStats::recall() const {
    return gold_count == 0 ? 0.0
                           : static_cast<double>(true_positives) /
                                 static_cast<double>(gold_count);
}

double BucketStats::f1() const {
    const double p = precision(), r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

DisplacementCurve displacement_curve(const std::vector<DepTree>& gold,
                                     const std::vector<DepTree>& pred) {
    if (gold.size() != pred.size())
        throw DataError("displacement_curve: corpora have different sentence counts");
    DisplacementCurve curve;
    auto bucket_of = [&curve](int head, int dep) -> BucketStats& {
        if (head == 0) return curve.root;
        return curve.buckets[dep - head];
    };
    for (std::size_t s = 0; s < gold.size(); ++s) {
        const DepTree& g = gold[s];
        const DepTree& p = pred[s];
        if (g.size() != p.size())
            throw DataError("displacement_curve: sentence '" + g.sentence_id +
                            "' token counts differ");
        for (int i = 1; i <= g.size(); ++i) {
            const int gh = g.head_of(i), ph = p.head_of(i);
            bucket_of(gh, i).gold_count += 1;
            bucket_of(ph, i).pred_count += 1;
            if (gh == ph) bucket_of(gh, i).true_positives += 1;
        }
    }
    return curve;
}

std::vector<DisplacementCurve::Row> DisplacementCurve::merged(int tail) const {
    BucketStats low, high;
    std::map<int, BucketStats> middle;
    for (const auto& [d, stats] : buckets) {
        BucketStats* target = d <= -tail ? &low : d >= tail ? &high : &middle[d];
        target->gold_count += stats.gold_count;
        target->pred_count += stats.pred_count;
        target->true_positives += stats.true_positives;
    }
    std::vector<Row> rows;
    rows.push_back({"<=" + std::to_string(-tail), low});
    for (const auto& [d, stats] : middle)
        rows.push_back({(d > 0 ? "+" : "") + std::to_string(d), stats});
    rows.push_back({"root", root});
    rows.push_back({">=+" + std::to_string(tail), high});
    return rows;
}

std::vector<DepTree> baseline_parse(const std::vector<DepTree>& sentences,
                                    BranchingStrategy strategy) {
    std::vector<DepTree> out;
    out.reserve(sentences.size());
    for (const DepTree& sentence : sentences) {
        DepTree tree = sentence;
        const int n = tree.size();
        for (int i = 1; i <= n; ++i) {
            Token& t = tree.token(i);
            if (strategy == BranchingStrategy::RightBranching)
                t.head = i - 1;
            else
                t.head = i == n ? 0 : i + 1;
            t.deprel = "dep";
        }
        out.push_back(std::move(tree));
    }
    return out;
}

Metrics macro_average(const std::vector<Metrics>& per_treebank) {
    if (per_treebank.empty()) throw DataError("macro_average: no treebanks");
    Metrics mean;
    for (const Metrics& m : per_treebank) {
        mean.uas += m.uas;
        mean.las += m.las;
        mean.n_tokens += m.n_tokens;
    }
    mean.uas /= static_cast<double>(per_treebank.size());
    mean.las /= static_cast<double>(per_treebank.size());
    return mean;
}

void write_metrics_tsv(const Metrics& metrics, std::ostream& out) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.2f", 100.0 * metrics.uas);
    out << "UAS\t" << buffer << "\n";
    std::snprintf(buffer, sizeof buffer, "%.2f", 100.0 * metrics.las);
    out << "LAS\t" << buffer << "\n";
    out << "tokens\t" << metrics.n_tokens << "\n";
}

void write_metrics_json(const Metrics& metrics, std::ostream& out) {
    nlohmann::json object;
    object["uas"] = metrics.uas;
    object["las"] = metrics.las;
    object["n_tokens"] = metrics.n_tokens;
    out << object.dump(2) << "\n";
}

void write_displacement_csv(const DisplacementCurve& curve, bool merged, std::ostream& out) {
    out << "displacement,precision,recall,f1,gold_count\n";
    auto emit = [&out](const std::string& key, const BucketStats& stats) {
        char buffer[96];
        std::snprintf(buffer, sizeof buffer, "%s,%.4f,%.4f,%.4f,%zu", key.c_str(),
                      stats.precision(), stats.recall(), stats.f1(), stats.gold_count);
        out << buffer << "\n";
    };
    if (merged) {
        for (const auto& row : curve.merged()) emit(row.key, row.stats);
    } else {
        for (const auto& [d, stats] : curve.buckets)
            if (d < 0) emit(std::to_string(d), stats);
        emit("root", curve.root);
        for (const auto& [d, stats] : curve.buckets)
            if (d > 0) emit("+" + std::to_string(d), stats);
    }
}

}  // namespace increparse
