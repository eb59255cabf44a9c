#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "increparse/treebank.hpp"

namespace increparse {

struct Metrics {
    double uas = 0.0;  // fraction in [0, 1]
    double las = 0.0;
    std::size_t n_tokens = 0;
};

// Attachment scores over aligned corpora; every token is scored, punctuation
// included. Throws DataError naming the first misaligned sentence.
Metrics score(const std::vector<DepTree>& gold, const std::vector<DepTree>& pred);

struct BucketStats {
    std::size_t gold_count = 0;
    std::size_t pred_count = 0;
    std::size_t true_positives = 0;

    double precision() const;
    double recall() const;
    double f1() const;
};

// Per-displacement attachment quality, d = dependent - head. Root arcs live
// in a distinguished bucket. A predicted arc is a true positive iff it
// matches a gold arc exactly (same head and dependent).
struct DisplacementCurve {
    std::map<int, BucketStats> buckets;
    BucketStats root;

    // Plot-friendly rows with |d| >= tail merged into +/- tail buckets.
    struct Row {
        std::string key;
        BucketStats stats;
    };
    std::vector<Row> merged(int tail = 10) const;
};

DisplacementCurve displacement_curve(const std::vector<DepTree>& gold,
                                     const std::vector<DepTree>& pred);

enum class BranchingStrategy { RightBranching, LeftBranching };

// Structure-free baselines over the same sentences: right-branching attaches
// every token to its left neighbour (token 1 to the root), left-branching the
// mirror image. Deprels are "dep".
std::vector<DepTree> baseline_parse(const std::vector<DepTree>& sentences,
                                    BranchingStrategy strategy);

// Unweighted mean across treebanks; throws DataError when empty.
Metrics macro_average(const std::vector<Metrics>& per_treebank);

void write_metrics_tsv(const Metrics& metrics, std::ostream& out);
void write_metrics_json(const Metrics& metrics, std::ostream& out);
// CSV columns: displacement, precision, recall, f1, gold_count.
void write_displacement_csv(const DisplacementCurve& curve, bool merged, std::ostream& out);

}  // namespace increparse
