#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "increparse/arc_eager.hpp"
#include "increparse/util.hpp"

namespace increparse {

using FeatureId = std::uint64_t;

// Sparse binary feature set; ids are stable 64-bit hashes of
// (template, value) strings, sorted and deduplicated.
struct FeatureVector {
    std::vector<FeatureId> ids;
};

// Access-guarded view of a sentence. All feature extraction reads tokens
// through this view, which records the highest token position touched and can
// enforce a hard horizon. Predicted UPOS tags are written into the view as
// tagging progresses; reading the tag of position j counts as accessing j,
// which is exact because a delay-0 tagger derives tag j from forms 1..j.
class SentenceView {
public:
    explicit SentenceView(std::vector<std::string> forms);
    SentenceView(std::vector<std::string> forms, std::vector<std::string> upos);

    int size() const { return n_; }
    // 1-based; positions outside [1, n] yield boundary symbols.
    std::string_view form(int i) const;
    std::string_view upos(int i) const;
    bool has_upos(int i) const;
    void set_upos(int i, std::string tag);

    int high_water() const { return high_water_; }
    void reset_high_water() { high_water_ = 0; }
    // When set, any access beyond the limit throws ContractViolation.
    void set_access_limit(std::optional<int> limit) { limit_ = limit; }

private:
    void touch(int i) const;

    int n_ = 0;
    std::vector<std::string> forms_;
    std::vector<std::string> upos_;
    std::vector<bool> upos_set_;
    mutable int high_water_ = 0;
    std::optional<int> limit_;
};

// Features for predicting the label of token i under delay k: forms, tags,
// affixes and shapes drawn from the window [i-3, i+k] only.
FeatureVector extract_features_sl(const SentenceView& sentence, int i, int k);

// Features for scoring the next transition under delay k: the first stack
// word, the buffer words buffer_front .. buffer_front+k, and arc-derived
// information about the stack top (its deprel and dependent counts).
FeatureVector extract_features_tb(const SentenceView& sentence, const Configuration& c, int k);

// Features for tagging token i under delay k, with the two previously
// predicted tags as context.
FeatureVector extract_features_pos(const SentenceView& sentence, int i, int k,
                                   std::string_view prev_tag, std::string_view prev2_tag);

}  // namespace increparse
