#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "increparse/treebank.hpp"

namespace increparse {

// The five sequence-labeling tree encodings.
enum class Scheme { AbsIdx, RelIdx, PosIdx, Bracket1P, Bracket2P };

// An encoding is forward-looking when a token's label may refer to a token to
// its right. Head-selection encodings are; bracket encodings are not.
bool forward_looking(Scheme scheme);

const char* scheme_name(Scheme scheme);                 // abs, rel, pos, 1p, 2p
std::optional<Scheme> scheme_from_name(std::string_view name);

// One per-token output symbol. Which fields are meaningful depends on the
// scheme:
//   AbsIdx      index = head position in [0, n]
//   RelIdx      index = head - dependent (the root token gets -dependent)
//   PosIdx      pos_k-th token with tag pos_tag to the right (pos_k > 0) or
//               left (pos_k < 0) is the head; pos_k == 0 is the ROOT payload
//   Bracket1P   brackets over {<, \, /, >} in canonical order
//   Bracket2P   same plus starred plane-2 symbols {<*, \*, /*, >*}
struct Label {
    Scheme scheme = Scheme::AbsIdx;
    int index = 0;
    int pos_k = 0;
    std::string pos_tag;
    std::string brackets;

    std::string to_string() const;
    // Parses the serialized form; throws DataError on alphabet violations.
    static Label from_string(Scheme scheme, std::string_view text);

    friend bool operator==(const Label&, const Label&) = default;
};

// A labeled sentence: one label per token plus the parallel UPOS tags
// (required to decode PosIdx) and surface forms (carried through for I/O).
struct LabelSequence {
    Scheme scheme = Scheme::AbsIdx;
    std::string sentence_id;
    std::vector<Label> labels;
    std::vector<std::string> upos;
    std::vector<std::string> forms;

    int size() const { return static_cast<int>(labels.size()); }
};

// Encodes a tree into one label per token. Head-selection schemes are
// lossless. Bracket schemes keep the subset of arcs that fits the plane
// discipline (greedy by dependent index for 1P; two planes for 2P) and drop
// the rest silently; coverage() reports the damage.
LabelSequence encode(const DepTree& tree, Scheme scheme);

// Decodes any well-formed label sequence into a valid tree, repairing in a
// fixed order: (1) out-of-range or unresolvable heads -> 0, (2) bracket stack
// matching, (3) headless tokens -> first root candidate or 0, (4) cycles ->
// leftmost member reattached to 0, (5) extra roots reattached to the leftmost
// root. Deprels are not modeled by these encodings; decoded trees carry "dep".
DepTree decode(const LabelSequence& seq);

// Fraction of gold arcs recovered by decode(encode(tree, scheme)).
double coverage(const DepTree& tree, Scheme scheme);

// Streaming raw decoder: arcs commit as soon as both endpoints are known and
// the label evidence resolves, with sentence-final repairs deferred to
// finish(). This is the object incrementality traces are built from.
class IncrementalDecoder {
public:
    explicit IncrementalDecoder(Scheme scheme);

    // Feeds the label of the next token. Returns the arcs newly committed by
    // this step (raw, pre-repair).
    std::vector<Arc> feed(const Label& label, const std::string& upos);

    const std::vector<Arc>& committed() const { return committed_; }
    int tokens_seen() const { return n_; }

    // Applies end-of-sentence resolution and repairs (1)-(5); returns the
    // final head assignment, 1-based.
    std::vector<int> finish();

private:
    void commit(int head, int dep);
    void process_brackets(const Label& label);

    Scheme scheme_;
    int n_ = 0;
    std::vector<std::string> upos_;
    std::vector<int> head_;  // -1 while unassigned
    std::vector<Arc> committed_;

    struct PendingAbs { int dep; int head; };          // head beyond tokens seen
    struct PendingPos { int dep; int remaining; std::string tag; };
    std::vector<PendingAbs> pending_abs_;
    std::vector<PendingPos> pending_pos_;
    // Bracket matching stacks, per plane and direction; values are token ids.
    std::vector<int> right_stack_[2];
    std::vector<int> left_stack_[2];
};

// Label file I/O: TSV columns (sentence_id, token_id, form, upos, label),
// sentences separated by blank lines.
void write_label_tsv(const std::vector<LabelSequence>& sentences, std::ostream& out);
std::vector<LabelSequence> read_label_tsv(Scheme scheme, std::istream& in);

namespace detail {
// The arcs the bracket planner keeps, used by encode() and by tests that pin
// the greedy-subset semantics. plane is 0 or 1; arcs not kept are absent.
struct PlannedArc {
    Arc arc;
    int plane = 0;
};
std::vector<PlannedArc> plan_brackets(const DepTree& tree, bool two_planes);
bool arcs_cross(const Arc& a, const Arc& b);
bool same_direction(const Arc& a, const Arc& b);
}  // namespace detail

}  // namespace increparse
