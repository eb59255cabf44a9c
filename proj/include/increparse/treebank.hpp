#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "increparse/util.hpp"

namespace increparse {

// One syntactic word of a sentence. `id` is the 1-based sentence position,
// `head` is the position of the governor with 0 denoting the artificial root.
struct Token {
    int id = 0;
    std::string form;
    std::string upos;
    int head = 0;
    std::string deprel;
};

// An unlabeled dependency edge. Root attachments are (0, d).
struct Arc {
    int head = 0;
    int dep = 0;
    friend auto operator<=>(const Arc&, const Arc&) = default;
};

// A single sentence with its dependency tree. Comments are the raw "#" lines
// preceding the sentence in CoNLL-U input, kept verbatim for round trips.
struct DepTree {
    std::vector<Token> tokens;
    std::string sentence_id;
    std::vector<std::string> comments;

    int size() const { return static_cast<int>(tokens.size()); }
    const Token& token(int id) const { return tokens[static_cast<std::size_t>(id) - 1]; }
    Token& token(int id) { return tokens[static_cast<std::size_t>(id) - 1]; }
    int head_of(int id) const { return token(id).head; }
};

// All arcs of the tree, including the root arc, ordered by dependent.
std::vector<Arc> arcs_of(const DepTree& tree);

struct ConlluError : DataError {
    ConlluError(const std::string& message, std::size_t line_number = 0,
                std::string sentence_id = {});
    std::size_t line_number = 0;
    std::string sentence_id;
};

// Checks the DepTree invariants: ids are 1..n, heads lie in [0, n] and are not
// self-loops, exactly one token is attached to the root, the head relation is
// acyclic, and upos/deprel are non-empty. Returns false with a reason instead
// of throwing.
bool is_valid_tree(const DepTree& tree, std::string* why = nullptr);
void validate_tree(const DepTree& tree);  // throws ConlluError

struct ConlluOptions {
    // Skip sentences that fail validation with a warning instead of throwing.
    bool skip_invalid = false;
    // Accept "_" heads/deprels and skip tree validation; for parser input
    // that carries only forms (and possibly tags).
    bool headless_ok = false;
};

// Reads CoNLL-U. Multiword-token ranges ("3-4") and empty nodes ("5.1") are
// dropped; comment lines are preserved per sentence. Malformed lines raise
// ConlluError with the 1-based line number.
std::vector<DepTree> parse_conllu(std::istream& in, const ConlluOptions& options = {});
std::vector<DepTree> parse_conllu_file(const std::string& path, const ConlluOptions& options = {});

// Writes 10-column CoNLL-U; columns we do not model are emitted as "_".
void write_conllu(const std::vector<DepTree>& trees, std::ostream& out);
void write_conllu_file(const std::vector<DepTree>& trees, const std::string& path);

// True iff no two arcs cross, with the root arc anchored at position 0
// participating: for arcs with endpoint intervals (a,b) and (c,d), never
// a < c < b < d.
bool is_projective(const DepTree& tree);

// Repairs non-projectivity by lifting: while some arc (h, d) crosses another,
// d is reattached to head(h). Deprels and token order are untouched; already
// projective trees come back unchanged.
DepTree projectivize(const DepTree& tree);

struct TreebankStats {
    std::size_t n_sentences = 0;
    std::size_t n_tokens = 0;
    double pct_left_arcs = 0.0;   // head to the right of the dependent
    double pct_right_arcs = 0.0;  // head to the left; root arcs count here
    double pct_nonprojective_sentences = 0.0;
};

// Branching-direction statistics over all arcs. Throws DataError on an empty
// corpus rather than emitting NaNs.
TreebankStats branching_stats(const std::vector<DepTree>& trees);

}  // namespace increparse
