#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace synth {

using increparse::DepTree;
using increparse::Token;

namespace {

const char* kDet[] = {"the", "a", "this", "that", "every", "some", "each", "no"};
const char* kNounStem[] = {"market",  "garden",  "signal", "report", "window", "teacher",
                           "system",  "river",   "letter", "engine", "doctor", "city",
                           "plan",    "story",   "budget", "farmer", "bridge", "castle",
                           "harbor",  "journal", "meadow", "violin", "tunnel", "orchard"};
const char* kPropn[] = {"Alice", "Boris", "Carmen", "Daniel", "Elena",
                        "Farid", "Greta", "Henrik", "Irene", "Jonas"};
const char* kVerbStem[] = {"open",   "close",  "watch",  "describe", "move",    "repair",
                           "sign",   "visit",  "paint",  "measure",  "follow",  "deliver",
                           "inspect", "record", "welcome", "examine", "approve", "mention"};
const char* kAux[] = {"will", "can", "must", "may", "should", "would"};
const char* kAdj[] = {"green",  "small",  "recent", "quiet",  "formal",  "bright",
                      "narrow", "ancient", "gentle", "solid",  "hollow", "curious"};
const char* kAdv[] = {"quickly", "slowly", "carefully", "often",
                      "rarely",  "gently", "loudly",    "newly"};
const char* kAdp[] = {"in", "on", "under", "near", "with", "from", "behind", "across"};
const char* kPron[] = {"he", "she", "they", "it", "we", "you"};
const char* kSconj[] = {"because", "while", "although", "when"};
const char* kCconj[] = {"and", "or"};
const char* kPunct[] = {".", ".", ".", "!", "?"};

struct Node {
    std::string form, upos, deprel;
    std::vector<Node> left, right;
    bool extraposed = false;  // linearized at clause end instead of in place
};

class Generator {
public:
    explicit Generator(const Options& options) : options_(options), rng_(options.seed) {}

    DepTree sentence(int index) {
        Node root = clause(0, chance(options_.nonprojective_rate));
        Node punct = leaf(pick(kPunct), "PUNCT", "punct");
        root.right.push_back(std::move(punct));

        DepTree tree;
        tree.sentence_id = "synth-" + std::to_string(index);
        linearize(root, 0, tree);
        return tree;
    }

private:
    template <std::size_t N>
    const char* pick(const char* (&pool)[N]) {
        // Mildly zipfian: low indexes come up more often.
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        double u = uniform(rng_);
        auto idx = static_cast<std::size_t>(u * u * static_cast<double>(N));
        if (idx >= N) idx = N - 1;
        return pool[idx];
    }

    bool chance(double p) {
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        return uniform(rng_) < p;
    }

    Node leaf(std::string form, std::string upos, std::string deprel) {
        Node node;
        node.form = std::move(form);
        node.upos = std::move(upos);
        node.deprel = std::move(deprel);
        return node;
    }

    Node noun_phrase(std::string deprel, int depth, bool allow_extraposed = false) {
        const int kind = static_cast<int>(rng_() % 10);
        Node head;
        if (kind < 6) {
            std::string form = pick(kNounStem);
            if (chance(0.3)) form += "s";
            head = leaf(std::move(form), "NOUN", deprel);
            if (chance(0.7)) head.left.push_back(leaf(pick(kDet), "DET", "det"));
            while (head.left.size() < 3 && chance(0.3))
                head.left.push_back(leaf(pick(kAdj), "ADJ", "amod"));
            // Determiner first, then adjectives.
            std::stable_sort(head.left.begin(), head.left.end(),
                             [](const Node& a, const Node& b) {
                                 return (a.upos == "DET") > (b.upos == "DET");
                             });
        } else if (kind < 8) {
            head = leaf(pick(kPropn), "PROPN", deprel);
        } else {
            head = leaf(pick(kPron), "PRON", deprel);
        }
        if (depth < 2 && head.upos != "PRON" && chance(0.22)) {
            Node modifier = prepositional_phrase("nmod", depth + 1);
            modifier.extraposed = allow_extraposed;
            head.right.push_back(std::move(modifier));
        }
        if (depth < 2 && chance(0.08)) {
            Node second = noun_phrase("conj", depth + 1);
            second.left.insert(second.left.begin(), leaf(pick(kCconj), "CCONJ", "cc"));
            head.right.push_back(std::move(second));
        }
        return head;
    }

    Node prepositional_phrase(std::string deprel, int depth) {
        Node np = noun_phrase(std::move(deprel), depth);
        np.left.insert(np.left.begin(), leaf(pick(kAdp), "ADP", "case"));
        return np;
    }

    Node clause(int depth, bool extrapose_subject_modifier = false) {
        std::string form = pick(kVerbStem);
        const int inflection = static_cast<int>(rng_() % 3);
        if (inflection == 1) form += "s";
        else if (inflection == 2) form += "ed";
        Node verb = leaf(std::move(form), "VERB", depth == 0 ? "root" : "advcl");

        if (chance(0.92)) {
            Node subject = noun_phrase("nsubj", depth + 1, extrapose_subject_modifier);
            if (extrapose_subject_modifier && subject.right.empty()) {
                Node modifier = prepositional_phrase("nmod", depth + 1);
                modifier.extraposed = true;
                subject.right.push_back(std::move(modifier));
            }
            verb.left.push_back(std::move(subject));
        }
        if (chance(0.3)) verb.left.push_back(leaf(pick(kAux), "AUX", "aux"));
        if (chance(0.25)) verb.left.push_back(leaf(pick(kAdv), "ADV", "advmod"));
        if (chance(0.65)) verb.right.push_back(noun_phrase("obj", depth + 1));
        if (chance(0.4)) verb.right.push_back(prepositional_phrase("obl", depth + 1));
        if (depth < 1 && chance(0.12)) {
            Node sub = clause(depth + 1);
            sub.left.insert(sub.left.begin(), leaf(pick(kSconj), "SCONJ", "mark"));
            verb.right.push_back(std::move(sub));
        }
        return verb;
    }

    // In-order layout; extraposed subtrees are emitted after the regular
    // material, still headed by their original parent.
    void linearize(const Node& node, int head_id, DepTree& tree) {
        std::vector<std::pair<const Node*, int>> extraposed;
        linearize_inner(node, head_id, tree, extraposed);
        for (std::size_t i = 0; i < extraposed.size(); ++i)
            linearize_inner(*extraposed[i].first, extraposed[i].second, tree, extraposed);
    }

    void linearize_inner(const Node& node, int head_id, DepTree& tree,
                         std::vector<std::pair<const Node*, int>>& extraposed) {
        for (const Node& child : node.left) linearize_inner(child, 0, tree, extraposed);
        // Children were laid before their head; patch their head ids now.
        const int self_id = static_cast<int>(tree.tokens.size()) + 1;
        patch_heads(tree, node.left, self_id);

        Token token;
        token.id = self_id;
        token.form = node.form;
        token.upos = node.upos;
        token.head = head_id;
        token.deprel = node.deprel;
        tree.tokens.push_back(std::move(token));

        for (const Node& child : node.right) {
            if (child.extraposed) {
                extraposed.emplace_back(&child, self_id);
                continue;
            }
            linearize_inner(child, self_id, tree, extraposed);
        }
    }

    // Left children are laid with placeholder head 0; the direct child roots
    // are the tokens whose head is still the placeholder within the span just
    // emitted. Track spans explicitly instead: each left child occupies a
    // contiguous range ending right before the next child starts.
    void patch_heads(DepTree& tree, const std::vector<Node>& left_children, int head_id) {
        // Walk backwards: each left child root is the first token of its span
        // with placeholder head. Spans were emitted in order, so re-walk from
        // the start of the unpatched region.
        std::size_t cursor = tree.tokens.size();
        for (std::size_t c = left_children.size(); c-- > 0;) {
            const std::size_t width = subtree_width(left_children[c]);
            cursor -= width;
            const std::size_t root_offset = root_position(left_children[c]);
            tree.tokens[cursor + root_offset].head = head_id;
        }
    }

    static std::size_t subtree_width(const Node& node) {
        std::size_t width = 1;
        for (const Node& child : node.left) width += subtree_width(child);
        for (const Node& child : node.right)
            if (!child.extraposed) width += subtree_width(child);
        return width;
    }

    static std::size_t root_position(const Node& node) {
        std::size_t offset = 0;
        for (const Node& child : node.left) offset += subtree_width(child);
        return offset;
    }

    Options options_;
    std::mt19937_64 rng_;
};

}  // namespace

std::vector<DepTree> corpus(const Options& options) {
    Generator generator(options);
    std::vector<DepTree> trees;
    trees.reserve(static_cast<std::size_t>(options.n_sentences));
    for (int i = 0; i < options.n_sentences; ++i)
        trees.push_back(generator.sentence(i + 1));
    return trees;
}

}  // namespace synth
