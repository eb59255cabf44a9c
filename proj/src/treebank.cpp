#include "increparse/treebank.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace increparse {

std::vector<Arc> arcs_of(const DepTree& tree) {
    std::vector<Arc> arcs;
    arcs.reserve(tree.tokens.size());
    for (const Token& t : tree.tokens) arcs.push_back({t.head, t.id});
    return arcs;
}

ConlluError::ConlluError(const std::string& message, std::size_t line, std::string sid)
    : DataError(message), line_number(line), sentence_id(std::move(sid)) {}

bool is_valid_tree(const DepTree& tree, std::string* why) {
    auto fail = [&](const std::string& reason) {
        if (why) *why = reason;
        return false;
    };
    const int n = tree.size();
    if (n == 0) return fail("sentence has no tokens");
    int roots = 0;
    for (int i = 1; i <= n; ++i) {
        const Token& t = tree.token(i);
        if (t.id != i) return fail("token ids are not consecutive from 1");
        if (t.head < 0 || t.head > n)
            return fail("head of token " + std::to_string(i) + " outside [0, n]");
        if (t.head == t.id) return fail("token " + std::to_string(i) + " is its own head");
        if (t.upos.empty() || t.deprel.empty())
            return fail("token " + std::to_string(i) + " has empty upos or deprel");
        if (t.head == 0) ++roots;
    }
    if (roots != 1) return fail("expected exactly one root, found " + std::to_string(roots));
    // Cycle check over the head function: every chain must reach node 0.
    std::vector<int> state(static_cast<std::size_t>(n) + 1, 0);  // 0 new, 1 open, 2 done
    for (int i = 1; i <= n; ++i) {
        int v = i;
        std::vector<int> path;
        while (v != 0 && state[static_cast<std::size_t>(v)] == 0) {
            state[static_cast<std::size_t>(v)] = 1;
            path.push_back(v);
            v = tree.head_of(v);
        }
        if (v != 0 && state[static_cast<std::size_t>(v)] == 1)
            return fail("head relation contains a cycle through token " + std::to_string(v));
        for (int u : path) state[static_cast<std::size_t>(u)] = 2;
    }
    return true;
}

void validate_tree(const DepTree& tree) {
    std::string why;
    if (!is_valid_tree(tree, &why)) throw ConlluError(why, 0, tree.sentence_id);
}

namespace {

constexpr const char* kSentIdPrefix = "# sent_id =";

bool is_plain_token_id(std::string_view id) {
    // Multiword ranges contain '-', empty nodes contain '.'.
    return id.find('-') == std::string_view::npos && id.find('.') == std::string_view::npos;
}

}  // namespace

std::vector<DepTree> parse_conllu(std::istream& in, const ConlluOptions& options) {
    std::vector<DepTree> trees;
    DepTree current;
    std::size_t line_number = 0;
    std::size_t sentence_index = 0;

    auto flush = [&]() {
        if (current.tokens.empty() && current.comments.empty()) return;
        if (current.tokens.empty()) {
            current = DepTree{};
            return;  // comment-only block
        }
        ++sentence_index;
        if (current.sentence_id.empty())
            current.sentence_id = "s" + std::to_string(sentence_index);
        if (options.headless_ok) {
            trees.push_back(std::move(current));
            current = DepTree{};
            return;
        }
        std::string why;
        if (!is_valid_tree(current, &why)) {
            if (options.skip_invalid) {
                log_warn("skipping sentence " + current.sentence_id + ": " + why);
                current = DepTree{};
                return;
            }
            throw ConlluError("invalid sentence " + current.sentence_id + ": " + why,
                              line_number, current.sentence_id);
        }
        trees.push_back(std::move(current));
        current = DepTree{};
    };

    std::string line;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush();
            continue;
        }
        if (line[0] == '#') {
            current.comments.push_back(line);
            if (line.rfind(kSentIdPrefix, 0) == 0)
                current.sentence_id = std::string(trim(line.substr(std::string(kSentIdPrefix).size())));
            continue;
        }
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() != 10)
            throw ConlluError("expected 10 tab-separated columns, got " +
                                  std::to_string(cols.size()),
                              line_number);
        if (!is_plain_token_id(cols[0])) continue;  // basic tree only
        Token token;
        if (!parse_int(cols[0], token.id) || token.id < 1)
            throw ConlluError("bad token id '" + cols[0] + "'", line_number);
        token.form = cols[1];
        token.upos = cols[3];
        if (!parse_int(cols[6], token.head)) {
            if (!(options.headless_ok && cols[6] == "_"))
                throw ConlluError("non-integer head '" + cols[6] + "'", line_number);
            token.head = 0;
        }
        token.deprel = cols[7];
        current.tokens.push_back(std::move(token));
    }
    flush();
    return trees;
}

std::vector<DepTree> parse_conllu_file(const std::string& path, const ConlluOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return parse_conllu(in, options);
}

void write_conllu(const std::vector<DepTree>& trees, std::ostream& out) {
    for (const DepTree& tree : trees) {
        for (const std::string& comment : tree.comments) out << comment << "\n";
        for (const Token& t : tree.tokens) {
            out << t.id << '\t' << t.form << "\t_\t" << t.upos << "\t_\t_\t" << t.head << '\t'
                << t.deprel << "\t_\t_\n";
        }
        out << "\n";
    }
    if (!out) throw DataError("write failed");
}

void write_conllu_file(const std::vector<DepTree>& trees, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    write_conllu(trees, out);
}

namespace {

inline bool crossing(int a1, int b1, int a2, int b2) {
    int lo1 = std::min(a1, b1), hi1 = std::max(a1, b1);
    int lo2 = std::min(a2, b2), hi2 = std::max(a2, b2);
    return (lo1 < lo2 && lo2 < hi1 && hi1 < hi2) || (lo2 < lo1 && lo1 < hi2 && hi2 < hi1);
}

}  // namespace

bool is_projective(const DepTree& tree) {
    const auto arcs = arcs_of(tree);
    for (std::size_t i = 0; i < arcs.size(); ++i)
        for (std::size_t j = i + 1; j < arcs.size(); ++j)
            if (crossing(arcs[i].head, arcs[i].dep, arcs[j].head, arcs[j].dep)) return false;
    return true;
}

DepTree projectivize(const DepTree& tree) {
    validate_tree(tree);  // lifting is only well-defined on a real tree
    DepTree lifted = tree;
    const int n = lifted.size();
    int root = 0;
    for (const Token& t : lifted.tokens)
        if (t.head == 0) root = t.id;

    while (true) {
        // Candidate: a crossing arc whose head is neither the artificial root
        // nor the root token (lifting those would create a second root). In
        // every crossing pair at least one arc qualifies. Shortest span first
        // keeps the procedure deterministic.
        int best = -1;
        long best_key = 0;
        for (int d = 1; d <= n; ++d) {
            int h = lifted.head_of(d);
            if (h == 0 || h == root) continue;
            bool crossed = false;
            for (int e = 1; e <= n && !crossed; ++e) {
                if (e == d) continue;
                if (crossing(h, d, lifted.head_of(e), e)) crossed = true;
            }
            if (!crossed) continue;
            long key = static_cast<long>(std::abs(h - d)) * (n + 1) + d;
            if (best < 0 || key < best_key) {
                best = d;
                best_key = key;
            }
        }
        if (best < 0) break;
        lifted.token(best).head = lifted.head_of(lifted.head_of(best));
    }
    return lifted;
}

TreebankStats branching_stats(const std::vector<DepTree>& trees) {
    TreebankStats stats;
    std::size_t left = 0, right = 0, nonproj = 0;
    for (const DepTree& tree : trees) {
        stats.n_sentences += 1;
        stats.n_tokens += static_cast<std::size_t>(tree.size());
        for (const Token& t : tree.tokens) {
            if (t.head > t.id)
                ++left;
            else
                ++right;  // includes root arcs: node 0 precedes every token
        }
        if (!is_projective(tree)) ++nonproj;
    }
    if (stats.n_tokens == 0) throw DataError("branching_stats: empty corpus");
    const double total = static_cast<double>(left + right);
    stats.pct_left_arcs = 100.0 * static_cast<double>(left) / total;
    stats.pct_right_arcs = 100.0 * static_cast<double>(right) / total;
    stats.pct_nonprojective_sentences =
        100.0 * static_cast<double>(nonproj) / static_cast<double>(stats.n_sentences);
    return stats;
}

}  // namespace increparse
