#include "increparse/encodings.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace increparse {

bool forward_looking(Scheme scheme) {
    switch (scheme) {
        case Scheme::AbsIdx:
        case Scheme::RelIdx:
        case Scheme::PosIdx:
            return true;
        case Scheme::Bracket1P:
        case Scheme::Bracket2P:
            return false;
    }
    return false;
}

const char* scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::AbsIdx: return "abs";
        case Scheme::RelIdx: return "rel";
        case Scheme::PosIdx: return "pos";
        case Scheme::Bracket1P: return "1p";
        case Scheme::Bracket2P: return "2p";
    }
    return "?";
}

std::optional<Scheme> scheme_from_name(std::string_view name) {
    if (name == "abs") return Scheme::AbsIdx;
    if (name == "rel") return Scheme::RelIdx;
    if (name == "pos") return Scheme::PosIdx;
    if (name == "1p") return Scheme::Bracket1P;
    if (name == "2p") return Scheme::Bracket2P;
    return std::nullopt;
}

std::string Label::to_string() const {
    switch (scheme) {
        case Scheme::AbsIdx:
            return std::to_string(index);
        case Scheme::RelIdx:
            return index > 0 ? "+" + std::to_string(index) : std::to_string(index);
        case Scheme::PosIdx:
            if (pos_k == 0) return "ROOT";
            return (pos_k > 0 ? "+" + std::to_string(pos_k) : std::to_string(pos_k)) + "," +
                   pos_tag;
        case Scheme::Bracket1P:
        case Scheme::Bracket2P:
            return brackets.empty() ? "_" : brackets;
    }
    return {};
}

Label Label::from_string(Scheme scheme, std::string_view text) {
    Label label;
    label.scheme = scheme;
    switch (scheme) {
        case Scheme::AbsIdx:
        case Scheme::RelIdx:
            if (!parse_int(text, label.index))
                throw DataError("bad numeric label '" + std::string(text) + "'");
            return label;
        case Scheme::PosIdx: {
            if (text == "ROOT") return label;
            std::size_t comma = text.find(',');
            if (comma == std::string_view::npos || comma + 1 >= text.size() ||
                !parse_int(text.substr(0, comma), label.pos_k) || label.pos_k == 0)
                throw DataError("bad PoS-offset label '" + std::string(text) + "'");
            label.pos_tag = std::string(text.substr(comma + 1));
            return label;
        }
        case Scheme::Bracket1P:
        case Scheme::Bracket2P: {
            if (text == "_") return label;
            for (std::size_t i = 0; i < text.size(); ++i) {
                char c = text[i];
                if (c != '<' && c != '\\' && c != '/' && c != '>')
                    throw DataError(std::string("bad bracket symbol '") + c + "' in label");
                if (i + 1 < text.size() && text[i + 1] == '*') {
                    if (scheme != Scheme::Bracket2P)
                        throw DataError("starred bracket in a 1-planar label");
                    ++i;
                }
            }
            label.brackets = std::string(text);
            return label;
        }
    }
    throw DataError("unknown scheme");
}

// ---- bracket planning -------------------------------------------------------

namespace detail {

bool arcs_cross(const Arc& a, const Arc& b) {
    int lo1 = std::min(a.head, a.dep), hi1 = std::max(a.head, a.dep);
    int lo2 = std::min(b.head, b.dep), hi2 = std::max(b.head, b.dep);
    return (lo1 < lo2 && lo2 < hi1 && hi1 < hi2) || (lo2 < lo1 && lo1 < hi2 && hi2 < hi1);
}

bool same_direction(const Arc& a, const Arc& b) {
    return (a.head < a.dep) == (b.head < b.dep);
}

std::vector<PlannedArc> plan_brackets(const DepTree& tree, bool two_planes) {
    const std::vector<Arc> arcs = arcs_of(tree);  // dependent order
    std::vector<PlannedArc> kept;
    kept.reserve(arcs.size());

    auto conflicts = [](const Arc& a, const Arc& b) {
        return same_direction(a, b) && arcs_cross(a, b);
    };
    auto fits = [&](const Arc& arc, int plane) {
        for (const PlannedArc& p : kept)
            if (p.plane == plane && conflicts(p.arc, arc)) return false;
        return true;
    };

    if (!two_planes) {
        // Greedy keep-first in dependent order.
        for (const Arc& arc : arcs)
            if (fits(arc, 0)) kept.push_back({arc, 0});
        return kept;
    }

    // Two planes: exact 2-coloring of each bipartite component of the
    // same-direction crossing-conflict graph (components rooted at their
    // smallest arc, roots on plane 1); arcs of odd components fall back to
    // greedy plane assignment in the same order, dropping what fits nowhere.
    std::vector<Arc> ordered = arcs;
    std::sort(ordered.begin(), ordered.end(), [](const Arc& a, const Arc& b) {
        int alo = std::min(a.head, a.dep), blo = std::min(b.head, b.dep);
        int ahi = std::max(a.head, a.dep), bhi = std::max(b.head, b.dep);
        return std::tie(alo, ahi, a.dep) < std::tie(blo, bhi, b.dep);
    });
    const std::size_t m = ordered.size();
    std::vector<std::vector<std::size_t>> adjacency(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (conflicts(ordered[i], ordered[j])) {
                adjacency[i].push_back(j);
                adjacency[j].push_back(i);
            }

    std::vector<int> color(m, -1);
    std::vector<int> component(m, -1);
    std::vector<bool> component_bipartite;
    for (std::size_t start = 0; start < m; ++start) {
        if (component[start] >= 0) continue;
        int comp = static_cast<int>(component_bipartite.size());
        bool bipartite = true;
        std::vector<std::size_t> queue{start};
        component[start] = comp;
        color[start] = 0;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            std::size_t u = queue[qi];
            for (std::size_t v : adjacency[u]) {
                if (component[v] < 0) {
                    component[v] = comp;
                    color[v] = 1 - color[u];
                    queue.push_back(v);
                } else if (color[v] == color[u]) {
                    bipartite = false;
                }
            }
        }
        component_bipartite.push_back(bipartite);
    }

    for (std::size_t i = 0; i < m; ++i) {
        const Arc& arc = ordered[i];
        if (component_bipartite[static_cast<std::size_t>(component[i])]) {
            kept.push_back({arc, color[i]});
        } else if (fits(arc, 0)) {
            kept.push_back({arc, 0});
        } else if (fits(arc, 1)) {
            kept.push_back({arc, 1});
        }
    }
    std::sort(kept.begin(), kept.end(),
              [](const PlannedArc& a, const PlannedArc& b) { return a.arc.dep < b.arc.dep; });
    return kept;
}

}  // namespace detail

// ---- encode -----------------------------------------------------------------

LabelSequence encode(const DepTree& tree, Scheme scheme) {
    const int n = tree.size();
    LabelSequence seq;
    seq.scheme = scheme;
    seq.sentence_id = tree.sentence_id;
    seq.labels.reserve(static_cast<std::size_t>(n));
    seq.upos.reserve(static_cast<std::size_t>(n));
    seq.forms.reserve(static_cast<std::size_t>(n));
    for (const Token& t : tree.tokens) {
        seq.upos.push_back(t.upos);
        seq.forms.push_back(t.form);
    }

    switch (scheme) {
        case Scheme::AbsIdx:
            for (const Token& t : tree.tokens) {
                Label label;
                label.scheme = scheme;
                label.index = t.head;
                seq.labels.push_back(std::move(label));
            }
            return seq;
        case Scheme::RelIdx:
            for (const Token& t : tree.tokens) {
                Label label;
                label.scheme = scheme;
                label.index = t.head - t.id;
                seq.labels.push_back(std::move(label));
            }
            return seq;
        case Scheme::PosIdx:
            for (const Token& t : tree.tokens) {
                Label label;
                label.scheme = scheme;
                if (t.head == 0) {
                    seq.labels.push_back(std::move(label));  // ROOT payload
                    continue;
                }
                label.pos_tag = tree.token(t.head).upos;
                int count = 0;
                if (t.head > t.id) {
                    for (int j = t.id + 1; j <= t.head; ++j)
                        if (tree.token(j).upos == label.pos_tag) ++count;
                    label.pos_k = count;
                } else {
                    for (int j = t.id - 1; j >= t.head; --j)
                        if (tree.token(j).upos == label.pos_tag) ++count;
                    label.pos_k = -count;
                }
                seq.labels.push_back(std::move(label));
            }
            return seq;
        case Scheme::Bracket1P:
        case Scheme::Bracket2P: {
            const bool two = scheme == Scheme::Bracket2P;
            const auto plan = detail::plan_brackets(tree, two);
            // Per token: one optional head symbol (< or >) and counts of
            // dependent-side symbols (\ and /), per plane.
            struct Cell {
                char head_symbol[2] = {0, 0};
                int backslashes[2] = {0, 0};
                int slashes[2] = {0, 0};
            };
            std::vector<Cell> cells(static_cast<std::size_t>(n));
            for (const detail::PlannedArc& p : plan) {
                const int plane = p.plane;
                const int h = p.arc.head, d = p.arc.dep;
                if (h < d) {
                    cells[static_cast<std::size_t>(d) - 1].head_symbol[plane] = '>';
                    if (h > 0) ++cells[static_cast<std::size_t>(h) - 1].slashes[plane];
                } else {
                    cells[static_cast<std::size_t>(d) - 1].head_symbol[plane] = '<';
                    ++cells[static_cast<std::size_t>(h) - 1].backslashes[plane];
                }
            }
            for (int i = 1; i <= n; ++i) {
                const Cell& cell = cells[static_cast<std::size_t>(i) - 1];
                std::string s;
                for (int plane = 0; plane < 2; ++plane)
                    if (cell.head_symbol[plane] == '<') s += plane ? "<*" : "<";
                for (int plane = 0; plane < 2; ++plane)
                    for (int c = 0; c < cell.backslashes[plane]; ++c) s += plane ? "\\*" : "\\";
                for (int plane = 0; plane < 2; ++plane)
                    for (int c = 0; c < cell.slashes[plane]; ++c) s += plane ? "/*" : "/";
                for (int plane = 0; plane < 2; ++plane)
                    if (cell.head_symbol[plane] == '>') s += plane ? ">*" : ">";
                Label label;
                label.scheme = scheme;
                label.brackets = std::move(s);
                seq.labels.push_back(std::move(label));
            }
            return seq;
        }
    }
    throw DataError("unknown scheme");
}

// ---- incremental raw decoding ------------------------------------------------

IncrementalDecoder::IncrementalDecoder(Scheme scheme) : scheme_(scheme) {}

void IncrementalDecoder::commit(int head, int dep) {
    if (head_[static_cast<std::size_t>(dep) - 1] != -1) return;  // already headed
    head_[static_cast<std::size_t>(dep) - 1] = head;
    committed_.push_back({head, dep});
}

void IncrementalDecoder::process_brackets(const Label& label) {
    const int d = n_;
    // Symbols with their plane, in label order.
    std::vector<std::pair<char, int>> symbols;
    for (std::size_t i = 0; i < label.brackets.size(); ++i) {
        char c = label.brackets[i];
        int plane = 0;
        if (i + 1 < label.brackets.size() && label.brackets[i + 1] == '*') {
            plane = 1;
            ++i;
        }
        symbols.emplace_back(c, plane);
    }
    // Closers first so a token cannot match its own openers.
    for (auto [c, plane] : symbols) {
        if (c == '>') {
            auto& stack = right_stack_[plane];
            if (stack.empty()) {
                commit(0, d);  // the matching opener is implicit at node 0
            } else {
                int h = stack.back();
                stack.pop_back();
                commit(h, d);
            }
        } else if (c == '\\') {
            auto& stack = left_stack_[plane];
            if (!stack.empty()) {
                int dep = stack.back();
                stack.pop_back();
                commit(d, dep);
            }
        }
    }
    for (auto [c, plane] : symbols) {
        if (c == '/') right_stack_[plane].push_back(d);
        else if (c == '<') left_stack_[plane].push_back(d);
    }
}

std::vector<Arc> IncrementalDecoder::feed(const Label& label, const std::string& upos) {
    if (label.scheme != scheme_) throw DataError("label scheme mismatch");
    const std::size_t before = committed_.size();
    ++n_;
    upos_.push_back(upos);
    head_.push_back(-1);
    const int d = n_;

    // Arrival of token d may resolve earlier forward references.
    for (auto it = pending_abs_.begin(); it != pending_abs_.end();) {
        if (it->head == d) {
            commit(d, it->dep);
            it = pending_abs_.erase(it);
        } else {
            ++it;
        }
    }
    for (auto it = pending_pos_.begin(); it != pending_pos_.end();) {
        if (it->tag == upos && --it->remaining == 0) {
            commit(d, it->dep);
            it = pending_pos_.erase(it);
        } else {
            ++it;
        }
    }

    switch (scheme_) {
        case Scheme::AbsIdx:
        case Scheme::RelIdx: {
            int h = scheme_ == Scheme::AbsIdx ? label.index : d + label.index;
            if (h < 0) {
                commit(0, d);  // range repair, resolvable immediately
            } else if (h <= n_) {
                commit(h, d);
            } else {
                pending_abs_.push_back({d, h});
            }
            break;
        }
        case Scheme::PosIdx: {
            if (label.pos_k == 0) {
                commit(0, d);
            } else if (label.pos_k < 0) {
                int remaining = -label.pos_k;
                int h = 0;
                for (int j = d - 1; j >= 1; --j) {
                    if (upos_[static_cast<std::size_t>(j) - 1] == label.pos_tag &&
                        --remaining == 0) {
                        h = j;
                        break;
                    }
                }
                commit(h, d);  // h stays 0 when no such occurrence exists
            } else {
                pending_pos_.push_back({d, label.pos_k, label.pos_tag});
            }
            break;
        }
        case Scheme::Bracket1P:
        case Scheme::Bracket2P:
            process_brackets(label);
            break;
    }
    return {committed_.begin() + static_cast<std::ptrdiff_t>(before), committed_.end()};
}

std::vector<int> IncrementalDecoder::finish() {
    const int n = n_;
    // (1) leftovers: forward references beyond the sentence.
    for (const PendingAbs& p : pending_abs_)
        if (head_[static_cast<std::size_t>(p.dep) - 1] == -1)
            head_[static_cast<std::size_t>(p.dep) - 1] = 0;
    for (const PendingPos& p : pending_pos_)
        if (head_[static_cast<std::size_t>(p.dep) - 1] == -1)
            head_[static_cast<std::size_t>(p.dep) - 1] = 0;
    pending_abs_.clear();
    pending_pos_.clear();

    // (3) headless tokens attach to the leftmost root candidate, making one
    // if none exists yet.
    for (int d = 1; d <= n; ++d) {
        if (head_[static_cast<std::size_t>(d) - 1] != -1) continue;
        int candidate = 0;
        for (int r = 1; r <= n; ++r)
            if (head_[static_cast<std::size_t>(r) - 1] == 0) {
                candidate = r;
                break;
            }
        head_[static_cast<std::size_t>(d) - 1] = candidate;
    }

    // (4) cycles: reattach the leftmost member of each cycle to the root.
    std::vector<int> state(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        if (state[static_cast<std::size_t>(i)] != 0) continue;
        std::vector<int> path;
        int v = i;
        while (v != 0 && state[static_cast<std::size_t>(v)] == 0) {
            state[static_cast<std::size_t>(v)] = 1;
            path.push_back(v);
            v = head_[static_cast<std::size_t>(v) - 1];
        }
        if (v != 0 && state[static_cast<std::size_t>(v)] == 1) {
            int leftmost = v;
            for (std::size_t p = path.size(); p-- > 0 && path[p] != v;)
                leftmost = std::min(leftmost, path[p]);
            head_[static_cast<std::size_t>(leftmost) - 1] = 0;
        }
        for (int u : path) state[static_cast<std::size_t>(u)] = 2;
    }

    // (5) single root: keep the leftmost, reattach the rest to it.
    int root = 0;
    for (int d = 1; d <= n; ++d) {
        if (head_[static_cast<std::size_t>(d) - 1] != 0) continue;
        if (root == 0)
            root = d;
        else
            head_[static_cast<std::size_t>(d) - 1] = root;
    }
    return head_;
}

// ---- decode / coverage --------------------------------------------------------

DepTree decode(const LabelSequence& seq) {
    const std::size_t n = seq.labels.size();
    if (seq.upos.size() != n)
        throw DataError("label/upos length mismatch in sentence '" + seq.sentence_id + "'");
    IncrementalDecoder decoder(seq.scheme);
    for (std::size_t i = 0; i < n; ++i) decoder.feed(seq.labels[i], seq.upos[i]);
    const std::vector<int> heads = decoder.finish();

    DepTree tree;
    tree.sentence_id = seq.sentence_id;
    tree.tokens.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Token t;
        t.id = static_cast<int>(i) + 1;
        t.form = i < seq.forms.size() && !seq.forms[i].empty() ? seq.forms[i] : "_";
        t.upos = seq.upos[i];
        t.head = heads[i];
        t.deprel = "dep";
        tree.tokens.push_back(std::move(t));
    }
    return tree;
}

double coverage(const DepTree& tree, Scheme scheme) {
    const DepTree decoded = decode(encode(tree, scheme));
    int hits = 0;
    for (int i = 1; i <= tree.size(); ++i)
        if (decoded.head_of(i) == tree.head_of(i)) ++hits;
    return tree.size() == 0 ? 1.0 : static_cast<double>(hits) / tree.size();
}

// ---- label TSV ----------------------------------------------------------------

void write_label_tsv(const std::vector<LabelSequence>& sentences, std::ostream& out) {
    for (const LabelSequence& seq : sentences) {
        for (int i = 0; i < seq.size(); ++i) {
            const std::size_t idx = static_cast<std::size_t>(i);
            out << seq.sentence_id << '\t' << i + 1 << '\t'
                << (idx < seq.forms.size() ? seq.forms[idx] : "_") << '\t' << seq.upos[idx]
                << '\t' << seq.labels[idx].to_string() << '\n';
        }
        out << '\n';
    }
    if (!out) throw DataError("write failed");
}

std::vector<LabelSequence> read_label_tsv(Scheme scheme, std::istream& in) {
    std::vector<LabelSequence> sentences;
    LabelSequence current;
    current.scheme = scheme;
    std::size_t line_number = 0;

    auto flush = [&]() {
        if (!current.labels.empty()) sentences.push_back(std::move(current));
        current = LabelSequence{};
        current.scheme = scheme;
    };

    std::string line;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush();
            continue;
        }
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() != 5)
            throw DataError("label TSV line " + std::to_string(line_number) +
                            ": expected 5 columns, got " + std::to_string(cols.size()));
        int token_id = 0;
        if (!parse_int(cols[1], token_id) ||
            token_id != static_cast<int>(current.labels.size()) + 1)
            throw DataError("label TSV line " + std::to_string(line_number) +
                            ": token ids must be consecutive from 1");
        if (current.labels.empty()) current.sentence_id = cols[0];
        current.forms.push_back(cols[2]);
        current.upos.push_back(cols[3]);
        try {
            current.labels.push_back(Label::from_string(scheme, cols[4]));
        } catch (const DataError& e) {
            throw DataError("label TSV line " + std::to_string(line_number) + " (token " +
                            std::to_string(token_id) + "): " + e.what());
        }
    }
    flush();
    return sentences;
}

}  // namespace increparse
