#include "increparse/arc_eager.hpp"

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>

namespace increparse {

const char* transition_kind_name(TransitionKind kind) {
    switch (kind) {
        case TransitionKind::Shift: return "SHIFT";
        case TransitionKind::LeftArc: return "LEFTARC";
        case TransitionKind::RightArc: return "RIGHTARC";
        case TransitionKind::Reduce: return "REDUCE";
    }
    return "?";
}

std::string Transition::to_string() const {
    if (kind == TransitionKind::LeftArc || kind == TransitionKind::RightArc)
        return std::string(transition_kind_name(kind)) + ":" + deprel;
    return transition_kind_name(kind);
}

const std::string& Configuration::deprel_of(int id) const {
    static const std::string empty;
    for (const Dependency& a : arcs)
        if (a.dep == id) return a.deprel;
    return empty;
}

bool LegalSet::allows(TransitionKind kind) const {
    switch (kind) {
        case TransitionKind::Shift: return shift;
        case TransitionKind::LeftArc: return left_arc;
        case TransitionKind::RightArc: return right_arc;
        case TransitionKind::Reduce: return reduce;
    }
    return false;
}

Configuration initial_config(int n) {
    if (n < 1) throw DataError("initial_config: sentence length must be at least 1");
    Configuration c;
    c.n = n;
    c.stack = {0};
    c.buffer_front = 1;
    c.head_.assign(static_cast<std::size_t>(n), -1);
    return c;
}

LegalSet legal_transitions(const Configuration& c) {
    LegalSet legal;
    const bool buffer = !c.buffer_empty();
    const int top = c.stack_top();
    legal.shift = buffer;
    legal.right_arc = buffer;
    legal.left_arc = buffer && top != 0 && c.head_of(top) == -1;
    legal.reduce = top != 0 && c.head_of(top) != -1;
    return legal;
}

Configuration apply_transition(const Configuration& c, const Transition& t) {
    const LegalSet legal = legal_transitions(c);
    Configuration next = c;
    switch (t.kind) {
        case TransitionKind::Shift:
            if (!legal.shift) throw DataError("illegal SHIFT: buffer is empty");
            next.stack.push_back(next.buffer_front);
            ++next.buffer_front;
            return next;
        case TransitionKind::LeftArc:
            if (!legal.left_arc)
                throw DataError(c.buffer_empty()
                                    ? "illegal LEFTARC: buffer is empty"
                                    : (c.stack_top() == 0
                                           ? "illegal LEFTARC: stack top is the root"
                                           : "illegal LEFTARC: stack top already has a head"));
            next.arcs.push_back({next.buffer_front, next.stack_top(), t.deprel});
            next.head_[static_cast<std::size_t>(next.stack_top()) - 1] = next.buffer_front;
            next.stack.pop_back();
            return next;
        case TransitionKind::RightArc:
            if (!legal.right_arc) throw DataError("illegal RIGHTARC: buffer is empty");
            next.arcs.push_back({next.stack_top(), next.buffer_front, t.deprel});
            next.head_[static_cast<std::size_t>(next.buffer_front) - 1] = next.stack_top();
            next.stack.push_back(next.buffer_front);
            ++next.buffer_front;
            return next;
        case TransitionKind::Reduce:
            if (!legal.reduce)
                throw DataError(c.stack_top() == 0
                                    ? "illegal REDUCE: stack top is the root"
                                    : "illegal REDUCE: stack top has no head");
            next.stack.pop_back();
            return next;
    }
    throw DataError("unknown transition");
}

namespace {

// Oracle step on known-projective gold; returns Reduce-or-nothing once the
// buffer is exhausted.
std::optional<Transition> oracle_step(const Configuration& c, const DepTree& gold,
                                      const std::vector<std::vector<int>>& gold_deps) {
    const int top = c.stack_top();
    if (c.buffer_empty()) {
        if (top != 0 && c.head_of(top) != -1) return Transition{TransitionKind::Reduce, {}};
        return std::nullopt;
    }
    const int b = c.buffer_front;
    if (top != 0 && gold.head_of(top) == b)
        return Transition{TransitionKind::LeftArc, gold.token(top).deprel};
    if (gold.head_of(b) == top)
        return Transition{TransitionKind::RightArc, gold.token(b).deprel};
    if (top != 0 && c.head_of(top) != -1) {
        bool deps_done = true;
        for (int d : gold_deps[static_cast<std::size_t>(top)])
            if (c.head_of(d) == -1) {
                deps_done = false;
                break;
            }
        if (deps_done) return Transition{TransitionKind::Reduce, {}};
    }
    return Transition{TransitionKind::Shift, {}};
}

std::vector<std::vector<int>> dependents_of(const DepTree& tree) {
    std::vector<std::vector<int>> deps(static_cast<std::size_t>(tree.size()) + 1);
    for (const Token& t : tree.tokens) deps[static_cast<std::size_t>(t.head)].push_back(t.id);
    return deps;
}

}  // namespace

Transition static_oracle(const Configuration& c, const DepTree& gold) {
    if (!is_projective(gold))
        throw DataError("static_oracle requires a projective gold tree; projectivize first");
    auto t = oracle_step(c, gold, dependents_of(gold));
    if (!t) throw DataError("static_oracle: terminal configuration");
    return *t;
}

OracleRun run_oracle(const DepTree& gold) {
    const DepTree target = is_projective(gold) ? gold : projectivize(gold);
    const auto gold_deps = dependents_of(target);

    OracleRun run;
    Configuration c = initial_config(target.size());
    while (auto t = oracle_step(c, target, gold_deps)) {
        c = apply_transition(c, *t);
        run.transitions.push_back(std::move(*t));
    }

    run.tree = target;
    for (const Dependency& a : c.arcs) {
        run.tree.token(a.dep).head = a.head;
        run.tree.token(a.dep).deprel = a.deprel;
    }
    return run;
}

DepTree finalize_tree(const Configuration& c, const std::vector<std::string>& forms,
                      const std::vector<std::string>& upos, const std::string& sentence_id) {
    const int n = c.n;
    std::vector<int> head(static_cast<std::size_t>(n), 0);
    std::vector<std::string> deprel(static_cast<std::size_t>(n), "dep");
    for (const Dependency& a : c.arcs) {
        head[static_cast<std::size_t>(a.dep) - 1] = a.head;
        deprel[static_cast<std::size_t>(a.dep) - 1] = a.deprel.empty() ? "dep" : a.deprel;
    }
    for (int d = 1; d <= n; ++d)
        if (c.head_of(d) == -1) {
            head[static_cast<std::size_t>(d) - 1] = 0;
            deprel[static_cast<std::size_t>(d) - 1] = "root";
        }
    // Keep the leftmost root attachment, fold the others under it.
    int root = 0;
    for (int d = 1; d <= n; ++d) {
        if (head[static_cast<std::size_t>(d) - 1] != 0) continue;
        if (root == 0) {
            root = d;
        } else {
            head[static_cast<std::size_t>(d) - 1] = root;
            deprel[static_cast<std::size_t>(d) - 1] = "dep";
        }
    }

    DepTree tree;
    tree.sentence_id = sentence_id;
    tree.tokens.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        Token t;
        t.id = i;
        const std::size_t idx = static_cast<std::size_t>(i) - 1;
        t.form = idx < forms.size() ? forms[idx] : "_";
        t.upos = idx < upos.size() ? upos[idx] : "_";
        t.head = head[idx];
        t.deprel = deprel[idx];
        tree.tokens.push_back(std::move(t));
    }
    return tree;
}

void write_transitions_tsv(const std::string& sentence_id,
                           const std::vector<Transition>& transitions, std::ostream& out) {
    int step = 0;
    for (const Transition& t : transitions) {
        out << sentence_id << '\t' << ++step << '\t' << transition_kind_name(t.kind) << '\t'
            << (t.deprel.empty() ? "_" : t.deprel) << '\n';
    }
    out << '\n';
}

std::vector<TransitionSentence> read_transitions_tsv(std::istream& in) {
    std::vector<TransitionSentence> sentences;
    TransitionSentence current;
    std::size_t line_number = 0;

    auto flush = [&]() {
        if (!current.transitions.empty()) sentences.push_back(std::move(current));
        current = TransitionSentence{};
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
        if (cols.size() != 4)
            throw DataError("transition TSV line " + std::to_string(line_number) +
                            ": expected 4 columns");
        if (current.transitions.empty()) current.sentence_id = cols[0];
        Transition t;
        if (cols[2] == "SHIFT") t.kind = TransitionKind::Shift;
        else if (cols[2] == "LEFTARC") t.kind = TransitionKind::LeftArc;
        else if (cols[2] == "RIGHTARC") t.kind = TransitionKind::RightArc;
        else if (cols[2] == "REDUCE") t.kind = TransitionKind::Reduce;
        else
            throw DataError("transition TSV line " + std::to_string(line_number) +
                            ": unknown transition '" + cols[2] + "'");
        if (cols[3] != "_") t.deprel = cols[3];
        current.transitions.push_back(std::move(t));
    }
    flush();
    return sentences;
}

}  // namespace increparse
