#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "increparse/treebank.hpp"

namespace increparse {

struct Dependency {
    int head = 0;
    int dep = 0;
    std::string deprel;
    friend bool operator==(const Dependency&, const Dependency&) = default;
};

enum class TransitionKind { Shift, LeftArc, RightArc, Reduce };

struct Transition {
    TransitionKind kind = TransitionKind::Shift;
    std::string deprel;  // only arc transitions carry one

    std::string to_string() const;
    friend bool operator==(const Transition&, const Transition&) = default;
};

const char* transition_kind_name(TransitionKind kind);

// Arc-eager parser state. The buffer is always the suffix w_{buffer_front} ..
// w_n; the stack starts as [0] and the root never leaves it.
struct Configuration {
    int n = 0;
    std::vector<int> stack;  // bottom -> top
    int buffer_front = 1;
    std::vector<Dependency> arcs;

    int stack_top() const { return stack.back(); }
    bool buffer_empty() const { return buffer_front > n; }
    // Head of token id in the arc set so far; -1 if unassigned.
    int head_of(int id) const { return head_[static_cast<std::size_t>(id) - 1]; }
    const std::string& deprel_of(int id) const;

private:
    friend Configuration initial_config(int n);
    friend Configuration apply_transition(const Configuration& c, const Transition& t);
    std::vector<int> head_;
};

struct LegalSet {
    bool shift = false;
    bool left_arc = false;
    bool right_arc = false;
    bool reduce = false;

    bool allows(TransitionKind kind) const;
    bool any() const { return shift || left_arc || right_arc || reduce; }
};

Configuration initial_config(int n);  // throws DataError when n < 1

// Shift: buffer nonempty. LeftArc: stack top is not the root and has no head,
// buffer nonempty. RightArc: buffer nonempty. Reduce: stack top has a head.
LegalSet legal_transitions(const Configuration& c);

// Applies one transition; throws DataError naming the violated precondition
// if it is not legal. Arcs only grow.
Configuration apply_transition(const Configuration& c, const Transition& t);

// The committed partial parse of the configuration.
inline const std::vector<Dependency>& partial_parse(const Configuration& c) { return c.arcs; }

// Next transition of the standard static oracle. Requires projective gold;
// throws DataError directing the caller to projectivize otherwise.
Transition static_oracle(const Configuration& c, const DepTree& gold);

struct OracleRun {
    std::vector<Transition> transitions;
    DepTree tree;  // reconstructed; equals gold (or projectivize(gold))
};

// Runs the static oracle to termination. Non-projective input is
// projectivized first, so the run always reconstructs a projective target.
OracleRun run_oracle(const DepTree& gold);

// Turns a finished (or abandoned) configuration into a valid tree over the
// given surface: headless tokens are attached to the root, and if several
// tokens ended up attached to node 0 all but the leftmost are reattached to
// it. Missing deprels become "dep".
DepTree finalize_tree(const Configuration& c,
                      const std::vector<std::string>& forms,
                      const std::vector<std::string>& upos,
                      const std::string& sentence_id = {});

// Transition dump: TSV rows (sentence_id, step, transition, deprel).
void write_transitions_tsv(const std::string& sentence_id,
                           const std::vector<Transition>& transitions, std::ostream& out);
struct TransitionSentence {
    std::string sentence_id;
    std::vector<Transition> transitions;
};
std::vector<TransitionSentence> read_transitions_tsv(std::istream& in);

}  // namespace increparse
