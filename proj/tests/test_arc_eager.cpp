#include <random>
#include <sstream>

#include "doctest.h"
#include "increparse/arc_eager.hpp"
#include "support/treegen.hpp"

using namespace increparse;

namespace {

std::vector<TransitionKind> kinds_of(const std::vector<Transition>& transitions) {
    std::vector<TransitionKind> kinds;
    for (const Transition& t : transitions) kinds.push_back(t.kind);
    return kinds;
}

// Oracle kinds with trailing reduces stripped, to compare against the spec's
// core sequences.
std::vector<TransitionKind> core_kinds(const std::vector<Transition>& transitions) {
    auto kinds = kinds_of(transitions);
    while (!kinds.empty() && kinds.back() == TransitionKind::Reduce) kinds.pop_back();
    return kinds;
}

std::vector<int> heads_of(const DepTree& tree) {
    std::vector<int> heads;
    for (int i = 1; i <= tree.size(); ++i) heads.push_back(tree.head_of(i));
    return heads;
}

}  // namespace

TEST_CASE("initial configuration") {
    const Configuration c = initial_config(3);
    CHECK(c.stack == std::vector<int>{0});
    CHECK(c.buffer_front == 1);
    CHECK(c.arcs.empty());
    CHECK(initial_config(1).buffer_front == 1);
    CHECK_THROWS_AS(initial_config(0), DataError);
}

TEST_CASE("legal transitions per configuration shape") {
    Configuration c = initial_config(3);
    LegalSet legal = legal_transitions(c);
    CHECK(legal.shift);
    CHECK(legal.right_arc);
    CHECK_FALSE(legal.left_arc);  // stack top is the root
    CHECK_FALSE(legal.reduce);

    // Headless non-root stack top with nonempty buffer allows LeftArc.
    c = apply_transition(c, {TransitionKind::Shift, {}});
    legal = legal_transitions(c);
    CHECK(legal.left_arc);
    CHECK_FALSE(legal.reduce);

    // Buffer exhausted, stack top with a head: only Reduce.
    Configuration d = initial_config(1);
    d = apply_transition(d, {TransitionKind::RightArc, "root"});
    legal = legal_transitions(d);
    CHECK_FALSE(legal.shift);
    CHECK_FALSE(legal.left_arc);
    CHECK_FALSE(legal.right_arc);
    CHECK(legal.reduce);
}

TEST_CASE("apply_transition semantics and errors") {
    Configuration c = initial_config(2);
    c = apply_transition(c, {TransitionKind::Shift, {}});
    REQUIRE(c.stack == std::vector<int>{0, 1});
    REQUIRE(c.buffer_front == 2);

    const Configuration after = apply_transition(c, {TransitionKind::LeftArc, "nsubj"});
    CHECK(after.stack == std::vector<int>{0});
    CHECK(after.buffer_front == 2);
    REQUIRE(after.arcs.size() == 1);
    CHECK(after.arcs[0] == Dependency{2, 1, "nsubj"});

    // Reduce on a headless top is an error naming the precondition.
    CHECK_THROWS_WITH_AS(static_cast<void>(apply_transition(c, {TransitionKind::Reduce, {}})),
                         "illegal REDUCE: stack top has no head", DataError);
    Configuration done = initial_config(1);
    done = apply_transition(done, {TransitionKind::RightArc, "root"});
    CHECK_THROWS_AS(
        static_cast<void>(apply_transition(done, {TransitionKind::Shift, {}})), DataError);
}

TEST_CASE("static oracle sequences from the spec") {
    const DepTree tree = treegen::tree_from_heads({2, 0, 2});
    const OracleRun run = run_oracle(tree);
    CHECK(core_kinds(run.transitions) ==
          std::vector<TransitionKind>{TransitionKind::Shift, TransitionKind::LeftArc,
                                      TransitionKind::RightArc, TransitionKind::RightArc});
    CHECK(heads_of(run.tree) == std::vector<int>{2, 0, 2});

    CHECK(core_kinds(run_oracle(treegen::tree_from_heads({0})).transitions) ==
          std::vector<TransitionKind>{TransitionKind::RightArc});
    CHECK(core_kinds(run_oracle(treegen::tree_from_heads({2, 0})).transitions) ==
          std::vector<TransitionKind>{TransitionKind::Shift, TransitionKind::LeftArc,
                                      TransitionKind::RightArc});

    // Deprels ride along on arc transitions.
    const DepTree labeled =
        treegen::tree_from_heads({2, 0, 2}, {}, {"nsubj", "root", "obj"});
    const OracleRun labeled_run = run_oracle(labeled);
    CHECK(labeled_run.transitions[1].deprel == "nsubj");
    CHECK(labeled_run.transitions[2].deprel == "root");
    CHECK(heads_of(labeled_run.tree) == std::vector<int>{2, 0, 2});
    CHECK(labeled_run.tree.token(3).deprel == "obj");

    // static_oracle refuses non-projective gold.
    const Configuration c = initial_config(4);
    CHECK_THROWS_AS(static_cast<void>(static_oracle(c, treegen::tree_from_heads({0, 4, 1, 1}))),
                    DataError);
}

TEST_CASE("oracle reconstructs every projective tree") {
    long projective = 0;
    for (int n = 1; n <= 5; ++n) {
        treegen::for_each_tree(n, [&](const std::vector<int>& heads) {
            if (!treegen::oracle_projective(heads)) return;
            ++projective;
            const DepTree tree = treegen::tree_from_heads(heads);
            const OracleRun run = run_oracle(tree);
            CAPTURE(heads);
            CHECK(heads_of(run.tree) == heads);
            CHECK(run.transitions.size() <= 2 * heads.size());
        });
    }
    CHECK(projective > 100);

    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 40);
        const auto heads = treegen::random_projective_tree(rng, n);
        REQUIRE(treegen::oracle_projective(heads));
        CAPTURE(heads);
        CHECK(heads_of(run_oracle(treegen::tree_from_heads(heads)).tree) == heads);
    }
}

TEST_CASE("non-projective input reconstructs its projectivization") {
    const DepTree gold = treegen::tree_from_heads({0, 4, 1, 1});
    const OracleRun run = run_oracle(gold);
    CHECK(heads_of(run.tree) == heads_of(projectivize(gold)));

    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 20);
        const DepTree tree = treegen::tree_from_heads(treegen::random_tree(rng, n));
        CHECK(heads_of(run_oracle(tree).tree) == heads_of(projectivize(tree)));
    }
}

TEST_CASE("arcs stay a forest under random legal transitions") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 15);
        Configuration c = initial_config(n);
        std::size_t arcs_before = 0;
        while (true) {
            const LegalSet legal = legal_transitions(c);
            std::vector<TransitionKind> options;
            if (legal.shift) options.push_back(TransitionKind::Shift);
            if (legal.left_arc) options.push_back(TransitionKind::LeftArc);
            if (legal.right_arc) options.push_back(TransitionKind::RightArc);
            if (legal.reduce) options.push_back(TransitionKind::Reduce);
            if (options.empty()) break;
            const Transition t{options[rng() % options.size()], "dep"};
            c = apply_transition(c, t);
            // Monotone growth.
            CHECK(c.arcs.size() >= arcs_before);
            arcs_before = c.arcs.size();
            // Single head per dependent.
            std::vector<int> seen;
            for (const Dependency& a : c.arcs) seen.push_back(a.dep);
            std::sort(seen.begin(), seen.end());
            CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
            // No arc touches an unaccessed token; the buffer front itself
            // counts as accessed.
            for (const Dependency& a : c.arcs)
                CHECK(std::max(a.head, a.dep) <= c.buffer_front);
            // Acyclic: follow heads to the root from every node.
            for (int v = 1; v <= n; ++v) {
                int u = v, steps = 0;
                while (u != 0 && steps <= n) {
                    u = c.head_of(u) == -1 ? 0 : c.head_of(u);
                    ++steps;
                }
                CHECK(steps <= n);
            }
        }
        // Finalization always returns a valid tree.
        const DepTree tree = finalize_tree(
            c, std::vector<std::string>(static_cast<std::size_t>(n), "w"),
            std::vector<std::string>(static_cast<std::size_t>(n), "X"), "fuzz");
        std::string why;
        CAPTURE(why);
        CHECK(is_valid_tree(tree, &why));
    }
}

TEST_CASE("transition TSV round trip") {
    const OracleRun run = run_oracle(treegen::tree_from_heads({2, 0, 2}));
    std::ostringstream out;
    write_transitions_tsv("ex", run.transitions, out);
    std::istringstream in(out.str());
    const auto sentences = read_transitions_tsv(in);
    REQUIRE(sentences.size() == 1);
    CHECK(sentences[0].sentence_id == "ex");
    CHECK(sentences[0].transitions == run.transitions);

    std::istringstream bad("ex\t1\tJUMP\t_\n");
    CHECK_THROWS_AS(read_transitions_tsv(bad), DataError);
}
