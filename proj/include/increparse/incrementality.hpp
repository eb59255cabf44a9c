#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "increparse/treebank.hpp"

namespace increparse {

// Evidence object for incrementality verification. snapshots[i-1] is the arc
// set committed once the pipeline has accessed tokens 1..i (lookahead tokens
// count as accessed); final_arcs is the finished tree after sentence-final
// repairs, a superset of the last snapshot for well-behaved pipelines.
struct ParseTrace {
    std::string sentence_id;
    int n = 0;
    int declared_delay = 0;
    std::vector<std::vector<Arc>> snapshots;
    std::vector<Arc> final_arcs;
};

// Collects (accessed, arcs) commit events from a pipeline run and assembles
// the per-token snapshot array. Events must not decrease in accessed count.
class TraceRecorder {
public:
    explicit TraceRecorder(int n, int declared_delay, std::string sentence_id = {});

    // Records that after accessing `accessed` tokens the committed arc set is
    // `arcs`. Throws ContractViolation if accessed exceeds the sentence.
    void commit(int accessed, const std::vector<Arc>& arcs);
    void set_final(const std::vector<Arc>& arcs);

    ParseTrace build() &&;

private:
    ParseTrace trace_;
    std::vector<std::pair<int, std::vector<Arc>>> events_;
};

struct Verdict {
    bool pass = true;
    int violation_index = -1;  // first offending snapshot (1-based), -1 if none
    std::string detail;
};

// Pass iff snapshots only grow and the last snapshot is contained in the
// final arc set.
Verdict check_monotonic(const ParseTrace& trace);

// Pass iff every arc the incremental run itself committed (the last raw
// snapshot) is present in snapshots[i] whenever max(head, dep) <= i - k.
// Arcs introduced only by sentence-final repairs are by construction
// sentence-final and are not delay-checked.
Verdict check_delay(const ParseTrace& trace, int k);

// Informational: fraction of snapshots whose accessed prefix is connected
// (tokens 1..i plus the root form one component under the committed arcs).
double connected_fraction(const ParseTrace& trace);

// JSON-lines dump, one object per sentence.
void write_trace_jsonl(const std::vector<ParseTrace>& traces, std::ostream& out);

}  // namespace increparse
