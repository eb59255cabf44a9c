#include "increparse/incrementality.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "json.hpp"

namespace increparse {

TraceRecorder::TraceRecorder(int n, int declared_delay, std::string sentence_id) {
    trace_.n = n;
    trace_.declared_delay = declared_delay;
    trace_.sentence_id = std::move(sentence_id);
}

void TraceRecorder::commit(int accessed, const std::vector<Arc>& arcs) {
    if (accessed > trace_.n)
        throw ContractViolation("commit event beyond sentence end: accessed " +
                                std::to_string(accessed) + " of " + std::to_string(trace_.n));
    if (!events_.empty() && accessed < events_.back().first)
        throw ContractViolation("commit events must not move backwards");
    events_.emplace_back(accessed, arcs);
}

void TraceRecorder::set_final(const std::vector<Arc>& arcs) {
    trace_.final_arcs = arcs;
    std::sort(trace_.final_arcs.begin(), trace_.final_arcs.end());
}

ParseTrace TraceRecorder::build() && {
    trace_.snapshots.assign(static_cast<std::size_t>(trace_.n), {});
    std::vector<Arc> current;
    std::size_t next_event = 0;
    for (int i = 1; i <= trace_.n; ++i) {
        while (next_event < events_.size() && events_[next_event].first <= i) {
            current = events_[next_event].second;
            ++next_event;
        }
        auto& snapshot = trace_.snapshots[static_cast<std::size_t>(i) - 1];
        snapshot = current;
        std::sort(snapshot.begin(), snapshot.end());
    }
    return std::move(trace_);
}

namespace {

bool subset(const std::vector<Arc>& small, const std::vector<Arc>& big) {
    // Both sorted.
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

bool contains(const std::vector<Arc>& sorted, const Arc& arc) {
    return std::binary_search(sorted.begin(), sorted.end(), arc);
}

}  // namespace

Verdict check_monotonic(const ParseTrace& trace) {
    for (std::size_t i = 1; i < trace.snapshots.size(); ++i) {
        if (!subset(trace.snapshots[i - 1], trace.snapshots[i])) {
            return {false, static_cast<int>(i) + 1,
                    "snapshot " + std::to_string(i + 1) + " dropped a committed arc"};
        }
    }
    if (!trace.snapshots.empty() && !subset(trace.snapshots.back(), trace.final_arcs)) {
        return {false, trace.n, "final parse dropped a committed arc"};
    }
    return {};
}

Verdict check_delay(const ParseTrace& trace, int k) {
    if (trace.snapshots.empty()) return {};
    // Arcs the incremental run itself committed; sentence-final repair arcs
    // appear only in final_arcs and have no commitment deadline.
    const std::vector<Arc>& committed = trace.snapshots.back();
    for (int i = 1; i <= trace.n; ++i) {
        const auto& snapshot = trace.snapshots[static_cast<std::size_t>(i) - 1];
        for (const Arc& arc : committed) {
            if (std::max(arc.head, arc.dep) > i - k) continue;
            if (!contains(snapshot, arc))
                return {false, i,
                        "arc " + std::to_string(arc.head) + "->" + std::to_string(arc.dep) +
                            " missing from snapshot " + std::to_string(i) + " at delay " +
                            std::to_string(k)};
        }
    }
    return {};
}

double connected_fraction(const ParseTrace& trace) {
    if (trace.snapshots.empty()) return 1.0;
    int connected = 0;
    for (int i = 1; i <= trace.n; ++i) {
        const auto& snapshot = trace.snapshots[static_cast<std::size_t>(i) - 1];
        // Union-find over nodes 0..i with the snapshot arcs restricted to them.
        std::vector<int> parent(static_cast<std::size_t>(i) + 1);
        for (int v = 0; v <= i; ++v) parent[static_cast<std::size_t>(v)] = v;
        auto find = [&](int v) {
            while (parent[static_cast<std::size_t>(v)] != v) {
                parent[static_cast<std::size_t>(v)] =
                    parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
                v = parent[static_cast<std::size_t>(v)];
            }
            return v;
        };
        int components = i + 1;
        for (const Arc& arc : snapshot) {
            if (arc.head > i || arc.dep > i) continue;
            int a = find(arc.head), b = find(arc.dep);
            if (a != b) {
                parent[static_cast<std::size_t>(a)] = b;
                --components;
            }
        }
        if (components == 1) ++connected;
    }
    return static_cast<double>(connected) / static_cast<double>(trace.n);
}

void write_trace_jsonl(const std::vector<ParseTrace>& traces, std::ostream& out) {
    for (const ParseTrace& trace : traces) {
        nlohmann::json object;
        object["sentence_id"] = trace.sentence_id;
        object["n"] = trace.n;
        object["delay"] = trace.declared_delay;
        nlohmann::json snapshots = nlohmann::json::array();
        for (const auto& snapshot : trace.snapshots) {
            nlohmann::json arcs = nlohmann::json::array();
            for (const Arc& arc : snapshot) arcs.push_back({arc.head, arc.dep});
            snapshots.push_back(std::move(arcs));
        }
        object["snapshots"] = std::move(snapshots);
        nlohmann::json final_arcs = nlohmann::json::array();
        for (const Arc& arc : trace.final_arcs) final_arcs.push_back({arc.head, arc.dep});
        object["final"] = std::move(final_arcs);
        out << object.dump() << "\n";
    }
    if (!out) throw DataError("trace write failed");
}

}  // namespace increparse
