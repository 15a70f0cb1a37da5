#pragma once

#include "error.hpp"
#include "graph.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

namespace ciforge {

struct SccPartition {
    std::vector<std::vector<Vertex>> components;
    std::vector<std::uint32_t> component_of;
    /// Size > 1 or a self-loop: walks through it are unbounded.
    std::vector<bool> cyclic;
};

/// Tarjan's lowlink algorithm with an explicit call stack. Components come out
/// in reverse topological order (sinks first). Edge roles are ignored.
inline SccPartition scc(const DescriptionGraph& g) {
    const std::size_t n = g.size();
    constexpr std::uint32_t unvisited = ~0u;
    std::vector<std::uint32_t> index(n, unvisited), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<Vertex> stack;
    SccPartition out;
    out.component_of.assign(n, unvisited);
    std::uint32_t counter = 0;

    struct Frame {
        Vertex v;
        std::size_t next_edge;
    };
    std::vector<Frame> calls;
    for (Vertex s = 0; s < n; ++s) {
        if (index[s] != unvisited)
            continue;
        calls.push_back({s, 0});
        index[s] = low[s] = counter++;
        stack.push_back(s);
        on_stack[s] = 1;
        while (!calls.empty()) {
            auto& f = calls.back();
            const auto& edges = g.out(f.v);
            if (f.next_edge < edges.size()) {
                Vertex w = edges[f.next_edge++].target;
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    calls.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            Vertex v = f.v;
            calls.pop_back();
            if (!calls.empty())
                low[calls.back().v] = std::min(low[calls.back().v], low[v]);
            if (low[v] != index[v])
                continue;
            auto c = static_cast<std::uint32_t>(out.components.size());
            out.components.emplace_back();
            Vertex w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                out.component_of[w] = c;
                out.components.back().push_back(w);
            } while (w != v);
            std::sort(out.components.back().begin(), out.components.back().end());
        }
    }
    out.cyclic.assign(out.components.size(), false);
    for (std::size_t c = 0; c < out.components.size(); ++c) {
        if (out.components[c].size() > 1) {
            out.cyclic[c] = true;
            continue;
        }
        Vertex v = out.components[c][0];
        for (const auto& e : g.out(v))
            if (e.target == v)
                out.cyclic[c] = true;
    }
    return out;
}

struct Condensation {
    std::vector<std::uint64_t> weight;
    std::vector<std::vector<std::uint32_t>> succ; // sorted, duplicate-free
    std::vector<bool> cyclic;

    std::size_t size() const noexcept { return weight.size(); }
};

inline Condensation condensation(const DescriptionGraph& g, const SccPartition& p) {
    Condensation c;
    c.weight.resize(p.components.size());
    c.succ.resize(p.components.size());
    c.cyclic = p.cyclic;
    for (std::size_t k = 0; k < p.components.size(); ++k)
        c.weight[k] = p.components[k].size();
    for (Vertex v = 0; v < g.size(); ++v)
        for (const auto& e : g.out(v)) {
            auto a = p.component_of[v], b = p.component_of[e.target];
            if (a != b)
                c.succ[a].push_back(b);
        }
    for (auto& s : c.succ) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    return c;
}

inline Condensation condensation(const DescriptionGraph& g) { return condensation(g, scc(g)); }

/// Memo table of Algorithm 1. Entries start out null; `evaluations` counts how
/// many nodes got their weight computed.
struct MaxWeightMemo {
    std::vector<std::optional<std::uint64_t>> wgt;
    std::size_t evaluations = 0;

    explicit MaxWeightMemo(const Condensation& c) : wgt(c.size()) {}
};

/// Maximum weight of a path in the condensation starting at `start`.
/// Memoized depth-first search; the recursion is unrolled onto a stack so
/// that long chains do not exhaust the call stack.
inline std::uint64_t max_weight(const Condensation& c, std::uint32_t start, MaxWeightMemo& memo) {
    if (memo.wgt[start])
        return *memo.wgt[start];
    struct Frame {
        std::uint32_t node;
        std::size_t next;
        std::uint64_t current;
    };
    std::vector<Frame> calls{{start, 0, 0}};
    while (!calls.empty()) {
        auto& f = calls.back();
        const auto& s = c.succ[f.node];
        if (f.next < s.size()) {
            std::uint32_t w = s[f.next];
            if (memo.wgt[w]) {
                f.current = std::max(f.current, *memo.wgt[w]);
                ++f.next;
            } else {
                calls.push_back({w, 0, 0});
            }
            continue;
        }
        std::uint64_t result = f.current + c.weight[f.node];
        memo.wgt[f.node] = result;
        ++memo.evaluations;
        calls.pop_back();
        if (!calls.empty()) {
            auto& parent = calls.back();
            parent.current = std::max(parent.current, result);
            ++parent.next;
        }
    }
    return *memo.wgt[start];
}

inline std::uint64_t max_weight(const Condensation& c, std::uint32_t start) {
    MaxWeightMemo memo(c);
    return max_weight(c, start, memo);
}

inline std::uint64_t mvf(const DescriptionGraph& g, Vertex v) {
    auto p = scc(g);
    auto c = condensation(g, p);
    return max_weight(c, p.component_of.at(v));
}

/// Maximum mvf over all vertices, sharing one memo across start nodes.
inline std::uint64_t mmvf(const DescriptionGraph& g, std::size_t* evaluations = nullptr) {
    auto c = condensation(g);
    MaxWeightMemo memo(c);
    std::uint64_t best = 0;
    for (std::uint32_t k = 0; k < c.size(); ++k)
        best = std::max(best, max_weight(c, k, memo));
    if (evaluations)
        *evaluations = memo.evaluations;
    return best;
}

inline std::size_t reach_count(const DescriptionGraph& g, Vertex v) {
    std::vector<char> seen(g.size(), 0);
    std::vector<Vertex> stack{v};
    seen[v] = 1;
    std::size_t n = 0;
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        ++n;
        for (const auto& e : g.out(u))
            if (!seen[e.target]) {
                seen[e.target] = 1;
                stack.push_back(e.target);
            }
    }
    return n;
}

/// Exhaustive search over (current vertex, visited set) states.
inline std::uint64_t mvf_oracle(const DescriptionGraph& g, Vertex v) {
    const std::size_t n = g.size();
    if (n > 12)
        throw ResourceError("mvf oracle supports at most 12 vertices");
    std::vector<std::vector<char>> seen(n, std::vector<char>(std::size_t{1} << n, 0));
    std::vector<std::pair<Vertex, std::uint32_t>> stack{{v, 1u << v}};
    seen[v][1u << v] = 1;
    std::uint64_t best = 0;
    while (!stack.empty()) {
        auto [u, mask] = stack.back();
        stack.pop_back();
        best = std::max<std::uint64_t>(best, static_cast<std::uint64_t>(__builtin_popcount(mask)));
        for (const auto& e : g.out(u)) {
            std::uint32_t m = mask | (1u << e.target);
            if (!seen[e.target][m]) {
                seen[e.target][m] = 1;
                stack.push_back({e.target, m});
            }
        }
    }
    return best;
}

/// True iff no cyclic component is reachable from v.
inline bool bounded_walks(const DescriptionGraph& g, const SccPartition& p, Vertex v) {
    std::vector<char> seen(p.components.size(), 0);
    std::vector<std::uint32_t> stack{p.component_of.at(v)};
    seen[stack.back()] = 1;
    while (!stack.empty()) {
        auto c = stack.back();
        stack.pop_back();
        if (p.cyclic[c])
            return false;
        for (Vertex u : p.components[c])
            for (const auto& e : g.out(u)) {
                auto d = p.component_of[e.target];
                if (!seen[d]) {
                    seen[d] = 1;
                    stack.push_back(d);
                }
            }
    }
    return true;
}

inline bool bounded_walks(const DescriptionGraph& g, Vertex v) { return bounded_walks(g, scc(g), v); }

} // namespace ciforge
