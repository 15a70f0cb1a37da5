#pragma once

#include "concept.hpp"
#include "error.hpp"
#include "interpretation.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ciforge {

using Vertex = std::uint32_t;
inline constexpr Vertex no_vertex = std::numeric_limits<Vertex>::max();

struct LabeledEdge {
    Symbol role;
    Vertex target;

    friend bool operator==(const LabeledEdge&, const LabeledEdge&) = default;
    friend bool operator<(const LabeledEdge& a, const LabeledEdge& b) {
        return a.role != b.role ? a.role < b.role : a.target < b.target;
    }
};

/// Vertex-labelled digraph with role-labelled edges. Labels and out-edges are
/// kept sorted by symbol id so that containment tests are merges.
class DescriptionGraph {
public:
    std::size_t size() const noexcept { return labels_.size(); }

    std::size_t edge_count() const noexcept {
        std::size_t n = 0;
        for (const auto& o : out_)
            n += o.size();
        return n;
    }

    Vertex add_vertex(std::vector<Symbol> labels = {}, std::string name = {}) {
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        labels_.push_back(std::move(labels));
        out_.emplace_back();
        names_.push_back(std::move(name));
        return static_cast<Vertex>(labels_.size() - 1);
    }

    void add_label(Vertex v, Symbol a) {
        auto& l = labels_.at(v);
        auto it = std::lower_bound(l.begin(), l.end(), a);
        if (it == l.end() || *it != a)
            l.insert(it, a);
    }

    bool add_edge(Vertex s, Symbol r, Vertex t) {
        if (t >= size())
            throw ValidationError("edge target out of range");
        auto& o = out_.at(s);
        LabeledEdge e{r, t};
        auto it = std::lower_bound(o.begin(), o.end(), e);
        if (it != o.end() && *it == e)
            return false;
        o.insert(it, e);
        return true;
    }

    const std::vector<Symbol>& labels(Vertex v) const { return labels_.at(v); }
    const std::vector<LabeledEdge>& out(Vertex v) const { return out_.at(v); }
    const std::string& name(Vertex v) const { return names_.at(v); }
    void set_name(Vertex v, std::string n) { names_.at(v) = std::move(n); }

    std::optional<Vertex> find(const std::string& name) const {
        for (Vertex v = 0; v < size(); ++v)
            if (names_[v] == name)
                return v;
        return std::nullopt;
    }

    Vertex require(const std::string& name) const {
        if (auto v = find(name))
            return *v;
        throw ValidationError("unknown vertex '" + name + "'");
    }

    bool has_edge(Vertex s, Symbol r, Vertex t) const {
        const auto& o = out_.at(s);
        return std::binary_search(o.begin(), o.end(), LabeledEdge{r, t});
    }

    /// Successors of `v` along role `r`.
    std::vector<Vertex> successors(Vertex v, Symbol r) const {
        std::vector<Vertex> out;
        for (const auto& e : out_.at(v))
            if (e.role == r)
                out.push_back(e.target);
        return out;
    }

private:
    std::vector<std::vector<Symbol>> labels_;
    std::vector<std::vector<LabeledEdge>> out_;
    std::vector<std::string> names_;
};

inline bool labels_subset(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Rooted tree over a description graph. `parent[root]` is no_vertex.
/// For unravellings `origin[v]` is the last vertex of the walk that `v` stands for.
struct DescriptionTree {
    DescriptionGraph graph;
    Vertex root = 0;
    std::vector<Vertex> parent;
    std::vector<Symbol> in_role;
    std::vector<Vertex> origin;
    std::vector<std::uint32_t> depth;

    std::size_t size() const noexcept { return graph.size(); }

    /// Adds a node; `p == no_vertex` for the root.
    Vertex add_node(Vertex p, Symbol r, std::vector<Symbol> labels, Vertex from = no_vertex) {
        Vertex v = graph.add_vertex(std::move(labels));
        parent.push_back(p);
        in_role.push_back(r);
        origin.push_back(from);
        depth.push_back(p == no_vertex ? 0 : depth[p] + 1);
        if (p != no_vertex)
            graph.add_edge(p, r, v);
        return v;
    }

    std::uint32_t height() const {
        std::uint32_t h = 0;
        for (auto d : depth)
            h = std::max(h, d);
        return h;
    }

    /// The walk a node of an unravelling stands for, e.g. "a partof b capital a".
    std::vector<std::string> walk(Vertex v, const DescriptionGraph& source) const {
        std::vector<std::string> rev;
        for (Vertex u = v; u != no_vertex; u = parent[u]) {
            rev.push_back(source.name(origin[u]));
            if (parent[u] != no_vertex)
                rev.push_back(in_role[u].str());
        }
        return {rev.rbegin(), rev.rend()};
    }

    /// Checks the tree invariants: unique parent, acyclic, all reachable from root.
    bool valid() const {
        if (graph.size() == 0 || root >= graph.size() || parent[root] != no_vertex)
            return false;
        std::vector<int> indeg(graph.size(), 0);
        for (Vertex v = 0; v < graph.size(); ++v)
            for (const auto& e : graph.out(v)) {
                if (parent[e.target] != v)
                    return false;
                ++indeg[e.target];
            }
        std::vector<char> seen(graph.size(), 0);
        std::vector<Vertex> stack{root};
        seen[root] = 1;
        std::size_t count = 0;
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            ++count;
            for (const auto& e : graph.out(v)) {
                if (seen[e.target])
                    return false;
                seen[e.target] = 1;
                stack.push_back(e.target);
            }
        }
        for (Vertex v = 0; v < graph.size(); ++v)
            if (v != root && indeg[v] != 1)
                return false;
        return count == graph.size();
    }
};

struct GraphLimits {
    std::size_t max_nodes = 2'000'000;
};

inline DescriptionGraph graph_of_interpretation(const Interpretation& i) {
    DescriptionGraph g;
    for (const auto& id : i.domain())
        g.add_vertex({}, id);
    for (const auto& [name, ext] : i.concepts()) {
        Symbol a(name);
        for (auto x = ext.find_first(); x != ElementSet::npos; x = ext.find_next(x))
            g.add_label(static_cast<Vertex>(x), a);
    }
    for (const auto& [name, edges] : i.roles()) {
        Symbol r(name);
        for (const auto& [s, t] : edges)
            g.add_edge(static_cast<Vertex>(s), r, static_cast<Vertex>(t));
    }
    return g;
}

namespace detail {

inline void check_cap(std::size_t n, const GraphLimits& lim, const char* what) {
    if (n > lim.max_nodes)
        throw ResourceError(std::string(what) + " exceeds the node cap of " + std::to_string(lim.max_nodes));
}

inline void fill_tree_node(DescriptionTree& t, Vertex v, const Concept& c, const GraphLimits& lim) {
    switch (c.kind()) {
    case ConceptKind::Top:
        return;
    case ConceptKind::Bottom:
        throw ValidationError("Bottom has no description tree");
    case ConceptKind::Atom:
        t.graph.add_label(v, c.name());
        return;
    case ConceptKind::And:
        for (const auto& part : c.args())
            fill_tree_node(t, v, part, lim);
        return;
    case ConceptKind::Exists: {
        Vertex w = t.add_node(v, c.role(), {});
        check_cap(t.size(), lim, "description tree");
        fill_tree_node(t, w, c.filler(), lim);
        return;
    }
    }
}

} // namespace detail

/// G(C). Shared subconcepts are copied, so the size can be exponential in the
/// DAG size of `c`; the cap guards against that.
inline DescriptionTree tree_of_concept(const Concept& c, const GraphLimits& lim = {}) {
    if (c.is_bottom())
        throw ValidationError("Bottom has no description tree");
    DescriptionTree t;
    t.root = t.add_node(no_vertex, Symbol(), {});
    detail::fill_tree_node(t, t.root, c, lim);
    return t;
}

/// Like G(C) but with one vertex per distinct subconcept, so shared fillers
/// are shared vertices. A simulation from this graph at the returned vertex
/// exists iff one exists from the tree. Returns the root vertex.
inline Vertex graph_of_concept(const Concept& c, DescriptionGraph& g,
                               std::unordered_map<const void*, Vertex>& memo) {
    if (c.is_bottom())
        throw ValidationError("Bottom has no description graph");
    if (auto it = memo.find(c.id()); it != memo.end())
        return it->second;
    std::vector<Symbol> labels;
    std::vector<std::pair<Symbol, Vertex>> edges;
    for (const auto& part : c.conjuncts()) {
        if (part.kind() == ConceptKind::Atom)
            labels.push_back(part.name());
        else if (part.kind() == ConceptKind::Exists)
            edges.emplace_back(part.role(), graph_of_concept(part.filler(), g, memo));
    }
    Vertex v = g.add_vertex(std::move(labels));
    for (const auto& [r, w] : edges)
        g.add_edge(v, r, w);
    memo.emplace(c.id(), v);
    return v;
}

inline std::pair<DescriptionGraph, Vertex> graph_of_concept(const Concept& c) {
    DescriptionGraph g;
    std::unordered_map<const void*, Vertex> memo;
    Vertex root = graph_of_concept(c, g, memo);
    return {std::move(g), root};
}

/// C(G_v) of the subtree rooted at `v`.
inline Concept concept_of_tree(const DescriptionTree& t, Vertex v) {
    // Children have larger ids than parents in every tree built here, but do
    // not rely on it: post-order with an explicit stack.
    std::vector<std::optional<Concept>> done(t.size());
    std::vector<std::pair<Vertex, bool>> stack{{v, false}};
    while (!stack.empty()) {
        auto [u, expanded] = stack.back();
        stack.pop_back();
        if (!expanded) {
            stack.push_back({u, true});
            for (const auto& e : t.graph.out(u))
                stack.push_back({e.target, false});
            continue;
        }
        std::vector<Concept> parts;
        for (auto a : t.graph.labels(u))
            parts.push_back(Concept::atom(a));
        for (const auto& e : t.graph.out(u))
            parts.push_back(Concept::exists(e.role, *done[e.target]));
        done[u] = Concept::conjunction(std::move(parts));
    }
    return *done[v];
}

inline Concept concept_of_tree(const DescriptionTree& t) { return concept_of_tree(t, t.root); }

/// G^x_d: the tree of walks of length at most d from x.
inline DescriptionTree unravel(const DescriptionGraph& g, Vertex x, std::size_t d, const GraphLimits& lim = {}) {
    DescriptionTree t;
    t.root = t.add_node(no_vertex, Symbol(), g.labels(x), x);
    std::vector<Vertex> frontier{t.root};
    for (std::size_t level = 0; level < d && !frontier.empty(); ++level) {
        std::vector<Vertex> next;
        for (Vertex u : frontier)
            for (const auto& e : g.out(t.origin[u])) {
                next.push_back(t.add_node(u, e.role, g.labels(e.target), e.target));
                detail::check_cap(t.size(), lim, "unravelling");
            }
        frontier = std::move(next);
    }
    return t;
}

/// Reachable part of a product of description graphs. Vertex 0 is the start
/// tuple; `tuples[v]` lists the component vertices of `v`.
struct ProductGraph {
    DescriptionGraph graph;
    std::vector<std::vector<Vertex>> tuples;
    std::vector<Vertex> parent; // BFS parent, for tree-shaped products
    std::vector<std::uint32_t> distance;
    bool complete = true; // false when cut off by a depth limit
};

namespace detail {

struct TupleHash {
    std::size_t operator()(const std::vector<Vertex>& t) const noexcept {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto v : t)
            h = (h ^ v) * 0x100000001b3ull;
        return h;
    }
};

inline std::vector<Symbol> intersect_labels(const std::vector<const DescriptionGraph*>& gs,
                                            const std::vector<Vertex>& tuple) {
    std::vector<Symbol> acc = gs[0]->labels(tuple[0]);
    for (std::size_t i = 1; i < gs.size() && !acc.empty(); ++i) {
        const auto& l = gs[i]->labels(tuple[i]);
        std::vector<Symbol> tmp;
        std::set_intersection(acc.begin(), acc.end(), l.begin(), l.end(), std::back_inserter(tmp));
        acc = std::move(tmp);
    }
    return acc;
}

inline std::string tuple_name(const std::vector<const DescriptionGraph*>& gs, const std::vector<Vertex>& tuple) {
    if (tuple.size() == 1)
        return gs[0]->name(tuple[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i)
            s += ",";
        s += gs[i]->name(tuple[i]);
    }
    return s + ")";
}

} // namespace detail

/// Product of `gs` restricted to what is reachable from `start`, optionally
/// only up to `max_depth` edges away from it.
inline ProductGraph product_reachable(const std::vector<const DescriptionGraph*>& gs, const std::vector<Vertex>& start,
                                      const GraphLimits& lim = {},
                                      std::size_t max_depth = std::numeric_limits<std::size_t>::max()) {
    if (gs.empty() || gs.size() != start.size())
        throw ValidationError("product needs one start vertex per factor");
    ProductGraph p;
    std::unordered_map<std::vector<Vertex>, Vertex, detail::TupleHash> index;
    auto intern = [&](const std::vector<Vertex>& t, Vertex from) -> std::pair<Vertex, bool> {
        auto [it, fresh] = index.emplace(t, static_cast<Vertex>(p.tuples.size()));
        if (fresh) {
            p.graph.add_vertex(detail::intersect_labels(gs, t), detail::tuple_name(gs, t));
            p.tuples.push_back(t);
            p.parent.push_back(from);
            p.distance.push_back(from == no_vertex ? 0 : p.distance[from] + 1);
            detail::check_cap(p.tuples.size(), lim, "product graph");
        }
        return {it->second, fresh};
    };
    intern(start, no_vertex);
    std::vector<Vertex> frontier{0};
    const std::size_t n = gs.size();
    for (std::size_t level = 0; level < max_depth && !frontier.empty(); ++level) {
        std::vector<Vertex> next;
        for (Vertex u : frontier) {
            const auto tuple = p.tuples[u];
            // Edges of the first factor fix the candidate roles; sorted by role id.
            const auto& first = gs[0]->out(tuple[0]);
            for (std::size_t a = 0; a < first.size();) {
                Symbol r = first[a].role;
                std::vector<std::vector<Vertex>> succ(n);
                for (std::size_t b = a; b < first.size() && first[b].role == r; ++b)
                    succ[0].push_back(first[b].target);
                while (a < first.size() && first[a].role == r)
                    ++a;
                bool all = true;
                for (std::size_t i = 1; i < n && all; ++i) {
                    succ[i] = gs[i]->successors(tuple[i], r);
                    all = !succ[i].empty();
                }
                if (!all)
                    continue;
                std::vector<std::size_t> pos(n, 0);
                std::vector<Vertex> t(n);
                for (bool done = false; !done;) {
                    for (std::size_t i = 0; i < n; ++i)
                        t[i] = succ[i][pos[i]];
                    auto [v, fresh] = intern(t, u);
                    p.graph.add_edge(u, r, v);
                    if (fresh)
                        next.push_back(v);
                    std::size_t k = n;
                    while (true) {
                        if (k == 0) {
                            done = true;
                            break;
                        }
                        --k;
                        if (++pos[k] < succ[k].size())
                            break;
                        pos[k] = 0;
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    p.complete = frontier.empty();
    return p;
}

/// n-fold product of one graph from `start`.
inline ProductGraph product_reachable(const DescriptionGraph& g, const std::vector<Vertex>& start,
                                      const GraphLimits& lim = {}) {
    std::vector<const DescriptionGraph*> gs(start.size(), &g);
    return product_reachable(gs, start, lim);
}

/// Product of trees restricted to the subtree of the root tuple.
inline DescriptionTree product_trees(const std::vector<const DescriptionTree*>& ts, const GraphLimits& lim = {}) {
    if (ts.empty())
        throw ValidationError("product of zero trees");
    if (ts.size() == 1)
        return *ts[0];
    std::vector<const DescriptionGraph*> gs;
    std::vector<Vertex> start;
    for (auto* t : ts) {
        gs.push_back(&t->graph);
        start.push_back(t->root);
    }
    ProductGraph p = product_reachable(gs, start, lim);
    // Tuples of tree nodes: every reachable tuple has exactly one parent tuple.
    DescriptionTree out;
    out.root = 0;
    std::vector<Vertex> map(p.graph.size(), no_vertex);
    for (Vertex v = 0; v < p.graph.size(); ++v) {
        Vertex par = p.parent[v];
        Symbol r;
        if (par != no_vertex)
            r = ts[0]->in_role[p.tuples[v][0]];
        map[v] = out.add_node(par == no_vertex ? no_vertex : map[par], r, p.graph.labels(v));
        out.graph.set_name(map[v], p.graph.name(v));
    }
    return out;
}

inline DescriptionTree product_trees(const std::vector<DescriptionTree>& ts, const GraphLimits& lim = {}) {
    std::vector<const DescriptionTree*> ptrs;
    for (const auto& t : ts)
        ptrs.push_back(&t);
    return product_trees(ptrs, lim);
}

/// Truncation of a tree to nodes of depth at most k.
inline DescriptionTree truncate(const DescriptionTree& t, std::size_t k) {
    DescriptionTree out;
    std::vector<Vertex> map(t.size(), no_vertex);
    std::vector<Vertex> stack{t.root};
    map[t.root] = out.root = out.add_node(no_vertex, Symbol(), t.graph.labels(t.root), t.origin[t.root]);
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        if (t.depth[u] >= k)
            continue;
        for (const auto& e : t.graph.out(u)) {
            map[e.target] = out.add_node(map[u], e.role, t.graph.labels(e.target), t.origin[e.target]);
            stack.push_back(e.target);
        }
    }
    return out;
}

} // namespace ciforge
