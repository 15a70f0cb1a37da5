#pragma once

#include "concept.hpp"
#include "graph.hpp"
#include "interpretation.hpp"

#include <mutex>
#include <unordered_map>
#include <vector>

namespace ciforge {

/// Relation between the vertices of two graphs: `rows[v]` holds every w with (v, w) in it.
struct SimulationRelation {
    std::vector<ElementSet> rows;

    bool contains(Vertex a, Vertex b) const { return rows.at(a).test(b); }

    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& r : rows)
            n += r.count();
        return n;
    }
};

/// Computes pre_r(S) = {w | some (w, r, w') with w' in S} on a fixed graph.
/// Small graphs get per-role predecessor bitsets, large ones an edge scan.
class PreImage {
public:
    explicit PreImage(const DescriptionGraph& g, std::size_t dense_limit = 4096) : g_(&g) {
        if (g.size() > dense_limit)
            return;
        dense_ = true;
        for (Vertex w = 0; w < g.size(); ++w)
            for (const auto& e : g.out(w)) {
                auto& tab = preds_[e.role.id()];
                if (tab.empty())
                    tab.assign(g.size(), ElementSet(g.size()));
                tab[e.target].set(w);
            }
    }

    ElementSet operator()(Symbol r, const ElementSet& s) const {
        ElementSet out(g_->size());
        if (dense_) {
            auto it = preds_.find(r.id());
            if (it == preds_.end())
                return out;
            for (auto w = s.find_first(); w != ElementSet::npos; w = s.find_next(w))
                out |= it->second[w];
            return out;
        }
        for (Vertex w = 0; w < g_->size(); ++w)
            for (const auto& e : g_->out(w))
                if (e.role == r && s.test(e.target)) {
                    out.set(w);
                    break;
                }
        return out;
    }

    const DescriptionGraph& graph() const noexcept { return *g_; }

private:
    const DescriptionGraph* g_;
    bool dense_ = false;
    std::unordered_map<std::uint32_t, std::vector<ElementSet>> preds_;
};

inline SimulationRelation label_compatible(const DescriptionGraph& g1, const DescriptionGraph& g2) {
    SimulationRelation z;
    z.rows.assign(g1.size(), ElementSet(g2.size()));
    for (Vertex v = 0; v < g1.size(); ++v)
        for (Vertex w = 0; w < g2.size(); ++w)
            if (labels_subset(g1.labels(v), g2.labels(w)))
                z.rows[v].set(w);
    return z;
}

/// Greatest simulation from g1 to g2: start from all label-compatible pairs and
/// remove pairs whose edges cannot be matched until nothing changes.
inline SimulationRelation greatest_simulation(const DescriptionGraph& g1, const PreImage& pre) {
    const auto& g2 = pre.graph();
    SimulationRelation z = label_compatible(g1, g2);
    for (bool changed = true; changed;) {
        changed = false;
        for (Vertex v = 0; v < g1.size(); ++v) {
            if (z.rows[v].none())
                continue;
            for (const auto& e : g1.out(v)) {
                ElementSet next = z.rows[v] & pre(e.role, z.rows[e.target]);
                if (next != z.rows[v]) {
                    z.rows[v] = std::move(next);
                    changed = true;
                }
            }
        }
    }
    return z;
}

inline SimulationRelation greatest_simulation(const DescriptionGraph& g1, const DescriptionGraph& g2) {
    return greatest_simulation(g1, PreImage(g2));
}

inline bool simulates(const DescriptionGraph& g1, Vertex v1, const DescriptionGraph& g2, Vertex v2) {
    return greatest_simulation(g1, g2).contains(v1, v2);
}

/// Level-k bounded simulation: (v, w) is in level k iff there is a simulation
/// from (unravel(g1, v, k), root) to (g2, w). Returns levels 0..k.
inline std::vector<SimulationRelation> bounded_simulation_levels(const DescriptionGraph& g1, const PreImage& pre,
                                                                 std::size_t k) {
    std::vector<SimulationRelation> levels;
    levels.push_back(label_compatible(g1, pre.graph()));
    for (std::size_t j = 1; j <= k; ++j) {
        const auto& prev = levels.back();
        SimulationRelation z = levels.front();
        for (Vertex v = 0; v < g1.size(); ++v)
            for (const auto& e : g1.out(v)) {
                if (z.rows[v].none())
                    break;
                z.rows[v] &= pre(e.role, prev.rows[e.target]);
            }
        bool same = z.rows == prev.rows;
        levels.push_back(std::move(z));
        if (same) {
            // Stable from here on.
            while (levels.size() <= k)
                levels.push_back(levels.back());
            break;
        }
    }
    return levels;
}

inline SimulationRelation bounded_simulation(const DescriptionGraph& g1, const DescriptionGraph& g2, std::size_t k) {
    return bounded_simulation_levels(g1, PreImage(g2), k).back();
}

/// Checks conditions (1)-(3) of a simulation for `z` with designated pair (v1, v2).
inline bool is_simulation(const DescriptionGraph& g1, Vertex v1, const DescriptionGraph& g2, Vertex v2,
                          const SimulationRelation& z) {
    if (!z.contains(v1, v2))
        return false;
    for (Vertex v = 0; v < g1.size(); ++v) {
        const auto& row = z.rows[v];
        for (auto w = row.find_first(); w != ElementSet::npos; w = row.find_next(w)) {
            if (!labels_subset(g1.labels(v), g2.labels(static_cast<Vertex>(w))))
                return false;
            for (const auto& e : g1.out(v)) {
                bool matched = false;
                for (const auto& f : g2.out(static_cast<Vertex>(w)))
                    if (f.role == e.role && z.contains(e.target, f.target)) {
                        matched = true;
                        break;
                    }
                if (!matched)
                    return false;
            }
        }
    }
    return true;
}

/// From a simulation z on a tree t into g with (root, v2) in z, picks one image
/// per tree node. Returns an empty vector when (root, v2) is not in z.
inline std::vector<Vertex> functional_simulation(const DescriptionTree& t, const DescriptionGraph& g, Vertex v2,
                                                 const SimulationRelation& z) {
    if (!z.contains(t.root, v2))
        return {};
    std::vector<Vertex> f(t.size(), no_vertex);
    f[t.root] = v2;
    std::vector<Vertex> stack{t.root};
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        for (const auto& e : t.graph.out(u)) {
            for (const auto& h : g.out(f[u]))
                if (h.role == e.role && z.contains(e.target, h.target)) {
                    f[e.target] = h.target;
                    break;
                }
            if (f[e.target] == no_vertex)
                return {};
            stack.push_back(e.target);
        }
    }
    return f;
}

/// The graph relation {(v, f(v))} as a SimulationRelation.
inline SimulationRelation relation_of_function(const std::vector<Vertex>& f, std::size_t target_size) {
    SimulationRelation z;
    z.rows.assign(f.size(), ElementSet(target_size));
    for (std::size_t v = 0; v < f.size(); ++v)
        if (f[v] != no_vertex)
            z.rows[v].set(f[v]);
    return z;
}

/// An interpretation together with its description graph, for repeated
/// membership queries. Extensions are cached per concept.
class ModelView {
public:
    explicit ModelView(const Interpretation& i) : i_(&i), g_(graph_of_interpretation(i)), pre_(g_) {}

    const Interpretation& interpretation() const noexcept { return *i_; }
    const DescriptionGraph& graph() const noexcept { return g_; }
    const PreImage& preimage() const noexcept { return pre_; }

    ElementSet extension(const Concept& c) const {
        if (c.is_bottom())
            return i_->empty_set();
        if (c.is_top())
            return i_->full_set();
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(c); it != cache_.end())
                return it->second;
        }
        auto [cg, root] = graph_of_concept(c);
        ElementSet ext = greatest_simulation(cg, pre_).rows[root];
        std::lock_guard lock(mutex_);
        cache_.emplace(c, ext);
        return ext;
    }

    bool member(std::size_t x, const Concept& c) const { return extension(c).test(x); }

private:
    const Interpretation* i_;
    DescriptionGraph g_;
    PreImage pre_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<Concept, ElementSet> cache_;
};

inline bool member(std::size_t x, const Concept& c, const Interpretation& i) {
    if (c.is_bottom())
        return false;
    auto t = tree_of_concept(c);
    auto g = graph_of_interpretation(i);
    return simulates(t.graph, t.root, g, static_cast<Vertex>(x));
}

inline bool member(const std::string& x, const Concept& c, const Interpretation& i) {
    return member(i.require_index(x), c, i);
}

inline ElementSet extension(const Concept& c, const Interpretation& i) { return ModelView(i).extension(c); }

/// ∅ ⊨ c ⊑ d.
inline bool subsumed_empty(const Concept& c, const Concept& d) {
    if (c.is_bottom())
        return true;
    if (d.is_bottom())
        return false;
    if (d.is_top() || c == d)
        return true;
    auto [gd, rd] = graph_of_concept(d);
    auto [gc, rc] = graph_of_concept(c);
    return simulates(gd, rd, gc, rc);
}

inline bool equivalent_empty(const Concept& c, const Concept& d) {
    return c == d || (subsumed_empty(c, d) && subsumed_empty(d, c));
}

} // namespace ciforge
