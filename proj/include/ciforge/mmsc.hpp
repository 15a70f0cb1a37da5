#pragma once

#include "concept.hpp"
#include "graph.hpp"
#include "interpretation.hpp"
#include "mvf.hpp"
#include "simulation.hpp"

#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace ciforge {

struct DepthReport {
    enum class Branch { Bounded, Cyclic };

    std::vector<std::string> x_lim;
    std::uint64_t product_mvf = 0;
    std::uint64_t chosen_depth = 0;
    Branch branch = Branch::Cyclic;
    std::size_t product_size = 0;
};

inline const char* to_string(DepthReport::Branch b) { return b == DepthReport::Branch::Bounded ? "bounded" : "cyclic"; }

struct MmscOptions {
    /// Cap on product vertices and on tree nodes.
    GraphLimits limits{};
    /// Sibling reduction needs |P|^2 bits per level; skipped above this size.
    std::size_t reduce_limit = 4096;
    bool reduce = true;
};

namespace detail {

struct ElementSetHash {
    std::size_t operator()(const ElementSet& s) const noexcept {
        std::size_t h = 0xcbf29ce484222325ull;
        for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i))
            h = (h ^ i) * 0x100000001b3ull;
        return h;
    }
};

inline std::vector<Vertex> tuple_of(const ElementSet& x) {
    std::vector<Vertex> t;
    for (auto i = x.find_first(); i != ElementSet::npos; i = x.find_next(i))
        t.push_back(static_cast<Vertex>(i));
    return t;
}

} // namespace detail

/// C(G_v) of the depth-d unravelling of g at `start`, computed level by level on
/// the graph instead of on the tree. With `reduce`, an ∃r-conjunct is dropped
/// when a sibling ∃r-conjunct is at least as specific (ties keep the lower
/// vertex), which yields the reduced form of the concept.
inline Concept concept_of_unravelling(const DescriptionGraph& g, Vertex start, std::size_t d, bool complete,
                                      bool reduce) {
    const std::size_t n = g.size();
    std::vector<Concept> level(n);
    for (Vertex v = 0; v < n; ++v) {
        std::vector<Concept> parts;
        for (auto a : g.labels(v))
            parts.push_back(Concept::atom(a));
        level[v] = Concept::conjunction(std::move(parts));
    }
    if (d == 0)
        return level[start];
    std::optional<PreImage> pre;
    SimulationRelation sim; // sim.rows[w] ∋ w' iff level[w'] ⊑ level[w]
    bool sim_stable = false;
    if (reduce) {
        pre.emplace(g);
        sim = label_compatible(g, g);
    }
    std::vector<Concept> atoms = level;
    for (std::size_t k = 1; k <= d; ++k) {
        std::vector<Concept> next(n);
        for (Vertex v = 0; v < n; ++v) {
            std::vector<Concept> parts;
            if (!atoms[v].is_top())
                parts.push_back(atoms[v]);
            const auto& out = g.out(v);
            for (std::size_t a = 0; a < out.size(); ++a) {
                const auto& e = out[a];
                bool keep = true;
                if (reduce)
                    for (std::size_t b = 0; b < out.size() && keep; ++b) {
                        const auto& f = out[b];
                        if (b == a || f.role != e.role || f.target == e.target)
                            continue;
                        if (!sim.contains(e.target, f.target))
                            continue;
                        if (!sim.contains(f.target, e.target) || f.target < e.target)
                            keep = false;
                    }
                if (keep)
                    parts.push_back(Concept::exists(e.role, level[e.target]));
            }
            next[v] = Concept::conjunction(std::move(parts));
        }
        bool stable = complete && next == level;
        level = std::move(next);
        if (stable)
            break;
        if (reduce && k < d && !sim_stable) {
            SimulationRelation s2 = label_compatible(g, g);
            for (Vertex v = 0; v < n; ++v)
                for (const auto& e : g.out(v)) {
                    if (s2.rows[v].none())
                        break;
                    s2.rows[v] &= (*pre)(e.role, sim.rows[e.target]);
                }
            // Once a level repeats, every later level is the same relation.
            sim_stable = s2.rows == sim.rows;
            sim = std::move(s2);
        }
    }
    return level[start];
}

/// Computes depths and MMSCs over one interpretation, caching per element set.
class MmscEngine {
public:
    explicit MmscEngine(const Interpretation& i, MmscOptions opt = {})
        : model_(i), opt_(opt), scc_(scc(model_.graph())), mmvf_(mmvf(model_.graph())) {}

    const ModelView& model() const noexcept { return model_; }
    const Interpretation& interpretation() const noexcept { return model_.interpretation(); }
    const DescriptionGraph& graph() const noexcept { return model_.graph(); }
    std::uint64_t graph_mmvf() const noexcept { return mmvf_; }
    const MmscOptions& options() const noexcept { return opt_; }

    bool bounded_walks(std::size_t x) const {
        return ciforge::bounded_walks(graph(), scc_, static_cast<Vertex>(x));
    }

    DepthReport depth(const ElementSet& x) const {
        if (x.none())
            throw ValidationError("adaptable depth needs a non-empty element set");
        {
            std::lock_guard lock(mutex_);
            if (auto it = depths_.find(x); it != depths_.end())
                return it->second;
        }
        DepthReport r;
        auto p = product_reachable(graph(), detail::tuple_of(x), opt_.limits);
        r.product_size = p.graph.size();
        r.product_mvf = mvf(p.graph, 0);
        for (auto i = x.find_first(); i != ElementSet::npos; i = x.find_next(i))
            if (bounded_walks(i))
                r.x_lim.push_back(interpretation().element(i));
        if (!r.x_lim.empty()) {
            r.branch = DepthReport::Branch::Bounded;
            r.chosen_depth = r.product_mvf - 1;
        } else {
            r.branch = DepthReport::Branch::Cyclic;
            r.chosen_depth = r.product_mvf * mmvf_;
        }
        std::lock_guard lock(mutex_);
        depths_.emplace(x, r);
        return r;
    }

    Concept at_depth(const ElementSet& x, std::size_t d) const {
        if (x.none())
            return Concept::bottom();
        auto p = product_reachable(std::vector<const DescriptionGraph*>(x.count(), &graph()), detail::tuple_of(x),
                                   opt_.limits, d);
        bool reduce = opt_.reduce && p.graph.size() <= opt_.reduce_limit;
        return concept_of_unravelling(p.graph, 0, d, p.complete, reduce);
    }

    Concept adaptive(const ElementSet& x) const {
        if (x.none())
            return Concept::bottom();
        {
            std::lock_guard lock(mutex_);
            if (auto it = adaptive_.find(x); it != adaptive_.end())
                return it->second;
        }
        Concept c = at_depth(x, depth(x).chosen_depth);
        std::lock_guard lock(mutex_);
        adaptive_.emplace(x, c);
        return c;
    }

    ElementSet extension(const Concept& c) const { return model_.extension(c); }

    /// Keeps top-level atoms and replaces each top-level ∃r.E by ∃r.mmsc(E^I).
    Concept lower_approximation(const Concept& c) const {
        if (c.is_bottom() || c.is_top())
            return c;
        std::vector<Concept> parts;
        for (const auto& part : c.conjuncts()) {
            if (part.kind() == ConceptKind::Exists)
                parts.push_back(Concept::exists(part.role(), adaptive(extension(part.filler()))));
            else
                parts.push_back(part);
        }
        return Concept::conjunction(std::move(parts));
    }

private:
    ModelView model_;
    MmscOptions opt_;
    SccPartition scc_;
    std::uint64_t mmvf_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<ElementSet, DepthReport, detail::ElementSetHash> depths_;
    mutable std::unordered_map<ElementSet, Concept, detail::ElementSetHash> adaptive_;
};

inline bool bounded_walks(const Interpretation& i, const std::string& x) {
    return bounded_walks(graph_of_interpretation(i), static_cast<Vertex>(i.require_index(x)));
}

inline DepthReport adaptable_depth(const Interpretation& i, const ElementSet& x, const MmscOptions& opt = {}) {
    return MmscEngine(i, opt).depth(x);
}

inline Concept mmsc_at_depth(const Interpretation& i, const ElementSet& x, std::size_t d,
                             const MmscOptions& opt = {}) {
    return MmscEngine(i, opt).at_depth(x, d);
}

inline Concept mmsc_adaptive(const Interpretation& i, const ElementSet& x, const MmscOptions& opt = {}) {
    return MmscEngine(i, opt).adaptive(x);
}

inline Concept lower_approximation(const Concept& c, const Interpretation& i, const MmscOptions& opt = {}) {
    return MmscEngine(i, opt).lower_approximation(c);
}

/// The literal construction: unravel every element, take the product tree and
/// read off its concept. Exponential; meant as a cross-check on small inputs.
inline Concept mmsc_explicit(const Interpretation& i, const ElementSet& x, std::size_t d,
                             const GraphLimits& lim = {}) {
    if (x.none())
        return Concept::bottom();
    auto g = graph_of_interpretation(i);
    std::vector<DescriptionTree> trees;
    for (auto v : detail::tuple_of(x))
        trees.push_back(unravel(g, v, d, lim));
    return concept_of_tree(product_trees(trees, lim));
}

} // namespace ciforge
