#pragma once

// Brute-force oracles, random instance generators and property checks for the
// test suites.

#include "concept.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "interpretation.hpp"
#include "io.hpp"
#include "mmsc.hpp"
#include "mvf.hpp"
#include "semantics.hpp"
#include "simulation.hpp"
#include "tbox.hpp"

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace ciforge::testkit {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t default_seed = 20201019;

/// CIFORGE_SEED if set and numeric, otherwise the fixed default.
inline std::uint64_t seed_from_env(std::uint64_t fallback = default_seed) {
    const char* s = std::getenv("CIFORGE_SEED");
    if (!s || !*s)
        return fallback;
    char* end = nullptr;
    auto v = std::strtoull(s, &end, 10);
    return end && *end == '\0' ? v : fallback;
}

/// Independent stream for case `k` of a suite.
inline Rng rng_for(std::uint64_t seed, std::uint64_t k) {
    std::seed_seq seq{seed, k, std::uint64_t{0x9e3779b97f4a7c15ull}};
    return Rng(seq);
}

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

struct RandomShape {
    std::size_t min_elements = 1;
    std::size_t max_elements = 4;
    std::vector<std::string> concept_names{"A", "B"};
    std::vector<std::string> role_names{"r", "s"};
    double label_density = 0.4;
    double edge_density = 0.3;
};

inline Interpretation random_interpretation(Rng& rng, const RandomShape& shape = {}) {
    InterpretationData d;
    std::size_t n = uniform(rng, shape.min_elements, shape.max_elements);
    for (std::size_t k = 0; k < n; ++k)
        d.domain.push_back("e" + std::to_string(k));
    for (const auto& a : shape.concept_names) {
        auto& ext = d.concepts[a];
        for (const auto& x : d.domain)
            if (coin(rng, shape.label_density))
                ext.push_back(x);
    }
    for (const auto& r : shape.role_names) {
        auto& ext = d.roles[r];
        for (const auto& x : d.domain)
            for (const auto& y : d.domain)
                if (coin(rng, shape.edge_density))
                    ext.push_back({x, y});
    }
    return Interpretation(d);
}

inline DescriptionGraph random_graph(Rng& rng, std::size_t max_vertices, std::size_t roles = 2,
                                     std::size_t labels = 2, double max_density = 0.5) {
    DescriptionGraph g;
    std::size_t n = uniform(rng, 1, max_vertices);
    double density = std::uniform_real_distribution<double>(0.0, max_density)(rng);
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<Symbol> ls;
        for (std::size_t a = 0; a < labels; ++a)
            if (coin(rng, 0.4))
                ls.emplace_back(std::string(1, static_cast<char>('A' + a)));
        g.add_vertex(std::move(ls), "v" + std::to_string(v));
    }
    for (Vertex v = 0; v < n; ++v)
        for (Vertex w = 0; w < n; ++w)
            for (std::size_t r = 0; r < roles; ++r)
                if (coin(rng, density))
                    g.add_edge(v, Symbol(std::string(1, static_cast<char>('r' + r))), w);
    return g;
}

/// Random raw concept tree; may contain Top, Bottom, nested and singleton
/// conjunctions, so it exercises canonicalization. `nest` bounds how deeply
/// conjunctions may sit inside each other between two existentials.
inline RawConcept random_raw_concept(Rng& rng, const Signature& sig, std::size_t depth, double bottom_p = 0.05,
                                     std::size_t nest = 2) {
    std::vector<std::string> names(sig.concept_names.begin(), sig.concept_names.end());
    std::vector<std::string> roles(sig.role_names.begin(), sig.role_names.end());
    if (coin(rng, bottom_p))
        return RawConcept::bottom();
    std::size_t pick = uniform(rng, 0, nest > 0 ? 9 : 6);
    if (pick == 0)
        return RawConcept::top();
    if (pick <= 3 && !names.empty())
        return RawConcept::atom(names[uniform(rng, 0, names.size() - 1)]);
    if (pick <= 6) {
        if (depth == 0 || roles.empty())
            return names.empty() ? RawConcept::top() : RawConcept::atom(names[uniform(rng, 0, names.size() - 1)]);
        return RawConcept::exists(roles[uniform(rng, 0, roles.size() - 1)],
                                  random_raw_concept(rng, sig, depth - 1, bottom_p, 2));
    }
    std::vector<RawConcept> parts;
    std::size_t k = uniform(rng, 1, 3);
    for (std::size_t j = 0; j < k; ++j)
        parts.push_back(random_raw_concept(rng, sig, depth, bottom_p / 2, nest - 1));
    return RawConcept::conj(std::move(parts));
}

inline Concept random_concept(Rng& rng, const Signature& sig, std::size_t depth, double bottom_p = 0.0) {
    return canonicalize(random_raw_concept(rng, sig, depth, bottom_p));
}

inline ElementSet random_subset(Rng& rng, std::size_t n, bool non_empty = true) {
    ElementSet s(n);
    do {
        for (std::size_t k = 0; k < n; ++k)
            s[k] = coin(rng, 0.5);
    } while (non_empty && s.none());
    return s;
}

inline void collect_signature(const Concept& c, Signature& sig) {
    switch (c.kind()) {
    case ConceptKind::Atom:
        sig.concept_names.insert(c.name().str());
        break;
    case ConceptKind::Exists:
        sig.role_names.insert(c.role().str());
        collect_signature(c.filler(), sig);
        break;
    case ConceptKind::And:
        for (const auto& p : c.args())
            collect_signature(p, sig);
        break;
    default:
        break;
    }
}

/// A model of t with at most `max_elements` elements that violates ci, found
/// by trying every interpretation over the names of t and ci. Sizes whose
/// search space exceeds 2^max_bits are skipped.
inline std::optional<Interpretation> find_countermodel(const TBox& t, const ConceptInclusion& ci,
                                                       std::size_t max_elements = 3, std::size_t max_bits = 20) {
    Signature sig;
    for (const auto& ax : t.axioms()) {
        collect_signature(ax.lhs, sig);
        collect_signature(ax.rhs, sig);
    }
    collect_signature(ci.lhs, sig);
    collect_signature(ci.rhs, sig);
    const std::vector<std::string> names(sig.concept_names.begin(), sig.concept_names.end());
    const std::vector<std::string> roles(sig.role_names.begin(), sig.role_names.end());
    for (std::size_t n = 1; n <= max_elements; ++n) {
        std::size_t bits = names.size() * n + roles.size() * n * n;
        if (bits > max_bits)
            break;
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
            InterpretationData d;
            for (std::size_t k = 0; k < n; ++k)
                d.domain.push_back("e" + std::to_string(k));
            std::size_t b = 0;
            for (const auto& a : names) {
                auto& ext = d.concepts[a];
                for (std::size_t k = 0; k < n; ++k, ++b)
                    if ((code >> b) & 1u)
                        ext.push_back(d.domain[k]);
            }
            for (const auto& r : roles) {
                auto& ext = d.roles[r];
                for (std::size_t x = 0; x < n; ++x)
                    for (std::size_t y = 0; y < n; ++y, ++b)
                        if ((code >> b) & 1u)
                            ext.push_back({d.domain[x], d.domain[y]});
            }
            Interpretation i(d);
            SemanticEvaluator eval(i);
            bool model = true;
            for (const auto& ax : t.inclusions())
                if (!eval(ax.lhs).is_subset_of(eval(ax.rhs))) {
                    model = false;
                    break;
                }
            if (model && !eval(ci.lhs).is_subset_of(eval(ci.rhs)))
                return i;
        }
    }
    return std::nullopt;
}

/// Whether (unravel(g, v, k), root) simulates into (g2, v2). Materializes the
/// unravelling when it is small and falls back to bounded simulation.
inline bool unravelling_simulates(const DescriptionGraph& g, Vertex v, std::size_t k, const DescriptionGraph& g2,
                                  Vertex v2, std::size_t tree_cap = 200'000) {
    try {
        auto t = unravel(g, v, k, GraphLimits{tree_cap});
        return simulates(t.graph, t.root, g2, v2);
    } catch (const ResourceError&) {
        return bounded_simulation(g, g2, k).contains(v, v2);
    }
}

/// If the depth d = mvf(g,v)·mvf(g2,v2) unravelling simulates into (g2, v2),
/// so do the unravellings of depth d+1..d+4.
inline bool claim_dsim_check(const DescriptionGraph& g, Vertex v, const DescriptionGraph& g2, Vertex v2) {
    std::size_t d = mvf(g, v) * mvf(g2, v2);
    if (!unravelling_simulates(g, v, d, g2, v2))
        return true;
    for (std::size_t j = 1; j <= 4; ++j)
        if (!unravelling_simulates(g, v, d + j, g2, v2))
            return false;
    return true;
}

enum class FbpSide { Rhs, Lhs };

/// Rhs: A ⊑ ∃r^n.⊤ holds in fig4i. Lhs: ∃s.∃r^n.B ⊑ A holds in fig4ii.
/// Checked for n = 1..n_max through extensions.
inline bool fbp_witness_check(FbpSide side, std::size_t n_max) {
    auto i = builtin_fixture(side == FbpSide::Rhs ? "fig4i" : "fig4ii");
    Symbol r("r"), s("s");
    for (std::size_t n = 1; n <= n_max; ++n) {
        Concept lhs, rhs;
        if (side == FbpSide::Rhs) {
            lhs = Concept::atom("A");
            rhs = Concept::exists_chain(r, n, Concept::top());
        } else {
            lhs = Concept::exists(s, Concept::exists_chain(r, n, Concept::atom("B")));
            rhs = Concept::atom("A");
        }
        if (!extension(lhs, i).is_subset_of(extension(rhs, i)))
            return false;
    }
    return true;
}

/// The fig5 depth boundary. Failures are appended to `why` when given.
inline bool exponential_depth_check(std::string* why = nullptr) {
    auto i = builtin_fixture("fig5");
    ModelView m(i);
    Symbol r("r");
    auto x = [&](const char* id) { return i.require_index(id); };
    bool ok = true;
    auto fail = [&](const std::string& s) {
        ok = false;
        if (why)
            *why += s + "\n";
    };
    Concept a = Concept::atom("A");
    for (const char* h : {"x1", "x2", "x3"})
        if (!m.member(x(h), Concept::exists_chain(r, 29, a)))
            fail(std::string(h) + " not in some r^29.A");
    for (std::size_t d = 0; d <= 29; ++d)
        if (m.member(x("x4"), Concept::exists_chain(r, d, a)))
            fail("x4 in some r^" + std::to_string(d) + ".A");
    for (std::size_t d = 0; d <= 35; ++d)
        if (!m.member(x("x5"), Concept::exists_chain(r, d, a)))
            fail("x5 not in some r^" + std::to_string(d) + ".A");
    for (std::size_t e = 1; e <= 10; ++e) {
        bool in = m.member(x("x1"), Concept::exists_chain(r, e, a));
        if (in != (e % 2 == 1))
            fail("x1 membership in some r^" + std::to_string(e) + ".A is " + (in ? "true" : "false"));
    }
    ElementSet hubs = i.make_set({"x1", "x2", "x3"});
    MmscEngine engine(i);
    if (!engine.extension(engine.at_depth(hubs, 28)).test(x("x4")))
        fail("x4 not in the depth-28 mmsc of {x1,x2,x3}");
    if (engine.extension(engine.at_depth(hubs, 29)).test(x("x4")))
        fail("x4 in the depth-29 mmsc of {x1,x2,x3}");
    return ok;
}

// Property checks. Each returns an empty string on success and a description
// of the violation otherwise.

/// Extensions at the chosen depth and at chosen_depth + extra agree.
inline std::string mmsc_fixpoint_check(const MmscEngine& e, const ElementSet& x, std::size_t extra = 5) {
    auto rep = e.depth(x);
    auto a = e.extension(e.at_depth(x, rep.chosen_depth));
    auto b = e.extension(e.at_depth(x, rep.chosen_depth + extra));
    if (a == b)
        return {};
    const auto& i = e.interpretation();
    return "X=" + format_set(i, x) + " depth " + std::to_string(rep.chosen_depth) + ": " + format_set(i, a) +
           " vs " + format_set(i, b) + " at +" + std::to_string(extra);
}

/// mmsc_k(mmsc_k(X)^I) and mmsc_k(X) are ∅-equivalent.
inline std::string r5_check(const MmscEngine& e, const ElementSet& x, std::size_t k) {
    Concept c = e.at_depth(x, k);
    Concept c2 = e.at_depth(e.extension(c), k);
    if (equivalent_empty(c, c2))
        return {};
    return "k=" + std::to_string(k) + " X=" + format_set(e.interpretation(), x) + ": " + render_concept(c) +
           " vs " + render_concept(c2);
}

/// (∃r.mmsc(C^I))^I = (∃r.C)^I and (mmsc(C^I) ⊓ D)^I = (C ⊓ D)^I.
inline std::string monotonicity_check(const MmscEngine& e, const Concept& c, const Concept& d, Symbol r) {
    Concept m = e.adaptive(e.extension(c));
    if (e.extension(Concept::exists(r, m)) != e.extension(Concept::exists(r, c)))
        return "exists " + r.str() + " over " + render_concept(c);
    if (e.extension(Concept::conjunction({m, d})) != e.extension(Concept::conjunction({c, d})))
        return "conjunction of " + render_concept(c) + " with " + render_concept(d);
    return {};
}

/// approx(C)^I = C^I = mmsc(C^I)^I.
inline std::string app_sub_check(const MmscEngine& e, const Concept& c) {
    ElementSet ext = e.extension(c);
    if (e.extension(e.lower_approximation(c)) != ext)
        return "lower approximation of " + render_concept(c);
    if (e.extension(e.adaptive(ext)) != ext)
        return "mmsc of the extension of " + render_concept(c);
    return {};
}

/// From the greatest simulation of a tree into g, a functional simulation can
/// be extracted, and it is a simulation contained in the original one.
inline std::string func_sim_check(const DescriptionTree& t, const DescriptionGraph& g, Vertex v2) {
    auto z = greatest_simulation(t.graph, g);
    if (!z.contains(t.root, v2))
        return {};
    auto f = functional_simulation(t, g, v2, z);
    if (f.empty())
        return "no functional simulation extracted";
    auto zf = relation_of_function(f, g.size());
    for (std::size_t v = 0; v < zf.rows.size(); ++v) {
        if (zf.rows[v].count() > 1)
            return "not functional";
        if (!zf.rows[v].is_subset_of(z.rows[v]))
            return "not contained in the greatest simulation";
    }
    if (!is_simulation(t.graph, t.root, g, v2, zf))
        return "extracted relation is not a simulation";
    return {};
}

/// Every walk of the reachable product from `start` (up to `max_len` edges)
/// projects onto a walk of the same length in each factor.
inline std::string prod_projection_check(const DescriptionGraph& g, const std::vector<Vertex>& start,
                                         std::size_t max_len = 6, std::size_t max_walks = 20000) {
    auto p = product_reachable(g, start);
    if (p.tuples[0] != start)
        return "start tuple is not vertex 0";
    std::vector<Vertex> walk{0};
    std::vector<Symbol> roles;
    std::size_t seen = 0;
    std::string err;
    std::function<void(Vertex)> dfs = [&](Vertex u) {
        if (!err.empty() || ++seen > max_walks)
            return;
        const std::size_t len = roles.size();
        for (std::size_t i = 0; i < start.size(); ++i) {
            for (std::size_t j = 0; j < len; ++j) {
                Vertex a = p.tuples[walk[j]][i];
                Vertex b = p.tuples[walk[j + 1]][i];
                if (!g.has_edge(a, roles[j], b)) {
                    err = "factor " + std::to_string(i) + " lacks edge at step " + std::to_string(j);
                    return;
                }
            }
            if (p.tuples[walk[0]][i] != start[i]) {
                err = "projection does not start at the component vertex";
                return;
            }
        }
        if (len == max_len)
            return;
        for (const auto& e : p.graph.out(u)) {
            walk.push_back(e.target);
            roles.push_back(e.role);
            dfs(e.target);
            walk.pop_back();
            roles.pop_back();
        }
    };
    dfs(0);
    return err;
}

} // namespace ciforge::testkit
