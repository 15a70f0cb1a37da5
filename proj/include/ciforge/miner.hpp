#pragma once

#include "concept.hpp"
#include "enumeration.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "interpretation.hpp"
#include "mmsc.hpp"
#include "reasoner.hpp"
#include "semantics.hpp"
#include "simulation.hpp"
#include "tbox.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace ciforge {

/// Subset of the attribute list, one bit per attribute.
using AttrSet = boost::dynamic_bitset<>;

struct MinerOptions {
    /// Element subsets are enumerated, so the domain must stay small.
    std::size_t max_domain = 12;
    /// Naive mode enumerates every attribute subset.
    std::size_t max_naive_attributes = 16;
    MmscOptions mmsc{};
};

namespace detail {

/// ∅ ⊨ c ⊑ d by structural recursion on canonical concepts, memoized on node
/// pairs. Agrees with `subsumed_empty` but only visits the pairs it needs,
/// which matters for the deep, heavily shared concepts the miner produces.
class SubsumptionCache {
public:
    bool operator()(const Concept& c, const Concept& d) {
        if (c.is_bottom() || d.is_top() || c == d)
            return true;
        if (d.is_bottom() || c.is_top())
            return false;
        auto k = std::make_pair(c.id(), d.id());
        if (auto it = memo_.find(k); it != memo_.end())
            return it->second.ok;
        bool ok = true;
        auto cs = c.conjuncts();
        for (const auto& p : d.conjuncts()) {
            if (p.kind() == ConceptKind::Atom) {
                ok = std::find(cs.begin(), cs.end(), p) != cs.end();
            } else {
                ok = false;
                for (const auto& q : cs)
                    if (q.kind() == ConceptKind::Exists && q.role() == p.role() && (*this)(q.filler(), p.filler())) {
                        ok = true;
                        break;
                    }
            }
            if (!ok)
                break;
        }
        memo_.emplace(k, Entry{c, d, ok});
        return ok;
    }

private:
    struct Hash {
        std::size_t operator()(const std::pair<const void*, const void*>& p) const noexcept {
            return std::hash<const void*>()(p.first) * 1000003u ^ std::hash<const void*>()(p.second);
        }
    };
    // Keys are node addresses; holding the concepts keeps them from being reused.
    struct Entry {
        Concept c, d;
        bool ok;
    };
    std::unordered_map<std::pair<const void*, const void*>, Entry, Hash> memo_;
};

} // namespace detail

struct AttributeSet {
    std::vector<Concept> attributes;
    std::vector<ElementSet> ext;
    std::size_t domain_size = 0;

    std::size_t size() const noexcept { return attributes.size(); }
    AttrSet empty() const { return AttrSet(attributes.size()); }

    /// Extension of ⊓U, i.e. the intersection of the members' extensions.
    ElementSet extent(const AttrSet& u) const {
        ElementSet e(domain_size);
        e.set();
        for (auto m = u.find_first(); m != AttrSet::npos; m = u.find_next(m))
            e &= ext[m];
        return e;
    }

    /// Attributes whose extension contains e.
    AttrSet intent(const ElementSet& e) const {
        AttrSet u(attributes.size());
        for (std::size_t m = 0; m < attributes.size(); ++m)
            if (e.is_subset_of(ext[m]))
                u.set(m);
        return u;
    }

    Concept conjunction(const AttrSet& u) const {
        std::vector<Concept> parts;
        for (auto m = u.find_first(); m != AttrSet::npos; m = u.find_next(m))
            parts.push_back(attributes[m]);
        return Concept::conjunction(std::move(parts));
    }
};

struct AttributeStats {
    std::vector<std::pair<ElementSet, DepthReport>> depths;
    std::size_t candidates = 0;
};

/// {⊥} ∪ active concept names ∪ {∃r.mmsc_adaptive(X) | r active, ∅ ≠ X ⊆ Δ},
/// with existentials merged when they have equal extensions and are
/// ∅-equivalent. Order: ⊥, names, then existentials by the concept order.
inline AttributeSet attribute_set(const MmscEngine& engine, const MinerOptions& opt = {},
                                  AttributeStats* stats = nullptr) {
    const Interpretation& i = engine.interpretation();
    const std::size_t n = i.size();
    if (n > opt.max_domain)
        throw ResourceError("domain has " + std::to_string(n) + " elements; the attribute set enumerates all " +
                            "subsets and is capped at " + std::to_string(opt.max_domain));
    AttributeSet a;
    a.domain_size = n;
    a.attributes.push_back(Concept::bottom());
    a.ext.push_back(i.empty_set());
    auto sig = active_signature(i);
    for (const auto& name : sig.concept_names) {
        a.attributes.push_back(Concept::atom(name));
        a.ext.push_back(i.concept_extension(name));
    }
    if (sig.role_names.empty())
        return a;

    std::vector<Symbol> roles;
    for (const auto& r : sig.role_names)
        roles.emplace_back(r);
    std::unordered_map<Concept, ElementSet> filler_ext;
    ElementSet x(n);
    for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
        for (std::size_t b = 0; b < n; ++b)
            x[b] = (bits >> b) & 1u;
        Concept e = engine.adaptive(x);
        if (stats)
            stats->depths.emplace_back(x, engine.depth(x));
        if (!filler_ext.count(e))
            filler_ext.emplace(e, engine.extension(e));
    }

    std::vector<std::pair<Concept, ElementSet>> cand;
    for (const auto& [e, ee] : filler_ext)
        for (auto r : roles)
            cand.emplace_back(Concept::exists(r, e), engine.model().preimage()(r, ee));
    std::sort(cand.begin(), cand.end(),
              [](const auto& p, const auto& q) { return Concept::compare(p.first, q.first) < 0; });
    if (stats)
        stats->candidates = cand.size();

    detail::SubsumptionCache sub;
    std::unordered_map<ElementSet, std::vector<std::size_t>, detail::ElementSetHash> by_ext;
    for (auto& [c, ce] : cand) {
        auto& same = by_ext[ce];
        bool dup = std::any_of(same.begin(), same.end(), [&](std::size_t k) {
            return sub(a.attributes[k], c) && sub(c, a.attributes[k]);
        });
        if (dup)
            continue;
        same.push_back(a.attributes.size());
        a.attributes.push_back(c);
        a.ext.push_back(ce);
    }
    return a;
}

inline AttributeSet attribute_set(const Interpretation& i, const MinerOptions& opt = {}) {
    return attribute_set(MmscEngine(i, opt.mmsc), opt);
}

/// {m | (⊓U)^I ⊆ m^I}.
inline AttrSet intent_closure(const AttributeSet& a, const AttrSet& u) { return a.intent(a.extent(u)); }

struct Intent {
    AttrSet attributes;
    ElementSet extent;
};

/// Every closed attribute set once, in lectic order (NextClosure).
inline std::vector<Intent> enumerate_intents(const AttributeSet& a) {
    const std::size_t n = a.size();
    std::vector<Intent> out;
    AttrSet cur = intent_closure(a, a.empty());
    for (;;) {
        out.push_back({cur, a.extent(cur)});
        bool advanced = false;
        AttrSet prefix = cur;
        for (std::size_t i = n; i-- > 0;) {
            // prefix = cur ∩ {0..i-1}
            prefix.reset(i);
            if (cur.test(i))
                continue;
            AttrSet probe = prefix;
            probe.set(i);
            AttrSet next = intent_closure(a, probe);
            AttrSet low = next;
            for (std::size_t j = i; j < n; ++j)
                low.reset(j);
            if (low == prefix) {
                cur = std::move(next);
                advanced = true;
                break;
            }
        }
        if (!advanced)
            break;
    }
    return out;
}

enum class MiningMode { Naive, Intents };

inline const char* to_string(MiningMode m) { return m == MiningMode::Naive ? "naive" : "intents"; }

struct MiningReport {
    MiningMode mode = MiningMode::Intents;
    std::size_t domain_size = 0;
    std::size_t attribute_count = 0;
    std::size_t candidate_count = 0;
    std::size_t intent_count = 0;
    std::size_t representative_count = 0;
    std::size_t axiom_count = 0;
    std::size_t max_role_depth = 0;
    std::uint64_t graph_mmvf = 0;
    std::vector<std::pair<std::vector<std::string>, DepthReport>> depths;

    std::vector<std::string> summary(bool with_depths = false) const {
        std::vector<std::string> lines;
        lines.push_back(std::string("mode: ") + to_string(mode));
        lines.push_back("domain size: " + std::to_string(domain_size));
        lines.push_back("mmvf: " + std::to_string(graph_mmvf));
        lines.push_back("attributes: " + std::to_string(attribute_count) + " (from " +
                        std::to_string(candidate_count) + " candidates)");
        if (mode == MiningMode::Intents)
            lines.push_back("intents: " + std::to_string(intent_count));
        else
            lines.push_back("representatives: " + std::to_string(representative_count));
        lines.push_back("axioms: " + std::to_string(axiom_count));
        lines.push_back("max role depth: " + std::to_string(max_role_depth));
        if (with_depths)
            for (const auto& [x, d] : depths) {
                std::string s = "depth {";
                for (std::size_t k = 0; k < x.size(); ++k)
                    s += (k ? "," : "") + x[k];
                s += "}: product " + std::to_string(d.product_size) + " mvf " + std::to_string(d.product_mvf) +
                     " chosen " + std::to_string(d.chosen_depth) + " " + to_string(d.branch);
                lines.push_back(s);
            }
        return lines;
    }
};

/// Index of the first axiom not satisfied by i, or -1. Extensions come from
/// the recursive evaluator, not from the simulation code the miner uses.
inline long first_unsound_axiom(const Interpretation& i, const TBox& t) {
    SemanticEvaluator eval(i);
    const auto& axioms = t.axioms();
    for (std::size_t k = 0; k < axioms.size(); ++k) {
        const ElementSet& l = eval(axioms[k].lhs);
        const ElementSet& r = eval(axioms[k].rhs);
        bool ok = axioms[k].kind == Axiom::Kind::EquivalentTo ? l == r : l.is_subset_of(r);
        if (!ok)
            return static_cast<long>(k);
    }
    return -1;
}

/// I ⊨ every axiom of t.
inline bool check_base_sound(const Interpretation& i, const TBox& t) { return first_unsound_axiom(i, t) < 0; }

namespace detail {

/// ⊓U without conjuncts that another conjunct already ∅-entails; among
/// ∅-equivalent conjuncts the lowest index stays.
inline Concept reduced_conjunction(const AttributeSet& a, const AttrSet& u, SubsumptionCache& sub) {
    if (u.test(0))
        return Concept::bottom();
    std::vector<std::size_t> ms;
    for (auto m = u.find_first(); m != AttrSet::npos; m = u.find_next(m))
        ms.push_back(m);
    std::vector<Concept> parts;
    for (std::size_t x : ms) {
        bool drop = false;
        for (std::size_t y : ms) {
            if (y == x || !a.ext[y].is_subset_of(a.ext[x]))
                continue;
            if (!sub(a.attributes[y], a.attributes[x]))
                continue;
            if (!sub(a.attributes[x], a.attributes[y]) || y < x) {
                drop = true;
                break;
            }
        }
        if (!drop)
            parts.push_back(a.attributes[x]);
    }
    return Concept::conjunction(std::move(parts));
}

inline void add_equivalence_unless_trivial(TBox& t, const Concept& c, const Concept& m) {
    if (c != m)
        t.add_equivalence(c, m);
}

} // namespace detail

/// Mines a base of the CIs valid in i. Every axiom is re-checked against i
/// before returning; a violation throws SoundnessError.
inline std::pair<TBox, MiningReport> build_base(const Interpretation& i, MiningMode mode,
                                                const MinerOptions& opt = {}) {
    MmscEngine engine(i, opt.mmsc);
    AttributeStats stats;
    AttributeSet a = attribute_set(engine, opt, &stats);

    MiningReport report;
    report.mode = mode;
    report.domain_size = i.size();
    report.attribute_count = a.size();
    report.candidate_count = stats.candidates;
    report.graph_mmvf = engine.graph_mmvf();
    for (const auto& [x, d] : stats.depths)
        report.depths.emplace_back(i.ids_of(x), d);

    TBox t;
    detail::SubsumptionCache sub;
    if (mode == MiningMode::Naive) {
        const std::size_t n = a.size();
        if (n > opt.max_naive_attributes)
            throw ResourceError("naive mode enumerates all attribute subsets; " + std::to_string(n) +
                                " attributes exceed the cap of " + std::to_string(opt.max_naive_attributes));
        // Representative per extension: the conjunction of the first subset
        // (in binary counting order) that has it.
        std::map<std::vector<std::size_t>, Concept> reps;
        std::vector<std::pair<ElementSet, Concept>> rep_list;
        std::unordered_map<ElementSet, std::size_t, detail::ElementSetHash> rep_index;
        AttrSet u(n);
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
            for (std::size_t b = 0; b < n; ++b)
                u[b] = (bits >> b) & 1u;
            Concept c = a.conjunction(u);
            ElementSet e = a.extent(u);
            if (!c.is_bottom())
                detail::add_equivalence_unless_trivial(t, c, engine.adaptive(e));
            if (!rep_index.count(e)) {
                rep_index.emplace(e, rep_list.size());
                rep_list.emplace_back(e, c);
            }
        }
        for (const auto& [e1, c1] : rep_list)
            for (const auto& [e2, c2] : rep_list)
                if (e1 != e2 && e1.is_subset_of(e2))
                    t.add_inclusion(c1, c2);
        report.representative_count = rep_list.size();
    } else {
        auto intents = enumerate_intents(a);
        report.intent_count = intents.size();
        report.representative_count = intents.size();
        std::unordered_map<AttrSet, std::size_t> index;
        std::vector<Concept> rep;
        for (std::size_t k = 0; k < intents.size(); ++k) {
            index.emplace(intents[k].attributes, k);
            rep.push_back(detail::reduced_conjunction(a, intents[k].attributes, sub));
        }
        auto rep_of = [&](const AttrSet& closed) -> const Concept& { return rep[index.at(closed)]; };

        // (a) each representative is equivalent to the MMSC of its extension.
        for (std::size_t k = 0; k < intents.size(); ++k)
            if (!rep[k].is_bottom())
                detail::add_equivalence_unless_trivial(t, rep[k], engine.adaptive(intents[k].extent));

        // (b) cover edges, upwards in the extension order. The upper covers of
        // an extent E are the minimal closures of E ∪ {g}.
        for (std::size_t k = 0; k < intents.size(); ++k) {
            const ElementSet& e = intents[k].extent;
            std::vector<ElementSet> up;
            for (std::size_t g = 0; g < i.size(); ++g) {
                if (e.test(g))
                    continue;
                ElementSet eg = e;
                eg.set(g);
                ElementSet cl = a.extent(a.intent(eg));
                if (std::find(up.begin(), up.end(), cl) == up.end())
                    up.push_back(cl);
            }
            for (const auto& cand : up) {
                bool minimal = std::none_of(up.begin(), up.end(), [&](const ElementSet& o) {
                    return o != cand && o.is_subset_of(cand);
                });
                if (minimal)
                    t.add_inclusion(rep[k], rep_of(a.intent(cand)));
            }
        }

        // (c) meets: R_U ⊓ R_cl({m}) ⊑ R_cl(U ∪ {m}) whenever U ∪ cl({m}) is
        // not closed yet.
        std::vector<AttrSet> single(a.size());
        for (std::size_t m = 0; m < a.size(); ++m) {
            AttrSet s = a.empty();
            s.set(m);
            single[m] = intent_closure(a, s);
        }
        for (std::size_t k = 0; k < intents.size(); ++k) {
            const AttrSet& u = intents[k].attributes;
            if (u.test(0))
                continue;
            for (std::size_t m = 0; m < a.size(); ++m) {
                if (u.test(m))
                    continue;
                AttrSet joined = u | single[m];
                AttrSet w = intent_closure(a, joined);
                if (w == joined)
                    continue;
                Concept lhs = Concept::conjunction({rep[k], rep_of(single[m])});
                if (lhs.is_bottom())
                    continue;
                t.add_inclusion(lhs, rep_of(w));
            }
        }

        // (d) every attribute, and ⊤, lies below the representative of its closure.
        for (std::size_t m = 0; m < a.size(); ++m)
            t.add_inclusion(a.attributes[m], rep_of(single[m]));
        t.add_inclusion(Concept::top(), rep_of(intent_closure(a, a.empty())));
    }
    t.sort();
    report.axiom_count = t.size();
    report.max_role_depth = t.max_role_depth();

    if (auto bad = first_unsound_axiom(i, t); bad >= 0)
        throw SoundnessError("mined axiom not satisfied by the interpretation: " +
                             render_axiom(t.axioms()[static_cast<std::size_t>(bad)]));
    return {std::move(t), std::move(report)};
}

struct CompletenessOptions {
    /// Counterexamples kept in the report; the count covers all of them.
    std::size_t max_reported = 20;
    /// Stop after this many failing left-hand sides (0: never).
    std::size_t stop_after = 0;
};

struct CompletenessReport {
    std::uint64_t concepts = 0;       // left-hand sides examined
    std::uint64_t fast_checks = 0;    // settled by the mmsc simulation test
    std::uint64_t literal_checks = 0; // needed the prime-by-prime fallback
    std::uint64_t failures = 0;       // left-hand sides with a counterexample
    std::vector<ConceptInclusion> counterexamples;
    bool stopped_early = false;

    bool complete() const noexcept { return failures == 0 && !stopped_early; }
};

/// Checks that t entails every C ⊑ D valid in i, for C and D ranging over the
/// canonical concepts of role depth ≤ depth and size ≤ size_cap over the
/// active signature.
///
/// Per C, the canonical model of t gets a fresh element x_C. If x_C
/// satisfies the depth-bounded MMSC of C^I (a simulation from the product
/// graph at C^I), every valid D follows at once. Otherwise the primes D with
/// C^I ⊆ D^I are tested one by one, which is exact since a conjunction holds
/// iff its conjuncts do.
inline CompletenessReport check_base_complete(const Interpretation& i, const TBox& t, std::size_t depth,
                                              std::size_t size_cap, const CompletenessOptions& opt = {}) {
    using Atom = Reasoner::Atom;
    CompletenessReport rep;
    if (size_cap == 0)
        return rep;
    auto sig = active_signature(i);
    ConceptSpace space(sig, depth, size_cap);
    const auto& primes = space.top_primes();

    Reasoner r(t);
    for (const auto& n : sig.concept_names)
        r.name_atom(Symbol(n));
    SemanticEvaluator eval(i);
    struct PrimeInfo {
        ElementSet ext;
        bool is_atom;
        Atom atom;
        std::uint32_t role;
    };
    std::vector<PrimeInfo> info;
    info.reserve(primes.size());
    for (const auto& p : primes) {
        if (p.kind() == ConceptKind::Atom)
            info.push_back({eval(p), true, r.name_atom(p.name()), 0});
        else
            info.push_back({eval(p), false, r.rhs_atom(p.filler()), p.role().id()});
    }
    for (const auto& p : info)
        if (!p.is_atom)
            r.prepare(p.atom);
    r.prepare_all();

    // Product graphs at C^I and the bounded-simulation memo into contexts.
    auto g = graph_of_interpretation(i);
    struct Target {
        ProductGraph p;
        std::vector<std::vector<Atom>> labels; // reasoner atoms of each vertex's names
        std::unordered_map<std::uint64_t, bool> memo;
    };
    std::unordered_map<ElementSet, Target, detail::ElementSetHash> targets;
    auto target_of = [&](const ElementSet& x) -> Target& {
        auto it = targets.find(x);
        if (it != targets.end())
            return it->second;
        Target tg{product_reachable(std::vector<const DescriptionGraph*>(x.count(), &g), detail::tuple_of(x), {},
                                    depth),
                  {},
                  {}};
        for (Vertex v = 0; v < tg.p.graph.size(); ++v) {
            std::vector<Atom> ls;
            for (auto s : tg.p.graph.labels(v))
                ls.push_back(r.name_atom(s));
            tg.labels.push_back(std::move(ls));
        }
        return targets.emplace(x, std::move(tg)).first->second;
    };
    // Context y satisfies the depth-k unravelling of product vertex v.
    std::function<bool(Target&, Vertex, Atom, std::size_t)> sim = [&](Target& tg, Vertex v, Atom y,
                                                                      std::size_t k) -> bool {
        std::uint64_t key = (std::uint64_t{y} << 32) | (std::uint64_t{v} << 8) | k;
        if (auto it = tg.memo.find(key); it != tg.memo.end())
            return it->second;
        bool ok = true;
        if (!r.context_holds(y, Reasoner::bottom_atom)) {
            for (Atom l : tg.labels[v])
                if (!r.context_holds(y, l)) {
                    ok = false;
                    break;
                }
            if (ok && k > 0)
                for (const auto& e : tg.p.graph.out(v)) {
                    bool found = false;
                    for (Atom z : r.successors(y, e.role.id()))
                        if (sim(tg, e.target, z, k - 1)) {
                            found = true;
                            break;
                        }
                    if (!found) {
                        ok = false;
                        break;
                    }
                }
        }
        tg.memo.emplace(key, ok);
        return ok;
    };

    Reasoner::Probe probe(r);
    auto fast = [&](const ElementSet& x) -> bool {
        if (probe.unsatisfiable())
            return true;
        if (x.none())
            return false;
        Target& tg = target_of(x);
        for (Atom l : tg.labels[0])
            if (!probe.contains(l))
                return false;
        if (depth == 0)
            return true;
        for (const auto& e : tg.p.graph.out(0)) {
            bool found = false;
            for (const auto& [role, y] : probe.edges())
                if (role == e.role.id() && sim(tg, e.target, y, depth - 1)) {
                    found = true;
                    break;
                }
            if (!found)
                return false;
        }
        return true;
    };
    auto check = [&](const std::function<Concept()>& lhs, const ElementSet& x) {
        ++rep.concepts;
        if (fast(x)) {
            ++rep.fast_checks;
            return;
        }
        ++rep.literal_checks;
        std::optional<Concept> witness;
        if (x.none())
            witness = Concept::bottom();
        else
            for (std::size_t k = 0; k < primes.size(); ++k)
                if (x.is_subset_of(info[k].ext) && !probe.holds(primes[k])) {
                    witness = primes[k];
                    break;
                }
        if (!witness)
            return;
        ++rep.failures;
        if (rep.counterexamples.size() < opt.max_reported)
            rep.counterexamples.push_back({lhs(), *witness});
    };

    // ⊤ first; ⊥ is entailed to be below everything.
    check([] { return Concept::top(); }, i.full_set());
    std::vector<Reasoner::Probe::Mark> marks;
    std::vector<ElementSet> exts{i.full_set()};
    struct Stop {};
    try {
        ConceptSpace::for_each_prime_set(primes, size_cap, [&](const std::vector<std::size_t>& idx) {
            if (opt.stop_after && rep.failures >= opt.stop_after) {
                rep.stopped_early = true;
                throw Stop{};
            }
            while (marks.size() >= idx.size()) {
                probe.undo(marks.back());
                marks.pop_back();
                exts.pop_back();
            }
            const auto& p = info[idx.back()];
            marks.push_back(probe.mark());
            exts.push_back(exts.back() & p.ext);
            if (p.is_atom)
                probe.add_atom(p.atom);
            else
                probe.add_edge(p.role, p.atom);
            check(
                [&] {
                    std::vector<Concept> parts;
                    for (auto k : idx)
                        parts.push_back(primes[k]);
                    return Concept::conjunction(std::move(parts));
                },
                exts.back());
        });
    } catch (const Stop&) {
    }
    return rep;
}

} // namespace ciforge
