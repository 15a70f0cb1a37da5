#pragma once

#include "concept.hpp"
#include "tbox.hpp"

#include <algorithm>
#include <optional>
#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace ciforge {

/// Saturation-based reasoner for EL⊥ TBoxes. Axioms are normalized to
///   A ⊑ B,  A1 ⊓ ... ⊓ An ⊑ B,  A ⊑ ∃r.B,  ∃r.A ⊑ B
/// over atoms that include ⊤, ⊥ and fresh names, then closed under the
/// completion rules. Atoms are dense integers; fresh atoms are numbered in
/// order of creation.
class Reasoner {
public:
    using Atom = std::uint32_t;
    static constexpr Atom top_atom = 0;
    static constexpr Atom bottom_atom = 1;

    Reasoner() {
        names_ = {"Top", "Bottom"};
        grow(2);
    }

    explicit Reasoner(const TBox& t) : Reasoner() {
        for (const auto& ci : t.inclusions())
            add_inclusion(ci.lhs, ci.rhs);
        saturate();
    }

    /// Axioms may be added after queries; existing contexts are updated.
    void add_inclusion(const Concept& lhs, const Concept& rhs) {
        told(lhs_atom(lhs), rhs_atom(rhs));
        holds_memo_.clear();
    }

    /// Atom X with X ⊑ c; only ever occurs on the left of new axioms, so it can
    /// be added after saturation without disturbing existing contexts.
    Atom rhs_atom(const Concept& c) {
        switch (c.kind()) {
        case ConceptKind::Top:
            return top_atom;
        case ConceptKind::Bottom:
            return bottom_atom;
        case ConceptKind::Atom:
            return name_atom(c.name());
        default:
            break;
        }
        if (auto it = rhs_memo_.find(c); it != rhs_memo_.end())
            return it->second;
        Atom f = fresh("R");
        if (c.kind() == ConceptKind::And) {
            for (const auto& part : c.args())
                told(f, rhs_atom(part));
        } else {
            Atom b = rhs_atom(c.filler());
            ex_rhs_[f].push_back({c.role().id(), b});
        }
        rhs_memo_.emplace(c, f);
        return f;
    }

    /// Atom X with c ⊑ X.
    Atom lhs_atom(const Concept& c) {
        switch (c.kind()) {
        case ConceptKind::Top:
            return top_atom;
        case ConceptKind::Bottom:
            return bottom_atom;
        case ConceptKind::Atom:
            return name_atom(c.name());
        default:
            break;
        }
        if (auto it = lhs_memo_.find(c); it != lhs_memo_.end())
            return it->second;
        Atom f = fresh("L");
        if (c.kind() == ConceptKind::And) {
            std::vector<Atom> parts;
            for (const auto& part : c.args())
                parts.push_back(lhs_atom(part));
            std::sort(parts.begin(), parts.end());
            parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
            auto id = static_cast<std::uint32_t>(conj_.size());
            conj_.push_back({parts, f});
            for (Atom a : parts)
                conj_index_[a].push_back(id);
            for (Atom ctx = 0; ctx < s_.size(); ++ctx)
                if (has_context_[ctx] &&
                    std::all_of(parts.begin(), parts.end(), [&](Atom a) { return s_[ctx].count(a) > 0; }))
                    queue_.push_back({ctx, f});
        } else {
            Atom a = lhs_atom(c.filler());
            std::uint32_t role = c.role().id();
            ex_lhs_[key(role, a)].push_back(f);
            if (derived_[a])
                for (const auto& [from, out] : edges_)
                    for (const auto& [r, to] : out)
                        if (r == role && s_[to].count(a))
                            queue_.push_back({from, f});
        }
        lhs_memo_.emplace(c, f);
        return f;
    }

    /// Runs the completion rules until nothing changes. Contexts are created
    /// on demand for queried atoms and for targets of derived ∃-edges.
    void saturate() {
        while (!queue_.empty()) {
            auto [ctx, x] = queue_.front();
            queue_.pop_front();
            process(ctx, x);
        }
    }

    /// S(a) after saturation, creating and saturating the context if needed.
    const std::unordered_set<Atom>& subsumers(Atom a) {
        ensure_context(a);
        saturate();
        return s_[a];
    }

    bool unsatisfiable(Atom a) { return subsumers(a).count(bottom_atom) > 0; }

    bool subsumes(Atom a, Atom b) {
        const auto& s = subsumers(a);
        return s.count(b) || s.count(bottom_atom);
    }

    /// T ⊨ c ⊑ d, read off the saturation: x_c lies in d in the canonical model.
    bool entails(const Concept& c, const Concept& d) {
        if (c.is_bottom() || d.is_top())
            return true;
        Atom x = rhs_atom(c);
        if (unsatisfiable(x))
            return true;
        return holds(x, d);
    }

    /// Whether the canonical-model element for context `x` is an instance of d.
    bool holds(Atom x, const Concept& d) {
        ensure_context(x);
        saturate();
        auto k = std::make_pair(x, d);
        if (auto it = holds_memo_.find(k); it != holds_memo_.end())
            return it->second;
        bool result = false;
        const auto& s = s_[x];
        switch (d.kind()) {
        case ConceptKind::Top:
            result = true;
            break;
        case ConceptKind::Bottom:
            result = s.count(bottom_atom) > 0;
            break;
        case ConceptKind::Atom: {
            auto it = name_atoms_.find(d.name().id());
            result = s.count(bottom_atom) || (it != name_atoms_.end() && s.count(it->second));
            break;
        }
        case ConceptKind::And:
            result = std::all_of(d.args().begin(), d.args().end(), [&](const Concept& p) { return holds(x, p); });
            break;
        case ConceptKind::Exists: {
            result = false;
            auto edges = successors(x, d.role().id());
            for (Atom y : edges)
                if (holds(y, d.filler())) {
                    result = true;
                    break;
                }
            break;
        }
        }
        holds_memo_.emplace(k, result);
        return result;
    }

    /// r-successors of a context in the canonical model.
    std::vector<Atom> successors(Atom x, std::uint32_t role) const {
        std::vector<Atom> out;
        auto it = edges_.find(x);
        if (it == edges_.end())
            return out;
        for (const auto& [r, y] : it->second)
            if (r == role)
                out.push_back(y);
        return out;
    }

    std::size_t atom_count() const noexcept { return names_.size(); }
    const std::string& atom_name(Atom a) const { return names_.at(a); }

    std::optional<Atom> find_name(const std::string& n) const {
        auto it = name_atoms_.find(Symbol(n).id());
        if (it == name_atoms_.end())
            return std::nullopt;
        return it->second;
    }

    Atom name_atom(Symbol s) {
        auto [it, fresh_entry] = name_atoms_.emplace(s.id(), static_cast<Atom>(names_.size()));
        if (fresh_entry) {
            names_.push_back(s.str());
            grow(names_.size());
        }
        return it->second;
    }

    /// A context that lives outside the reasoner: seeded with atoms and
    /// ∃-edges into existing contexts, saturated incrementally, and rolled back
    /// to a mark. Nothing points at it, so the reasoner itself is untouched as
    /// long as the targets were saturated beforehand (see `prepare`).
    class Probe {
    public:
        explicit Probe(Reasoner& r) : r_(&r), in_(r.atom_count(), 0) { add_atom(top_atom); }

        struct Mark {
            std::size_t atoms, edges;
        };
        Mark mark() const { return {trail_.size(), edges_.size()}; }
        void undo(Mark m) {
            while (trail_.size() > m.atoms) {
                in_[trail_.back()] = 0;
                trail_.pop_back();
            }
            edges_.resize(m.edges);
        }

        void add_atom(Atom a) {
            work_.push_back(a);
            run();
        }
        /// Target contexts must already exist and be saturated.
        void add_edge(std::uint32_t role, Atom to) {
            edge(role, to);
            run();
        }

        bool contains(Atom a) const { return a < in_.size() && in_[a]; }
        bool unsatisfiable() const { return in_[bottom_atom] != 0; }
        const std::vector<std::pair<std::uint32_t, Atom>>& edges() const { return edges_; }

        /// Whether this element of the canonical model is an instance of d.
        bool holds(const Concept& d) {
            if (unsatisfiable())
                return true;
            switch (d.kind()) {
            case ConceptKind::Top:
                return true;
            case ConceptKind::Bottom:
                return false;
            case ConceptKind::Atom: {
                auto a = r_->find_atom(d.name());
                return a && contains(*a);
            }
            case ConceptKind::And:
                return std::all_of(d.args().begin(), d.args().end(), [&](const Concept& p) { return holds(p); });
            case ConceptKind::Exists: {
                const std::uint32_t role = d.role().id();
                for (std::size_t i = 0; i < edges_.size(); ++i)
                    if (edges_[i].first == role && r_->holds(edges_[i].second, d.filler()))
                        return true;
                return false;
            }
            }
            return false;
        }

    private:
        void edge(std::uint32_t role, Atom to) {
            edges_.push_back({role, to});
            for (Atom y : r_->s_[to]) {
                if (y == bottom_atom)
                    work_.push_back(bottom_atom);
                if (auto it = r_->ex_lhs_.find(key(role, y)); it != r_->ex_lhs_.end())
                    for (Atom e : it->second)
                        work_.push_back(e);
            }
        }

        void run() {
            while (!work_.empty()) {
                Atom x = work_.back();
                work_.pop_back();
                if (in_[x])
                    continue;
                in_[x] = 1;
                trail_.push_back(x);
                for (Atom b : r_->told_[x])
                    work_.push_back(b);
                if (auto it = r_->conj_index_.find(x); it != r_->conj_index_.end())
                    for (auto id : it->second) {
                        const auto& ax = r_->conj_[id];
                        if (std::all_of(ax.lhs.begin(), ax.lhs.end(), [&](Atom a) { return in_[a] != 0; }))
                            work_.push_back(ax.rhs);
                    }
                if (auto it = r_->ex_rhs_.find(x); it != r_->ex_rhs_.end())
                    for (const auto& [role, b] : it->second)
                        edge(role, b);
            }
        }

        Reasoner* r_;
        std::vector<std::uint8_t> in_;
        std::vector<Atom> trail_;
        std::vector<Atom> work_;
        std::vector<std::pair<std::uint32_t, Atom>> edges_;
    };

    /// Makes `a` and every context reachable from it saturated, so probes can
    /// point edges at it.
    void prepare(Atom a) {
        ensure_context(a);
        saturate();
    }

    /// Creates the context behind every ∃-right-hand side reachable from the
    /// told axioms, so no probe ever triggers a new context.
    void prepare_all() {
        for (const auto& [from, targets] : ex_rhs_)
            for (const auto& [role, b] : targets)
                ensure_context(b);
        saturate();
    }

    std::optional<Atom> find_atom(Symbol s) const {
        auto it = name_atoms_.find(s.id());
        if (it == name_atoms_.end())
            return std::nullopt;
        return it->second;
    }

    bool context_holds(Atom x, Atom a) {
        const auto& s = subsumers(x);
        return s.count(a) || s.count(bottom_atom);
    }

private:
    struct ConjAxiom {
        std::vector<Atom> lhs;
        Atom rhs;
    };

    struct PairHash {
        std::size_t operator()(const std::pair<Atom, Concept>& p) const noexcept {
            return p.second.hash() * 31 + p.first;
        }
    };

    static std::uint64_t key(std::uint32_t role, Atom a) { return (std::uint64_t{role} << 32) | a; }

    Atom fresh(const char* prefix) {
        auto a = static_cast<Atom>(names_.size());
        names_.push_back(std::string("_") + prefix + std::to_string(a));
        grow(names_.size());
        return a;
    }

    void grow(std::size_t n) {
        if (s_.size() < n) {
            s_.resize(n);
            has_context_.resize(n, false);
            derived_.resize(n, false);
            told_.resize(n);
        }
    }

    void told(Atom a, Atom b) {
        if (a == b)
            return;
        told_[a].push_back(b);
        // Axioms added after saturation must reach contexts that already hold `a`.
        if (derived_[a])
            for (Atom ctx = 0; ctx < s_.size(); ++ctx)
                if (has_context_[ctx] && s_[ctx].count(a))
                    queue_.push_back({ctx, b});
    }

    void ensure_context(Atom a) {
        if (has_context_[a])
            return;
        has_context_[a] = true;
        queue_.push_back({a, a});
        queue_.push_back({a, top_atom});
    }

    void add_edge(Atom from, std::uint32_t role, Atom to) {
        auto& out = edges_[from];
        auto e = std::make_pair(role, to);
        if (std::find(out.begin(), out.end(), e) != out.end())
            return;
        out.push_back(e);
        ensure_context(to);
        preds_[to].push_back({role, from});
        for (Atom y : s_[to])
            derive_via_edge(from, role, y);
    }

    void derive_via_edge(Atom from, std::uint32_t role, Atom y) {
        if (y == bottom_atom)
            queue_.push_back({from, bottom_atom});
        if (auto it = ex_lhs_.find(key(role, y)); it != ex_lhs_.end())
            for (Atom e : it->second)
                queue_.push_back({from, e});
    }

    void process(Atom ctx, Atom x) {
        auto& s = s_[ctx];
        if (!s.insert(x).second)
            return;
        derived_[x] = true;
        for (std::size_t i = 0; i < told_[x].size(); ++i)
            queue_.push_back({ctx, told_[x][i]});
        if (auto it = conj_index_.find(x); it != conj_index_.end())
            for (auto id : it->second) {
                const auto& ax = conj_[id];
                if (std::all_of(ax.lhs.begin(), ax.lhs.end(), [&](Atom a) { return s.count(a) > 0; }))
                    queue_.push_back({ctx, ax.rhs});
            }
        if (auto it = ex_rhs_.find(x); it != ex_rhs_.end()) {
            auto targets = it->second;
            for (const auto& [role, b] : targets)
                add_edge(ctx, role, b);
        }
        if (auto it = preds_.find(ctx); it != preds_.end()) {
            auto preds = it->second;
            for (const auto& [role, from] : preds)
                derive_via_edge(from, role, x);
        }
    }

    std::vector<std::string> names_;
    std::unordered_map<std::uint32_t, Atom> name_atoms_;
    std::unordered_map<Concept, Atom> rhs_memo_, lhs_memo_;

    std::vector<std::vector<Atom>> told_;
    std::vector<ConjAxiom> conj_;
    std::unordered_map<Atom, std::vector<std::uint32_t>> conj_index_;
    std::unordered_map<Atom, std::vector<std::pair<std::uint32_t, Atom>>> ex_rhs_;
    std::unordered_map<std::uint64_t, std::vector<Atom>> ex_lhs_;

    std::vector<std::unordered_set<Atom>> s_;
    std::vector<bool> has_context_;
    std::vector<bool> derived_; // atom occurs in some S(ctx)
    std::unordered_map<Atom, std::vector<std::pair<std::uint32_t, Atom>>> edges_;
    std::unordered_map<Atom, std::vector<std::pair<std::uint32_t, Atom>>> preds_;
    std::deque<std::pair<Atom, Atom>> queue_;
    std::unordered_map<std::pair<Atom, Concept>, bool, PairHash> holds_memo_;
};

/// T ⊨ ci. Fresh names X ⊑ lhs and rhs ⊑ Y are added before saturating from
/// scratch; the answer is Y ∈ S(X) or ⊥ ∈ S(X).
inline bool entails(const TBox& t, const ConceptInclusion& ci) {
    Reasoner r;
    for (const auto& ax : t.inclusions())
        r.add_inclusion(ax.lhs, ax.rhs);
    auto x = r.rhs_atom(ci.lhs);
    auto y = r.lhs_atom(ci.rhs);
    return r.subsumes(x, y);
}

inline bool entails(const TBox& t, const Concept& c, const Concept& d) { return entails(t, ConceptInclusion{c, d}); }

} // namespace ciforge
