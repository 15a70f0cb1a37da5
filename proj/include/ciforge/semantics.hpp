#pragma once

#include "concept.hpp"
#include "interpretation.hpp"

#include <unordered_map>
#include <vector>

namespace ciforge {

/// Extensions by structural recursion over the concept, straight from the
/// set semantics. Independent of the graph and simulation code.
class SemanticEvaluator {
public:
    explicit SemanticEvaluator(const Interpretation& i) : i_(&i) {
        for (const auto& [name, edges] : i.roles()) {
            auto& pred = pred_[Symbol(name).id()];
            pred.assign(i.size(), ElementSet(i.size()));
            for (const auto& [s, t] : edges)
                pred[t].set(s);
        }
    }

    const ElementSet& operator()(const Concept& c) {
        if (auto it = memo_.find(c); it != memo_.end())
            return it->second;
        ElementSet out(i_->size());
        switch (c.kind()) {
        case ConceptKind::Top:
            out.set();
            break;
        case ConceptKind::Bottom:
            break;
        case ConceptKind::Atom:
            out = i_->concept_extension(c.name().str());
            break;
        case ConceptKind::And:
            out.set();
            for (const auto& part : c.args())
                out &= (*this)(part);
            break;
        case ConceptKind::Exists: {
            ElementSet f = (*this)(c.filler());
            auto it = pred_.find(c.role().id());
            if (it != pred_.end())
                for (auto y = f.find_first(); y != ElementSet::npos; y = f.find_next(y))
                    out |= it->second[y];
            break;
        }
        }
        return memo_.emplace(c, std::move(out)).first->second;
    }

    std::size_t cached() const noexcept { return memo_.size(); }

private:
    const Interpretation* i_;
    std::unordered_map<std::uint32_t, std::vector<ElementSet>> pred_;
    std::unordered_map<Concept, ElementSet> memo_;
};

/// Evaluates a raw (not canonicalized) concept tree.
inline ElementSet evaluate_raw(const RawConcept& c, const Interpretation& i) {
    ElementSet out(i.size());
    switch (c.kind) {
    case ConceptKind::Top:
        out.set();
        break;
    case ConceptKind::Bottom:
        break;
    case ConceptKind::Atom:
        out = i.concept_extension(c.name);
        break;
    case ConceptKind::And:
        out.set();
        for (const auto& part : c.args)
            out &= evaluate_raw(part, i);
        break;
    case ConceptKind::Exists: {
        ElementSet f = evaluate_raw(c.args.front(), i);
        for (const auto& [s, t] : i.role_extension(c.name))
            if (f.test(t))
                out.set(s);
        break;
    }
    }
    return out;
}

} // namespace ciforge
