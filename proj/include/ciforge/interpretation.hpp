#pragma once

#include "concept.hpp"
#include "error.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ciforge {

/// Subset of an interpretation domain, indexed by element position.
using ElementSet = boost::dynamic_bitset<>;

struct Signature {
    std::set<std::string> concept_names;
    std::set<std::string> role_names;

    bool disjoint() const {
        for (const auto& c : concept_names)
            if (role_names.count(c))
                return false;
        return true;
    }

    friend bool operator==(const Signature&, const Signature&) = default;
};

/// Plain description of an interpretation, as read from a file.
struct InterpretationData {
    std::vector<std::string> domain;
    std::map<std::string, std::vector<std::string>> concepts;
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> roles;
};

/// Finite interpretation. Elements are addressed by position in `domain()`;
/// the original string ids are kept for I/O.
class Interpretation {
public:
    using Edge = std::pair<std::size_t, std::size_t>;

    /// Validates and builds. Throws ValidationError naming the offending id.
    explicit Interpretation(const InterpretationData& data) {
        if (data.domain.empty())
            throw ValidationError("domain must be non-empty");
        for (const auto& id : data.domain) {
            if (!index_.emplace(id, domain_.size()).second)
                throw ValidationError("duplicate element id '" + id + "'");
            domain_.push_back(id);
        }
        for (const auto& [name, members] : data.concepts) {
            check_name(name, "concept");
            if (data.roles.count(name))
                throw ValidationError("'" + name + "' is used both as concept and role name");
            ElementSet ext(domain_.size());
            for (const auto& m : members)
                ext.set(lookup(m, "concept " + name));
            concepts_.emplace(name, std::move(ext));
        }
        for (const auto& [name, pairs] : data.roles) {
            check_name(name, "role");
            std::set<Edge> edges;
            for (const auto& [s, t] : pairs)
                edges.emplace(lookup(s, "role " + name), lookup(t, "role " + name));
            roles_.emplace(name, std::vector<Edge>(edges.begin(), edges.end()));
        }
    }

    std::size_t size() const noexcept { return domain_.size(); }
    const std::vector<std::string>& domain() const noexcept { return domain_; }
    const std::string& element(std::size_t i) const { return domain_.at(i); }

    std::optional<std::size_t> index_of(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    std::size_t require_index(const std::string& id) const {
        auto i = index_of(id);
        if (!i)
            throw ValidationError("unknown element id '" + id + "'");
        return *i;
    }

    ElementSet make_set(const std::vector<std::string>& ids) const {
        ElementSet s(size());
        for (const auto& id : ids)
            s.set(require_index(id));
        return s;
    }

    ElementSet empty_set() const { return ElementSet(size()); }
    ElementSet full_set() const { return ElementSet(size()).set(); }

    /// Concept names mentioned by the interpretation, including empty ones.
    const std::map<std::string, ElementSet>& concepts() const noexcept { return concepts_; }
    const std::map<std::string, std::vector<Edge>>& roles() const noexcept { return roles_; }

    ElementSet concept_extension(const std::string& name) const {
        auto it = concepts_.find(name);
        return it == concepts_.end() ? empty_set() : it->second;
    }

    const std::vector<Edge>& role_extension(const std::string& name) const {
        static const std::vector<Edge> none;
        auto it = roles_.find(name);
        return it == roles_.end() ? none : it->second;
    }

    /// Σ_I: names whose extension is non-empty.
    Signature active_signature() const {
        Signature sig;
        for (const auto& [name, ext] : concepts_)
            if (ext.any())
                sig.concept_names.insert(name);
        for (const auto& [name, edges] : roles_)
            if (!edges.empty())
                sig.role_names.insert(name);
        return sig;
    }

    InterpretationData data() const {
        InterpretationData d;
        d.domain = domain_;
        for (const auto& [name, ext] : concepts_) {
            auto& v = d.concepts[name];
            for (auto i = ext.find_first(); i != ElementSet::npos; i = ext.find_next(i))
                v.push_back(domain_[i]);
        }
        for (const auto& [name, edges] : roles_) {
            auto& v = d.roles[name];
            for (const auto& [s, t] : edges)
                v.emplace_back(domain_[s], domain_[t]);
        }
        return d;
    }

    std::vector<std::string> ids_of(const ElementSet& s) const {
        std::vector<std::string> out;
        for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i))
            out.push_back(domain_[i]);
        return out;
    }

    friend bool operator==(const Interpretation& a, const Interpretation& b) {
        return a.domain_ == b.domain_ && a.concepts_ == b.concepts_ && a.roles_ == b.roles_;
    }

private:
    static void check_name(const std::string& name, const char* what) {
        if (!is_valid_name(name))
            throw ValidationError(std::string("invalid ") + what + " name '" + name + "'");
    }

    std::size_t lookup(const std::string& id, const std::string& where) const {
        auto it = index_.find(id);
        if (it == index_.end())
            throw ValidationError("unknown element id '" + id + "' in " + where);
        return it->second;
    }

    std::vector<std::string> domain_;
    std::unordered_map<std::string, std::size_t> index_;
    std::map<std::string, ElementSet> concepts_;
    std::map<std::string, std::vector<Edge>> roles_;
};

inline Signature active_signature(const Interpretation& i) { return i.active_signature(); }

inline std::string format_set(const Interpretation& i, const ElementSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& id : i.ids_of(s)) {
        if (!first)
            out += ",";
        first = false;
        out += id;
    }
    return out + "}";
}

} // namespace ciforge
