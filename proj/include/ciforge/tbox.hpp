#pragma once

#include "concept.hpp"
#include "error.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace ciforge {

/// One line of a TBox file: `C SubClassOf D` or `C EquivalentTo D`.
struct Axiom {
    enum class Kind { SubClassOf, EquivalentTo };

    Kind kind = Kind::SubClassOf;
    Concept lhs;
    Concept rhs;

    static Axiom subclass(Concept l, Concept r) { return {Kind::SubClassOf, std::move(l), std::move(r)}; }

    /// Sides are ordered so that equal equivalences compare equal.
    static Axiom equivalence(Concept l, Concept r) {
        if (Concept::compare(r, l) < 0)
            std::swap(l, r);
        return {Kind::EquivalentTo, std::move(l), std::move(r)};
    }

    friend bool operator==(const Axiom& a, const Axiom& b) {
        return a.kind == b.kind && a.lhs == b.lhs && a.rhs == b.rhs;
    }

    friend bool operator<(const Axiom& a, const Axiom& b) {
        if (a.kind != b.kind)
            return a.kind == Kind::EquivalentTo;
        if (int c = Concept::compare(a.lhs, b.lhs); c != 0)
            return c < 0;
        return Concept::compare(a.rhs, b.rhs) < 0;
    }
};

/// Finite set of axioms; equivalences count as two inclusions.
class TBox {
public:
    TBox() = default;
    explicit TBox(std::vector<Axiom> axioms) {
        for (auto& a : axioms)
            add(std::move(a));
    }

    /// Adds unless already present. Trivial axioms (C ⊑ C, C ≡ C) are dropped.
    bool add(Axiom a) {
        if (a.lhs == a.rhs)
            return false;
        if (std::find(axioms_.begin(), axioms_.end(), a) != axioms_.end())
            return false;
        axioms_.push_back(std::move(a));
        return true;
    }
    bool add_inclusion(Concept l, Concept r) { return add(Axiom::subclass(std::move(l), std::move(r))); }
    bool add_equivalence(Concept l, Concept r) { return add(Axiom::equivalence(std::move(l), std::move(r))); }

    const std::vector<Axiom>& axioms() const noexcept { return axioms_; }
    std::size_t size() const noexcept { return axioms_.size(); }
    bool empty() const noexcept { return axioms_.empty(); }

    std::vector<ConceptInclusion> inclusions() const {
        std::vector<ConceptInclusion> out;
        for (const auto& a : axioms_) {
            out.push_back({a.lhs, a.rhs});
            if (a.kind == Axiom::Kind::EquivalentTo)
                out.push_back({a.rhs, a.lhs});
        }
        return out;
    }

    void sort() { std::sort(axioms_.begin(), axioms_.end()); }

    std::size_t max_role_depth() const {
        std::size_t d = 0;
        for (const auto& a : axioms_)
            d = std::max({d, a.lhs.role_depth(), a.rhs.role_depth()});
        return d;
    }

private:
    std::vector<Axiom> axioms_;
};

inline std::string render_axiom(const Axiom& a) {
    return render_concept(a.lhs) + (a.kind == Axiom::Kind::SubClassOf ? " SubClassOf " : " EquivalentTo ") +
           render_concept(a.rhs);
}

/// Parses `C SubClassOf D` / `C EquivalentTo D`.
inline Axiom parse_axiom(std::string_view line) {
    auto tokens = detail::tokenize(line);
    std::size_t split = tokens.size();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto& t = tokens[i];
        if (t.kind == detail::Token::Kind::Word && (t.text == "SubClassOf" || t.text == "EquivalentTo")) {
            if (split != tokens.size())
                throw ParseError("more than one axiom keyword", t.pos);
            split = i;
        }
    }
    if (split == tokens.size())
        throw ParseError("expected 'SubClassOf' or 'EquivalentTo'", 0);
    const auto& kw = tokens[split];
    std::string_view left = line.substr(0, kw.pos);
    std::string_view right = line.substr(kw.pos + kw.text.size());
    Concept l, r;
    try {
        l = parse_concept(left);
    } catch (const ParseError& e) {
        throw ParseError(std::string("left-hand side: ") + e.what(), e.position());
    }
    try {
        r = parse_concept(right);
    } catch (const ParseError& e) {
        throw ParseError(std::string("right-hand side: ") + e.what(), kw.pos + kw.text.size() + e.position());
    }
    return kw.text == "SubClassOf" ? Axiom::subclass(l, r) : Axiom::equivalence(l, r);
}

/// Reads one axiom per line; blank lines and lines starting with '#' are skipped.
inline TBox read_tbox(std::istream& in) {
    TBox t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        try {
            t.add(parse_axiom(line));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what(), e.position());
        }
    }
    return t;
}

inline void write_tbox(std::ostream& out, const TBox& t, const std::vector<std::string>& header = {}) {
    for (const auto& h : header)
        out << "# " << h << '\n';
    for (const auto& a : t.axioms())
        out << render_axiom(a) << '\n';
}

} // namespace ciforge
