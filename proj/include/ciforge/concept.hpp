#pragma once

#include "error.hpp"
#include "symbol.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ciforge {

enum class ConceptKind : std::uint8_t { Top, Bottom, Atom, And, Exists };

/// Raw EL⊥ syntax tree as produced by a parser or a random generator.
/// Nothing is normalized; feed it to `canonicalize`.
struct RawConcept {
    ConceptKind kind = ConceptKind::Top;
    std::string name; // concept name for Atom, role name for Exists
    std::vector<RawConcept> args;

    static RawConcept top() { return {ConceptKind::Top, {}, {}}; }
    static RawConcept bottom() { return {ConceptKind::Bottom, {}, {}}; }
    static RawConcept atom(std::string n) { return {ConceptKind::Atom, std::move(n), {}}; }
    static RawConcept conj(std::vector<RawConcept> parts) { return {ConceptKind::And, {}, std::move(parts)}; }
    static RawConcept exists(std::string role, RawConcept filler) {
        return {ConceptKind::Exists, std::move(role), {std::move(filler)}};
    }
};

/// Canonical EL⊥ concept.
///
/// Every value is canonical by construction: conjunctions are flat, sorted,
/// duplicate-free and have at least two conjuncts; Top never occurs inside a
/// conjunction; Bottom absorbs conjunctions and existential restrictions.
///
/// Nodes are hash-consed, so structurally equal concepts share one node and
/// equality is a pointer comparison. Concepts built from shared sub-concepts
/// stay DAG-shaped in memory even when their tree unfolding is huge.
class Concept {
    struct Node;

public:
    Concept() : Concept(top()) {}

    static Concept top() {
        static const Concept t = make(ConceptKind::Top, {}, {});
        return t;
    }
    static Concept bottom() {
        static const Concept b = make(ConceptKind::Bottom, {}, {});
        return b;
    }
    static Concept atom(Symbol name) { return make(ConceptKind::Atom, name, {}); }
    static Concept atom(std::string_view name) { return atom(Symbol(name)); }

    static Concept exists(Symbol role, const Concept& filler) {
        if (filler.is_bottom())
            return bottom();
        return make(ConceptKind::Exists, role, {filler});
    }
    static Concept exists(std::string_view role, const Concept& filler) { return exists(Symbol(role), filler); }

    /// ∃r^n.C, with ∃r^0.C = C.
    static Concept exists_chain(Symbol role, std::size_t n, Concept filler) {
        for (std::size_t i = 0; i < n; ++i)
            filler = exists(role, filler);
        return filler;
    }

    static Concept conjunction(std::vector<Concept> parts) {
        std::vector<Concept> flat;
        flat.reserve(parts.size());
        for (auto& p : parts) {
            switch (p.kind()) {
            case ConceptKind::Bottom:
                return bottom();
            case ConceptKind::Top:
                break;
            case ConceptKind::And:
                for (const auto& q : p.node_->args)
                    flat.push_back(q);
                break;
            default:
                flat.push_back(std::move(p));
            }
        }
        std::sort(flat.begin(), flat.end(), [](const Concept& a, const Concept& b) { return compare(a, b) < 0; });
        flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
        if (flat.empty())
            return top();
        if (flat.size() == 1)
            return flat.front();
        return make(ConceptKind::And, {}, std::move(flat));
    }
    static Concept conjunction(const Concept& a, const Concept& b) { return conjunction(std::vector<Concept>{a, b}); }

    ConceptKind kind() const noexcept { return node_->kind; }
    bool is_top() const noexcept { return kind() == ConceptKind::Top; }
    bool is_bottom() const noexcept { return kind() == ConceptKind::Bottom; }

    /// Concept name of an Atom, role of an Exists.
    Symbol name() const noexcept { return node_->name; }
    Symbol role() const noexcept { return node_->name; }
    const Concept& filler() const { return node_->args.front(); }

    /// Conjuncts of an And node; the concept itself for Atom/Exists; empty
    /// for Top. Bottom yields itself.
    std::vector<Concept> conjuncts() const {
        switch (kind()) {
        case ConceptKind::Top:
            return {};
        case ConceptKind::And:
            return node_->args;
        default:
            return {*this};
        }
    }
    const std::vector<Concept>& args() const noexcept { return node_->args; }

    std::size_t role_depth() const noexcept { return node_->depth; }

    /// Syntactic size: 1 per name, Top and Bottom, plus 1 per existential
    /// restriction; conjunction adds nothing. Saturates at uint64 max.
    std::uint64_t size() const noexcept { return node_->size; }

    std::size_t hash() const noexcept { return node_->hash; }

    /// Opaque node identity; equal concepts have equal ids.
    const void* id() const noexcept { return node_.get(); }

    friend bool operator==(const Concept& a, const Concept& b) noexcept { return a.node_ == b.node_; }
    friend bool operator!=(const Concept& a, const Concept& b) noexcept { return a.node_ != b.node_; }

    /// Fixed total order: Top < Bottom < atoms (by name) < existentials (by
    /// role name, then filler) < conjunctions (lexicographic on conjuncts).
    static int compare(const Concept& a, const Concept& b) {
        if (a == b)
            return 0;
        if (a.kind() != b.kind())
            return static_cast<int>(rank(a.kind())) < static_cast<int>(rank(b.kind())) ? -1 : 1;
        switch (a.kind()) {
        case ConceptKind::Atom:
            return Symbol::compare_names(a.name(), b.name());
        case ConceptKind::Exists: {
            int c = Symbol::compare_names(a.role(), b.role());
            return c != 0 ? c : compare(a.filler(), b.filler());
        }
        case ConceptKind::And: {
            const auto& x = a.args();
            const auto& y = b.args();
            for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
                if (int c = compare(x[i], y[i]); c != 0)
                    return c;
            return x.size() < y.size() ? -1 : (x.size() > y.size() ? 1 : 0);
        }
        default:
            return 0;
        }
    }
    friend bool operator<(const Concept& a, const Concept& b) { return compare(a, b) < 0; }

private:
    struct Node {
        ConceptKind kind;
        Symbol name;
        std::vector<Concept> args;
        std::size_t hash;
        std::size_t depth;
        std::uint64_t size;
    };

    static int rank(ConceptKind k) {
        switch (k) {
        case ConceptKind::Top:
            return 0;
        case ConceptKind::Bottom:
            return 1;
        case ConceptKind::Atom:
            return 2;
        case ConceptKind::Exists:
            return 3;
        case ConceptKind::And:
            return 4;
        }
        return 5;
    }

    static std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
        return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
    }

    static std::size_t mix(std::size_t seed, std::size_t v) {
        return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
    }

    // Hash-consing table. Entries hold weak references; a node removes its
    // own entry when the last owner goes away.
    class Store {
    public:
        Concept get(ConceptKind kind, Symbol name, std::vector<Concept> args) {
            std::size_t h = mix(static_cast<std::size_t>(kind) * 1315423911u, name.id());
            for (const auto& a : args)
                h = mix(h, reinterpret_cast<std::uintptr_t>(a.node_.get()));

            std::lock_guard lock(mutex_);
            auto& bucket = table_[h];
            for (const auto& e : bucket) {
                auto sp = e.weak.lock();
                if (sp && sp->kind == kind && sp->name == name && sp->args == args)
                    return Concept(std::move(sp));
            }
            std::size_t depth = 0;
            std::uint64_t size = kind == ConceptKind::And ? 0 : 1;
            for (const auto& a : args) {
                depth = std::max(depth, a.role_depth() + (kind == ConceptKind::Exists ? 1 : 0));
                size = sat_add(size, a.size());
            }
            auto* raw = new Node{kind, name, std::move(args), h, depth, size};
            std::shared_ptr<const Node> sp(raw, [this](const Node* n) { release(n); });
            bucket.push_back({raw, sp});
            return Concept(std::move(sp));
        }

    private:
        struct Entry {
            const Node* raw;
            std::weak_ptr<const Node> weak;
        };

        void release(const Node* n) {
            {
                std::lock_guard lock(mutex_);
                auto it = table_.find(n->hash);
                if (it != table_.end()) {
                    auto& bucket = it->second;
                    std::erase_if(bucket, [n](const Entry& e) { return e.raw == n; });
                    if (bucket.empty())
                        table_.erase(it);
                }
            }
            delete n; // children released outside the lock
        }

        std::mutex mutex_;
        std::unordered_map<std::size_t, std::vector<Entry>> table_;
    };

    static Store& store() {
        static Store* s = new Store(); // never destroyed: static concepts outlive it otherwise
        return *s;
    }

    static Concept make(ConceptKind kind, Symbol name, std::vector<Concept> args) {
        return store().get(kind, name, std::move(args));
    }

    explicit Concept(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    std::shared_ptr<const Node> node_;
};

/// Concept inclusion lhs ⊑ rhs over canonical concepts.
struct ConceptInclusion {
    Concept lhs;
    Concept rhs;

    friend bool operator==(const ConceptInclusion& a, const ConceptInclusion& b) {
        return a.lhs == b.lhs && a.rhs == b.rhs;
    }
};

inline Concept canonicalize(const RawConcept& raw) {
    switch (raw.kind) {
    case ConceptKind::Top:
        return Concept::top();
    case ConceptKind::Bottom:
        return Concept::bottom();
    case ConceptKind::Atom:
        return Concept::atom(raw.name);
    case ConceptKind::Exists:
        return Concept::exists(raw.name, canonicalize(raw.args.at(0)));
    case ConceptKind::And: {
        std::vector<Concept> parts;
        parts.reserve(raw.args.size());
        for (const auto& a : raw.args)
            parts.push_back(canonicalize(a));
        return Concept::conjunction(std::move(parts));
    }
    }
    return Concept::top();
}

inline RawConcept to_raw(const Concept& c) {
    switch (c.kind()) {
    case ConceptKind::Top:
        return RawConcept::top();
    case ConceptKind::Bottom:
        return RawConcept::bottom();
    case ConceptKind::Atom:
        return RawConcept::atom(c.name().str());
    case ConceptKind::Exists:
        return RawConcept::exists(c.role().str(), to_raw(c.filler()));
    case ConceptKind::And: {
        std::vector<RawConcept> parts;
        for (const auto& a : c.args())
            parts.push_back(to_raw(a));
        return RawConcept::conj(std::move(parts));
    }
    }
    return RawConcept::top();
}

inline std::size_t role_depth(const Concept& c) { return c.role_depth(); }

// ---------------------------------------------------------------------------
// Concrete syntax
//
//   Concept := "Top" | "Bottom" | NAME | Concept "and" Concept
//            | "some" NAME "." Concept | "(" Concept ")"
//
// "and" is left-associative; an unparenthesized "some" filler extends to the
// end of the enclosing expression.

inline bool is_keyword(std::string_view w) {
    return w == "Top" || w == "Bottom" || w == "and" || w == "some" || w == "SubClassOf" || w == "EquivalentTo";
}

inline bool is_name_char(char ch, bool first) {
    if ((ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') || ch == '_')
        return true;
    if (first)
        return false;
    return (ch >= '0' && ch <= '9') || ch == '-' || ch == ':' || ch == '#' || ch == '/';
}

/// Whether `name` can be used as a concept or role name in the concrete syntax.
inline bool is_valid_name(std::string_view name) {
    if (name.empty() || is_keyword(name))
        return false;
    for (std::size_t i = 0; i < name.size(); ++i)
        if (!is_name_char(name[i], i == 0))
            return false;
    return true;
}

namespace detail {

struct Token {
    enum class Kind { Word, LParen, RParen, Dot, End } kind;
    std::string text;
    std::size_t pos;
};

inline std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char ch = s[i];
        if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
            ++i;
        } else if (ch == '(') {
            out.push_back({Token::Kind::LParen, "(", i++});
        } else if (ch == ')') {
            out.push_back({Token::Kind::RParen, ")", i++});
        } else if (ch == '.') {
            out.push_back({Token::Kind::Dot, ".", i++});
        } else if (is_name_char(ch, true)) {
            std::size_t start = i;
            while (i < s.size() && is_name_char(s[i], false))
                ++i;
            out.push_back({Token::Kind::Word, std::string(s.substr(start, i - start)), start});
        } else {
            throw ParseError(std::string("unexpected character '") + ch + "'", i);
        }
    }
    out.push_back({Token::Kind::End, "", s.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    RawConcept expr() {
        std::vector<RawConcept> parts;
        parts.push_back(unit());
        while (peek().kind == Token::Kind::Word && peek().text == "and") {
            ++pos_;
            parts.push_back(unit());
        }
        if (parts.size() == 1)
            return std::move(parts.front());
        return RawConcept::conj(std::move(parts));
    }

    const Token& peek() const { return toks_[pos_]; }

private:
    RawConcept unit() {
        const Token& t = peek();
        switch (t.kind) {
        case Token::Kind::LParen: {
            ++pos_;
            RawConcept inner = expr();
            expect(Token::Kind::RParen, "')'");
            return inner;
        }
        case Token::Kind::Word:
            ++pos_;
            if (t.text == "Top")
                return RawConcept::top();
            if (t.text == "Bottom")
                return RawConcept::bottom();
            if (t.text == "some") {
                const Token& role = peek();
                if (role.kind != Token::Kind::Word || is_keyword(role.text))
                    throw ParseError("expected role name after 'some'", role.pos);
                ++pos_;
                expect(Token::Kind::Dot, "'.'");
                return RawConcept::exists(role.text, expr());
            }
            if (is_keyword(t.text))
                throw ParseError("unexpected keyword '" + t.text + "'", t.pos);
            return RawConcept::atom(t.text);
        default:
            throw ParseError(t.kind == Token::Kind::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t.pos);
        }
    }

    void expect(Token::Kind k, const char* what) {
        if (peek().kind != k)
            throw ParseError(std::string("expected ") + what, peek().pos);
        ++pos_;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

inline void render_into(const Concept& c, std::string& out) {
    switch (c.kind()) {
    case ConceptKind::Top:
        out += "Top";
        return;
    case ConceptKind::Bottom:
        out += "Bottom";
        return;
    case ConceptKind::Atom:
        out += c.name().str();
        return;
    case ConceptKind::Exists:
        out += "some ";
        out += c.role().str();
        out += '.';
        if (c.filler().kind() == ConceptKind::And) {
            out += '(';
            render_into(c.filler(), out);
            out += ')';
        } else {
            render_into(c.filler(), out);
        }
        return;
    case ConceptKind::And: {
        bool first = true;
        for (const auto& a : c.args()) {
            if (!first)
                out += " and ";
            first = false;
            if (a.kind() == ConceptKind::Exists) {
                out += '(';
                render_into(a, out);
                out += ')';
            } else {
                render_into(a, out);
            }
        }
        return;
    }
    }
}

} // namespace detail

inline RawConcept parse_raw_concept(std::string_view text) {
    detail::Parser p(detail::tokenize(text));
    RawConcept c = p.expr();
    if (p.peek().kind != detail::Token::Kind::End)
        throw ParseError("trailing input '" + p.peek().text + "'", p.peek().pos);
    return c;
}

inline Concept parse_concept(std::string_view text) { return canonicalize(parse_raw_concept(text)); }

inline std::string render_concept(const Concept& c) {
    std::string out;
    detail::render_into(c, out);
    return out;
}

} // namespace ciforge

template <>
struct std::hash<ciforge::Concept> {
    std::size_t operator()(const ciforge::Concept& c) const noexcept { return c.hash(); }
};
