#include <ciforge/concept.hpp>
#include <ciforge/interpretation.hpp>
#include <ciforge/io.hpp>
#include <ciforge/semantics.hpp>
#include <ciforge/tbox.hpp>
#include <ciforge/testkit.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace ciforge;
namespace tk = ciforge::testkit;

namespace {

Concept C(const char* s) { return parse_concept(s); }

// Every interpretation over {A} and {r} with n elements.
std::vector<Interpretation> all_small(std::size_t n) {
    std::vector<Interpretation> out;
    const std::size_t bits = n + n * n;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
        InterpretationData d;
        for (std::size_t k = 0; k < n; ++k)
            d.domain.push_back("e" + std::to_string(k));
        std::size_t b = 0;
        for (std::size_t k = 0; k < n; ++k, ++b)
            if ((code >> b) & 1u)
                d.concepts["A"].push_back(d.domain[k]);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y, ++b)
                if ((code >> b) & 1u)
                    d.roles["r"].push_back({d.domain[x], d.domain[y]});
        out.emplace_back(d);
    }
    return out;
}

} // namespace

TEST(Canonicalize, TopIsNeutral) {
    EXPECT_EQ(canonicalize(RawConcept::conj({RawConcept::atom("A"), RawConcept::top()})), Concept::atom("A"));
}

TEST(Canonicalize, BottomAbsorbsConjunction) {
    EXPECT_EQ(canonicalize(RawConcept::conj({RawConcept::atom("A"), RawConcept::bottom()})), Concept::bottom());
}

TEST(Canonicalize, ExistsOverBottomIsBottom) {
    auto raw = RawConcept::exists("r", RawConcept::bottom());
    EXPECT_EQ(canonicalize(raw), Concept::bottom());
    // Semantically empty on every interpretation with up to 3 elements.
    for (std::size_t n = 1; n <= 3; ++n)
        for (const auto& i : all_small(n))
            EXPECT_TRUE(evaluate_raw(raw, i).none());
}

TEST(Canonicalize, FlattensSortsAndDeduplicates) {
    auto raw = RawConcept::conj({RawConcept::atom("B"),
                                 RawConcept::conj({RawConcept::atom("A"), RawConcept::atom("B")}),
                                 RawConcept::conj({RawConcept::top()})});
    Concept c = canonicalize(raw);
    ASSERT_EQ(c.kind(), ConceptKind::And);
    ASSERT_EQ(c.args().size(), 2u);
    EXPECT_EQ(c.args()[0], Concept::atom("A"));
    EXPECT_EQ(c.args()[1], Concept::atom("B"));
    EXPECT_EQ(canonicalize(RawConcept::conj({RawConcept::atom("A")})), Concept::atom("A"));
    EXPECT_EQ(canonicalize(RawConcept::conj({RawConcept::top(), RawConcept::top()})), Concept::top());
}

TEST(Canonicalize, HashConsingGivesPointerEquality) {
    EXPECT_EQ(C("some r.(A and B)"), C("some r.(B and A)"));
    EXPECT_NE(C("some r.A"), C("some s.A"));
}

TEST(RoleDepth, Examples) {
    EXPECT_EQ(role_depth(Concept::atom("A")), 0u);
    EXPECT_EQ(role_depth(Concept::exists_chain(Symbol("r"), 29, Concept::atom("A"))), 29u);
    EXPECT_EQ(role_depth(C("City and (some partof.(Region and (some capital.Top)))")), 2u);
    EXPECT_EQ(role_depth(Concept::top()), 0u);
    EXPECT_EQ(role_depth(Concept::bottom()), 0u);
}

TEST(Size, CountsNamesAndExistentials) {
    EXPECT_EQ(C("A").size(), 1u);
    EXPECT_EQ(C("A and B").size(), 2u);
    EXPECT_EQ(C("some r.Top").size(), 2u);
    EXPECT_EQ(C("A and (some r.(B and (some s.Top)))").size(), 5u);
}

TEST(Parse, Examples) {
    Concept c = C("City and (some partof.Region)");
    ASSERT_EQ(c.kind(), ConceptKind::And);
    EXPECT_EQ(c.args()[0], Concept::atom("City"));
    EXPECT_EQ(c.args()[1], Concept::exists("partof", Concept::atom("Region")));
    EXPECT_EQ(C("Bottom"), Concept::bottom());
    EXPECT_EQ(render_concept(Concept::exists("r", C("A and B"))), "some r.(A and B)");
}

TEST(Parse, UnparenthesizedFillerExtendsToTheEnd) {
    EXPECT_EQ(C("some r.A and B"), Concept::exists("r", C("A and B")));
    EXPECT_EQ(C("B and some r.A"), C("B and (some r.A)"));
}

TEST(Parse, ErrorsCarryPositions) {
    try {
        parse_concept("A and and B");
        FAIL() << "no error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 6u);
    }
    EXPECT_THROW(parse_concept("some .A"), ParseError);
    EXPECT_THROW(parse_concept("(A"), ParseError);
    EXPECT_THROW(parse_concept(""), ParseError);
    EXPECT_THROW(parse_concept("A B"), ParseError);
    EXPECT_THROW(parse_concept("some r A"), ParseError);
}

TEST(ConceptProperties, CanonicalizeIsIdempotent) {
    Signature sig{{"A", "B", "C"}, {"r", "s"}};
    for (std::uint64_t k = 0; k < 500; ++k) {
        auto rng = tk::rng_for(tk::seed_from_env(), k);
        auto raw = tk::random_raw_concept(rng, sig, 3, 0.1);
        Concept c = canonicalize(raw);
        EXPECT_EQ(canonicalize(to_raw(c)), c) << render_concept(c);
    }
}

TEST(ConceptProperties, CanonicalizePreservesExtensions) {
    Signature sig{{"A", "B"}, {"r", "s"}};
    for (std::uint64_t k = 0; k < 300; ++k) {
        auto rng = tk::rng_for(tk::seed_from_env(), 1000 + k);
        tk::RandomShape shape;
        shape.max_elements = 5;
        auto i = tk::random_interpretation(rng, shape);
        auto raw = tk::random_raw_concept(rng, sig, 3, 0.1);
        SemanticEvaluator eval(i);
        EXPECT_EQ(evaluate_raw(raw, i), eval(canonicalize(raw)));
    }
}

TEST(ConceptProperties, ParseRenderRoundTrip) {
    Signature sig{{"A", "B", "City"}, {"r", "partof"}};
    for (std::uint64_t k = 0; k < 500; ++k) {
        auto rng = tk::rng_for(tk::seed_from_env(), 2000 + k);
        Concept c = tk::random_concept(rng, sig, 3, 0.05);
        EXPECT_EQ(parse_concept(render_concept(c)), c) << render_concept(c);
    }
}

TEST(ConceptOrder, IsATotalOrderConsistentWithEquality) {
    Signature sig{{"A", "B"}, {"r"}};
    std::vector<Concept> cs;
    for (std::uint64_t k = 0; k < 200; ++k) {
        auto rng = tk::rng_for(tk::seed_from_env(), 3000 + k);
        cs.push_back(tk::random_concept(rng, sig, 2));
    }
    for (const auto& a : cs)
        for (const auto& b : cs) {
            int ab = Concept::compare(a, b);
            EXPECT_EQ(ab == 0, a == b);
            EXPECT_EQ(ab, -Concept::compare(b, a));
        }
}

TEST(Signature, ActiveSignatureOfFig3) {
    auto sig = active_signature(builtin_fixture("fig3"));
    for (auto n : {"City", "Party", "Region", "Liberal", "Organization"})
        EXPECT_TRUE(sig.concept_names.count(n)) << n;
    for (auto r : {"partof", "capital", "government"})
        EXPECT_TRUE(sig.role_names.count(r)) << r;
    EXPECT_TRUE(sig.disjoint());
}

TEST(Signature, OnlyNonEmptyNamesAreActive) {
    InterpretationData d;
    d.domain = {"x", "y"};
    d.concepts["A"] = {"x"};
    d.concepts["B"] = {};
    d.roles["r"] = {};
    auto sig = active_signature(Interpretation(d));
    EXPECT_EQ(sig.concept_names, (std::set<std::string>{"A"}));
    EXPECT_TRUE(sig.role_names.empty());
}

TEST(Signature, Fig4i) {
    auto sig = active_signature(builtin_fixture("fig4i"));
    EXPECT_EQ(sig.concept_names, (std::set<std::string>{"A"}));
    EXPECT_EQ(sig.role_names, (std::set<std::string>{"r"}));
}

TEST(Interpretation, RejectsInvalidData) {
    InterpretationData d;
    EXPECT_THROW(Interpretation{d}, ValidationError);
    d.domain = {"x", "x"};
    EXPECT_THROW(Interpretation{d}, ValidationError);
    d.domain = {"x"};
    d.concepts["A"] = {"y"};
    EXPECT_THROW(Interpretation{d}, ValidationError);
    d.concepts["A"] = {"x"};
    d.roles["A"] = {{"x", "x"}};
    EXPECT_THROW(Interpretation{d}, ValidationError);
    d.roles.clear();
    d.roles["r"] = {{"x", "z"}};
    EXPECT_THROW(Interpretation{d}, ValidationError);
}

TEST(TBox, DeduplicatesAndSkipsIdentityAxioms) {
    TBox t;
    t.add_inclusion(C("A"), C("B"));
    t.add_inclusion(C("A"), C("B"));
    t.add_inclusion(C("A"), C("A"));
    t.add_inclusion(C("A"), C("Top"));
    t.add_equivalence(C("B"), C("A"));
    t.add_equivalence(C("A"), C("B"));
    EXPECT_EQ(t.size(), 3u);
    EXPECT_EQ(t.inclusions().size(), 4u);
}

TEST(TBox, TextRoundTrip) {
    TBox t;
    t.add_inclusion(C("City"), C("some partof.Region"));
    t.add_equivalence(C("A and B"), C("some r.(A and (some s.Top))"));
    t.sort();
    std::stringstream ss;
    write_tbox(ss, t, {"mode: test"});
    EXPECT_EQ(ss.str().rfind("# mode: test\n", 0), 0u);
    TBox back = read_tbox(ss);
    back.sort();
    EXPECT_EQ(back.axioms(), t.axioms());
}

TEST(TBox, ParseErrorsNameTheLine) {
    std::stringstream ss("A SubClassOf B\n\n# comment\nA SubClassOf\n");
    try {
        read_tbox(ss);
        FAIL() << "no error";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
    }
}
