#include <ciforge/reasoner.hpp>
#include <ciforge/simulation.hpp>
#include <ciforge/testkit.hpp>

#include <gtest/gtest.h>

using namespace ciforge;
namespace tk = ciforge::testkit;

namespace {

Concept C(const char* s) { return parse_concept(s); }

TBox tbox(std::initializer_list<std::pair<const char*, const char*>> cis) {
    TBox t;
    for (auto [l, r] : cis)
        t.add_inclusion(C(l), C(r));
    return t;
}

} // namespace

TEST(Entails, Examples) {
    EXPECT_TRUE(entails(TBox{}, C("A and B"), C("A")));
    auto t = tbox({{"A", "some r.B"}, {"B", "C"}});
    EXPECT_TRUE(entails(t, C("A"), C("some r.C")));
    EXPECT_FALSE(tk::find_countermodel(t, {C("A"), C("some r.C")}, 3).has_value());
    auto ab = tbox({{"A", "B"}});
    EXPECT_FALSE(entails(ab, C("B"), C("A")));
    auto cm = tk::find_countermodel(ab, {C("B"), C("A")}, 2);
    ASSERT_TRUE(cm.has_value());
}

TEST(Entails, BottomHandling) {
    auto t = tbox({{"A", "Bottom"}});
    EXPECT_TRUE(entails(t, C("A"), C("B")));
    EXPECT_TRUE(entails(t, C("some r.A"), C("B")));
    EXPECT_TRUE(entails(t, C("C and some r.(B and A)"), Concept::bottom()));
    EXPECT_FALSE(entails(t, C("B"), Concept::bottom()));
    EXPECT_TRUE(entails(TBox{}, Concept::bottom(), C("A")));
    EXPECT_TRUE(entails(TBox{}, C("A"), Concept::top()));
    auto top_bot = tbox({{"Top", "Bottom"}});
    EXPECT_TRUE(entails(top_bot, C("Top"), C("A")));
}

TEST(Entails, CyclicAndConjunctiveAxioms) {
    auto t = tbox({{"A", "some r.A"}, {"some r.B", "B"}, {"A and B", "C"}, {"some r.C", "D"}});
    EXPECT_TRUE(entails(t, C("A"), C("some r.some r.some r.A")));
    EXPECT_FALSE(entails(t, C("A and B"), C("D")));
    EXPECT_TRUE(entails(t, C("A and some r.(A and B)"), C("D")));
    EXPECT_FALSE(entails(t, C("A"), C("B")));
    EXPECT_TRUE(entails(t, C("A and some r.B"), C("B")));
}

TEST(Entails, FbpBase) {
    // The role-depth-n consequences of a finite cyclic TBox.
    auto t = tbox({{"A", "some r.X"}, {"X", "some r.X"}});
    Symbol r("r");
    for (std::size_t n = 1; n <= 20; ++n)
        EXPECT_TRUE(entails(t, C("A"), Concept::exists_chain(r, n, Concept::top())));
}

TEST(Entails, AgreesWithEmptyTBoxSubsumption) {
    Signature sig{{"A", "B"}, {"r", "s"}};
    for (std::uint64_t k = 0; k < 500; ++k) {
        auto rng = tk::rng_for(tk::seed_from_env(), k);
        Concept c = tk::random_concept(rng, sig, 2, 0.02), d = tk::random_concept(rng, sig, 2, 0.02);
        EXPECT_EQ(entails(TBox{}, c, d), subsumed_empty(c, d)) << render_concept(c) << " / " << render_concept(d);
    }
}

TEST(Entails, AgreesWithCountermodelSearch) {
    Signature sig{{"A", "B"}, {"r"}};
    std::size_t checked = 0;
    for (std::uint64_t k = 0; k < 200 && checked < 60; ++k) {
        auto rng = tk::rng_for(tk::seed_from_env(), 1000 + k);
        TBox t;
        for (int j = 0, n = static_cast<int>(tk::uniform(rng, 1, 2)); j < n; ++j)
            t.add_inclusion(tk::random_concept(rng, sig, 1, 0.05), tk::random_concept(rng, sig, 1, 0.05));
        Concept c = tk::random_concept(rng, sig, 1), d = tk::random_concept(rng, sig, 1);
        ++checked;
        bool yes = entails(t, c, d);
        auto cm = tk::find_countermodel(t, {c, d}, 3, 16);
        // A countermodel refutes entailment; entailment rules one out.
        if (yes) {
            EXPECT_FALSE(cm.has_value()) << render_concept(c) << " / " << render_concept(d);
        }
        if (cm) {
            EXPECT_FALSE(yes);
        }
    }
}

TEST(Reasoner, IncrementalAxiomsUpdateAnswers) {
    Reasoner r;
    EXPECT_FALSE(r.entails(C("A"), C("C")));
    r.add_inclusion(C("A"), C("B"));
    r.add_inclusion(C("B"), C("C"));
    r.saturate();
    EXPECT_TRUE(r.entails(C("A"), C("C")));
    EXPECT_TRUE(r.entails(C("some r.A"), C("some r.C")));
    EXPECT_FALSE(r.entails(C("C"), C("A")));
}

TEST(Reasoner, ProbeMarksAndUndo) {
    auto t = tbox({{"A and B", "C"}, {"some r.C", "D"}});
    Reasoner r(t);
    auto a = r.rhs_atom(C("A")), b = r.rhs_atom(C("B")), c = r.rhs_atom(C("C"));
    r.prepare(c);
    Reasoner::Probe p(r);
    p.add_atom(a);
    EXPECT_FALSE(p.holds(C("C")));
    auto m = p.mark();
    p.add_atom(b);
    EXPECT_TRUE(p.holds(C("C")));
    p.undo(m);
    EXPECT_FALSE(p.holds(C("C")));
    EXPECT_TRUE(p.holds(C("A")));
    p.add_edge(Symbol("r").id(), c);
    EXPECT_TRUE(p.holds(C("D")));
    EXPECT_TRUE(p.holds(C("some r.C")));
}
