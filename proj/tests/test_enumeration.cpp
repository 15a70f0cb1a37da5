#include <ciforge/enumeration.hpp>
#include <ciforge/io.hpp>
#include <ciforge/testkit.hpp>

#include <gtest/gtest.h>

#include <set>
#include <unordered_set>

using namespace ciforge;
namespace tk = ciforge::testkit;

namespace {

// Closure of {⊤, ⊥, atoms} under ∃r.· and binary ⊓ (canonicalized), kept
// within the depth and size bounds. Reaches every canonical concept because
// each one is built from smaller ones by these two steps.
std::unordered_set<Concept> closure_oracle(const Signature& sig, std::size_t depth, std::size_t cap) {
    std::unordered_set<Concept> all{Concept::top(), Concept::bottom()};
    for (const auto& a : sig.concept_names)
        all.insert(Concept::atom(a));
    auto fits = [&](const Concept& c) { return c.role_depth() <= depth && c.size() <= cap; };
    for (bool grew = true; grew;) {
        grew = false;
        std::vector<Concept> cur(all.begin(), all.end());
        std::vector<Concept> fresh;
        for (const auto& c : cur) {
            for (const auto& r : sig.role_names) {
                Concept e = Concept::exists(r, c);
                if (fits(e) && !all.count(e))
                    fresh.push_back(e);
            }
            for (const auto& d : cur) {
                Concept m = canonicalize(RawConcept::conj({to_raw(c), to_raw(d)}));
                if (fits(m) && !all.count(m))
                    fresh.push_back(m);
            }
        }
        for (auto& c : fresh)
            grew |= all.insert(c).second;
    }
    return all;
}

void expect_matches_oracle(const Signature& sig, std::size_t depth, std::size_t cap) {
    auto got = enumerate_concepts(sig, depth, cap);
    std::unordered_set<Concept> uniq(got.begin(), got.end());
    EXPECT_EQ(uniq.size(), got.size()) << "duplicates";
    EXPECT_EQ(uniq, closure_oracle(sig, depth, cap));
    EXPECT_EQ(ConceptSpace(sig, depth, cap).count(), got.size());
    for (const auto& c : got) {
        EXPECT_EQ(canonicalize(to_raw(c)), c);
        EXPECT_LE(c.role_depth(), depth);
        EXPECT_LE(c.size(), cap);
    }
}

} // namespace

TEST(Enumerate, OneAtomDepthZero) {
    Signature sig{{"A"}, {}};
    auto got = enumerate_concepts(sig, 0, 5);
    std::set<std::string> names;
    for (const auto& c : got)
        names.insert(render_concept(c));
    EXPECT_EQ(names, (std::set<std::string>{"Top", "Bottom", "A"}));
}

TEST(Enumerate, OneAtomOneRoleDepthOne) {
    Signature sig{{"A"}, {"r"}};
    auto got = enumerate_concepts(sig, 1, 3);
    std::unordered_set<Concept> s(got.begin(), got.end());
    for (const char* c : {"some r.A", "some r.Top", "A and some r.Top", "Top", "Bottom", "A"})
        EXPECT_TRUE(s.count(parse_concept(c))) << c;
    for (const auto& c : got)
        EXPECT_TRUE(c.is_bottom() || render_concept(c).find("Bottom") == std::string::npos);
    EXPECT_EQ(got.size(), 7u);
}

TEST(Enumerate, FrozenCounts) {
    EXPECT_EQ(ConceptSpace(Signature{{"A", "B"}, {"r"}}, 1, 5).count(), 33u);
    EXPECT_EQ(ConceptSpace(Signature{{"A", "B"}, {"r", "s"}}, 2, 4).count(), 114u);
    EXPECT_EQ(ConceptSpace(active_signature(builtin_fixture("fig7")), 2, 9).count(), 21916u);
    EXPECT_EQ(ConceptSpace(active_signature(builtin_fixture("fig4ii")), 2, 9).count(), 21916u);
}

TEST(Enumerate, Fig3DeskScaleCount) {
    EXPECT_EQ(ConceptSpace(active_signature(builtin_fixture("fig3")), 2, 9).count(), 7754377u);
}

TEST(Enumerate, MatchesTheClosureOracle) {
    expect_matches_oracle(Signature{{"A"}, {}}, 0, 4);
    expect_matches_oracle(Signature{{"A"}, {"r"}}, 1, 3);
    expect_matches_oracle(Signature{{"A", "B"}, {"r"}}, 1, 5);
    expect_matches_oracle(Signature{{"A", "B"}, {"r", "s"}}, 2, 4);
    expect_matches_oracle(Signature{{"A"}, {"r"}}, 3, 5);
    expect_matches_oracle(Signature{{}, {"r", "s"}}, 3, 5);
    expect_matches_oracle(Signature{{"A", "B", "C"}, {"r"}}, 2, 5);
}

TEST(Enumerate, ZeroCapIsEmpty) {
    EXPECT_TRUE(enumerate_concepts(Signature{{"A"}, {"r"}}, 2, 0).empty());
}

TEST(Enumerate, ContainsRandomConceptsWithinBounds) {
    Signature sig{{"A", "B"}, {"r", "s"}};
    auto got = enumerate_concepts(sig, 2, 6);
    std::unordered_set<Concept> s(got.begin(), got.end());
    for (std::uint64_t k = 0; k < 500; ++k) {
        auto rng = tk::rng_for(tk::seed_from_env(), k);
        Concept c = tk::random_concept(rng, sig, 2, 0.05);
        if (c.size() <= 6) {
            EXPECT_TRUE(s.count(c)) << render_concept(c);
        }
    }
}
