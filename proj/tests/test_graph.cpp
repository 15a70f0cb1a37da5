#include <ciforge/graph.hpp>
#include <ciforge/io.hpp>
#include <ciforge/mvf.hpp>
#include <ciforge/semantics.hpp>
#include <ciforge/simulation.hpp>
#include <ciforge/testkit.hpp>

#include <gtest/gtest.h>

#include <algorithm>

using namespace ciforge;
namespace tk = ciforge::testkit;

namespace {

std::vector<std::string> label_names(const DescriptionGraph& g, Vertex v) {
    std::vector<std::string> out;
    for (auto a : g.labels(v))
        out.push_back(a.str());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> names_of(const ProductGraph& p) {
    std::vector<std::string> out;
    for (Vertex v = 0; v < p.graph.size(); ++v)
        out.push_back(p.graph.name(v));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(GraphOfInterpretation, Fig3) {
    auto i = builtin_fixture("fig3");
    auto g = graph_of_interpretation(i);
    EXPECT_EQ(g.size(), 7u);
    Vertex x1 = g.require("x1"), x5 = g.require("x5");
    EXPECT_TRUE(g.has_edge(x1, Symbol("partof"), x5));
    EXPECT_EQ(label_names(g, x5), (std::vector<std::string>{"Region"}));
    EXPECT_EQ(g.edge_count(), 6u);
}

TEST(GraphOfInterpretation, EmptyExtensions) {
    InterpretationData d;
    d.domain = {"a"};
    auto g = graph_of_interpretation(Interpretation(d));
    EXPECT_EQ(g.size(), 1u);
    EXPECT_EQ(g.edge_count(), 0u);
    EXPECT_TRUE(g.labels(0).empty());
}

TEST(GraphOfInterpretation, Fig4i) {
    auto g = graph_of_interpretation(builtin_fixture("fig4i"));
    Vertex v1 = g.require("v1"), v2 = g.require("v2");
    Symbol r("r");
    EXPECT_EQ(g.size(), 2u);
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_TRUE(g.has_edge(v1, r, v2));
    EXPECT_TRUE(g.has_edge(v2, r, v2));
    EXPECT_EQ(label_names(g, v1), (std::vector<std::string>{"A"}));
    EXPECT_TRUE(g.labels(v2).empty());
}

TEST(TreeOfConcept, Fig2) {
    auto c = parse_concept("City and (some government.Party) and (some partof.(Region and (some capital.Top)))");
    auto t = tree_of_concept(c);
    ASSERT_TRUE(t.valid());
    EXPECT_EQ(t.size(), 4u);
    EXPECT_EQ(label_names(t.graph, t.root), (std::vector<std::string>{"City"}));
    auto gov = t.graph.successors(t.root, Symbol("government"));
    auto part = t.graph.successors(t.root, Symbol("partof"));
    ASSERT_EQ(gov.size(), 1u);
    ASSERT_EQ(part.size(), 1u);
    EXPECT_EQ(label_names(t.graph, gov[0]), (std::vector<std::string>{"Party"}));
    EXPECT_EQ(label_names(t.graph, part[0]), (std::vector<std::string>{"Region"}));
    auto cap = t.graph.successors(part[0], Symbol("capital"));
    ASSERT_EQ(cap.size(), 1u);
    EXPECT_TRUE(t.graph.labels(cap[0]).empty());
    EXPECT_EQ(concept_of_tree(t), c);
}

TEST(TreeOfConcept, TopAndChains) {
    auto t = tree_of_concept(Concept::top());
    EXPECT_EQ(t.size(), 1u);
    EXPECT_TRUE(t.graph.labels(t.root).empty());
    EXPECT_EQ(concept_of_tree(t), Concept::top());

    auto chain = tree_of_concept(parse_concept("some r.some r.A"));
    EXPECT_EQ(chain.size(), 3u);
    EXPECT_EQ(chain.height(), 2u);
    for (Vertex v = 0; v < chain.size(); ++v)
        if (chain.depth[v] == 2)
            EXPECT_EQ(label_names(chain.graph, v), (std::vector<std::string>{"A"}));
        else
            EXPECT_TRUE(chain.graph.labels(v).empty());
    EXPECT_THROW(tree_of_concept(Concept::bottom()), ValidationError);
}

TEST(ConceptOfTree, DuplicateChildrenCollapse) {
    DescriptionTree t;
    t.root = t.add_node(no_vertex, Symbol(), {Symbol("A")});
    t.add_node(t.root, Symbol("r"), {Symbol("B")});
    t.add_node(t.root, Symbol("r"), {Symbol("B")});
    Concept c = concept_of_tree(t);
    EXPECT_EQ(c, parse_concept("A and some r.B"));
    // Same extension as the literal reading on every small interpretation.
    auto literal = RawConcept::conj({RawConcept::atom("A"), RawConcept::exists("r", RawConcept::atom("B")),
                                     RawConcept::exists("r", RawConcept::atom("B"))});
    for (std::uint64_t k = 0; k < 200; ++k) {
        auto rng = tk::rng_for(tk::seed_from_env(), k);
        tk::RandomShape shape;
        shape.max_elements = 3;
        auto i = tk::random_interpretation(rng, shape);
        EXPECT_EQ(evaluate_raw(literal, i), SemanticEvaluator(i)(c));
    }
}

TEST(TreeOfConcept, RoundTripOnRandomConcepts) {
    Signature sig{{"A", "B"}, {"r", "s"}};
    for (std::uint64_t k = 0; k < 300; ++k) {
        auto rng = tk::rng_for(tk::seed_from_env(), 500 + k);
        Concept c = tk::random_concept(rng, sig, 3);
        if (c.is_bottom())
            continue;
        auto t = tree_of_concept(c);
        EXPECT_TRUE(t.valid());
        EXPECT_EQ(t.height(), c.role_depth());
        EXPECT_EQ(concept_of_tree(t), c) << render_concept(c);
    }
}

TEST(Unravel, Fig7) {
    auto g = graph_of_interpretation(builtin_fixture("fig7"));
    Vertex a = g.require("a");
    auto t1 = unravel(g, a, 1);
    ASSERT_TRUE(t1.valid());
    ASSERT_EQ(t1.size(), 2u);
    EXPECT_EQ(label_names(t1.graph, t1.root), (std::vector<std::string>{"City"}));
    auto kids = t1.graph.successors(t1.root, Symbol("partof"));
    ASSERT_EQ(kids.size(), 1u);
    EXPECT_EQ(label_names(t1.graph, kids[0]), (std::vector<std::string>{"Region"}));

    auto t3 = unravel(g, a, 3);
    ASSERT_EQ(t3.size(), 4u);
    std::vector<std::string> deepest;
    for (Vertex v = 0; v < t3.size(); ++v)
        if (t3.depth[v] == 3)
            deepest = t3.walk(v, g);
    EXPECT_EQ(deepest, (std::vector<std::string>{"a", "partof", "b", "capital", "a", "partof", "b"}));
    EXPECT_EQ(concept_of_tree(t3),
              parse_concept("City and some partof.(Region and some capital.(City and some partof.Region))"));
}

TEST(Unravel, DepthZeroIsTheLabelledRoot) {
    auto g = graph_of_interpretation(builtin_fixture("fig3"));
    for (Vertex v = 0; v < g.size(); ++v) {
        auto t = unravel(g, v, 0);
        EXPECT_EQ(t.size(), 1u);
        EXPECT_EQ(t.graph.labels(t.root), g.labels(v));
    }
}

TEST(Unravel, CapRaisesResourceError) {
    auto g = graph_of_interpretation(builtin_fixture("fig4ii"));
    DescriptionGraph two;
    two.add_vertex();
    two.add_edge(0, Symbol("r"), 0);
    two.add_edge(0, Symbol("s"), 0);
    EXPECT_THROW(unravel(two, 0, 20, GraphLimits{1000}), ResourceError);
    EXPECT_NO_THROW(unravel(g, 0, 20, GraphLimits{1000}));
}

TEST(Unravel, TruncationOfAnUnravellingIsTheShallowerUnravelling) {
    for (std::uint64_t k = 0; k < 100; ++k) {
        auto rng = tk::rng_for(tk::seed_from_env(), 900 + k);
        auto g = tk::random_graph(rng, 5);
        Vertex v = static_cast<Vertex>(tk::uniform(rng, 0, g.size() - 1));
        auto deep = unravel(g, v, 4);
        for (std::size_t d = 0; d <= 4; ++d)
            EXPECT_EQ(concept_of_tree(truncate(deep, d)), concept_of_tree(unravel(g, v, d)));
    }
}

TEST(ProductTrees, SelfProductHasTheOriginalOnTheDiagonal) {
    auto g = graph_of_interpretation(builtin_fixture("fig3"));
    auto t = unravel(g, g.require("x1"), 2);
    auto p = product_trees({t, t});
    EXPECT_TRUE(p.valid());
    EXPECT_EQ(concept_of_tree(p), concept_of_tree(t));
    EXPECT_GE(p.size(), t.size());
}

TEST(ProductTrees, Fig3X1X2) {
    auto g = graph_of_interpretation(builtin_fixture("fig3"));
    auto p = product_trees({unravel(g, g.require("x1"), 1), unravel(g, g.require("x2"), 1)});
    EXPECT_EQ(label_names(p.graph, p.root), (std::vector<std::string>{"City"}));
    auto gov = p.graph.successors(p.root, Symbol("government"));
    auto part = p.graph.successors(p.root, Symbol("partof"));
    ASSERT_EQ(gov.size(), 1u);
    ASSERT_EQ(part.size(), 1u);
    EXPECT_EQ(label_names(p.graph, gov[0]), (std::vector<std::string>{"Party"}));
    EXPECT_EQ(label_names(p.graph, part[0]), (std::vector<std::string>{"Region"}));
    EXPECT_EQ(concept_of_tree(p), parse_concept("City and (some government.Party) and (some partof.Region)"));
}

TEST(ProductTrees, UnlabelledPointKillsEverything) {
    auto g = graph_of_interpretation(builtin_fixture("fig3"));
    DescriptionTree point;
    point.root = point.add_node(no_vertex, Symbol(), {});
    auto p = product_trees({unravel(g, 0, 3), point});
    EXPECT_EQ(p.size(), 1u);
    EXPECT_TRUE(p.graph.labels(p.root).empty());
}

TEST(ProductTrees, ConceptIsTheLeastCommonSubsumerOnRandomTrees) {
    // The product tree's concept is ∅-subsumed by nothing more specific than
    // both factors: it subsumes both, and each factor-common subsumer at the
    // same depth subsumes it (checked through simulations).
    Signature sig{{"A", "B"}, {"r", "s"}};
    for (std::uint64_t k = 0; k < 100; ++k) {
        auto rng = tk::rng_for(tk::seed_from_env(), 1300 + k);
        Concept c = tk::random_concept(rng, sig, 2), d = tk::random_concept(rng, sig, 2);
        if (c.is_bottom() || d.is_bottom())
            continue;
        Concept lcs = concept_of_tree(product_trees({tree_of_concept(c), tree_of_concept(d)}));
        EXPECT_TRUE(subsumed_empty(c, lcs));
        EXPECT_TRUE(subsumed_empty(d, lcs));
        Concept e = tk::random_concept(rng, sig, 2);
        if (subsumed_empty(c, e) && subsumed_empty(d, e)) {
            EXPECT_TRUE(subsumed_empty(lcs, e));
        }
    }
}

TEST(ProductReachable, Fig3X1X2) {
    auto i = builtin_fixture("fig3");
    auto g = graph_of_interpretation(i);
    auto p = product_reachable(g, {g.require("x1"), g.require("x2")});
    EXPECT_EQ(names_of(p), (std::vector<std::string>{"(x1,x2)", "(x3,x4)", "(x5,x7)", "(x6,x2)"}));
    EXPECT_EQ(p.graph.name(0), "(x1,x2)");
    EXPECT_TRUE(p.complete);
    std::uint32_t longest = 0;
    for (auto d : p.distance)
        longest = std::max(longest, d);
    EXPECT_EQ(longest, 2u);
}

TEST(ProductReachable, Fig3X1X7) {
    auto g = graph_of_interpretation(builtin_fixture("fig3"));
    auto p = product_reachable(g, {g.require("x1"), g.require("x7")});
    EXPECT_EQ(p.graph.size(), 1u);
    EXPECT_EQ(p.graph.edge_count(), 0u);
}

TEST(ProductReachable, SingleFactorIsTheReachableSubgraph) {
    for (std::uint64_t k = 0; k < 100; ++k) {
        auto rng = tk::rng_for(tk::seed_from_env(), 1700 + k);
        auto g = tk::random_graph(rng, 6);
        Vertex v = static_cast<Vertex>(tk::uniform(rng, 0, g.size() - 1));
        auto p = product_reachable(g, {v});
        EXPECT_EQ(p.graph.size(), reach_count(g, v));
        for (Vertex u = 0; u < p.graph.size(); ++u) {
            EXPECT_EQ(p.graph.labels(u), g.labels(p.tuples[u][0]));
            EXPECT_EQ(p.graph.out(u).size(), g.out(p.tuples[u][0]).size());
        }
    }
}

TEST(ProductReachable, IsSymmetricUpToSwappingComponents) {
    for (std::uint64_t k = 0; k < 100; ++k) {
        auto rng = tk::rng_for(tk::seed_from_env(), 2100 + k);
        auto g = tk::random_graph(rng, 5);
        Vertex a = static_cast<Vertex>(tk::uniform(rng, 0, g.size() - 1));
        Vertex b = static_cast<Vertex>(tk::uniform(rng, 0, g.size() - 1));
        auto p = product_reachable(g, {a, b});
        auto q = product_reachable(g, {b, a});
        EXPECT_EQ(p.graph.size(), q.graph.size());
        EXPECT_EQ(p.graph.edge_count(), q.graph.edge_count());
        EXPECT_TRUE(equivalent_empty(concept_of_tree(unravel(p.graph, 0, 3)), concept_of_tree(unravel(q.graph, 0, 3))));
    }
}

TEST(ProductReachable, DepthLimitMarksIncomplete) {
    auto g = graph_of_interpretation(builtin_fixture("fig4i"));
    auto p = product_reachable(std::vector<const DescriptionGraph*>{&g, &g}, {0, 0}, {}, 1);
    EXPECT_EQ(p.graph.size(), 2u);
    EXPECT_FALSE(p.complete);
    auto all = product_reachable(std::vector<const DescriptionGraph*>{&g, &g}, {0, 0}, {}, 5);
    EXPECT_TRUE(all.complete);
}
