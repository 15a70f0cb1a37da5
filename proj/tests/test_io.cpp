#include <ciforge/io.hpp>
#include <ciforge/simulation.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <unistd.h>

using namespace ciforge;

namespace {

std::string data_file(const std::string& name) { return std::string(CIFORGE_DATA_DIR) + "/" + name + ".json"; }

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("ciforge_test_" + std::to_string(::getpid()) + "_" + name);
}

} // namespace

TEST(Fixtures, DataFilesMatchTheBuiltins) {
    for (const auto& name : fixtures::names())
        EXPECT_EQ(dump_interpretation(load_interpretation(data_file(name))),
                  dump_interpretation(builtin_fixture(name)))
            << name;
    EXPECT_THROW(builtin_fixture("fig9"), Error);
}

TEST(Fixtures, Fig5Memberships) {
    auto i = builtin_fixture("fig5");
    Symbol r("r");
    EXPECT_TRUE(member("x1", Concept::exists_chain(r, 1, Concept::atom("A")), i));
    EXPECT_FALSE(member("x1", Concept::exists_chain(r, 2, Concept::atom("A")), i));
    EXPECT_EQ(i.size(), 12u);
}

TEST(Fixtures, Fig4iiValidatesTheLhsFamily) {
    auto i = builtin_fixture("fig4ii");
    auto lhs = Concept::exists(Symbol("s"), Concept::exists_chain(Symbol("r"), 5, Concept::atom("B")));
    EXPECT_TRUE(extension(lhs, i).is_subset_of(extension(Concept::atom("A"), i)));
    EXPECT_FALSE(extension(lhs, i).none());
}

TEST(Fixtures, Fig7Unravelling) {
    auto g = graph_of_interpretation(builtin_fixture("fig7"));
    auto t = unravel(g, g.require("a"), 1);
    EXPECT_EQ(concept_of_tree(t), parse_concept("City and some partof.Region"));
}

TEST(ParseInterpretation, Errors) {
    EXPECT_THROW(parse_interpretation(R"({"domain": ["a"], "roles": {"r": [["a", "b"]]}})"), ValidationError);
    EXPECT_THROW(parse_interpretation(R"({"domain": []})"), ValidationError);
    EXPECT_THROW(parse_interpretation(R"({"concepts": {}})"), ValidationError);
    EXPECT_THROW(parse_interpretation(R"({"domain": ["a"], "roles": {"r": [["a"]]}})"), ValidationError);
    EXPECT_THROW(parse_interpretation(R"({"domain": [1]})"), ValidationError);
    EXPECT_THROW(parse_interpretation(R"({"domain": ["a"],)"), ParseError);
    EXPECT_THROW(parse_interpretation("[1, 2]"), ValidationError);
    EXPECT_THROW(load_interpretation("/nonexistent/file.json"), Error);
}

TEST(ParseInterpretation, RoundTrip) {
    auto i = builtin_fixture("fig3");
    auto back = parse_interpretation(dump_interpretation(i));
    EXPECT_EQ(dump_interpretation(back), dump_interpretation(i));
    EXPECT_EQ(back.domain(), i.domain());

    auto path = temp_path("fig3.json");
    save_interpretation(i, path.string());
    EXPECT_EQ(dump_interpretation(load_interpretation(path.string())), dump_interpretation(i));
    std::filesystem::remove(path);
}

TEST(TBoxFiles, RoundTrip) {
    TBox t;
    t.add_inclusion(parse_concept("City"), parse_concept("some partof.Region"));
    t.add_equivalence(parse_concept("Party"), parse_concept("Party and some x.Top"));
    auto path = temp_path("t.owl");
    {
        std::ofstream out(path);
        write_tbox(out, t, {"note"});
    }
    auto back = load_tbox(path.string());
    EXPECT_EQ(back.axioms(), t.axioms());
    std::filesystem::remove(path);
    EXPECT_THROW(load_tbox("/nonexistent/tbox.txt"), Error);
}
