// ciforge: mine EL⊥ concept inclusion bases from finite interpretations.

#include <ciforge/io.hpp>
#include <ciforge/miner.hpp>
#include <ciforge/mmsc.hpp>
#include <ciforge/mvf.hpp>
#include <ciforge/reasoner.hpp>
#include <ciforge/tbox.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace ciforge;

namespace {

struct Source {
    std::string input;
    std::string fixture;

    void attach(CLI::App* cmd) {
        auto* in = cmd->add_option("--input", input, "interpretation file (JSON)");
        auto* fx = cmd->add_option("--fixture", fixture, "built-in interpretation")
                       ->check(CLI::IsMember(fixtures::names()));
        in->excludes(fx);
        fx->excludes(in);
    }

    Interpretation load() const {
        if (!fixture.empty())
            return builtin_fixture(fixture);
        if (input.empty())
            throw CLI::RequiredError("--input or --fixture");
        return load_interpretation(input);
    }
};

std::vector<std::string> split_ids(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string id; std::getline(ss, id, ',');) {
        auto b = id.find_first_not_of(" \t");
        auto e = id.find_last_not_of(" \t");
        if (b != std::string::npos)
            out.push_back(id.substr(b, e - b + 1));
    }
    return out;
}

void print_depth(std::ostream& out, const DepthReport& d) {
    out << "branch: " << to_string(d.branch) << "\n";
    out << "x_lim: {";
    for (std::size_t k = 0; k < d.x_lim.size(); ++k)
        out << (k ? "," : "") << d.x_lim[k];
    out << "}\n";
    out << "product size: " << d.product_size << "\n";
    out << "product mvf: " << d.product_mvf << "\n";
    out << "chosen depth: " << d.chosen_depth << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mine and check EL-bottom concept inclusion bases of finite interpretations"};
    app.require_subcommand(1);

    // mine
    Source mine_src;
    std::string mode = "intents", output;
    std::size_t max_attrs = MinerOptions{}.max_naive_attributes;
    std::size_t product_cap = GraphLimits{}.max_nodes;
    bool stats = false;
    auto* mine = app.add_subcommand("mine", "build a base of the CIs valid in an interpretation");
    mine_src.attach(mine);
    mine->add_option("--mode", mode, "naive or intents")->check(CLI::IsMember({"naive", "intents"}));
    mine->add_option("--output", output, "TBox file to write (stdout if omitted)");
    mine->add_option("--max-attrs", max_attrs, "attribute cap for naive mode");
    mine->add_option("--product-cap", product_cap, "cap on product graph and tree nodes");
    mine->add_flag("--stats", stats, "report per-set depths and print the report to stderr");

    // mvf
    Source mvf_src;
    std::string vertex;
    auto* mvf_cmd = app.add_subcommand("mvf", "maximum vertices visitable by a walk from an element");
    mvf_src.attach(mvf_cmd);
    mvf_cmd->add_option("--vertex", vertex, "element id")->required();

    // mmsc
    Source mmsc_src;
    std::string elements;
    std::optional<std::size_t> depth;
    std::size_t mmsc_cap = GraphLimits{}.max_nodes;
    auto* mmsc_cmd = app.add_subcommand("mmsc", "model-based most specific concept of a set of elements");
    mmsc_src.attach(mmsc_cmd);
    mmsc_cmd->add_option("--elements", elements, "comma separated element ids")->required();
    mmsc_cmd->add_option("--depth", depth, "role depth (default: adaptable depth)");
    mmsc_cmd->add_option("--product-cap", mmsc_cap, "cap on product graph nodes");

    // entails
    std::string tbox_file, ci_text;
    auto* ent = app.add_subcommand("entails", "decide whether a TBox entails a concept inclusion");
    ent->add_option("--tbox", tbox_file, "TBox file")->required();
    ent->add_option("--ci", ci_text, "\"C SubClassOf D\" or \"C EquivalentTo D\"")->required();

    // check
    Source check_src;
    std::string check_tbox;
    std::size_t check_depth = 2, size_cap = 9, max_reported = 20;
    auto* chk = app.add_subcommand("check", "check a TBox for soundness and desk-scale completeness");
    check_src.attach(chk);
    chk->add_option("--tbox", check_tbox, "TBox file")->required();
    chk->add_option("--depth", check_depth, "role depth of enumerated concepts")->required();
    chk->add_option("--size-cap", size_cap, "size cap of enumerated concepts")->required();
    chk->add_option("--max-reported", max_reported, "counterexamples to print");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*mine) {
            auto i = mine_src.load();
            MinerOptions opt;
            opt.max_naive_attributes = max_attrs;
            opt.mmsc.limits.max_nodes = product_cap;
            auto [t, report] = build_base(i, mode == "naive" ? MiningMode::Naive : MiningMode::Intents, opt);
            auto header = report.summary(stats);
            if (output.empty()) {
                write_tbox(std::cout, t, header);
            } else {
                std::ofstream out(output);
                if (!out)
                    throw Error("cannot write '" + output + "'");
                write_tbox(out, t, header);
            }
            if (stats)
                for (const auto& line : report.summary(false))
                    std::cerr << line << "\n";
            return 0;
        }
        if (*mvf_cmd) {
            auto i = mvf_src.load();
            auto g = graph_of_interpretation(i);
            std::cout << mvf(g, static_cast<Vertex>(i.require_index(vertex))) << "\n";
            return 0;
        }
        if (*mmsc_cmd) {
            auto i = mmsc_src.load();
            MmscOptions opt;
            opt.limits.max_nodes = mmsc_cap;
            MmscEngine engine(i, opt);
            auto x = i.make_set(split_ids(elements));
            if (x.none())
                throw ValidationError("--elements names no element");
            auto report = engine.depth(x);
            Concept c = depth ? engine.at_depth(x, *depth) : engine.adaptive(x);
            std::cout << render_concept(c) << "\n";
            std::cout << "depth: " << (depth ? *depth : report.chosen_depth) << "\n";
            std::cout << "extension: " << format_set(i, engine.extension(c)) << "\n";
            print_depth(std::cout, report);
            return 0;
        }
        if (*ent) {
            TBox t = load_tbox(tbox_file);
            Axiom ax = parse_axiom(ci_text);
            bool yes = entails(t, ax.lhs, ax.rhs);
            if (ax.kind == Axiom::Kind::EquivalentTo)
                yes = yes && entails(t, ax.rhs, ax.lhs);
            std::cout << (yes ? "true" : "false") << "\n";
            return 0;
        }
        if (*chk) {
            auto i = check_src.load();
            TBox t = load_tbox(check_tbox);
            bool sound = check_base_sound(i, t);
            CompletenessOptions opt;
            opt.max_reported = max_reported;
            auto rep = check_base_complete(i, t, check_depth, size_cap, opt);
            std::cout << "sound: " << (sound ? "yes" : "no") << "\n";
            std::cout << "concepts checked: " << rep.concepts << "\n";
            std::cout << "failing left-hand sides: " << rep.failures << "\n";
            for (const auto& ce : rep.counterexamples)
                std::cout << "  not entailed: " << render_concept(ce.lhs) << " SubClassOf " << render_concept(ce.rhs)
                          << "\n";
            std::cout << "complete: " << (rep.complete() ? "yes" : "no") << "\n";
            return sound && rep.complete() ? 0 : 1;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
