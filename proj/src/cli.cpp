#include "epq/cli.hpp"

#include "epq/errors.hpp"
#include "epq/gadgets.hpp"
#include "epq/gdnf.hpp"
#include "epq/homomorphism.hpp"
#include "epq/normalizer.hpp"
#include "epq/queries.hpp"
#include "epq/treewidth.hpp"
#include "text_util.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace epq::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

void write_bundle(const std::string& dir, const Instance& instance) {
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream f(fs::path(dir) / name, std::ios::binary);
        if (!f) throw Error("cannot write " + (fs::path(dir) / name).string());
        f << body;
    };
    write("sentence.epq", render(instance.sentence) + "\n");
    write("structure.str", serialize(instance.structure));
}

Instance read_bundle(const std::string& dir) {
    const auto base = fs::path(dir);
    Structure b = read_structure_file((base / "structure.str").string());
    Formula f = read_formula_file((base / "sentence.epq").string());
    return Instance{std::move(f), std::move(b)};
}

namespace {

struct Outcome {
    std::optional<bool> verdict;
    json result;       // value for the JSON "result" field; null when there is none
    std::string text;  // body printed in text mode after the verdict line
};

struct Options {
    std::string format = "text";
    Limits limits;

    std::string sentence, structure, bundle, strategy = "dnf-hom";
    std::size_t k = 0;
    bool dnf = false;
    std::string signature;
    std::string from, to;
    bool exact = false, witness = false;
    std::string check;
    std::string gadget_kind;
    std::size_t n = 0;
    bool ep6 = false;
    std::string digraph, out_dir, cnf, mode = "two-symbols";
    std::size_t lift_arity = 0;
    std::vector<std::string> gdnf_files;
    std::string tuple;
};

Signature parse_signature_list(const std::string& text) {
    std::vector<RelationSymbol> symbols;
    std::string spaced = text;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    for (const auto& tok : detail::tokenize_line(spaced)) {
        const auto slash = tok.rfind('/');
        if (slash == std::string::npos || slash == 0) throw InvalidArgument("expected NAME/ARITY, got '" + tok + "'");
        try {
            symbols.push_back({tok.substr(0, slash), std::stoul(tok.substr(slash + 1))});
        } catch (const std::logic_error&) {
            throw InvalidArgument("bad arity in '" + tok + "'");
        }
    }
    return Signature(std::move(symbols));
}

std::string verdict_word(bool v) { return v ? "true" : "false"; }

std::string text_of_map(const std::map<std::string, std::string>& m, const Structure& source) {
    std::string out;
    for (const auto& e : source.universe()) out += e + " -> " + m.at(e) + "\n";
    return out;
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw InvalidArgument(std::string("missing required option ") + flag);
}

Outcome do_eval(const Options& o, Stats& stats) {
    std::optional<Instance> inst;
    if (!o.bundle.empty()) {
        if (!o.sentence.empty() || !o.structure.empty())
            throw InvalidArgument("--bundle cannot be combined with --sentence/--structure");
        inst = read_bundle(o.bundle);
    } else {
        require(o.sentence, "--sentence");
        require(o.structure, "--structure");
        inst = Instance{read_formula_file(o.sentence), read_structure_file(o.structure)};
    }
    const auto strategy = parse_strategy(o.strategy);
    if (!strategy) throw InvalidArgument("unknown strategy '" + o.strategy + "' (naive, kvar, dnf-hom, pp-reduction)");
    const bool v = evaluate(inst->sentence, inst->structure, *strategy, o.limits, &stats, o.k);
    return {v, nullptr, ""};
}

Outcome do_normalize(const Options& o, Stats& stats) {
    require(o.sentence, "--sentence");
    const Formula f = read_formula_file(o.sentence);
    const auto members = o.dnf ? to_pp_disjunction(f, o.limits, &stats) : m_normalize(f, o.limits, &stats);
    Outcome r{std::nullopt, json::array(), ""};
    for (const auto& m : members) {
        r.result.push_back(render(m));
        r.text += render(m) + "\n";
    }
    return r;
}

Outcome do_compile_unary(const Options& o, Stats&) {
    require(o.sentence, "--sentence");
    std::optional<Signature> sig;
    if (!o.signature.empty()) sig = parse_signature_list(o.signature);
    const Formula f = read_formula_file(o.sentence);
    const Formula c = compile_unary(f, sig ? &*sig : nullptr, o.limits);
    const auto s = render(c);
    return {std::nullopt, json{{"sentence", s}, {"little-sentences", little_sentence_count(c)}}, s + "\n"};
}

Outcome do_core(const Options& o, Stats& stats) {
    require(o.structure, "--structure");
    const auto c = serialize(core(read_structure_file(o.structure), o.limits, &stats));
    return {std::nullopt, c, c};
}

Outcome do_hom(const Options& o, Stats& stats) {
    require(o.from, "--from");
    require(o.to, "--to");
    const Structure a = read_structure_file(o.from);
    const Structure b = read_structure_file(o.to);
    const auto h = find_homomorphism(a, b, o.limits, &stats);
    if (!h) return {false, nullptr, ""};
    const auto m = named_map(a, b, *h);
    json obj = json::object();
    for (const auto& e : a.universe()) obj[e] = m.at(e);
    return {true, obj, text_of_map(m, a)};
}

Outcome do_treewidth(const Options& o, Stats& stats) {
    require(o.structure, "--structure");
    const Structure a = read_structure_file(o.structure);
    if (!o.check.empty()) {
        const auto d = parse_decomposition(detail::read_file(o.check));
        const auto problems = decomposition_violations(a, d);
        Outcome r{problems.empty(), json::array(), ""};
        for (const auto& p : problems) {
            r.result.push_back(p);
            r.text += p + "\n";
        }
        if (problems.empty()) stats.width = d.width();
        return r;
    }
    const auto tw = o.exact ? treewidth_exact(a, o.limits) : treewidth_upper(a);
    stats.width = tw.width;
    Outcome r{std::nullopt, json{{"width", tw.width}, {"exact", o.exact}}, std::to_string(tw.width) + "\n"};
    if (o.witness) {
        r.result["decomposition"] = serialize(tw.decomposition);
        r.text += serialize(tw.decomposition);
    }
    return r;
}

Outcome do_canonical_query(const Options& o, Stats&) {
    require(o.structure, "--structure");
    const auto s = render(canonical_query(read_structure_file(o.structure)));
    return {std::nullopt, s, s + "\n"};
}

Outcome do_pp_structure(const Options& o, Stats&) {
    require(o.sentence, "--sentence");
    const auto s = serialize(structure_of_pp(read_formula_file(o.sentence)));
    return {std::nullopt, s, s};
}

Outcome do_gadget(const Options& o, Stats&) {
    require(o.structure, "--structure");
    const Structure b = read_structure_file(o.structure);
    const auto s = serialize(o.gadget_kind == "star" ? gadget_star(b) : gadget_plus(b));
    return {std::nullopt, s, s};
}

Outcome do_hn(const Options& o, Stats&) {
    const Formula f = o.ep6 ? hamiltonian_sentence_ep6(o.n, o.limits) : hamiltonian_sentence(o.n);
    const auto s = render(f);
    return {std::nullopt, json{{"sentence", s}, {"variables", classify(f).variables}}, s + "\n"};
}

Outcome bundle_outcome(const Options& o, const Instance& inst) {
    write_bundle(o.out_dir, inst);
    json r{{"bundle", o.out_dir},
           {"elements", inst.structure.size()},
           {"tuples", inst.structure.tuple_count()},
           {"variables", classify(inst.sentence).variables}};
    std::ostringstream text;
    text << "wrote " << (fs::path(o.out_dir) / "sentence.epq").string() << " and "
         << (fs::path(o.out_dir) / "structure.str").string() << " (" << inst.structure.size() << " elements, "
         << inst.structure.tuple_count() << " tuples)\n";
    return {std::nullopt, r, text.str()};
}

Outcome do_reduce_ham(const Options& o, Stats&) {
    require(o.digraph, "--digraph");
    require(o.out_dir, "--out");
    std::optional<std::size_t> lift;
    if (o.lift_arity) lift = o.lift_arity;
    return bundle_outcome(o, reduce_hamiltonian(read_structure_file(o.digraph), lift));
}

Outcome do_reduce_sat(const Options& o, Stats&) {
    require(o.cnf, "--cnf");
    require(o.out_dir, "--out");
    return bundle_outcome(o, reduce_sat(parse_dimacs(detail::read_file(o.cnf)), parse_sat_mode(o.mode)));
}

Outcome do_gdnf_product(const Options& o, Stats&) {
    const auto g = parse_gdnf(detail::read_file(o.gdnf_files.at(0)));
    const auto h = parse_gdnf(detail::read_file(o.gdnf_files.at(1)));
    const auto s = serialize(gdnf_product(g, h));
    return {std::nullopt, s, s};
}

Outcome do_gdnf_expand(const Options& o, Stats&) {
    const auto g = parse_gdnf(detail::read_file(o.gdnf_files.at(0)));
    Outcome r{std::nullopt, json::array(), ""};
    for (const auto& t : gdnf_to_explicit(g, o.limits)) {
        r.result.push_back(t);
        std::string line = "tuple";
        for (const auto& e : t) line += " " + e;
        r.text += line + "\n";
    }
    return r;
}

Outcome do_gdnf_member(const Options& o, Stats&) {
    const auto g = parse_gdnf(detail::read_file(o.gdnf_files.at(0)));
    std::string spaced = o.tuple;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    return {gdnf_member(g, detail::tokenize_line(spaced)), nullptr, ""};
}

json stats_json(const Stats& s) {
    return json{{"nodes-searched", s.nodes},
                {"disjuncts", s.disjuncts},
                {"width", s.width >= 0 ? json(s.width) : json(nullptr)}};
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Model checking for existential positive queries", "epq"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--max-nodes", o.limits.max_nodes, "Search nodes per homomorphism search")->envname("EPQ_MAX_NODES");
    app.add_option("--max-disjuncts", o.limits.max_disjuncts, "DNF size limit")->envname("EPQ_MAX_DISJUNCTS");
    app.add_option("--max-exact-tw", o.limits.max_exact_tw, "Largest universe for exact treewidth")
        ->envname("EPQ_MAX_EXACT_TW");

    std::map<CLI::App*, std::function<Outcome(const Options&, Stats&)>> handlers;

    auto* eval = app.add_subcommand("eval", "Decide whether a structure satisfies a sentence");
    eval->add_option("--sentence", o.sentence, "Sentence file");
    eval->add_option("--structure", o.structure, "Structure file");
    eval->add_option("--bundle", o.bundle, "Directory with sentence.epq and structure.str");
    eval->add_option("--strategy", o.strategy, "naive, kvar, dnf-hom or pp-reduction");
    eval->add_option("--k", o.k, "Variable bound for kvar (default: the sentence's own count)");
    handlers[eval] = do_eval;

    auto* normalize = app.add_subcommand("normalize", "Print the normal form M(phi), one PP sentence per line");
    normalize->add_option("--sentence", o.sentence, "Sentence file");
    normalize->add_flag("--dnf", o.dnf, "Print the raw PP disjunction instead");
    handlers[normalize] = do_normalize;

    auto* unary = app.add_subcommand("compile-unary", "Compile a unary EP sentence to one variable");
    unary->add_option("--sentence", o.sentence, "Sentence file");
    unary->add_option("--signature", o.signature, "Extra symbols, e.g. \"P/1 Q/1\"");
    handlers[unary] = do_compile_unary;

    auto* core_cmd = app.add_subcommand("core", "Print the core of a structure");
    core_cmd->add_option("--structure", o.structure, "Structure file");
    handlers[core_cmd] = do_core;

    auto* hom = app.add_subcommand("hom", "Search for a homomorphism");
    hom->add_option("--from", o.from, "Source structure file");
    hom->add_option("--to", o.to, "Target structure file");
    handlers[hom] = do_hom;

    auto* tw = app.add_subcommand("treewidth", "Treewidth (min-fill upper bound unless --exact)");
    tw->add_option("--structure", o.structure, "Structure file");
    tw->add_flag("--exact", o.exact, "Exact dynamic programming");
    tw->add_flag("--witness", o.witness, "Print a decomposition");
    tw->add_option("--check", o.check, "Validate this decomposition file instead");
    handlers[tw] = do_treewidth;

    auto* cq = app.add_subcommand("canonical-query", "Print the canonical query of a structure");
    cq->add_option("--structure", o.structure, "Structure file");
    handlers[cq] = do_canonical_query;

    auto* pps = app.add_subcommand("pp-structure", "Print the structure of a PP sentence");
    pps->add_option("--sentence", o.sentence, "Sentence file");
    handlers[pps] = do_pp_structure;

    auto* gadget = app.add_subcommand("gadget", "Gadget digraph of a labelled digraph");
    gadget->add_option("kind", o.gadget_kind, "star or plus")->required()->check(CLI::IsMember({"star", "plus"}));
    gadget->add_option("--structure", o.structure, "Labelled digraph file");
    handlers[gadget] = do_gadget;

    auto* hn = app.add_subcommand("hn", "Print the sentence H_n");
    hn->add_option("--n", o.n, "n >= 2")->required();
    hn->add_flag("--ep6", o.ep6, "Six-variable equivalent form");
    handlers[hn] = do_hn;

    auto* reduce = app.add_subcommand("reduce", "Write a reduction instance bundle");
    reduce->require_subcommand(1);
    auto* ham = reduce->add_subcommand("ham", "Directed Hamiltonian circuit");
    ham->add_option("--digraph", o.digraph, "Digraph file over E/2");
    ham->add_option("--lift-arity", o.lift_arity, "Replace E by an F of this arity");
    ham->add_option("--out", o.out_dir, "Bundle directory");
    handlers[ham] = do_reduce_ham;
    auto* sat = reduce->add_subcommand("sat", "CNF satisfiability");
    sat->add_option("--cnf", o.cnf, "DIMACS file");
    sat->add_option("--mode", o.mode, "two-symbols[:K[,L]], single-symbol:K or unary");
    sat->add_option("--out", o.out_dir, "Bundle directory");
    handlers[sat] = do_reduce_sat;

    auto* gdnf = app.add_subcommand("gdnf", "GDNF relations");
    gdnf->require_subcommand(1);
    auto* gprod = gdnf->add_subcommand("product", "Product of two GDNF relations");
    gprod->add_option("files", o.gdnf_files, "Two GDNF files")->required()->expected(2);
    handlers[gprod] = do_gdnf_product;
    auto* gexp = gdnf->add_subcommand("expand", "List the tuples of a GDNF relation");
    gexp->add_option("file", o.gdnf_files, "GDNF file")->required()->expected(1);
    handlers[gexp] = do_gdnf_expand;
    auto* gmem = gdnf->add_subcommand("member", "Membership test without expansion");
    gmem->add_option("file", o.gdnf_files, "GDNF file")->required()->expected(1);
    gmem->add_option("--tuple", o.tuple, "Elements, comma or space separated")->required();
    handlers[gmem] = do_gdnf_member;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitError;
    }

    CLI::App* chosen = nullptr;
    std::string command;
    for (auto* sub : app.get_subcommands()) {
        command = sub->get_name();
        chosen = sub;
        for (auto* inner : sub->get_subcommands()) {
            command += " " + inner->get_name();
            chosen = inner;
        }
    }

    Stats stats;
    json record;
    record["command"] = command;
    try {
        const Outcome r = handlers.at(chosen)(o, stats);
        if (o.format == "json") {
            if (r.verdict) record["verdict"] = *r.verdict;
            record["result"] = r.result;
            record["stats"] = stats_json(stats);
            record["limits-hit"] = false;
            out << record.dump() << '\n';
        } else {
            if (r.verdict) out << verdict_word(*r.verdict) << '\n';
            out << r.text;
        }
        if (r.verdict) return *r.verdict ? kExitTrue : kExitFalse;
        return 0;
    } catch (const std::exception& e) {
        const bool limit = dynamic_cast<const ResourceLimit*>(&e) != nullptr;
        if (o.format == "json") {
            record["error"] = e.what();
            record["stats"] = stats_json(stats);
            record["limits-hit"] = limit;
            out << record.dump() << '\n';
        } else {
            err << "epq " << command << ": " << (limit ? "resource limit: " : "error: ") << e.what() << '\n';
        }
        return kExitError;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"epq"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace epq::cli
