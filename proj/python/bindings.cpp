#include "epq/cli.hpp"
#include "epq/errors.hpp"
#include "epq/evaluator.hpp"
#include "epq/gadgets.hpp"
#include "epq/gdnf.hpp"
#include "epq/homomorphism.hpp"
#include "epq/normalizer.hpp"
#include "epq/queries.hpp"
#include "epq/treewidth.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace epq;

namespace {

py::dict stats_dict(const Stats& s) {
    py::dict d;
    d["nodes"] = s.nodes;
    d["disjuncts"] = s.disjuncts;
    d["max_arity"] = s.max_arity;
    d["width"] = s.width;
    return d;
}

Strategy strategy_of(const std::string& name) {
    auto s = parse_strategy(name);
    if (!s) throw InvalidArgument("unknown strategy '" + name + "'");
    return *s;
}

} // namespace

PYBIND11_MODULE(_epq, m) {
    m.doc() = "Model checking for existential positive queries";

    py::register_exception<SignatureMismatch>(m, "SignatureMismatch", PyExc_ValueError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);

    py::class_<Limits>(m, "Limits")
        .def(py::init<>())
        .def_readwrite("max_nodes", &Limits::max_nodes)
        .def_readwrite("max_disjuncts", &Limits::max_disjuncts)
        .def_readwrite("max_exact_tw", &Limits::max_exact_tw)
        .def_readwrite("max_core", &Limits::max_core);

    py::class_<Structure>(m, "Structure")
        .def_property_readonly("universe", &Structure::universe)
        .def("__len__", &Structure::size)
        .def("tuples", [](const Structure& s, const std::string& symbol) {
            std::vector<NamedTuple> out;
            for (const auto& t : s.relation(symbol)) {
                NamedTuple named;
                for (int e : t) named.push_back(s.name(e));
                out.push_back(std::move(named));
            }
            return out;
        })
        .def("signature", [](const Structure& s) {
            std::vector<std::pair<std::string, std::size_t>> out;
            for (const auto& sym : s.signature().symbols()) out.emplace_back(sym.name, sym.arity);
            return out;
        })
        .def("__eq__", &Structure::operator==)
        .def("__str__", [](const Structure& s) { return serialize(s); });

    py::class_<Formula>(m, "Formula")
        .def("__str__", [](const Formula& f) { return render(f); })
        .def("__eq__", &Formula::operator==);

    m.def("parse_structure", &parse_structure, py::arg("text"));
    m.def("parse_formula", [](const std::string& text) { return parse_formula(text); }, py::arg("text"));
    m.def("render", &render);
    m.def("classify", [](const Formula& f) {
        const auto c = classify(f);
        py::dict d;
        d["fragment"] = fragment_name(c.fragment);
        d["variables"] = c.variables;
        d["closed"] = c.closed;
        d["equality_free"] = c.equality_free;
        return d;
    });

    m.def("find_homomorphism", [](const Structure& a, const Structure& b, const Limits& limits) -> py::object {
        auto h = find_homomorphism(a, b, limits);
        if (!h) return py::none();
        return py::cast(named_map(a, b, *h));
    }, py::arg("a"), py::arg("b"), py::arg("limits") = Limits{});
    m.def("core", [](const Structure& a) { return core(a); });
    m.def("product", [](const Structure& a, const Structure& b) { return product(a, b); });
    m.def("canonical_query", &canonical_query);
    m.def("structure_of_pp", [](const Formula& f) { return structure_of_pp(f); });

    m.def("to_pp_disjunction", [](const Formula& f) { return to_pp_disjunction(f); });
    m.def("m_normalize", [](const Formula& f) { return m_normalize(f); });
    m.def("compile_unary", [](const Formula& f) { return compile_unary(f); });

    m.def("treewidth", [](const Structure& a, bool exact) {
        return exact ? treewidth_exact(a).width : treewidth_upper(a).width;
    }, py::arg("structure"), py::arg("exact") = true);

    m.def("evaluate", [](const Formula& f, const Structure& b, const std::string& strategy, std::size_t k) {
        Stats stats;
        const bool v = evaluate(f, b, strategy_of(strategy), Limits{}, &stats, k);
        return py::make_tuple(v, stats_dict(stats));
    }, py::arg("sentence"), py::arg("structure"), py::arg("strategy") = "dnf-hom", py::arg("k") = 0);

    m.def("gadget_star", &gadget_star);
    m.def("gadget_plus", &gadget_plus);
    m.def("hamiltonian_sentence", &hamiltonian_sentence);
    m.def("reduce_hamiltonian", [](const Structure& g, std::optional<std::size_t> lift) {
        auto inst = reduce_hamiltonian(g, lift);
        return py::make_tuple(inst.sentence, inst.structure);
    }, py::arg("digraph"), py::arg("lift_arity") = py::none());
    m.def("reduce_sat", [](const std::string& dimacs, const std::string& mode) {
        auto inst = reduce_sat(parse_dimacs(dimacs), parse_sat_mode(mode));
        return py::make_tuple(inst.sentence, inst.structure);
    }, py::arg("dimacs"), py::arg("mode") = "two-symbols");

    m.def("gdnf_from_explicit", [](const std::vector<NamedTuple>& tuples, const std::vector<std::string>& universe,
                                   std::size_t arity) { return serialize(gdnf_from_explicit(tuples, universe, arity)); });
    m.def("gdnf_product", [](const std::string& g, const std::string& h) {
        return serialize(gdnf_product(parse_gdnf(g), parse_gdnf(h)));
    });
    m.def("gdnf_to_explicit", [](const std::string& g) { return gdnf_to_explicit(parse_gdnf(g)); });

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
