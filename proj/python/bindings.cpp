#include "commands.hpp"
#include "koszulkit/dsl.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace kk;

namespace {

py::dict check_dict(const CheckResult& r) {
    py::list ws;
    for (auto& w : r.witnesses) ws.append(py::dict(py::arg("where") = w.where, py::arg("residue") = w.residue));
    return py::dict(py::arg("ok") = r.ok, py::arg("checked") = r.checked, py::arg("witnesses") = ws);
}

Field field_of(const SpecDoc& d, const std::optional<std::string>& f) { return f ? Field::parse(*f) : d.field; }

}  // namespace

PYBIND11_MODULE(_koszulkit, m) {
    m.attr("__version__") = KK_VERSION;

    py::register_exception<dsl_error>(m, "DslError", PyExc_ValueError);
    py::register_exception<algebra_error>(m, "AlgebraError", PyExc_ArithmeticError);

    py::class_<SpecDoc>(m, "Document")
        .def_readonly("title", &SpecDoc::title)
        .def_property_readonly("field", [](const SpecDoc& d) { return d.field.name(); })
        .def_readonly("params", &SpecDoc::params)
        .def_property_readonly("structures",
                               [](const SpecDoc& d) {
                                   std::vector<std::pair<std::string, std::string>> r;
                                   for (auto& s : d.structures) r.emplace_back(s.name, kind_name(s.kind));
                                   return r;
                               })
        .def_property_readonly("twists", [](const SpecDoc& d) {
            std::vector<std::string> r;
            for (auto& t : d.twists) r.push_back(t.source + " -> " + t.target.str());
            return r;
        })
        .def("serialize", [](const SpecDoc& d) { return serialize(d); })
        .def("to_json", [](const SpecDoc& d) { return doc_json(d); })
        .def("__repr__", [](const SpecDoc& d) { return "<koszulkit.Document '" + d.title + "'>"; });

    m.def("parse", [](const std::string& text, const std::map<std::string, long>& params) { return parse(text, params); },
          py::arg("text"), py::arg("params") = std::map<std::string, long>{});
    m.def("diagnostics", [](const std::string& text) {
        std::vector<std::string> r;
        for (auto& d : parse_doc(text).diags) r.push_back(d.str());
        return r;
    });
    m.def("example_ids", &example_ids);
    m.def("example_text", &example_text);
    m.def("load_example", [](const std::string& id, const std::map<std::string, long>& params) { return load_example(id, params); },
          py::arg("id"), py::arg("params") = std::map<std::string, long>{});

    m.def(
        "check_d2",
        [](const SpecDoc& d, const std::string& name, std::optional<std::string> f) {
            return check_dict(check_d2_generators(to_dga(d.get(name), field_of(d, f))));
        },
        py::arg("doc"), py::arg("name"), py::arg("field") = py::none());
    m.def(
        "check_ainf",
        [](const SpecDoc& d, const std::string& name, int arity, std::optional<std::string> f) {
            return check_dict(check_ainf(to_algebra(d.get(name), field_of(d, f)), arity));
        },
        py::arg("doc"), py::arg("name"), py::arg("arity") = 4, py::arg("field") = py::none());
    m.def(
        "check_coainf",
        [](const SpecDoc& d, const std::string& name, int arity, std::optional<std::string> f) {
            return check_dict(check_coainf(to_coalgebra(d.get(name), field_of(d, f)), arity));
        },
        py::arg("doc"), py::arg("name"), py::arg("arity") = 4, py::arg("field") = py::none());
    m.def(
        "verify_twist",
        [](const SpecDoc& d, size_t i) {
            auto r = verify_twist(doc_twist(d, i));
            py::list eqs;
            for (auto& e : r.equations) eqs.append(py::dict(py::arg("gen") = e.gen, py::arg("ok") = e.ok, py::arg("residue") = e.residue));
            return py::dict(py::arg("ok") = r.ok, py::arg("equations") = eqs);
        },
        py::arg("doc"), py::arg("index") = 0);
    m.def(
        "augmentations",
        [](const SpecDoc& d, const std::string& name, const std::string& field) {
            Field f = Field::parse(field);
            auto a = to_dga(d.get(name), Field::Q());
            std::vector<std::map<std::string, std::string>> r;
            for (auto& e : enumerate_augmentations(to_field(a, f), f)) {
                std::map<std::string, std::string> row;
                for (auto& [g, v] : e.values) row[a.q.gens[g].name] = v.str();
                r.push_back(row);
            }
            return r;
        },
        py::arg("doc"), py::arg("name"), py::arg("field"));
    m.def(
        "koszul_verdict",
        [](const SpecDoc& d, int dmin, int dmax, std::optional<size_t> max_len, size_t i) {
            auto r = koszulity_verdict(doc_twist(d, i), dmin, dmax, max_len);
            return py::dict(py::arg("verdict") = verdict_name(r.verdict), py::arg("detail") = r.detail, py::arg("betti") = r.betti);
        },
        py::arg("doc"), py::arg("dmin"), py::arg("dmax"), py::arg("max_len") = py::none(), py::arg("index") = 0);
    m.def("leg_from_degree", &leg_from_degree);
    m.def(
        "formal_dimension",
        [](const std::string& formula, int n, std::vector<int> a, std::vector<int> b, std::vector<std::pair<int, int>> sy) {
            DimQuery q;
            q.formula = parse_dim_formula(formula);
            q.n = n;
            q.a = std::move(a);
            q.b = std::move(b);
            for (auto& [deg, s] : sy) q.sy.push_back({deg, s});
            return formal_dimension(q);
        },
        py::arg("formula"), py::arg("n"), py::arg("a") = std::vector<int>{}, py::arg("b") = std::vector<int>{},
        py::arg("sy") = std::vector<std::pair<int, int>>{});

    // the command line front end, in process
    m.def("run_cli", [](std::vector<std::string> args) {
        args.insert(args.begin(), "koszulkit");
        std::vector<const char*> argv;
        for (auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = kkcli::run((int)argv.size(), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
