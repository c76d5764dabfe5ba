#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "seqrank/eval.hpp"
#include "seqrank/ingest.hpp"
#include "seqrank/rankers.hpp"
#include "seqrank/synth.hpp"

namespace py = pybind11;
using namespace seqrank;

namespace {

std::vector<std::vector<double>> matrix_rows(const Matrix& m) {
    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    }
    return rows;
}

Matrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
    int n = static_cast<int>(rows.size());
    int cols = n > 0 ? static_cast<int>(rows[0].size()) : 0;
    Matrix m(n, cols);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != cols) {
            throw UsageError("matrix rows must have equal length");
        }
        for (int j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

EventLog parse_event_log_text(const std::string& text) {
    std::istringstream in(text);
    return parse_event_log(in);
}

SynthSpec make_synth_spec(const std::string& model, int n_items, int n_actors, double flip_prob,
                          const Vector& bt_weights, double edge_prob, std::uint64_t seed,
                          bool sampled) {
    SynthSpec spec;
    if (model == "chain") {
        spec.model = SynthSpec::Model::chain;
    } else if (model == "flip") {
        spec.model = SynthSpec::Model::flip;
    } else if (model == "bradley_terry" || model == "bt") {
        spec.model = SynthSpec::Model::bradley_terry;
    } else {
        throw UsageError("unknown synth model: " + model);
    }
    spec.n_items = n_items;
    spec.n_actors = n_actors;
    spec.flip_prob = flip_prob;
    spec.bt_weights = bt_weights;
    spec.edge_prob = edge_prob;
    spec.seed = seed;
    spec.sampled = sampled;
    spec.validate();
    return spec;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "rank aggregation over partial temporal sequences";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<DegeneracyError>(m, "DegeneracyError", PyExc_ArithmeticError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);
    py::register_exception<DisconnectedGraphError>(m, "DisconnectedGraphError",
                                                   PyExc_ValueError);

    py::class_<ItemCatalog>(m, "ItemCatalog")
        .def("__len__", &ItemCatalog::size)
        .def("ids",
             [](const ItemCatalog& c) {
                 std::vector<std::string> out;
                 for (const auto& [id, name] : c.entries()) out.push_back(id);
                 return out;
             })
        .def("names",
             [](const ItemCatalog& c) {
                 std::vector<std::string> out;
                 for (const auto& [id, name] : c.entries()) out.push_back(name);
                 return out;
             })
        .def("index_of", &ItemCatalog::index_of, py::arg("item_id"));

    py::class_<EventLog>(m, "EventLog")
        .def_property_readonly("n_actors", [](const EventLog& l) { return l.actor_count; })
        .def_property_readonly("n_records",
                               [](const EventLog& l) { return l.records.size(); })
        .def_property_readonly("items", [](const EventLog& l) { return l.items; })
        .def("__repr__", [](const EventLog& l) {
            std::ostringstream os;
            os << "<EventLog records=" << l.records.size() << " items=" << l.items.size()
               << " actors=" << l.actor_count << ">";
            return os.str();
        });

    py::class_<CountMatrix>(m, "CountMatrix")
        .def_property_readonly("n", [](const CountMatrix& c) { return c.n_c; })
        .def_property_readonly("counts", [](const CountMatrix& c) {
            std::vector<std::vector<std::int64_t>> rows(c.n_c, std::vector<std::int64_t>(c.n_c));
            for (int i = 0; i < c.n_c; ++i) {
                for (int j = 0; j < c.n_c; ++j) rows[i][j] = c.at(i, j);
            }
            return rows;
        });

    py::class_<TransitionMatrix>(m, "TransitionMatrix")
        .def_property_readonly("n", [](const TransitionMatrix& p) { return p.n_c; })
        .def_property_readonly("probs",
                               [](const TransitionMatrix& p) { return matrix_rows(p.probs); });

    py::class_<FlowMatrix>(m, "FlowMatrix")
        .def_property_readonly("n", [](const FlowMatrix& f) { return f.n_c; })
        .def_property_readonly("flows",
                               [](const FlowMatrix& f) { return matrix_rows(f.flows); });

    py::class_<MeasurementGraph>(m, "MeasurementGraph")
        .def_property_readonly("n", [](const MeasurementGraph& g) { return g.n_c; })
        .def_property_readonly("m", &MeasurementGraph::m)
        .def_property_readonly("edges", [](const MeasurementGraph& g) { return g.edges; });

    py::class_<Ranking>(m, "Ranking")
        .def_readonly("order", &Ranking::order)
        .def_readonly("scores", &Ranking::scores)
        .def_readonly("method_tag", &Ranking::method_tag)
        .def_readonly("orientation_note", &Ranking::orientation_note)
        .def("__repr__", [](const Ranking& r) {
            std::ostringstream os;
            os << "<Ranking " << r.method_tag << " n=" << r.size() << ">";
            return os.str();
        });

    py::class_<MethodReport>(m, "MethodReport")
        .def_readonly("method_tag", &MethodReport::method_tag)
        .def_property_readonly("ok", &MethodReport::ok)
        .def_property_readonly("ranking",
                               [](const MethodReport& r) -> py::object {
                                   if (!r.ranking) return py::none();
                                   return py::cast(*r.ranking);
                               })
        .def_readonly("gamma", &MethodReport::gamma)
        .def_readonly("runtime_ms", &MethodReport::runtime_ms)
        .def_readonly("notes", &MethodReport::notes);

    py::class_<SolveOptions>(m, "SolveOptions")
        .def(py::init([](double tolerance, int max_iterations, std::uint64_t seed) {
                 SolveOptions o;
                 o.tolerance = tolerance;
                 o.max_iterations = max_iterations;
                 o.seed = seed;
                 o.validate();
                 return o;
             }),
             py::arg("tolerance") = 1e-10, py::arg("max_iterations") = 10000,
             py::arg("seed") = 0)
        .def_readwrite("tolerance", &SolveOptions::tolerance)
        .def_readwrite("max_iterations", &SolveOptions::max_iterations)
        .def_readwrite("seed", &SolveOptions::seed);

    py::class_<PageRankParams>(m, "PageRankParams")
        .def(py::init([](double alpha, bool personalized) {
                 PageRankParams p;
                 p.alpha = alpha;
                 p.personalized = personalized;
                 p.validate();
                 return p;
             }),
             py::arg("alpha") = 0.15, py::arg("personalized") = false)
        .def_readwrite("alpha", &PageRankParams::alpha)
        .def_readwrite("personalized", &PageRankParams::personalized);

    py::class_<FilterSpec>(m, "FilterSpec")
        .def(py::init([](py::object cohort_label, bool exclude_transfers, const std::string& band,
                         double min_item_frac, std::tuple<double, double, double> band_edges) {
                 FilterSpec spec;
                 if (!cohort_label.is_none()) spec.cohort_label = cohort_label.cast<std::string>();
                 spec.exclude_transfers = exclude_transfers;
                 spec.gpa_band = band_from_string(band);
                 spec.min_item_frac = min_item_frac;
                 std::tie(spec.c_min, spec.b_min, spec.a_min) = band_edges;
                 spec.validate();
                 return spec;
             }),
             py::arg("cohort_label") = py::none(), py::arg("exclude_transfers") = false,
             py::arg("gpa_band") = "all", py::arg("min_item_frac") = 0.10,
             py::arg("band_edges") = std::make_tuple(1.5, 2.5, 3.5));

    // ingest
    m.def("parse_event_log", &parse_event_log_text, py::arg("csv_text"),
          "Parse CSV text (with header row) into an event log.");
    m.def(
        "apply_cohort_filter",
        [](const EventLog& log, const FilterSpec& spec) { return apply_cohort_filter(log, spec); },
        py::arg("log"), py::arg("spec"));
    m.def(
        "prune_rare_items",
        [](const EventLog& log, double min_frac) { return prune_rare_items(log, min_frac); },
        py::arg("log"), py::arg("min_frac"));
    m.def("build_count_matrix", &build_count_matrix, py::arg("log"));
    m.def("build_transition_matrix", &build_transition_matrix, py::arg("counts"));
    m.def("build_flow_matrix", &build_flow_matrix, py::arg("probs"));
    m.def("build_measurement_graph", &build_measurement_graph, py::arg("counts"));

    m.def(
        "transition_matrix",
        [](const std::vector<std::vector<double>>& probs) {
            TransitionMatrix p;
            p.probs = matrix_from_rows(probs);
            p.n_c = p.probs.rows();
            validate(p);
            return p;
        },
        py::arg("probs"), "Build a transition matrix from nested lists (validated).");

    // rankers
    m.def("rank_pagerank", &rank_pagerank, py::arg("p"), py::arg("params") = PageRankParams{},
          py::arg("opts") = SolveOptions{});
    m.def("rank_centrality", &rank_centrality, py::arg("p"), py::arg("opts") = SolveOptions{});
    m.def("rank_serial", &rank_serial, py::arg("p"), py::arg("opts") = SolveOptions{});
    m.def("rank_sync", &rank_sync, py::arg("f"), py::arg("g"), py::arg("p"),
          py::arg("opts") = SolveOptions{});
    m.def("rank_least_squares", &rank_least_squares, py::arg("f"), py::arg("g"), py::arg("p"),
          py::arg("opts") = SolveOptions{});
    m.def("rank_svd", &rank_svd, py::arg("f"), py::arg("p"), py::arg("opts") = SolveOptions{});
    m.def("orient_by_gamma", &orient_by_gamma, py::arg("scores"), py::arg("p"),
          py::arg("method_tag"));

    // eval
    m.def("gamma", &seqrank::gamma, py::arg("ranking"), py::arg("p"));
    m.def("kendall_tau", &kendall_tau, py::arg("a"), py::arg("b"));
    m.def("method_report", &method_report, py::arg("methods"), py::arg("p"), py::arg("f"),
          py::arg("g"), py::arg("opts") = SolveOptions{},
          py::arg("pagerank") = PageRankParams{});
    m.def("all_method_tags", []() { return all_method_tags(); });
    m.def(
        "emit_comparison_table",
        [](const std::vector<Ranking>& rankings, const ItemCatalog& catalog, int top_k) {
            ComparisonTable t = emit_comparison_table(rankings, catalog, top_k);
            return py::make_tuple(t.text, t.csv, t.warning);
        },
        py::arg("rankings"), py::arg("catalog"), py::arg("top_k"),
        "Returns (text, csv, warning).");
    m.def("emit_heatmap_csv", &emit_heatmap_csv, py::arg("p"), py::arg("ranking"),
          py::arg("catalog"));

    // synth
    m.def(
        "gen_chain_log",
        [](int n_items, int n_actors, std::uint64_t seed) {
            return gen_chain_log(make_synth_spec("chain", n_items, n_actors, 0.0, {}, 1.0, seed,
                                                 false));
        },
        py::arg("n_items"), py::arg("n_actors"), py::arg("seed") = 0);
    m.def(
        "gen_flip_log",
        [](int n_items, int n_actors, double flip_prob, double edge_prob, std::uint64_t seed) {
            return gen_flip_log(make_synth_spec("flip", n_items, n_actors, flip_prob, {},
                                                edge_prob, seed, false));
        },
        py::arg("n_items"), py::arg("n_actors"), py::arg("flip_prob"),
        py::arg("edge_prob") = 1.0, py::arg("seed") = 0);
    m.def(
        "gen_bradley_terry_matrix",
        [](const Vector& weights, double edge_prob, std::uint64_t seed, bool sampled,
           int n_actors) {
            BtMatrices mats = gen_bradley_terry_matrix(
                make_synth_spec("bradley_terry", static_cast<int>(weights.size()), n_actors, 0.0,
                                weights, edge_prob, seed, sampled));
            return py::make_tuple(mats.p, mats.f, mats.g);
        },
        py::arg("weights"), py::arg("edge_prob") = 1.0, py::arg("seed") = 0,
        py::arg("sampled") = false, py::arg("n_actors") = 1, "Returns (P, F, G).");
    m.def(
        "true_ranking",
        [](const std::string& model, int n_items, const Vector& weights) {
            SynthSpec spec = make_synth_spec(model, n_items, 1, 0.0, weights, 1.0, 0, false);
            return true_ranking(spec);
        },
        py::arg("model"), py::arg("n_items"), py::arg("weights") = Vector{});
    m.def("event_log_to_csv", &event_log_to_csv, py::arg("log"));

    m.attr("__version__") = "0.1.0";
}
