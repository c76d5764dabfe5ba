// seqrank: discover a global ordering of items from partial temporal
// sequences. Subcommands: synth (generate data), ingest (CSV -> matrix
// bundle), rank (run the aggregation methods), eval (score a ranking).

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_set>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqrank/bundle.hpp"
#include "seqrank/eval.hpp"
#include "seqrank/ingest.hpp"
#include "seqrank/rankers.hpp"
#include "seqrank/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace seqrank;

namespace {

struct CommonOpts {
    std::string input;
    std::string output_dir;
    double tol = 1e-10;
    int max_iter = 10000;
    std::uint64_t seed = 0;
};

// --columns actor=sid,item=course,... overrides the default CSV header names.
CsvSchema schema_from_flags(const std::vector<std::string>& overrides) {
    CsvSchema schema;
    for (const auto& entry : overrides) {
        auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw UsageError("--columns entries look like actor=<header-name>; got '" + entry +
                             "'");
        }
        std::string key = entry.substr(0, eq);
        std::string value = entry.substr(eq + 1);
        if (key == "actor") {
            schema.actor = value;
        } else if (key == "item") {
            schema.item = value;
        } else if (key == "period") {
            schema.period = value;
        } else if (key == "grade") {
            schema.grade = value;
        } else if (key == "cohort") {
            schema.cohort = value;
        } else if (key == "transfer") {
            schema.transfer = value;
        } else {
            throw UsageError("unknown column key '" + key +
                             "' (expected actor|item|period|grade|cohort|transfer)");
        }
    }
    return schema;
}

std::string meta_comment_lines(const RunMeta& meta) {
    std::ostringstream os;
    os << "# tool=seqrank version=" << kToolVersion << "\n";
    os << "# config_hash=" << meta.config_hash << " seed=" << meta.seed
       << " tolerance=" << meta.tolerance << " max_iterations=" << meta.max_iterations << "\n";
    for (const auto& n : meta.notes) os << "# " << n << "\n";
    return os.str();
}

std::string format_gamma(double g) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12f", g);
    return buf;
}

FilterSpec filter_from_flags(const std::string& cohort, bool exclude_transfers,
                             const std::string& gpa_band, const std::vector<double>& band_edges,
                             double min_item_frac) {
    FilterSpec spec;
    if (!cohort.empty()) spec.cohort_label = cohort;
    spec.exclude_transfers = exclude_transfers;
    spec.gpa_band = band_from_string(gpa_band);
    if (!band_edges.empty()) {
        if (band_edges.size() != 3) {
            throw UsageError("--band-edges expects three ascending values c_min,b_min,a_min");
        }
        spec.c_min = band_edges[0];
        spec.b_min = band_edges[1];
        spec.a_min = band_edges[2];
    }
    spec.min_item_frac = min_item_frac;
    spec.validate();
    return spec;
}

// Merge display names (and preferred ordering) from a catalog file into a
// log whose items came from the data: items present in the file keep the
// file's order, the rest follow lexicographically.
EventLog apply_catalog_file(EventLog log, const ItemCatalog& file_catalog) {
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& [id, name] : file_catalog.entries()) {
        if (log.items.contains(id)) entries.emplace_back(id, name);
    }
    for (const auto& [id, name] : log.items.entries()) {
        if (file_catalog.index_of(id) < 0) entries.emplace_back(id, name);
    }
    log.items = ItemCatalog(std::move(entries));
    return log;
}

MatrixBundle build_bundle(const EventLog& parsed, const FilterSpec& spec) {
    MatrixBundle bundle;
    bundle.n_s_before = parsed.actor_count;

    FilterStats fstats;
    EventLog filtered = apply_cohort_filter(parsed, spec, &fstats);
    PruneStats pstats;
    EventLog pruned = prune_rare_items(filtered, spec.min_item_frac, &pstats);

    bundle.catalog = pruned.items;
    bundle.n_s_after = pruned.actor_count;
    bundle.c = build_count_matrix(pruned);
    bundle.p = build_transition_matrix(bundle.c);
    bundle.f = build_flow_matrix(bundle.p);
    bundle.g = build_measurement_graph(bundle.c);

    bundle.provenance.filters = spec.describe();
    bundle.provenance.dedup_removed = fstats.dedup_removed;
    bundle.provenance.dropped_cohort = fstats.dropped_cohort;
    bundle.provenance.dropped_transfer = fstats.dropped_transfer;
    bundle.provenance.dropped_gpa = fstats.dropped_gpa;
    bundle.provenance.pruned_items = pstats.pruned_items;

    std::unordered_set<std::string> with_records;
    for (const auto& rec : pruned.records) with_records.insert(rec.actor_id);
    bundle.provenance.zero_record_actors_kept =
        pruned.actor_count - static_cast<int>(with_records.size());

    if (bundle.n_s_after == 0) {
        bundle.provenance.warnings.push_back("all actors were filtered out (n_s_after = 0)");
    }
    return bundle;
}

MatrixBundle load_input_bundle(const CommonOpts& common, const FilterSpec& spec,
                               const std::string& catalog_path, bool filters_given,
                               const CsvSchema& schema = {}) {
    if (common.input.ends_with(".json")) {
        if (filters_given) {
            throw UsageError("cohort/GPA filters apply to CSV input, not to a prebuilt bundle");
        }
        return bundle_from_json(json::parse(read_file(common.input)));
    }
    std::ifstream in(common.input);
    if (!in) throw ParseError("cannot open: " + common.input);
    EventLog parsed = parse_event_log(in, schema);
    if (!catalog_path.empty()) {
        std::ifstream cat(catalog_path);
        if (!cat) throw ParseError("cannot open catalog: " + catalog_path);
        parsed = apply_catalog_file(std::move(parsed), load_catalog_csv(cat));
    }
    return build_bundle(parsed, spec);
}

int run_synth(const CommonOpts& common, const std::string& model, int n_items, int n_actors,
              double flip_prob, double edge_prob, const std::vector<double>& bt_weights,
              bool sampled, const RunMeta& meta) {
    SynthSpec spec;
    if (model == "chain") {
        spec.model = SynthSpec::Model::chain;
    } else if (model == "flip") {
        spec.model = SynthSpec::Model::flip;
    } else if (model == "bt" || model == "bradley_terry") {
        spec.model = SynthSpec::Model::bradley_terry;
    } else {
        throw UsageError("unknown synth model: '" + model + "' (expected chain|flip|bt)");
    }
    spec.n_items = n_items;
    spec.n_actors = n_actors;
    spec.flip_prob = flip_prob;
    spec.edge_prob = edge_prob;
    spec.bt_weights = bt_weights;
    spec.seed = common.seed;
    spec.sampled = sampled;
    spec.validate();

    fs::path out(common.output_dir);
    Ranking truth = true_ranking(spec);

    if (spec.model == SynthSpec::Model::bradley_terry) {
        BtMatrices mats = gen_bradley_terry_matrix(spec);
        MatrixBundle bundle;
        std::vector<std::string> ids;
        for (int i = 0; i < spec.n_items; ++i) ids.push_back(synth_item_id(i, spec.n_items));
        bundle.catalog = ItemCatalog::from_ids_sorted(std::move(ids));
        bundle.n_s_before = spec.n_actors;
        bundle.n_s_after = spec.n_actors;
        bundle.c = CountMatrix(spec.n_items);
        bundle.p = mats.p;
        bundle.f = mats.f;
        bundle.g = mats.g;
        bundle.provenance.filters = "synthetic bradley-terry";
        if (!spec.sampled) {
            bundle.provenance.warnings.push_back(
                "exact-probability mode: count matrix left empty");
        }
        RunMeta m = meta;
        m.notes.push_back(std::string("generator=") + generator_name());
        write_file_atomic(out / "bundle.json", bundle_to_json(bundle, m).dump(1) + "\n");
        write_file_atomic(out / "truth.json",
                          ranking_to_json(truth, bundle.catalog, m).dump(1) + "\n");
        std::cout << "wrote " << (out / "bundle.json").string() << " and truth.json\n";
        return 0;
    }

    EventLog log = spec.model == SynthSpec::Model::chain ? gen_chain_log(spec) : gen_flip_log(spec);
    RunMeta m = meta;
    m.notes.push_back(std::string("generator=") + generator_name());
    std::string csv = meta_comment_lines(m) + event_log_to_csv(log);
    write_file_atomic(out / "synth_log.csv", csv);
    write_file_atomic(out / "truth.json", ranking_to_json(truth, log.items, m).dump(1) + "\n");
    std::cout << "wrote " << (out / "synth_log.csv").string() << " and truth.json\n";
    return 0;
}

int run_ingest(const CommonOpts& common, const FilterSpec& spec, const std::string& catalog_path,
               const CsvSchema& schema, const RunMeta& meta) {
    MatrixBundle bundle = load_input_bundle(common, spec, catalog_path, false, schema);
    fs::path out(common.output_dir);
    write_file_atomic(out / "bundle.json", bundle_to_json(bundle, meta).dump(1) + "\n");
    for (const auto& w : bundle.provenance.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << (out / "bundle.json").string() << " (n_s " << bundle.n_s_before
              << " -> " << bundle.n_s_after << ", items " << bundle.catalog.size() << ")\n";
    return 0;
}

struct CohortRun {
    std::string label; // empty for the single unfiltered run
    std::vector<MethodReport> reports;
    MatrixBundle bundle;
};

int run_rank(const CommonOpts& common, const std::vector<std::string>& cohorts,
             bool exclude_transfers, const std::string& gpa_band,
             const std::vector<double>& band_edges, double min_item_frac,
             const std::string& catalog_path, const CsvSchema& schema,
             std::vector<std::string> methods, const PageRankParams& pr_params,
             const std::vector<std::string>& emit, int top_k, const RunMeta& meta) {
    if (methods.empty()) methods = all_method_tags();
    std::vector<std::string> emit_set = emit;
    if (emit_set.empty()) emit_set = {"rankings", "gamma_table"};
    for (const auto& e : emit_set) {
        static const std::vector<std::string> known = {"rankings", "gamma_table",
                                                       "comparison_table", "heatmap", "matrices"};
        if (std::find(known.begin(), known.end(), e) == known.end()) {
            throw UsageError("unknown emit target: '" + e + "'");
        }
    }
    auto wants = [&](const char* what) {
        return std::find(emit_set.begin(), emit_set.end(), what) != emit_set.end();
    };

    SolveOptions opts;
    opts.tolerance = common.tol;
    opts.max_iterations = common.max_iter;
    opts.seed = common.seed;
    opts.validate();

    bool filters_given = !cohorts.empty() || exclude_transfers || gpa_band != "all" ||
                         !band_edges.empty();

    std::vector<CohortRun> runs;
    if (cohorts.size() > 1 && common.input.ends_with(".json")) {
        throw UsageError("multiple cohorts need CSV input");
    }
    std::vector<std::string> cohort_list = cohorts;
    if (cohort_list.empty()) cohort_list.push_back("");

    for (const auto& cohort : cohort_list) {
        FilterSpec spec = filter_from_flags(cohort, exclude_transfers, gpa_band, band_edges,
                                            min_item_frac);
        CohortRun run;
        run.label = cohort;
        run.bundle = load_input_bundle(common, spec, catalog_path, filters_given, schema);
        run.reports = method_report(methods, run.bundle.p, run.bundle.f, run.bundle.g, opts,
                                    pr_params);
        runs.push_back(std::move(run));
    }

    fs::path out(common.output_dir);
    int succeeded = 0;
    for (const auto& run : runs) {
        fs::path rank_dir = out / "rankings";
        if (!run.label.empty()) rank_dir /= run.label;
        for (const auto& rep : run.reports) {
            if (!rep.ok()) continue;
            ++succeeded;
            if (wants("rankings")) {
                write_file_atomic(rank_dir / (rep.method_tag + ".json"),
                                  ranking_to_json(*rep.ranking, run.bundle.catalog, meta).dump(1) +
                                      "\n");
            }
        }
        if (wants("matrices")) {
            fs::path name = run.label.empty() ? out / "bundle.json"
                                              : out / ("bundle_" + run.label + ".json");
            write_file_atomic(name, bundle_to_json(run.bundle, meta).dump(1) + "\n");
        }
        if (wants("comparison_table")) {
            ComparisonTable table = emit_comparison_table(run.reports, run.bundle.catalog, top_k);
            std::string suffix = run.label.empty() ? "" : "_" + run.label;
            write_file_atomic(out / ("comparison_table" + suffix + ".txt"),
                              meta_comment_lines(meta) + table.text);
            write_file_atomic(out / ("comparison_table" + suffix + ".csv"), table.csv);
            if (!table.warning.empty()) std::cerr << "warning: " << table.warning << "\n";
        }
        if (wants("heatmap")) {
            // Grid is permuted by the first successful method in request order.
            for (const auto& rep : run.reports) {
                if (!rep.ok()) continue;
                RunMeta m = meta;
                m.notes.push_back("heatmap_order=" + rep.method_tag);
                std::string suffix = run.label.empty() ? "" : "_" + run.label;
                write_file_atomic(out / ("heatmap" + suffix + ".csv"),
                                  meta_comment_lines(m) +
                                      emit_heatmap_csv(run.bundle.p, *rep.ranking,
                                                       run.bundle.catalog));
                break;
            }
        }
    }

    if (wants("gamma_table")) {
        std::ostringstream table;
        table << meta_comment_lines(meta);
        if (runs.size() == 1) {
            table << "method,gamma,skipped_pairs,orientation_note,note\n";
            for (const auto& rep : runs[0].reports) {
                table << rep.method_tag << ",";
                if (rep.ok()) {
                    GammaDetail gd = gamma_detail(rep.ranking->order, runs[0].bundle.p);
                    table << format_gamma(gd.value) << "," << gd.skipped_pairs << ",\""
                          << rep.ranking->orientation_note << "\",";
                } else {
                    table << "error,,,\"" << rep.notes << "\"";
                }
                table << "\n";
            }
        } else {
            table << "method";
            for (const auto& run : runs) table << "," << run.label;
            table << "\n";
            for (std::size_t m = 0; m < runs[0].reports.size(); ++m) {
                table << runs[0].reports[m].method_tag;
                for (const auto& run : runs) {
                    table << ",";
                    if (run.reports[m].ok()) {
                        table << format_gamma(run.reports[m].gamma);
                    } else {
                        table << "error";
                    }
                }
                table << "\n";
            }
        }
        write_file_atomic(out / "gamma_table.csv", table.str());
    }

    for (const auto& run : runs) {
        for (const auto& rep : run.reports) {
            std::cout << (run.label.empty() ? "" : run.label + " ") << rep.method_tag << ": ";
            if (rep.ok()) {
                std::cout << "gamma=" << format_gamma(rep.gamma) << " (" << rep.runtime_ms
                          << " ms)";
                if (!rep.notes.empty()) std::cout << " [" << rep.notes << "]";
            } else {
                std::cout << "failed: " << rep.notes;
            }
            std::cout << "\n";
        }
    }
    if (succeeded == 0) {
        // surface the first failure's category
        for (const auto& run : runs) {
            for (const auto& rep : run.reports) {
                if (!rep.ok()) {
                    throw Error(rep.error_code, "no method succeeded; first failure: " + rep.notes);
                }
            }
        }
        throw UsageError("no methods were run");
    }
    return 0;
}

int run_eval(const CommonOpts& common, const std::string& ranking_path,
             const std::string& truth_path, const RunMeta& meta) {
    MatrixBundle bundle = bundle_from_json(json::parse(read_file(common.input)));
    Ranking r = ranking_from_json(json::parse(read_file(ranking_path)), bundle.catalog);
    GammaDetail gd = gamma_detail(r.order, bundle.p);

    ordered_json metrics;
    metrics["meta"] = meta_to_json(meta);
    metrics["method_tag"] = r.method_tag;
    metrics["gamma"] = gd.value;
    metrics["skipped_pairs"] = gd.skipped_pairs;

    std::cout << "gamma = " << format_gamma(gd.value) << " (skipped_pairs=" << gd.skipped_pairs
              << ")\n";
    if (!truth_path.empty()) {
        Ranking truth = ranking_from_json(json::parse(read_file(truth_path)), bundle.catalog);
        double tau = kendall_tau(r, truth);
        metrics["kendall_tau"] = tau;
        std::cout << "kendall_tau = " << format_gamma(tau) << "\n";
    }
    std::cout << metrics.dump() << "\n";
    if (!common.output_dir.empty()) {
        write_file_atomic(fs::path(common.output_dir) / "metrics.json", metrics.dump(1) + "\n");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rank aggregation over partial temporal sequences"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string model = "chain";
    int n_items = 2, n_actors = 1;
    double flip_prob = 0.0, edge_prob = 1.0;
    std::vector<double> bt_weights;
    bool sampled = false;

    std::vector<std::string> cohorts;
    bool exclude_transfers = false;
    std::string gpa_band = "all";
    std::vector<double> band_edges;
    double min_item_frac = 0.10;
    std::string catalog_path;
    std::vector<std::string> column_overrides;

    std::vector<std::string> methods;
    PageRankParams pr_params;
    std::vector<std::string> emit;
    int top_k = 11;
    std::string ranking_path, truth_path;

    auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--tol", common.tol, "solver tolerance");
        cmd->add_option("--max-iter", common.max_iter, "solver iteration cap");
        cmd->add_option("--seed", common.seed, "random seed");
    };
    auto add_filter_flags = [&](CLI::App* cmd) {
        cmd->add_option("--cohort", cohorts, "keep actors whose last-period label matches")
            ->take_all();
        cmd->add_flag("--exclude-transfers", exclude_transfers, "drop transfer-flagged actors");
        cmd->add_option("--gpa-band", gpa_band, "GPA band: all|A|B|C");
        cmd->add_option("--band-edges", band_edges, "band edges c_min,b_min,a_min")
            ->delimiter(',');
        cmd->add_option("--min-item-frac", min_item_frac,
                        "drop items taken by fewer than ceil(frac*n_s) actors");
        cmd->add_option("--catalog", catalog_path, "id,name catalog CSV for display names");
        cmd->add_option("--columns", column_overrides,
                        "CSV header overrides, e.g. actor=sid,item=course,period=q")
            ->delimiter(',');
    };

    CLI::App* synth = app.add_subcommand("synth", "generate synthetic ground-truth data");
    synth->add_option("--model", model, "chain|flip|bt")->required();
    synth->add_option("--n-items", n_items, "number of items")->required();
    synth->add_option("--actors", n_actors, "number of actors");
    synth->add_option("--flip-prob", flip_prob, "flip model: adjacent swap probability");
    synth->add_option("--edge-prob", edge_prob, "pairwise observation retention");
    synth->add_option("--bt-weights", bt_weights, "bradley-terry lateness weights")
        ->delimiter(',');
    synth->add_flag("--sampled", sampled, "bt: sample finite comparisons instead of exact probabilities");
    synth->add_option("--out", common.output_dir, "output directory")->required();
    add_solver_flags(synth);

    CLI::App* ingest = app.add_subcommand("ingest", "parse an event CSV into a matrix bundle");
    ingest->add_option("--input", common.input, "event CSV")->required();
    ingest->add_option("--out", common.output_dir, "output directory")->required();
    add_filter_flags(ingest);
    add_solver_flags(ingest);

    CLI::App* rank = app.add_subcommand("rank", "run ranking methods on a bundle or CSV");
    rank->add_option("--input", common.input, "matrix bundle (.json) or event CSV")->required();
    rank->add_option("--out", common.output_dir, "output directory")->required();
    rank->add_option("--methods", methods,
                     "subset of pagerank,rankcentrality,serialrank,syncrank,leastsquares,svd")
        ->delimiter(',');
    rank->add_option("--alpha", pr_params.alpha, "pagerank teleportation probability");
    rank->add_flag("--personalized", pr_params.personalized, "personalized pagerank second pass");
    rank->add_option("--emit", emit, "rankings,gamma_table,comparison_table,heatmap,matrices")
        ->delimiter(',');
    rank->add_option("--top-k", top_k, "rows in comparison tables");
    add_filter_flags(rank);
    add_solver_flags(rank);

    CLI::App* eval_cmd = app.add_subcommand("eval", "score a ranking file against a bundle");
    eval_cmd->add_option("--input", common.input, "matrix bundle (.json)")->required();
    eval_cmd->add_option("--ranking", ranking_path, "ranking file to score")->required();
    eval_cmd->add_option("--truth", truth_path, "ground-truth ranking for kendall tau");
    eval_cmd->add_option("--out", common.output_dir, "directory for metrics.json");
    add_solver_flags(eval_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ExitCode::usage);
    }

    try {
        // Canonical config string -> hash recorded in every output file.
        // Filesystem locations are excluded so the same semantic run is
        // byte-identical regardless of where it reads or writes.
        std::ostringstream canonical;
        for (int i = 1; i < argc; ++i) {
            std::string arg = argv[i];
            if (arg == "--out" || arg == "--input" || arg == "--ranking" || arg == "--truth" ||
                arg == "--catalog") {
                ++i;
                continue;
            }
            canonical << arg << '\x1f';
        }
        RunMeta meta;
        meta.config_hash = config_hash(canonical.str());
        meta.seed = common.seed;
        meta.tolerance = common.tol;
        meta.max_iterations = common.max_iter;

        if (synth->parsed()) {
            return run_synth(common, model, n_items, n_actors, flip_prob, edge_prob, bt_weights,
                             sampled, meta);
        }
        if (ingest->parsed()) {
            FilterSpec spec = filter_from_flags(cohorts.empty() ? "" : cohorts.front(),
                                                exclude_transfers, gpa_band, band_edges,
                                                min_item_frac);
            if (cohorts.size() > 1) throw UsageError("ingest accepts one --cohort");
            return run_ingest(common, spec, catalog_path, schema_from_flags(column_overrides),
                              meta);
        }
        if (rank->parsed()) {
            return run_rank(common, cohorts, exclude_transfers, gpa_band, band_edges,
                            min_item_frac, catalog_path, schema_from_flags(column_overrides),
                            methods, pr_params, emit, top_k, meta);
        }
        if (eval_cmd->parsed()) {
            return run_eval(common, ranking_path, truth_path, meta);
        }
        throw UsageError("no subcommand given");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.exit_code());
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::parse);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::internal);
    }
}
