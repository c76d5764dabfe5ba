#include "seqrank/bundle.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace seqrank {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json matrix_to_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    int rows = static_cast<int>(j.size());
    int cols = rows > 0 ? static_cast<int>(j.at(0).size()) : 0;
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
    }
    return m;
}

} // namespace

ordered_json meta_to_json(const RunMeta& meta) {
    ordered_json j;
    j["tool"] = "seqrank";
    j["version"] = kToolVersion;
    j["config_hash"] = meta.config_hash;
    j["seed"] = meta.seed;
    j["tolerance"] = meta.tolerance;
    j["max_iterations"] = meta.max_iterations;
    j["notes"] = meta.notes;
    return j;
}

ordered_json bundle_to_json(const MatrixBundle& bundle, const RunMeta& meta) {
    ordered_json j;
    j["meta"] = meta_to_json(meta);

    ordered_json catalog = ordered_json::array();
    for (const auto& [id, name] : bundle.catalog.entries()) {
        catalog.push_back(ordered_json::array({id, name}));
    }
    j["catalog"] = std::move(catalog);
    j["n_s_before"] = bundle.n_s_before;
    j["n_s_after"] = bundle.n_s_after;

    ordered_json counts = ordered_json::array();
    for (int i = 0; i < bundle.c.n_c; ++i) {
        ordered_json row = ordered_json::array();
        for (int col = 0; col < bundle.c.n_c; ++col) row.push_back(bundle.c.at(i, col));
        counts.push_back(std::move(row));
    }
    j["C"] = std::move(counts);
    j["P"] = matrix_to_json(bundle.p.probs);
    j["F"] = matrix_to_json(bundle.f.flows);

    ordered_json edges = ordered_json::array();
    for (const auto& [a, b] : bundle.g.edges) edges.push_back(ordered_json::array({a, b}));
    j["edges"] = std::move(edges);

    ordered_json prov;
    prov["filters"] = bundle.provenance.filters;
    prov["dedup_removed"] = bundle.provenance.dedup_removed;
    prov["dropped_cohort"] = bundle.provenance.dropped_cohort;
    prov["dropped_transfer"] = bundle.provenance.dropped_transfer;
    prov["dropped_gpa"] = bundle.provenance.dropped_gpa;
    prov["zero_record_actors_kept"] = bundle.provenance.zero_record_actors_kept;
    prov["pruned_items"] = bundle.provenance.pruned_items;
    prov["warnings"] = bundle.provenance.warnings;
    j["provenance"] = std::move(prov);
    return j;
}

MatrixBundle bundle_from_json(const json& j) {
    MatrixBundle bundle;
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& e : j.at("catalog")) {
        entries.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    }
    bundle.catalog = ItemCatalog(std::move(entries));
    bundle.n_s_before = j.at("n_s_before").get<int>();
    bundle.n_s_after = j.at("n_s_after").get<int>();

    const auto& counts = j.at("C");
    int n = static_cast<int>(counts.size());
    bundle.c = CountMatrix(n);
    for (int i = 0; i < n; ++i) {
        for (int col = 0; col < n; ++col) {
            bundle.c.at(i, col) = counts.at(i).at(col).get<std::int64_t>();
        }
    }
    bundle.p.n_c = n;
    bundle.p.probs = matrix_from_json(j.at("P"));
    bundle.f.n_c = n;
    bundle.f.flows = matrix_from_json(j.at("F"));
    bundle.g.n_c = n;
    for (const auto& e : j.at("edges")) {
        bundle.g.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }

    if (j.contains("provenance")) {
        const auto& prov = j.at("provenance");
        bundle.provenance.filters = prov.value("filters", "");
        bundle.provenance.dedup_removed = prov.value("dedup_removed", 0);
        bundle.provenance.dropped_cohort = prov.value("dropped_cohort", 0);
        bundle.provenance.dropped_transfer = prov.value("dropped_transfer", 0);
        bundle.provenance.dropped_gpa = prov.value("dropped_gpa", 0);
        bundle.provenance.zero_record_actors_kept = prov.value("zero_record_actors_kept", 0);
        if (prov.contains("pruned_items")) {
            bundle.provenance.pruned_items =
                prov.at("pruned_items").get<std::vector<std::string>>();
        }
        if (prov.contains("warnings")) {
            bundle.provenance.warnings = prov.at("warnings").get<std::vector<std::string>>();
        }
    }
    return bundle;
}

ordered_json ranking_to_json(const Ranking& r, const ItemCatalog& catalog, const RunMeta& meta) {
    ordered_json j;
    j["meta"] = meta_to_json(meta);
    j["method_tag"] = r.method_tag;
    ordered_json order = ordered_json::array();
    ordered_json scores = ordered_json::array();
    for (int pos = 0; pos < r.size(); ++pos) {
        order.push_back(catalog.id_at(r.order[pos]));
        scores.push_back(r.scores[r.order[pos]]); // aligned with order
    }
    j["order"] = std::move(order);
    j["scores"] = std::move(scores);
    j["orientation_note"] = r.orientation_note;
    return j;
}

Ranking ranking_from_json(const json& j, const ItemCatalog& catalog) {
    Ranking r;
    r.method_tag = j.value("method_tag", "");
    r.orientation_note = j.value("orientation_note", "");
    const auto& order = j.at("order");
    const auto& scores = j.at("scores");
    if (order.size() != scores.size()) {
        throw ParseError("ranking file: order and scores lengths differ");
    }
    if (static_cast<int>(order.size()) != catalog.size()) {
        throw UsageError("ranking file covers " + std::to_string(order.size()) +
                         " items but the catalog has " + std::to_string(catalog.size()));
    }
    r.order.resize(order.size());
    r.scores.assign(order.size(), 0.0);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        int idx = catalog.index_of(order.at(pos).get<std::string>());
        if (idx < 0) {
            throw UsageError("ranking file references unknown item: " +
                             order.at(pos).get<std::string>());
        }
        r.order[pos] = idx;
        r.scores[idx] = scores.at(pos).get<double>();
    }
    return r;
}

std::string config_hash(const std::string& canonical) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw ParseError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ItemCatalog load_catalog_csv(std::istream& source) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    bool first = true;
    while (std::getline(source, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        std::string id = comma == std::string::npos ? line : line.substr(0, comma);
        std::string name = comma == std::string::npos ? line : line.substr(comma + 1);
        if (first && (id == "item_id" || id == "id")) {
            first = false;
            continue; // header row
        }
        first = false;
        entries.emplace_back(id, name);
    }
    return ItemCatalog(std::move(entries));
}

} // namespace seqrank
