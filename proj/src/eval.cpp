#include "seqrank/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

namespace seqrank {

namespace {

std::string format_cell(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string truncate(const std::string& s, int width) {
    if (static_cast<int>(s.size()) <= width) return s;
    return s.substr(0, static_cast<std::size_t>(width) - 1) + "~";
}

} // namespace

GammaDetail gamma_detail(const std::vector<int>& order, const TransitionMatrix& p) {
    const int n = static_cast<int>(order.size());
    if (n < 2) throw UsageError("gamma is undefined for fewer than 2 items");
    if (n != p.n_c) throw UsageError("gamma: ranking and transition matrix size mismatch");

    double sum = 0.0;
    int skipped = 0;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            int i = order[a];
            int j = order[b];
            if (p.probs(i, j) == 0.0 && p.probs(j, i) == 0.0) {
                ++skipped;
                continue;
            }
            sum += p.probs(i, j) - 0.5;
        }
    }
    GammaDetail out;
    out.value = 4.0 * sum / (static_cast<double>(n) * n - n);
    out.skipped_pairs = skipped;
    return out;
}

double gamma(const Ranking& r, const TransitionMatrix& p) {
    return gamma_detail(r.order, p).value;
}

double kendall_tau(const Ranking& a, const Ranking& b) {
    const int n = a.size();
    if (n != b.size()) throw UsageError("kendall tau: rankings cover different item sets");
    if (n < 2) throw UsageError("kendall tau is undefined for fewer than 2 items");

    std::vector<int> pa = a.positions();
    std::vector<int> pb = b.positions();
    long long concordant = 0, discordant = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            int da = pa[i] - pa[j];
            int db = pb[i] - pb[j];
            if ((da < 0 && db < 0) || (da > 0 && db > 0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    return static_cast<double>(concordant - discordant) /
           (static_cast<double>(n) * (n - 1) / 2.0);
}

const std::vector<std::string>& all_method_tags() {
    static const std::vector<std::string> tags = {
        "pagerank", "rankcentrality", "serialrank", "syncrank", "leastsquares", "svd",
    };
    return tags;
}

std::vector<MethodReport> method_report(const std::vector<std::string>& methods,
                                        const TransitionMatrix& p, const FlowMatrix& f,
                                        const MeasurementGraph& g, const SolveOptions& opts,
                                        const PageRankParams& pagerank) {
    for (const auto& m : methods) {
        if (std::find(all_method_tags().begin(), all_method_tags().end(), m) ==
            all_method_tags().end()) {
            throw UsageError("unknown method: '" + m + "'");
        }
    }

    std::vector<MethodReport> reports;
    reports.reserve(methods.size());
    for (const auto& m : methods) {
        MethodReport report;
        report.method_tag = m;
        auto start = std::chrono::steady_clock::now();
        try {
            Ranking r;
            if (m == "pagerank") {
                r = rank_pagerank(p, pagerank, opts);
            } else if (m == "rankcentrality") {
                r = rank_centrality(p, opts);
            } else if (m == "serialrank") {
                r = rank_serial(p, opts);
            } else if (m == "syncrank") {
                r = rank_sync(f, g, p, opts);
            } else if (m == "leastsquares") {
                r = rank_least_squares(f, g, p, opts);
            } else {
                r = rank_svd(f, p, opts);
            }
            GammaDetail gd = gamma_detail(r.order, p);
            report.gamma = gd.value;
            if (gd.skipped_pairs > 0) {
                report.notes = "skipped_pairs=" + std::to_string(gd.skipped_pairs);
            }
            report.ranking = std::move(r);
        } catch (const Error& e) {
            report.notes = e.what();
            report.error_code = e.exit_code();
        }
        auto stop = std::chrono::steady_clock::now();
        report.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        reports.push_back(std::move(report));
    }
    return reports;
}

ComparisonTable emit_comparison_table(const std::vector<Ranking>& rankings,
                                      const ItemCatalog& catalog, int top_k, int name_width) {
    ComparisonTable out;
    if (rankings.empty()) {
        out.text = "(no rankings)\n";
        out.csv = "position\n";
        return out;
    }
    const int n = catalog.size();
    int rows = top_k;
    if (rows > n) {
        rows = n;
        out.warning = "top_k " + std::to_string(top_k) + " clamped to " + std::to_string(n);
    }

    std::vector<std::vector<std::string>> cells(rows + 1);
    cells[0].push_back("#");
    for (const auto& r : rankings) cells[0].push_back(r.method_tag);
    for (int pos = 0; pos < rows; ++pos) {
        cells[pos + 1].push_back(std::to_string(pos + 1));
        for (const auto& r : rankings) {
            cells[pos + 1].push_back(truncate(catalog.name_at(r.order[pos]), name_width));
        }
    }

    std::vector<std::size_t> widths(cells[0].size(), 0);
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::ostringstream text;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) text << "  ";
            text << row[c];
            if (c + 1 < row.size()) text << std::string(widths[c] - row[c].size(), ' ');
        }
        text << "\n";
    }
    if (!out.warning.empty()) text << "# " << out.warning << "\n";
    out.text = text.str();

    std::ostringstream csv;
    csv << "position";
    for (const auto& r : rankings) csv << "," << r.method_tag;
    csv << "\n";
    for (int pos = 0; pos < rows; ++pos) {
        csv << (pos + 1);
        for (const auto& r : rankings) csv << "," << catalog.name_at(r.order[pos]);
        csv << "\n";
    }
    out.csv = csv.str();
    return out;
}

ComparisonTable emit_comparison_table(const std::vector<MethodReport>& reports,
                                      const ItemCatalog& catalog, int top_k, int name_width) {
    std::vector<Ranking> rankings;
    rankings.reserve(reports.size());
    for (const auto& rep : reports) {
        if (rep.ok()) rankings.push_back(*rep.ranking);
    }
    return emit_comparison_table(rankings, catalog, top_k, name_width);
}

std::string emit_heatmap_csv(const TransitionMatrix& p, const Ranking& r,
                             const ItemCatalog& catalog) {
    const int n = p.n_c;
    std::ostringstream os;
    os << "item";
    for (int col = 0; col < n; ++col) os << "," << catalog.id_at(r.order[col]);
    os << "\n";
    for (int row = 0; row < n; ++row) {
        int i = r.order[row];
        os << catalog.id_at(i);
        for (int col = 0; col < n; ++col) {
            int j = r.order[col];
            os << ",";
            if (p.probs(i, j) == 0.0 && p.probs(j, i) == 0.0) {
                os << "NA"; // never compared (includes the diagonal)
            } else {
                os << format_cell(p.probs(i, j));
            }
        }
        os << "\n";
    }
    return os.str();
}

} // namespace seqrank
