#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seqrank/model.hpp"
#include "seqrank/rankers.hpp"

namespace seqrank {

struct GammaDetail {
    double value = 0.0;
    int skipped_pairs = 0; // pairs never compared, excluded from the sum
};

// Consistency coefficient: relabels items so rank position becomes the index,
// then sums P_ij - 0.5 over ordered pairs, normalized by 4 / (n^2 - n) into
// [-1, 1]. Pairs nobody compared are skipped (their stored zeros would
// otherwise poison reversal antisymmetry); the skipped count is reported.
GammaDetail gamma_detail(const std::vector<int>& order, const TransitionMatrix& p);
double gamma(const Ranking& r, const TransitionMatrix& p);

// Kendall rank correlation between two rankings of the same item set.
double kendall_tau(const Ranking& a, const Ranking& b);

struct MethodReport {
    std::string method_tag;
    std::optional<Ranking> ranking; // empty when the method failed
    double gamma = 0.0;
    double runtime_ms = 0.0;
    std::string notes;
    ExitCode error_code = ExitCode::ok; // category of the failure, if any

    bool ok() const noexcept { return ranking.has_value(); }
};

// All recognized method tags, in canonical order.
const std::vector<std::string>& all_method_tags();

// Runs each requested ranker and records its consistency coefficient and
// runtime. A failing method becomes a note; it does not abort the batch.
std::vector<MethodReport> method_report(const std::vector<std::string>& methods,
                                        const TransitionMatrix& p, const FlowMatrix& f,
                                        const MeasurementGraph& g,
                                        const SolveOptions& opts = {},
                                        const PageRankParams& pagerank = {});

struct ComparisonTable {
    std::string text;    // aligned plain text
    std::string csv;
    std::string warning; // set when top_k was clamped
};

// One column per ranking, one row per position 1..top_k, cells are display
// names from the catalog. The report overload keeps successful methods only.
ComparisonTable emit_comparison_table(const std::vector<Ranking>& rankings,
                                      const ItemCatalog& catalog, int top_k,
                                      int name_width = 24);
ComparisonTable emit_comparison_table(const std::vector<MethodReport>& reports,
                                      const ItemCatalog& catalog, int top_k,
                                      int name_width = 24);

// CSV grid of P with rows/columns permuted into the ranking's order. Cells of
// never-compared pairs (including the diagonal) are the sentinel "NA".
std::string emit_heatmap_csv(const TransitionMatrix& p, const Ranking& r,
                             const ItemCatalog& catalog);

} // namespace seqrank
