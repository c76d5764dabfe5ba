#pragma once

#include <string>

#include "seqrank/model.hpp"
#include "seqrank/spectral.hpp"

namespace seqrank {

struct PageRankParams {
    double alpha = 0.15;       // teleportation probability, strictly inside (0, 1)
    bool personalized = false; // second pass with teleportation biased away from late items

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("pagerank: alpha must lie in (0, 1)");
    }
};

// Operator builders. Exposed so the invariants of each intermediate operator
// can be checked directly.
MethodOperator build_pagerank_operator(const TransitionMatrix& p, double alpha);
MethodOperator build_pagerank_operator(const TransitionMatrix& p, double alpha,
                                       const Vector& teleport);
MethodOperator build_rank_centrality_operator(const TransitionMatrix& p);
MethodOperator build_serialrank_laplacian(const TransitionMatrix& p);
MethodOperator build_sync_phase_operator(const FlowMatrix& f, const MeasurementGraph& g);
MethodOperator build_incidence_system(const FlowMatrix& f, const MeasurementGraph& g);

// Random walk with uniform teleportation over the transition matrix; items are
// ranked by ascending stationary probability (the smaller the entry, the
// earlier the item). The personalized variant re-solves with the teleportation
// distribution proportional to 1 - q_inf.
Ranking rank_pagerank(const TransitionMatrix& p, const PageRankParams& params = {},
                      const SolveOptions& opts = {});

// Teleportation-free reversible walk with lazy self-loops; on exact
// Bradley-Terry input the stationary distribution is proportional to the
// lateness weights. Ranked ascending.
Ranking rank_centrality(const TransitionMatrix& p, const SolveOptions& opts = {});

// Seriation of the common-comparison similarity matrix: items are ordered by
// the Fiedler vector of the rescaled similarity Laplacian.
Ranking rank_serial(const TransitionMatrix& p, const SolveOptions& opts = {});

// Angular synchronization: flow values become phase offsets, the top
// eigenvector of the phase operator recovers angles, and the best circular
// rotation/direction under the consistency coefficient is returned.
Ranking rank_sync(const FlowMatrix& f, const MeasurementGraph& g, const TransitionMatrix& p,
                  const SolveOptions& opts = {});

// Least-squares fit of per-item offsets to the edge flow measurements.
Ranking rank_least_squares(const FlowMatrix& f, const MeasurementGraph& g,
                           const TransitionMatrix& p, const SolveOptions& opts = {});

// Orders by the top two left singular vectors of the flow matrix, keeping
// whichever vector/direction is most consistent with the data.
Ranking rank_svd(const FlowMatrix& f, const TransitionMatrix& p, const SolveOptions& opts = {});

// Ranking from a score vector, read ascending or descending, whichever has
// the larger consistency coefficient against p. Exact ties go ascending.
Ranking orient_by_gamma(const Vector& scores, const TransitionMatrix& p,
                        const std::string& method_tag);

} // namespace seqrank
