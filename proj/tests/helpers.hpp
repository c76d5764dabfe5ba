#pragma once

// Shared test fixtures and independent oracles. The oracles here deliberately
// re-derive results through different routes than the library (A^T A
// decomposition instead of the block embedding, Gaussian elimination instead
// of Cholesky, plain fixed-iteration multiplication instead of the library's
// power iteration) so they can catch implementation-path bugs.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "seqrank/eval.hpp"
#include "seqrank/ingest.hpp"
#include "seqrank/rankers.hpp"
#include "seqrank/synth.hpp"

namespace seqrank::test {

struct PipelineMatrices {
    CountMatrix c;
    TransitionMatrix p;
    FlowMatrix f;
    MeasurementGraph g;
};

inline PipelineMatrices matrices_from_log(const EventLog& log) {
    PipelineMatrices out;
    out.c = build_count_matrix(log);
    out.p = build_transition_matrix(out.c);
    out.f = build_flow_matrix(out.p);
    out.g = build_measurement_graph(out.c);
    return out;
}

inline PipelineMatrices chain_matrices(int n_items, int n_actors) {
    SynthSpec spec;
    spec.model = SynthSpec::Model::chain;
    spec.n_items = n_items;
    spec.n_actors = n_actors;
    return matrices_from_log(gen_chain_log(spec));
}

inline BtMatrices bt_matrices(const Vector& weights, double edge_prob = 1.0,
                              std::uint64_t seed = 0) {
    SynthSpec spec;
    spec.model = SynthSpec::Model::bradley_terry;
    spec.n_items = static_cast<int>(weights.size());
    spec.bt_weights = weights;
    spec.edge_prob = edge_prob;
    spec.seed = seed;
    return gen_bradley_terry_matrix(spec);
}

inline ItemCatalog synth_catalog(int n_items) {
    std::vector<std::string> ids;
    for (int i = 0; i < n_items; ++i) ids.push_back(synth_item_id(i, n_items));
    return ItemCatalog::from_ids_sorted(std::move(ids));
}

inline bool is_identity_order(const std::vector<int>& order) {
    for (int i = 0; i < static_cast<int>(order.size()); ++i) {
        if (order[i] != i) return false;
    }
    return true;
}

inline TransitionMatrix transition_from(const std::vector<std::vector<double>>& rows) {
    TransitionMatrix p;
    p.n_c = static_cast<int>(rows.size());
    p.probs = Matrix(p.n_c, p.n_c);
    for (int i = 0; i < p.n_c; ++i) {
        for (int j = 0; j < p.n_c; ++j) p.probs(i, j) = rows[i][j];
    }
    return p;
}

inline Ranking ranking_of(std::vector<int> order) {
    Ranking r;
    r.order = std::move(order);
    r.scores.resize(r.order.size());
    for (int pos = 0; pos < r.size(); ++pos) r.scores[r.order[pos]] = pos;
    r.method_tag = "test";
    r.orientation_note = "fixed order";
    return r;
}

// --- independent oracles -------------------------------------------------

// Test-local cyclic Jacobi, kept separate from the library implementation.
inline void oracle_jacobi(std::vector<std::vector<double>>& a, std::vector<double>& eigs) {
    int n = static_cast<int>(a.size());
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        }
        if (off < 1e-28) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    eigs.resize(n);
    for (int i = 0; i < n; ++i) eigs[i] = a[i][i];
    std::sort(eigs.begin(), eigs.end(), std::greater<>());
}

// Singular values via the A^T A route (full decomposition oracle).
inline std::vector<double> oracle_singular_values(const Matrix& m) {
    int n = m.rows();
    std::vector<std::vector<double>> ata(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double sum = 0.0;
            for (int k = 0; k < n; ++k) sum += m(k, i) * m(k, j);
            ata[i][j] = sum;
        }
    }
    std::vector<double> eigs;
    oracle_jacobi(ata, eigs);
    std::vector<double> sigma(n);
    for (int i = 0; i < n; ++i) sigma[i] = std::sqrt(std::max(0.0, eigs[i]));
    return sigma;
}

// Stationary vector by plain repeated multiplication, fixed iteration count.
inline Vector oracle_stationary(const Matrix& s, int iterations = 20000) {
    int n = s.rows();
    Vector q(n, 1.0 / n), next(n);
    for (int it = 0; it < iterations; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) next[j] += q[i] * s(i, j);
        }
        double total = std::accumulate(next.begin(), next.end(), 0.0);
        for (int j = 0; j < n; ++j) q[j] = next[j] / total;
    }
    return q;
}

// Solves B^T B x = B^T w by Gaussian elimination with the mean-zero
// constraint appended (independent of the library's Cholesky route).
inline Vector oracle_incidence_solve(int n, const std::vector<std::pair<int, int>>& rows,
                                     const Vector& w) {
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t e = 0; e < rows.size(); ++e) {
        auto [i, j] = rows[e];
        a[i][i] += 1.0;
        a[j][j] += 1.0;
        a[i][j] -= 1.0;
        a[j][i] -= 1.0;
        a[i][n] += w[e];
        a[j][n] -= w[e];
    }
    // replace the last normal equation with the centering constraint
    for (int j = 0; j < n; ++j) a[n - 1][j] = 1.0;
    a[n - 1][n] = 0.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        for (int r = 0; r < n; ++r) {
            if (r == col || a[col][col] == 0.0) continue;
            double factor = a[r][col] / a[col][col];
            for (int k = col; k <= n; ++k) a[r][k] -= factor * a[col][k];
        }
    }
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    return x;
}

inline double incidence_residual_sq(const std::vector<std::pair<int, int>>& rows,
                                    const Vector& w, const Vector& x) {
    double sum = 0.0;
    for (std::size_t e = 0; e < rows.size(); ++e) {
        double r = x[rows[e].first] - x[rows[e].second] - w[e];
        sum += r * r;
    }
    return sum;
}

// Applies a relabeling permutation to the pipeline matrices: item i becomes
// perm[i] in the permuted instance.
inline TransitionMatrix permute(const TransitionMatrix& p, const std::vector<int>& perm) {
    TransitionMatrix out;
    out.n_c = p.n_c;
    out.probs = Matrix(p.n_c, p.n_c);
    for (int i = 0; i < p.n_c; ++i) {
        for (int j = 0; j < p.n_c; ++j) out.probs(perm[i], perm[j]) = p.probs(i, j);
    }
    return out;
}

inline FlowMatrix permute(const FlowMatrix& f, const std::vector<int>& perm) {
    FlowMatrix out;
    out.n_c = f.n_c;
    out.flows = Matrix(f.n_c, f.n_c);
    for (int i = 0; i < f.n_c; ++i) {
        for (int j = 0; j < f.n_c; ++j) out.flows(perm[i], perm[j]) = f.flows(i, j);
    }
    return out;
}

inline MeasurementGraph permute(const MeasurementGraph& g, const std::vector<int>& perm) {
    MeasurementGraph out;
    out.n_c = g.n_c;
    for (auto [i, j] : g.edges) {
        int a = perm[i], b = perm[j];
        if (a > b) std::swap(a, b);
        out.edges.emplace_back(a, b);
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

} // namespace seqrank::test
