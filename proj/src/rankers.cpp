#include "seqrank/rankers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "seqrank/eval.hpp"

namespace seqrank {

namespace {

// Comparison-graph edges implied by the transition matrix.
std::vector<std::pair<int, int>> compared_edges(const TransitionMatrix& p) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < p.n_c; ++i) {
        for (int j = i + 1; j < p.n_c; ++j) {
            if (p.probs(i, j) + p.probs(j, i) > 0.0) edges.emplace_back(i, j);
        }
    }
    return edges;
}

void require_connected(int n, const std::vector<std::pair<int, int>>& edges,
                       const char* method) {
    auto comps = connected_components(n, edges);
    if (comps.size() > 1) {
        std::ostringstream msg;
        msg << method << ": comparison graph is disconnected (" << comps.size() << " components)";
        throw DisconnectedGraphError(msg.str());
    }
}

// D^-1 P with dangling rows (zero out-degree) replaced by the uniform row.
Matrix row_stochastic_with_uniform_dangling(const TransitionMatrix& p) {
    const int n = p.n_c;
    Matrix s(n, n);
    for (int i = 0; i < n; ++i) {
        double degree = 0.0;
        for (int j = 0; j < n; ++j) degree += p.probs(i, j);
        if (degree == 0.0) {
            for (int j = 0; j < n; ++j) s(i, j) = 1.0 / n;
        } else {
            for (int j = 0; j < n; ++j) s(i, j) = p.probs(i, j) / degree;
        }
    }
    return s;
}

std::string format_gamma_pair(double asc, double desc) {
    std::ostringstream os;
    os << "gamma asc=" << asc << " desc=" << desc;
    return os.str();
}

} // namespace

MethodOperator build_pagerank_operator(const TransitionMatrix& p, double alpha) {
    Vector uniform(p.n_c, p.n_c > 0 ? 1.0 / p.n_c : 0.0);
    return build_pagerank_operator(p, alpha, uniform);
}

MethodOperator build_pagerank_operator(const TransitionMatrix& p, double alpha,
                                       const Vector& teleport) {
    const int n = p.n_c;
    Matrix walk = row_stochastic_with_uniform_dangling(p);
    Matrix s(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            s(i, j) = (1.0 - alpha) * walk(i, j) + alpha * teleport[j];
        }
    }
    return MethodOperator::stochastic(MethodOperator::Kind::stochastic_pagerank, std::move(s));
}

MethodOperator build_rank_centrality_operator(const TransitionMatrix& p) {
    const int n = p.n_c;
    Vector degree(n, 0.0);
    double d_max = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) degree[i] += p.probs(i, j);
        d_max = std::max(d_max, degree[i]);
    }
    if (d_max == 0.0) {
        throw DegeneracyError("rank centrality: transition matrix has no comparisons");
    }
    Matrix s(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) s(i, j) = p.probs(i, j) / d_max;
        s(i, i) = 1.0 - degree[i] / d_max; // lazy self-loop keeps rows stochastic
    }
    return MethodOperator::stochastic(MethodOperator::Kind::stochastic_rankcentrality,
                                      std::move(s));
}

MethodOperator build_serialrank_laplacian(const TransitionMatrix& p) {
    const int n = p.n_c;
    std::vector<bool> compared(static_cast<std::size_t>(n) * n, false);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j && p.probs(i, j) + p.probs(j, i) > 0.0) {
                compared[static_cast<std::size_t>(i) * n + j] = true;
            }
        }
    }
    auto is_compared = [&](int a, int b) { return compared[static_cast<std::size_t>(a) * n + b]; };

    // S_ij = sum_k A_k(i, j); the pair contributes its similarity through k
    // only when both items were compared with k, else the neutral 1/2.
    Matrix s(n, n);
    double min_entry = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double sum = 0.0;
            for (int k = 0; k < n; ++k) {
                if (is_compared(i, k) && is_compared(j, k)) {
                    sum += 1.0 - std::abs(p.probs(i, k) - p.probs(j, k)) / 2.0;
                } else {
                    sum += 0.5;
                }
            }
            s(i, j) = sum;
            min_entry = std::min(min_entry, sum);
        }
    }
    // Rescale so the least-similar pair sits at similarity 0; this shifts the
    // nontrivial Laplacian spectrum without moving eigenvectors.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) s(i, j) -= min_entry;
    }

    Matrix l(n, n);
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) row_sum += s(i, j);
        for (int j = 0; j < n; ++j) l(i, j) = -s(i, j);
        l(i, i) += row_sum;
    }
    return MethodOperator::laplacian(std::move(l));
}

MethodOperator build_sync_phase_operator(const FlowMatrix& f, const MeasurementGraph& g) {
    CMatrix h(f.n_c);
    for (const auto& [i, j] : g.edges) {
        double theta = std::numbers::pi * f.flows(i, j);
        h(i, j) = Complex(std::cos(theta), std::sin(theta));
        h(j, i) = std::conj(h(i, j));
    }
    return MethodOperator::hermitian(std::move(h));
}

MethodOperator build_incidence_system(const FlowMatrix& f, const MeasurementGraph& g) {
    std::vector<std::pair<int, int>> rows;
    Vector w;
    rows.reserve(g.edges.size());
    w.reserve(g.edges.size());
    for (const auto& [i, j] : g.edges) {
        rows.emplace_back(i, j); // +1 at i, -1 at j for the orientation i < j
        w.push_back(f.flows(i, j));
    }
    return MethodOperator::incidence_system(f.n_c, std::move(rows), std::move(w));
}

Ranking rank_pagerank(const TransitionMatrix& p, const PageRankParams& params,
                      const SolveOptions& opts) {
    params.validate();
    const int n = p.n_c;
    Vector q = stationary_distribution(build_pagerank_operator(p, params.alpha), opts);

    std::ostringstream note;
    note << "ascending stationary probability, alpha=" << params.alpha;
    if (params.personalized && n > 1) {
        Vector teleport(n);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            teleport[i] = std::max(1.0 - q[i], 0.0);
            total += teleport[i];
        }
        for (double& t : teleport) t /= total;
        q = stationary_distribution(build_pagerank_operator(p, params.alpha, teleport), opts);
        note << ", personalized teleportation proportional to (1 - q)";
    } else {
        note << ", uniform teleportation";
    }

    Ranking r;
    r.method_tag = "pagerank";
    r.scores = std::move(q);
    r.order = order_by_scores(r.scores, true);
    r.orientation_note = note.str();
    return r;
}

Ranking rank_centrality(const TransitionMatrix& p, const SolveOptions& opts) {
    const int n = p.n_c;
    if (n == 1) {
        return Ranking{{0}, {1.0}, "rankcentrality", "single item"};
    }
    require_connected(n, compared_edges(p), "rank centrality");
    Vector q = stationary_distribution(build_rank_centrality_operator(p), opts);

    Ranking r;
    r.method_tag = "rankcentrality";
    r.scores = std::move(q);
    r.order = order_by_scores(r.scores, true);
    r.orientation_note = "ascending stationary probability (no teleportation)";
    return r;
}

Ranking rank_serial(const TransitionMatrix& p, const SolveOptions& opts) {
    const int n = p.n_c;
    if (n < 2) throw UsageError("serialrank needs at least 2 items");
    Vector scores;
    if (n == 2) {
        // Rescaling zeroes the only off-diagonal similarity of a 2-item
        // matrix, so the Laplacian carries no signal; the two-item seriation
        // vector is fixed directly and gamma picks the direction.
        scores = {std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0};
    } else {
        scores = fiedler_vector(build_serialrank_laplacian(p), opts);
    }
    return orient_by_gamma(scores, p, "serialrank");
}

Ranking rank_sync(const FlowMatrix& f, const MeasurementGraph& g, const TransitionMatrix& p,
                  const SolveOptions& opts) {
    const int n = f.n_c;
    require_connected(n, g.edges, "syncrank");
    std::vector<Complex> v = top_eigenvector_hermitian(build_sync_phase_operator(f, g), opts);

    Vector theta(n);
    for (int i = 0; i < n; ++i) {
        if (std::abs(v[i]) < opts.tolerance) {
            throw DegeneracyError("syncrank: eigenvector entry " + std::to_string(i) +
                                  " vanishes; recovered angle undefined");
        }
        theta[i] = std::arg(v[i]);
    }

    // Angles place items on a circle; mod out the rotation and direction by
    // scanning all 2n circular candidates for the best consistency.
    constexpr double two_pi = 2.0 * std::numbers::pi;
    auto wrap = [&](double x) {
        double r = std::fmod(x, two_pi);
        if (r < 0.0) r += two_pi;
        return r;
    };

    std::vector<int> circ = order_by_scores(theta, true);
    double best_gamma = -2.0;
    Vector best_scores;
    std::vector<int> best_order;
    int best_rotation = 0;
    bool best_reversed = false;

    Vector candidate(n);
    for (int s = 0; s < n; ++s) {
        double anchor = theta[circ[s]];
        for (int direction = 0; direction < 2; ++direction) {
            for (int i = 0; i < n; ++i) {
                candidate[i] = direction == 0 ? wrap(theta[i] - anchor) : wrap(anchor - theta[i]);
            }
            std::vector<int> order = order_by_scores(candidate, true);
            double gval = gamma_detail(order, p).value;
            if (gval > best_gamma) {
                best_gamma = gval;
                best_scores = candidate;
                best_order = std::move(order);
                best_rotation = s;
                best_reversed = direction == 1;
            }
        }
    }

    Ranking r;
    r.method_tag = "syncrank";
    r.scores = std::move(best_scores);
    r.order = std::move(best_order);
    std::ostringstream note;
    note << "circular rotation " << best_rotation << (best_reversed ? " reversed" : " forward")
         << " selected by gamma=" << best_gamma << " over " << 2 * n << " candidates";
    r.orientation_note = note.str();
    return r;
}

Ranking rank_least_squares(const FlowMatrix& f, const MeasurementGraph& g,
                           const TransitionMatrix& p, const SolveOptions& opts) {
    require_connected(f.n_c, g.edges, "least squares");
    Vector x = solve_incidence_least_squares(build_incidence_system(f, g), opts);
    return orient_by_gamma(x, p, "leastsquares");
}

Ranking rank_svd(const FlowMatrix& f, const TransitionMatrix& p, const SolveOptions& opts) {
    const int n = f.n_c;
    bool nonzero = std::any_of(f.flows.data().begin(), f.flows.data().end(),
                               [](double v) { return v != 0.0; });
    if (!nonzero) throw DegeneracyError("svd rank: zero flow matrix carries no ordering information");

    auto triples = top_singular_pairs(f.flows, std::min(2, n), opts);

    double best_gamma = -2.0;
    Ranking best;
    auto consider = [&](const Vector& scores, bool ascending, const std::string& label) {
        std::vector<int> order = order_by_scores(scores, ascending);
        double gval = gamma_detail(order, p).value;
        if (gval > best_gamma) {
            best_gamma = gval;
            best.order = std::move(order);
            best.scores = scores;
            std::ostringstream note;
            note << label << ", " << (ascending ? "ascending" : "descending")
                 << ", selected by gamma=" << gval;
            best.orientation_note = note.str();
        }
    };

    bool top_pair_equal =
        triples.size() == 2 && triples[0].sigma - triples[1].sigma <= 1e-8 * triples[0].sigma;
    if (top_pair_equal) {
        // A skew-symmetric matrix always has sigma_1 = sigma_2, so "the" top
        // two singular vectors are only defined up to a rotation of the top
        // singular plane. Scan the rotation: the candidate order is piecewise
        // constant in the angle, with one breakpoint per item pair, so
        // evaluating interval midpoints covers every reachable order.
        Vector u1 = triples[0].left;
        Vector u2 = triples[1].left;
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += u1[i] * u2[i];
        for (int i = 0; i < n; ++i) u2[i] -= dot * u1[i];
        double nrm = 0.0;
        for (double v : u2) nrm += v * v;
        nrm = std::sqrt(nrm);
        if (nrm > 1e-12) {
            for (double& v : u2) v /= nrm;
        }

        std::vector<double> cuts;
        cuts.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double d1 = u1[i] - u1[j];
                double d2 = u2[i] - u2[j];
                if (d1 == 0.0 && d2 == 0.0) continue;
                double phi = std::atan2(-d1, d2); // cos(phi) d1 + sin(phi) d2 = 0
                phi = std::fmod(phi + 2.0 * std::numbers::pi, std::numbers::pi);
                cuts.push_back(phi);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        std::vector<double> angles = {0.0};
        for (std::size_t k = 0; k < cuts.size(); ++k) {
            double next = (k + 1 < cuts.size()) ? cuts[k + 1] : cuts.front() + std::numbers::pi;
            angles.push_back(0.5 * (cuts[k] + next));
        }

        Vector u(n);
        for (double phi : angles) {
            double c = std::cos(phi), s = std::sin(phi);
            for (int i = 0; i < n; ++i) u[i] = c * u1[i] + s * u2[i];
            std::ostringstream label;
            label << "top singular plane rotation phi=" << phi;
            consider(u, true, label.str());
            consider(u, false, label.str());
        }
    } else {
        for (std::size_t t = 0; t < triples.size(); ++t) {
            std::string label = "left singular vector " + std::to_string(t + 1);
            consider(triples[t].left, true, label);
            consider(triples[t].left, false, label);
        }
    }
    best.method_tag = "svd";
    return best;
}

Ranking orient_by_gamma(const Vector& scores, const TransitionMatrix& p,
                        const std::string& method_tag) {
    std::vector<int> asc = order_by_scores(scores, true);
    std::vector<int> desc = order_by_scores(scores, false);
    double ga = gamma_detail(asc, p).value;
    double gd = gamma_detail(desc, p).value;

    Ranking r;
    r.method_tag = method_tag;
    r.scores = scores;
    if (gd > ga) {
        r.order = std::move(desc);
        r.orientation_note = "descending scores (" + format_gamma_pair(ga, gd) + ")";
    } else {
        r.order = std::move(asc);
        r.orientation_note = "ascending scores (" + format_gamma_pair(ga, gd) + ")";
    }
    return r;
}

} // namespace seqrank
