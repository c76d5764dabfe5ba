#include "seqrank/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace seqrank {

namespace {

constexpr double kTol = 1e-12;

[[noreturn]] void fail(const std::string& what) {
    throw InvariantError(what);
}

} // namespace

ItemCatalog::ItemCatalog(std::vector<std::pair<std::string, std::string>> entries)
    : entries_(std::move(entries)) {
    for (int i = 0; i < static_cast<int>(entries_.size()); ++i) {
        index_.emplace(entries_[i].first, i);
    }
}

ItemCatalog ItemCatalog::from_ids_sorted(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<std::pair<std::string, std::string>> entries;
    entries.reserve(ids.size());
    for (auto& id : ids) entries.emplace_back(id, id);
    return ItemCatalog(std::move(entries));
}

int ItemCatalog::index_of(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
}

void ItemCatalog::validate() const {
    if (index_.size() != entries_.size()) fail("item catalog: duplicate item ids");
    for (int i = 0; i < size(); ++i) {
        auto it = index_.find(entries_[i].first);
        if (it == index_.end() || it->second != i) fail("item catalog: index is not a bijection");
    }
}

bool MeasurementGraph::has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

std::vector<int> Ranking::positions() const {
    std::vector<int> pos(order.size(), -1);
    for (int p = 0; p < static_cast<int>(order.size()); ++p) pos[order[p]] = p;
    return pos;
}

MethodOperator MethodOperator::stochastic(Kind kind, Matrix rows) {
    MethodOperator op;
    op.kind = kind;
    op.n = rows.rows();
    op.dense = std::move(rows);
    return op;
}

MethodOperator MethodOperator::laplacian(Matrix l) {
    MethodOperator op;
    op.kind = Kind::similarity_laplacian;
    op.n = l.rows();
    op.dense = std::move(l);
    return op;
}

MethodOperator MethodOperator::hermitian(CMatrix h) {
    MethodOperator op;
    op.kind = Kind::hermitian_phase;
    op.n = h.size();
    op.phase = std::move(h);
    return op;
}

MethodOperator MethodOperator::incidence_system(int n, std::vector<std::pair<int, int>> rows,
                                                Vector w) {
    MethodOperator op;
    op.kind = Kind::incidence_system;
    op.n = n;
    op.incidence = std::move(rows);
    op.measurements = std::move(w);
    return op;
}

const char* kind_name(MethodOperator::Kind kind) {
    switch (kind) {
        case MethodOperator::Kind::stochastic_pagerank: return "stochastic-pagerank";
        case MethodOperator::Kind::stochastic_rankcentrality: return "stochastic-rankcentrality";
        case MethodOperator::Kind::similarity_laplacian: return "similarity-laplacian";
        case MethodOperator::Kind::hermitian_phase: return "hermitian-phase";
        case MethodOperator::Kind::incidence_system: return "incidence-system";
    }
    return "unknown";
}

void validate(const EventLog& log) {
    log.items.validate();
    std::set<std::string> actors;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& rec : log.records) {
        if (rec.period < 0) fail("event log: negative period");
        if (rec.grade_points && *rec.grade_points < 0.0) fail("event log: negative grade");
        if (!log.items.contains(rec.item_id)) {
            fail("event log: record references item not in catalog: " + rec.item_id);
        }
        if (!seen.emplace(rec.actor_id, rec.item_id).second) {
            fail("event log: duplicate (actor, item) pair: " + rec.actor_id + "," + rec.item_id);
        }
        actors.insert(rec.actor_id);
    }
    // Pruning may leave actors with no records; they still count toward n_s.
    if (log.actor_count < static_cast<int>(actors.size())) {
        fail("event log: actor_count below the number of distinct actors in records");
    }
}

void validate(const CountMatrix& c) {
    if (static_cast<int>(c.counts.size()) != c.n_c * c.n_c) fail("count matrix: bad shape");
    for (int i = 0; i < c.n_c; ++i) {
        if (c.at(i, i) != 0) fail("count matrix: nonzero diagonal");
        for (int j = 0; j < c.n_c; ++j) {
            if (c.at(i, j) < 0) fail("count matrix: negative count");
        }
    }
}

void validate(const CountMatrix& c, int n_s) {
    validate(c);
    for (std::int64_t v : c.counts) {
        if (v > n_s) fail("count matrix: count exceeds actor population");
    }
}

void validate(const TransitionMatrix& p) {
    if (p.probs.rows() != p.n_c || p.probs.cols() != p.n_c) fail("transition matrix: bad shape");
    for (int i = 0; i < p.n_c; ++i) {
        if (p.probs(i, i) != 0.0) fail("transition matrix: nonzero diagonal");
        for (int j = i + 1; j < p.n_c; ++j) {
            double a = p.probs(i, j);
            double b = p.probs(j, i);
            if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0) {
                fail("transition matrix: entry outside [0, 1]");
            }
            double s = a + b;
            if (std::abs(s) > kTol && std::abs(s - 1.0) > kTol) {
                fail("transition matrix: pair sum not in {0, 1}");
            }
        }
    }
}

void validate(const FlowMatrix& f) {
    if (f.flows.rows() != f.n_c || f.flows.cols() != f.n_c) fail("flow matrix: bad shape");
    for (int i = 0; i < f.n_c; ++i) {
        if (f.flows(i, i) != 0.0) fail("flow matrix: nonzero diagonal");
        for (int j = i + 1; j < f.n_c; ++j) {
            if (f.flows(i, j) != -f.flows(j, i)) fail("flow matrix: not skew-symmetric");
            double mag = std::abs(f.flows(i, j));
            if (mag != 0.0 && (mag < 0.5 - kTol || mag > 1.0 + kTol)) {
                fail("flow matrix: magnitude outside {0} u [0.5, 1]");
            }
        }
    }
}

void validate(const MeasurementGraph& g, const CountMatrix& c) {
    if (g.n_c != c.n_c) fail("measurement graph: item count mismatch");
    if (!std::is_sorted(g.edges.begin(), g.edges.end())) fail("measurement graph: edges not sorted");
    std::set<std::pair<int, int>> edges(g.edges.begin(), g.edges.end());
    if (static_cast<int>(edges.size()) != g.m()) fail("measurement graph: duplicate edges");
    for (const auto& [i, j] : g.edges) {
        if (i < 0 || j >= g.n_c || i >= j) fail("measurement graph: bad edge endpoints");
    }
    for (int i = 0; i < c.n_c; ++i) {
        for (int j = i + 1; j < c.n_c; ++j) {
            bool compared = c.at(i, j) + c.at(j, i) > 0;
            if (compared != edges.count({i, j})) {
                fail("measurement graph: edge set disagrees with counts");
            }
        }
    }
}

void validate(const Ranking& r) {
    int n = r.size();
    if (static_cast<int>(r.scores.size()) != n) fail("ranking: scores length mismatch");
    std::vector<bool> seen(n, false);
    for (int item : r.order) {
        if (item < 0 || item >= n || seen[item]) fail("ranking: order is not a permutation");
        seen[item] = true;
    }
    // The order must read off the scores in one direction, ties by item index.
    if (r.order != order_by_scores(r.scores, true) &&
        r.order != order_by_scores(r.scores, false)) {
        fail("ranking: order is not sorted by scores in either direction");
    }
}

void validate(const MethodOperator& op) {
    switch (op.kind) {
        case MethodOperator::Kind::stochastic_pagerank:
        case MethodOperator::Kind::stochastic_rankcentrality: {
            if (op.dense.rows() != op.n || op.dense.cols() != op.n) fail("operator: bad shape");
            for (int i = 0; i < op.n; ++i) {
                double sum = 0.0;
                for (int j = 0; j < op.n; ++j) {
                    if (op.dense(i, j) < 0.0) fail("stochastic operator: negative entry");
                    sum += op.dense(i, j);
                }
                if (std::abs(sum - 1.0) > kTol) fail("stochastic operator: row sum not 1");
            }
            break;
        }
        case MethodOperator::Kind::similarity_laplacian: {
            if (op.dense.rows() != op.n || op.dense.cols() != op.n) fail("operator: bad shape");
            for (int i = 0; i < op.n; ++i) {
                double sum = 0.0;
                double offdiag = 0.0;
                for (int j = 0; j < op.n; ++j) {
                    if (op.dense(i, j) != op.dense(j, i)) fail("laplacian: not symmetric");
                    sum += op.dense(i, j);
                    if (j != i) {
                        // Off-diagonal entries of a similarity Laplacian are
                        // nonpositive; together with zero row sums this gives
                        // diagonal dominance, which certifies PSD.
                        if (op.dense(i, j) > kTol) fail("laplacian: positive off-diagonal");
                        offdiag += std::abs(op.dense(i, j));
                    }
                }
                if (std::abs(sum) > kTol) fail("laplacian: row sum not 0");
                if (op.dense(i, i) < offdiag - kTol) fail("laplacian: not diagonally dominant");
            }
            break;
        }
        case MethodOperator::Kind::hermitian_phase: {
            if (op.phase.size() != op.n) fail("operator: bad shape");
            for (int i = 0; i < op.n; ++i) {
                if (std::abs(op.phase(i, i)) != 0.0) fail("phase operator: nonzero diagonal");
                for (int j = i + 1; j < op.n; ++j) {
                    Complex a = op.phase(i, j);
                    Complex b = op.phase(j, i);
                    if (std::abs(a - std::conj(b)) > kTol) {
                        fail("phase operator: not conjugate-symmetric");
                    }
                    double mod = std::abs(a);
                    if (mod != 0.0 && std::abs(mod - 1.0) > kTol) {
                        fail("phase operator: off-diagonal modulus not in {0, 1}");
                    }
                }
            }
            break;
        }
        case MethodOperator::Kind::incidence_system: {
            if (op.incidence.size() != op.measurements.size()) {
                fail("incidence system: row/measurement count mismatch");
            }
            for (const auto& [i, j] : op.incidence) {
                if (i < 0 || i >= op.n || j < 0 || j >= op.n || i == j) {
                    fail("incidence system: bad row endpoints");
                }
            }
            break;
        }
    }
}

std::vector<int> order_by_scores(const Vector& scores, bool ascending) {
    std::vector<int> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return ascending ? scores[a] < scores[b] : scores[a] > scores[b];
        return a < b;
    });
    return idx;
}

} // namespace seqrank
