#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seqrank/errors.hpp"
#include "seqrank/matrix.hpp"

namespace seqrank {

// One actor/item/period observation. Periods are integer term indices; a
// larger period means the item was taken later.
struct EventRecord {
    std::string actor_id;
    std::string item_id;
    int period = 0;
    std::optional<double> grade_points;
    std::optional<std::string> cohort_label;
    bool transfer_flag = false;
};

// Ordered id -> display-name catalog. Index positions are the matrix indices
// used everywhere downstream, so catalog order fixes matrix layout.
class ItemCatalog {
public:
    ItemCatalog() = default;

    // Entries keep the given order; ids must be unique.
    explicit ItemCatalog(std::vector<std::pair<std::string, std::string>> entries);

    // Catalog with ids in ascending lexicographic order, display names = ids.
    static ItemCatalog from_ids_sorted(std::vector<std::string> ids);

    int size() const noexcept { return static_cast<int>(entries_.size()); }
    bool contains(const std::string& id) const { return index_.count(id) > 0; }
    int index_of(const std::string& id) const; // -1 when absent
    const std::string& id_at(int index) const { return entries_[index].first; }
    const std::string& name_at(int index) const { return entries_[index].second; }
    const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
        return entries_;
    }

    void validate() const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::unordered_map<std::string, int> index_;
};

// Cleaned (or raw, straight from parsing) list of event records plus the item
// catalog and the actor head-count n_s. actor_count is tracked separately from
// the records because pruning may leave actors with zero records while they
// still count toward the population size.
struct EventLog {
    std::vector<EventRecord> records;
    ItemCatalog items;
    int actor_count = 0;
};

// Pairwise precedence counts: counts(i, j) = number of actors who took item i
// strictly before item j. Zero diagonal.
struct CountMatrix {
    int n_c = 0;
    std::vector<std::int64_t> counts; // row-major n_c x n_c

    CountMatrix() = default;
    explicit CountMatrix(int n) : n_c(n), counts(static_cast<std::size_t>(n) * n, 0) {}
    std::int64_t& at(int i, int j) { return counts[static_cast<std::size_t>(i) * n_c + j]; }
    std::int64_t at(int i, int j) const { return counts[static_cast<std::size_t>(i) * n_c + j]; }
};

// Pairwise precedence frequencies. For every compared pair probs(i,j) +
// probs(j,i) == 1; both entries are zero when nobody compared the pair.
struct TransitionMatrix {
    int n_c = 0;
    Matrix probs;
};

// Skew-symmetric recoding of the transition matrix with magnitudes in
// {0} u [0.5, 1]. Positive entry means i typically precedes j.
struct FlowMatrix {
    int n_c = 0;
    Matrix flows;
};

// Undirected graph with an edge wherever at least one actor compared the pair.
struct MeasurementGraph {
    int n_c = 0;
    std::vector<std::pair<int, int>> edges; // each pair stored with first < second, sorted

    int m() const noexcept { return static_cast<int>(edges.size()); }
    bool has_edge(int i, int j) const;
};

// A full ordering of the items. order[0] is the item ranked earliest. scores
// is the per-item score vector the order was read from; orientation_note says
// how the global sign/shift/rotation ambiguity was resolved.
struct Ranking {
    std::vector<int> order;
    Vector scores;
    std::string method_tag;
    std::string orientation_note;

    int size() const noexcept { return static_cast<int>(order.size()); }
    // positions[item] = rank position of that item.
    std::vector<int> positions() const;
};

// Per-method intermediate operator fed to the spectral kernels.
struct MethodOperator {
    enum class Kind {
        stochastic_pagerank,
        stochastic_rankcentrality,
        similarity_laplacian,
        hermitian_phase,
        incidence_system,
    };

    Kind kind = Kind::stochastic_pagerank;
    int n = 0;

    // stochastic_* and similarity_laplacian payload
    Matrix dense;
    // hermitian_phase payload
    CMatrix phase;
    // incidence_system payload: row k is +1 at incidence[k].first and -1 at
    // incidence[k].second, with measurement w[k].
    std::vector<std::pair<int, int>> incidence;
    Vector measurements;

    static MethodOperator stochastic(Kind kind, Matrix rows);
    static MethodOperator laplacian(Matrix l);
    static MethodOperator hermitian(CMatrix h);
    static MethodOperator incidence_system(int n, std::vector<std::pair<int, int>> rows,
                                           Vector w);
};

const char* kind_name(MethodOperator::Kind kind);

// Validation routines. A violated invariant throws InvariantError; values are
// never silently repaired.
void validate(const EventLog& log);
void validate(const CountMatrix& c);
void validate(const CountMatrix& c, int n_s);
void validate(const TransitionMatrix& p);
void validate(const FlowMatrix& f);
void validate(const MeasurementGraph& g, const CountMatrix& c);
void validate(const Ranking& r);
void validate(const MethodOperator& op);

// Sorts item indices by score; ties break on the ascending item index.
std::vector<int> order_by_scores(const Vector& scores, bool ascending);

} // namespace seqrank
