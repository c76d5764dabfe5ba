#pragma once

#include <istream>
#include <optional>
#include <string>

#include "seqrank/model.hpp"

namespace seqrank {

// Column-name map for event CSVs. Only actor/item/period are required to be
// present in the header.
struct CsvSchema {
    std::string actor = "actor_id";
    std::string item = "item_id";
    std::string period = "period";
    std::string grade = "grade_points";
    std::string cohort = "cohort_label";
    std::string transfer = "transfer_flag";
};

enum class GpaBand { all, A, B, C };

const char* band_name(GpaBand band);
GpaBand band_from_string(const std::string& s);

// Cohort-cleaning rules applied before matrix construction.
struct FilterSpec {
    std::optional<std::string> cohort_label; // keep actors whose last-period label matches
    bool exclude_transfers = false;
    GpaBand gpa_band = GpaBand::all;
    // Band edges, strictly increasing: C = [c_min, b_min), B = [b_min, a_min),
    // A = [a_min, inf).
    double c_min = 1.5;
    double b_min = 2.5;
    double a_min = 3.5;
    double min_item_frac = 0.10;

    void validate() const;
    std::string describe() const;
};

// Counters reported in output provenance.
struct FilterStats {
    int dropped_cohort = 0;
    int dropped_transfer = 0;
    int dropped_gpa = 0;
    int dedup_removed = 0;
};

struct PruneStats {
    std::vector<std::string> pruned_items;
};

// Reads a headered CSV into an EventLog. Leading '#' lines are skipped as
// metadata comments. No cleaning happens here; duplicate (actor, item) rows
// survive. Item indices are assigned in lexicographic item_id order so
// matrices are deterministic across runs.
EventLog parse_event_log(std::istream& source, const CsvSchema& schema = {});

// Applies, in order: last-period cohort selection, transfer exclusion, retake
// dedup (keep the record with the largest period), GPA banding over the
// deduplicated records.
EventLog apply_cohort_filter(const EventLog& log, const FilterSpec& spec,
                             FilterStats* stats = nullptr);

// Removes items taken by fewer than ceil(min_frac * n_s) distinct actors.
// n_s is unchanged: actors left with no records still count.
EventLog prune_rare_items(const EventLog& log, double min_frac, PruneStats* stats = nullptr);

// counts(i, j) = number of actors whose period for i is strictly less than
// their period for j. Same-period pairs contribute to neither direction.
CountMatrix build_count_matrix(const EventLog& log);

// probs(i, j) = counts(i, j) / (counts(i, j) + counts(j, i)); both directions
// zero when the pair was never compared.
TransitionMatrix build_transition_matrix(const CountMatrix& c);

// flows(i, j) = probs(i, j) when probs(i, j) > 0.5, probs(i, j) - 1 when
// below. An exact 0.5/0.5 tie gives +0.5 to the lower item index, which keeps
// the matrix skew-symmetric. Uncompared pairs stay 0.
FlowMatrix build_flow_matrix(const TransitionMatrix& p);

// Edge {i, j} present iff counts(i, j) + counts(j, i) > 0.
MeasurementGraph build_measurement_graph(const CountMatrix& c);

} // namespace seqrank
