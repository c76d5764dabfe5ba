#pragma once

#include <cstdint>
#include <string>

#include "seqrank/model.hpp"

namespace seqrank {

// Parameters of a synthetic ground-truth experiment.
//
// All generators draw from mt19937_64 seeded with `seed`, turning raw 64-bit
// outputs into uniforms via the top 53 bits ("mt19937_64+u53"). Both pieces
// are fully specified, so generated data is identical across platforms.
struct SynthSpec {
    enum class Model { chain, flip, bradley_terry };

    Model model = Model::chain;
    int n_items = 2;
    int n_actors = 1;
    double flip_prob = 0.0;  // flip model: per-site adjacent transposition probability
    Vector bt_weights;       // bradley_terry model: strictly positive lateness weights
    double edge_prob = 1.0;  // pairwise-observation retention
    std::uint64_t seed = 0;
    bool sampled = false;    // bradley_terry: finite Bernoulli draws instead of exact probabilities

    void validate() const;
};

const char* generator_name(); // pinned RNG identifier recorded in output metadata

// Every actor takes items 1..n in periods 1..n, so P_ij = 1 for all i < j.
EventLog gen_chain_log(const SynthSpec& spec);

// Chain log with seeded adjacent transpositions (one left-to-right pass per
// actor) and independent per-record drops with probability 1 - edge_prob.
EventLog gen_flip_log(const SynthSpec& spec);

struct BtMatrices {
    TransitionMatrix p;
    FlowMatrix f;
    MeasurementGraph g;
};

// Exact-probability Bradley-Terry matrices: P_ij = w_j / (w_i + w_j), with w
// read as a lateness weight (larger w = taken later). Edges are retained
// independently with probability edge_prob; a disconnected draw is retried a
// bounded number of times. The sampled mode replaces exact probabilities with
// n_actors Bernoulli draws per retained pair.
BtMatrices gen_bradley_terry_matrix(const SynthSpec& spec);

// Ground-truth order for the spec: chain order, or ascending bt_weights.
Ranking true_ranking(const SynthSpec& spec);

// Serializes a log to the default CSV schema the parser reads.
std::string event_log_to_csv(const EventLog& log);

// Zero-padded synthetic ids ("item_03", "actor_0007") sort lexicographically
// in numeric order, which keeps catalog order equal to chain order.
std::string synth_item_id(int index, int n_items);
std::string synth_actor_id(int index, int n_actors);

} // namespace seqrank
