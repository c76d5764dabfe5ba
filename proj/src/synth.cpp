#include "seqrank/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "seqrank/ingest.hpp"
#include "seqrank/spectral.hpp"

namespace seqrank {

namespace {

// Uniform double in [0, 1) from the top 53 bits of one mt19937_64 output.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string padded(const std::string& prefix, int index, int total) {
    int width = 1;
    for (int v = total; v >= 10; v /= 10) ++width;
    std::ostringstream os;
    os << prefix << "_";
    std::string digits = std::to_string(index + 1);
    for (int i = static_cast<int>(digits.size()); i < width; ++i) os << '0';
    os << digits;
    return os.str();
}

ItemCatalog chain_catalog(int n_items) {
    std::vector<std::string> ids;
    ids.reserve(n_items);
    for (int i = 0; i < n_items; ++i) ids.push_back(synth_item_id(i, n_items));
    return ItemCatalog::from_ids_sorted(std::move(ids));
}

} // namespace

const char* generator_name() {
    return "mt19937_64+u53";
}

void SynthSpec::validate() const {
    if (n_items < 2) throw UsageError("synth: n_items must be >= 2");
    if (n_actors < 1) throw UsageError("synth: n_actors must be >= 1");
    if (flip_prob < 0.0 || flip_prob >= 0.5) throw UsageError("synth: flip_prob must lie in [0, 0.5)");
    if (edge_prob <= 0.0 || edge_prob > 1.0) throw UsageError("synth: edge_prob must lie in (0, 1]");
    if (model == Model::bradley_terry) {
        if (static_cast<int>(bt_weights.size()) != n_items) {
            throw UsageError("synth: bt_weights length must equal n_items");
        }
        for (double w : bt_weights) {
            if (!(w > 0.0)) throw UsageError("synth: bt_weights must be strictly positive");
        }
    }
}

std::string synth_item_id(int index, int n_items) {
    return padded("item", index, n_items);
}

std::string synth_actor_id(int index, int n_actors) {
    return padded("actor", index, n_actors);
}

EventLog gen_chain_log(const SynthSpec& spec) {
    spec.validate();
    if (spec.model != SynthSpec::Model::chain) throw UsageError("gen_chain_log: model must be chain");
    EventLog log;
    log.items = chain_catalog(spec.n_items);
    log.actor_count = spec.n_actors;
    log.records.reserve(static_cast<std::size_t>(spec.n_actors) * spec.n_items);
    for (int a = 0; a < spec.n_actors; ++a) {
        for (int i = 0; i < spec.n_items; ++i) {
            EventRecord rec;
            rec.actor_id = synth_actor_id(a, spec.n_actors);
            rec.item_id = synth_item_id(i, spec.n_items);
            rec.period = i + 1;
            log.records.push_back(std::move(rec));
        }
    }
    return log;
}

EventLog gen_flip_log(const SynthSpec& spec) {
    spec.validate();
    if (spec.model != SynthSpec::Model::flip) throw UsageError("gen_flip_log: model must be flip");
    std::mt19937_64 rng(spec.seed);

    EventLog log;
    log.items = chain_catalog(spec.n_items);
    log.actor_count = spec.n_actors;
    for (int a = 0; a < spec.n_actors; ++a) {
        std::vector<int> seq(spec.n_items);
        for (int i = 0; i < spec.n_items; ++i) seq[i] = i;
        if (spec.flip_prob > 0.0) {
            for (int site = 0; site + 1 < spec.n_items; ++site) {
                if (next_uniform(rng) < spec.flip_prob) std::swap(seq[site], seq[site + 1]);
            }
        }
        for (int pos = 0; pos < spec.n_items; ++pos) {
            if (spec.edge_prob < 1.0 && next_uniform(rng) >= spec.edge_prob) continue;
            EventRecord rec;
            rec.actor_id = synth_actor_id(a, spec.n_actors);
            rec.item_id = synth_item_id(seq[pos], spec.n_items);
            rec.period = pos + 1;
            log.records.push_back(std::move(rec));
        }
    }
    return log;
}

BtMatrices gen_bradley_terry_matrix(const SynthSpec& spec) {
    spec.validate();
    if (spec.model != SynthSpec::Model::bradley_terry) {
        throw UsageError("gen_bradley_terry_matrix: model must be bradley_terry");
    }
    const int n = spec.n_items;
    std::mt19937_64 rng(spec.seed);

    const int max_retries = 64;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                bool keep = spec.edge_prob >= 1.0 || next_uniform(rng) < spec.edge_prob;
                if (keep) edges.emplace_back(i, j);
            }
        }
        if (connected_components(n, edges).size() > 1) continue;

        TransitionMatrix p;
        p.n_c = n;
        p.probs = Matrix(n, n);
        for (const auto& [i, j] : edges) {
            if (spec.sampled) {
                double prob_ij = spec.bt_weights[j] / (spec.bt_weights[i] + spec.bt_weights[j]);
                std::int64_t wins = 0;
                for (int k = 0; k < spec.n_actors; ++k) {
                    if (next_uniform(rng) < prob_ij) ++wins;
                }
                p.probs(i, j) = static_cast<double>(wins) / spec.n_actors;
                p.probs(j, i) = static_cast<double>(spec.n_actors - wins) / spec.n_actors;
            } else {
                // Lateness orientation: the earlier item (smaller weight) is
                // observed first with probability > 1/2.
                p.probs(i, j) = spec.bt_weights[j] / (spec.bt_weights[i] + spec.bt_weights[j]);
                p.probs(j, i) = spec.bt_weights[i] / (spec.bt_weights[i] + spec.bt_weights[j]);
            }
        }

        BtMatrices out;
        out.p = std::move(p);
        out.f = build_flow_matrix(out.p);
        out.g.n_c = n;
        out.g.edges = std::move(edges);
        return out;
    }
    throw DisconnectedGraphError("bradley-terry generator: no connected graph after " +
                                 std::to_string(max_retries) + " attempts");
}

Ranking true_ranking(const SynthSpec& spec) {
    spec.validate();
    Ranking r;
    r.method_tag = "ground_truth";
    if (spec.model == SynthSpec::Model::bradley_terry) {
        r.scores = spec.bt_weights;
        r.orientation_note = "ascending lateness weight";
    } else {
        r.scores.resize(spec.n_items);
        for (int i = 0; i < spec.n_items; ++i) r.scores[i] = static_cast<double>(i);
        r.orientation_note = "chain order";
    }
    r.order = order_by_scores(r.scores, true);
    return r;
}

std::string event_log_to_csv(const EventLog& log) {
    std::ostringstream os;
    os << "actor_id,item_id,period\n";
    for (const auto& rec : log.records) {
        os << rec.actor_id << "," << rec.item_id << "," << rec.period << "\n";
    }
    return os.str();
}

} // namespace seqrank
