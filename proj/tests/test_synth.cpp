#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "seqrank/synth.hpp"

using namespace seqrank;
using namespace seqrank::test;

TEST_CASE("chain log: direct counts and downstream gamma") {
    SynthSpec spec;
    spec.model = SynthSpec::Model::chain;
    spec.n_items = 3;
    spec.n_actors = 5;
    EventLog log = gen_chain_log(spec);
    CHECK_NOTHROW(validate(log));
    auto m = matrices_from_log(log);
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) CHECK(m.c.at(i, j) == 5);
    }
    CHECK(seqrank::gamma(true_ranking(spec), m.p) == doctest::Approx(1.0).epsilon(1e-15));

    spec.n_items = 2;
    spec.n_actors = 1;
    auto m2 = matrices_from_log(gen_chain_log(spec));
    CHECK(m2.p.probs(0, 1) == 1.0);
}

TEST_CASE("flip log: zero flip and full retention reproduce the chain exactly") {
    SynthSpec flip;
    flip.model = SynthSpec::Model::flip;
    flip.n_items = 6;
    flip.n_actors = 4;
    flip.flip_prob = 0.0;
    flip.edge_prob = 1.0;
    flip.seed = 123;
    EventLog a = gen_flip_log(flip);

    SynthSpec chain = flip;
    chain.model = SynthSpec::Model::chain;
    EventLog b = gen_chain_log(chain);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].actor_id == b.records[i].actor_id);
        CHECK(a.records[i].item_id == b.records[i].item_id);
        CHECK(a.records[i].period == b.records[i].period);
    }
}

TEST_CASE("flip log: identical seeds give identical logs, different seeds differ") {
    SynthSpec spec;
    spec.model = SynthSpec::Model::flip;
    spec.n_items = 8;
    spec.n_actors = 10;
    spec.flip_prob = 0.3;
    spec.edge_prob = 0.8;
    spec.seed = 99;
    std::string csv1 = event_log_to_csv(gen_flip_log(spec));
    std::string csv2 = event_log_to_csv(gen_flip_log(spec));
    CHECK(csv1 == csv2);
    spec.seed = 100;
    CHECK(event_log_to_csv(gen_flip_log(spec)) != csv1);
}

TEST_CASE("flip log: drops respect edge_prob and records stay valid") {
    SynthSpec spec;
    spec.model = SynthSpec::Model::flip;
    spec.n_items = 10;
    spec.n_actors = 50;
    spec.flip_prob = 0.2;
    spec.edge_prob = 0.5;
    spec.seed = 5;
    EventLog log = gen_flip_log(spec);
    CHECK_NOTHROW(validate(log));
    CHECK(log.records.size() < 500); // plenty dropped
    CHECK(log.records.size() > 100);
    CHECK(log.actor_count == 50);
}

TEST_CASE("bradley-terry: pair formula and symmetric weights") {
    BtMatrices two = bt_matrices({1.0, 2.0});
    CHECK(two.p.probs(0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    BtMatrices equal = bt_matrices({1.0, 1.0, 1.0});
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i != j) CHECK(equal.p.probs(i, j) == 0.5);
        }
    }
    CHECK(seqrank::gamma(ranking_of({0, 1, 2}), equal.p) == 0.0);
    CHECK(seqrank::gamma(ranking_of({2, 1, 0}), equal.p) == 0.0);
}

TEST_CASE("bradley-terry: generated matrices satisfy all model invariants") {
    BtMatrices mats = bt_matrices({1.0, 2.0, 4.0, 8.0}, 0.9, 21);
    CHECK_NOTHROW(validate(mats.p));
    CHECK_NOTHROW(validate(mats.f));
    // edges mirror nonzero P entries
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            bool compared = mats.p.probs(i, j) + mats.p.probs(j, i) > 0;
            CHECK(compared == mats.g.has_edge(i, j));
        }
    }
}

TEST_CASE("bradley-terry: sampled mode draws finite comparisons") {
    SynthSpec spec;
    spec.model = SynthSpec::Model::bradley_terry;
    spec.n_items = 3;
    spec.n_actors = 40;
    spec.bt_weights = {1.0, 2.0, 4.0};
    spec.seed = 17;
    spec.sampled = true;
    BtMatrices mats = gen_bradley_terry_matrix(spec);
    CHECK_NOTHROW(validate(mats.p));
    // sampled probabilities are multiples of 1/40
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            double scaled = mats.p.probs(i, j) * 40.0;
            CHECK(scaled == doctest::Approx(std::round(scaled)).epsilon(1e-12));
        }
    }
}

TEST_CASE("true ranking: chain, bt weights, and ties") {
    SynthSpec chain;
    chain.model = SynthSpec::Model::chain;
    chain.n_items = 4;
    CHECK(true_ranking(chain).order == std::vector<int>{0, 1, 2, 3});

    SynthSpec bt;
    bt.model = SynthSpec::Model::bradley_terry;
    bt.n_items = 3;
    bt.bt_weights = {3.0, 1.0, 2.0};
    CHECK(true_ranking(bt).order == std::vector<int>{1, 2, 0});

    bt.bt_weights = {1.0, 1.0, 2.0};
    CHECK(true_ranking(bt).order == std::vector<int>{0, 1, 2});
}

TEST_CASE("csv round trip: serialized log parses back identically") {
    SynthSpec spec;
    spec.model = SynthSpec::Model::flip;
    spec.n_items = 5;
    spec.n_actors = 8;
    spec.flip_prob = 0.25;
    spec.seed = 31;
    EventLog log = gen_flip_log(spec);
    std::string csv = event_log_to_csv(log);
    std::istringstream in(csv);
    EventLog parsed = parse_event_log(in);
    REQUIRE(parsed.records.size() == log.records.size());
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        CHECK(parsed.records[i].actor_id == log.records[i].actor_id);
        CHECK(parsed.records[i].item_id == log.records[i].item_id);
        CHECK(parsed.records[i].period == log.records[i].period);
    }
    CHECK(parsed.actor_count == log.actor_count);
    auto m1 = matrices_from_log(log);
    auto m2 = matrices_from_log(parsed);
    CHECK(m1.p.probs == m2.p.probs);
}

TEST_CASE("spec validation rejects out-of-range parameters") {
    SynthSpec spec;
    spec.model = SynthSpec::Model::chain;
    spec.n_items = 1;
    CHECK_THROWS_AS(spec.validate(), UsageError);
    spec.n_items = 3;
    spec.flip_prob = 0.5;
    CHECK_THROWS_AS(spec.validate(), UsageError);
    spec.flip_prob = 0.0;
    spec.edge_prob = 0.0;
    CHECK_THROWS_AS(spec.validate(), UsageError);
    spec.edge_prob = 1.0;
    spec.model = SynthSpec::Model::bradley_terry;
    spec.bt_weights = {1.0, -1.0, 2.0};
    CHECK_THROWS_AS(spec.validate(), UsageError);
}
