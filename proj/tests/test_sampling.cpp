#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "nncomp/corpus/compounds.hpp"
#include "nncomp/sampling/candidates.hpp"

using namespace nncomp;
namespace fs = std::filesystem;

namespace {

corpus::DecadeConfig small_decades() {
    corpus::DecadeConfig d;
    d.first_year = 1870;
    d.last_year = 1909;
    d.first_train_decade = 1870;
    d.last_train_decade = 1880;
    d.validation_decade = 1890;
    d.test_decade = 1900;
    d.validate();
    return d;
}

// training compounds over four modifiers and four heads
corpus::CompoundTable seed_table() {
    corpus::CompoundTable t(small_decades());
    t.add({"steam", "engine", 1870, 10});
    t.add({"steam", "engine", 1880, 5});
    t.add({"coal", "mine", 1870, 8});
    t.add({"iron", "bridge", 1880, 4});
    t.add({"water", "wheel", 1870, 2});
    t.add({"water", "mine", 1900, 9});  // test-era attestation still forbids the pair
    return t;
}

std::vector<corpus::Compound> train_positives() {
    return {{"steam", "engine"}, {"coal", "mine"}, {"iron", "bridge"}, {"water", "wheel"}};
}

}  // namespace

TEST_CASE("corruption names round-trip") {
    for (auto c : {sampling::Corruption::None, sampling::Corruption::CorruptHead,
                   sampling::Corruption::CorruptModifier}) {
        CHECK(sampling::corruption_from_name(sampling::corruption_name(c)) == c);
    }
    CHECK_THROWS_AS(sampling::corruption_from_name("swap"), std::invalid_argument);
}

TEST_CASE("pools hold distinct sorted constituents with training-era weights") {
    const auto table = seed_table();
    const auto pools = sampling::pools_from_training(table, train_positives());

    CHECK(pools.heads == std::vector<std::string>{"bridge", "engine", "mine", "wheel"});
    CHECK(pools.modifiers == std::vector<std::string>{"coal", "iron", "steam", "water"});
    // weights are summed training-decade counts of the positives only
    CHECK(pools.head_weights == std::vector<std::uint64_t>{4, 15, 8, 2});
    CHECK(pools.modifier_weights == std::vector<std::uint64_t>{8, 4, 15, 2});

    const auto forbidden = sampling::forbidden_set(table);
    CHECK(forbidden.contains("steam engine"));
    CHECK(forbidden.contains("water mine"));  // attested outside training too
    CHECK_FALSE(forbidden.contains("engine steam"));
}

TEST_CASE("corrupt replaces exactly one constituent and avoids attested pairs") {
    const auto table = seed_table();
    const auto pools = sampling::pools_from_training(table, train_positives());
    const auto forbidden = sampling::forbidden_set(table);

    std::unordered_set<std::string> used;
    util::Rng rng(7);
    const corpus::Compound pos{"steam", "engine"};

    auto neg = sampling::corrupt(pos, sampling::Corruption::CorruptHead, pools, forbidden, used,
                                 rng);
    REQUIRE(neg.has_value());
    CHECK(neg->modifier == "steam");            // modifier preserved
    CHECK(neg->head != "engine");               // head replaced by a pool head
    CHECK_FALSE(neg->attested);
    CHECK(neg->corruption == sampling::Corruption::CorruptHead);
    CHECK_FALSE(forbidden.contains(neg->modifier + ' ' + neg->head));
    CHECK(used.contains(neg->modifier + ' ' + neg->head));

    auto neg2 = sampling::corrupt(pos, sampling::Corruption::CorruptModifier, pools, forbidden,
                                  used, rng);
    REQUIRE(neg2.has_value());
    CHECK(neg2->head == "engine");
    CHECK(neg2->modifier != "steam");

    // a pool with no usable replacement exhausts the retry budget
    sampling::SamplingPools tiny;
    tiny.heads = {"engine"};
    tiny.head_weights = {1};
    tiny.modifiers = {"steam"};
    tiny.modifier_weights = {1};
    std::unordered_set<std::string> used2;
    util::Rng rng2(9);
    CHECK_FALSE(sampling::corrupt(pos, sampling::Corruption::CorruptHead, tiny, forbidden, used2,
                                  rng2)
                    .has_value());
}

TEST_CASE("datasets are balanced, deduplicated and deterministic per seed") {
    const auto table = seed_table();
    const auto pools = sampling::pools_from_training(table, train_positives());
    const auto forbidden = sampling::forbidden_set(table);

    const auto ds = sampling::make_dataset(train_positives(), sampling::Corruption::CorruptHead,
                                           pools, forbidden, 42);
    CHECK(ds.seed == 42);
    CHECK(ds.scenario == sampling::Corruption::CorruptHead);
    CHECK(ds.n_attested() == ds.n_corrupted());
    CHECK(ds.n_attested() + ds.dropped_positives.size() == train_positives().size());

    std::set<std::string> negatives;
    for (const auto& t : ds.tuples) {
        if (t.attested) {
            CHECK(t.corruption == sampling::Corruption::None);
            CHECK(forbidden.contains(t.modifier + ' ' + t.head));
        } else {
            CHECK(t.corruption == sampling::Corruption::CorruptHead);
            CHECK_FALSE(forbidden.contains(t.modifier + ' ' + t.head));
            CHECK(negatives.insert(t.modifier + ' ' + t.head).second);  // no duplicates
        }
        CHECK(t.source_seed == 42);
    }

    const auto same = sampling::make_dataset(train_positives(), sampling::Corruption::CorruptHead,
                                             pools, forbidden, 42);
    CHECK(same.tuples == ds.tuples);

    const auto other = sampling::make_dataset(train_positives(), sampling::Corruption::CorruptHead,
                                              pools, forbidden, 43);
    CHECK(other.tuples != ds.tuples);
}

TEST_CASE("assemble_datasets derives one seed per dataset from the base seed") {
    const auto table = seed_table();
    const auto pools = sampling::pools_from_training(table, train_positives());
    const auto forbidden = sampling::forbidden_set(table);

    const auto sets = sampling::assemble_datasets(
        train_positives(), sampling::Corruption::CorruptModifier, pools, forbidden, 3, 100);
    REQUIRE(sets.size() == 3);
    for (std::size_t i = 0; i < sets.size(); ++i) {
        CHECK(sets[i].seed == 100 + i);
        CHECK(sets[i].n_attested() == sets[i].n_corrupted());
        // identical positives across datasets
        std::multiset<std::string> pos;
        for (const auto& t : sets[i].tuples)
            if (t.attested) pos.insert(t.modifier + ' ' + t.head);
        std::multiset<std::string> pos0;
        for (const auto& t : sets[0].tuples)
            if (t.attested) pos0.insert(t.modifier + ' ' + t.head);
        CHECK(pos == pos0);
    }
    CHECK(sets[0].tuples != sets[1].tuples);
}

TEST_CASE("frequency weighting skews replacement draws toward frequent types") {
    sampling::SamplingPools pools;
    pools.heads = {"common", "rare"};
    pools.head_weights = {999, 1};
    pools.modifiers = {"m"};
    pools.modifier_weights = {1};
    std::unordered_set<std::string> forbidden{"m x"};

    int common = 0, rare = 0;
    util::Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        std::unordered_set<std::string> used;  // fresh, so both heads stay available
        auto neg = sampling::corrupt({"m", "x"}, sampling::Corruption::CorruptHead, pools,
                                     forbidden, used, rng, /*frequency_weighted=*/true);
        REQUIRE(neg.has_value());
        (neg->head == "common" ? common : rare)++;
    }
    CHECK(common >= 180);

    // uniform draws hit both heads often
    common = rare = 0;
    util::Rng rng2(5);
    for (int i = 0; i < 200; ++i) {
        std::unordered_set<std::string> used;
        auto neg = sampling::corrupt({"m", "x"}, sampling::Corruption::CorruptHead, pools,
                                     forbidden, used, rng2, /*frequency_weighted=*/false);
        REQUIRE(neg.has_value());
        (neg->head == "common" ? common : rare)++;
    }
    CHECK(common >= 50);
    CHECK(rare >= 50);
}

TEST_CASE("dataset CSV round-trips") {
    const auto table = seed_table();
    const auto pools = sampling::pools_from_training(table, train_positives());
    const auto forbidden = sampling::forbidden_set(table);
    const auto ds = sampling::make_dataset(train_positives(), sampling::Corruption::CorruptHead,
                                           pools, forbidden, 11);

    const auto dir = fs::temp_directory_path() / "nncomp_test_sampling";
    fs::create_directories(dir);
    const auto path = dir / "dataset.csv";
    ds.save_csv(path);
    const auto loaded = sampling::LabeledDataset::load_csv(path);
    CHECK(loaded.tuples == ds.tuples);
    CHECK(loaded.scenario == ds.scenario);
    CHECK(loaded.seed == ds.seed);
}
