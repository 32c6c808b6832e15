#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "nncomp/dfm/association.hpp"
#include "nncomp/dfm/features.hpp"
#include "nncomp/gbdt/gbdt.hpp"
#include "nncomp/vectorspace/cooccurrence.hpp"
#include "support/feature_oracle.hpp"

using namespace nncomp;

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

corpus::CompoundTable seed_table() {
    corpus::CompoundTable t(small_decades());
    t.add({"steam", "engine", 1870, 12});
    t.add({"steam", "engine", 1880, 6});
    t.add({"steam", "mine", 1880, 3});
    t.add({"coal", "engine", 1870, 4});
    t.add({"coal", "mine", 1870, 9});
    t.add({"water", "wheel", 1880, 5});
    t.add({"steam", "wheel", 1890, 50});  // validation era: no marginal may see it
    return t;
}

void check_feature(dfm::Feature got, std::optional<double> want) {
    if (!want) {
        CHECK(got.missing);
        return;
    }
    REQUIRE_FALSE(got.missing);
    CHECK(got.value == doctest::Approx(*want).epsilon(1e-9));
}

// dense copy of one matrix row (empty when the row is absent)
std::vector<double> dense_row(const vs::CooccurrenceMatrix& m, const std::string& lexeme,
                              vs::Role role) {
    auto r = m.row_of(lexeme, role);
    if (!r) return {};
    std::vector<double> out(m.n_cols(), 0.0);
    auto cols = m.row_cols(*r);
    auto vals = m.row_vals(*r);
    for (std::size_t i = 0; i < cols.size(); ++i) out[cols[i]] = vals[i];
    return out;
}

std::optional<double> oracle_row_cosine(const vs::CooccurrenceMatrix& m, const std::string& a,
                                        vs::Role role_a, const std::string& b, vs::Role role_b) {
    auto u = dense_row(m, a, role_a);
    auto v = dense_row(m, b, role_b);
    if (u.empty() || v.empty()) return std::nullopt;
    return testing::oracle_cosine(u, v);
}

}  // namespace

TEST_CASE("association measures match the formula oracle") {
    const testing::OracleCounts cases[] = {
        {5, 10, 8, 100}, {1, 1, 1, 1},    {2, 50, 40, 1000}, {10, 10, 10, 10},
        {1, 30, 30, 60}, {7, 7, 90, 200}, {3, 40, 3, 500},
    };
    for (const auto& oc : cases) {
        const dfm::AssociationCounts ac{oc.n_comp, oc.n_mod, oc.n_head, oc.n_total};
        check_feature(dfm::pmi(ac), testing::oracle_pmi(oc));
        check_feature(dfm::ppmi(ac), testing::oracle_ppmi(oc));
        check_feature(dfm::llr(ac), testing::oracle_llr(oc));
        check_feature(dfm::lmi(ac), testing::oracle_lmi(oc));
        // Dunning's statistic is a scaled KL divergence: never negative
        if (!dfm::llr(ac).missing) CHECK(dfm::llr(ac).value >= -1e-9);
        // ppmi clips pmi at zero
        if (!dfm::pmi(ac).missing)
            CHECK(dfm::ppmi(ac).value == doctest::Approx(std::max(dfm::pmi(ac).value, 0.0)));
    }

    // any zero marginal leaves every measure missing
    for (const dfm::AssociationCounts zero :
         {dfm::AssociationCounts{0, 10, 8, 100}, dfm::AssociationCounts{5, 0, 8, 100},
          dfm::AssociationCounts{5, 10, 0, 100}, dfm::AssociationCounts{0, 0, 0, 0}}) {
        CHECK(dfm::pmi(zero).missing);
        CHECK(dfm::ppmi(zero).missing);
        CHECK(dfm::llr(zero).missing);
        CHECK(dfm::lmi(zero).missing);
    }
}

TEST_CASE("cosine variants agree with the dense oracle") {
    const std::vector<double> u{1.0, 0.0, 2.0, -1.0};
    const std::vector<double> v{0.5, 3.0, 0.0, 1.0};
    check_feature(dfm::cosine(u, v), testing::oracle_cosine(u, v));
    const std::vector<double> zeros{0.0, 0.0};
    const std::vector<double> nonzero{1.0, 2.0};
    CHECK(dfm::cosine(zeros, nonzero).missing);

    // sparse form over the same vectors
    const std::vector<std::uint32_t> cu{0, 2, 3};
    const std::vector<double> xu{1.0, 2.0, -1.0};
    const std::vector<std::uint32_t> cv{0, 1, 3};
    const std::vector<double> xv{0.5, 3.0, 1.0};
    check_feature(dfm::cosine_sparse(cu, xu, cv, xv), testing::oracle_cosine(u, v));
    CHECK(dfm::cosine_sparse({}, {}, cv, xv).missing);
}

TEST_CASE("association index reproduces brute-force marginals per slice") {
    const auto table = seed_table();
    const dfm::AssociationIndex index(table);

    // slices: the training decades then the pooled slice
    CHECK(index.slices() == std::vector<int>{1870, 1880, vs::kAllDecades});

    const std::pair<std::string, std::string> pairs[] = {
        {"steam", "engine"}, {"steam", "mine"}, {"coal", "engine"},
        {"coal", "mine"},    {"water", "wheel"}, {"steam", "wheel"},
    };
    for (int slice : index.slices()) {
        for (const auto& [m, h] : pairs) {
            const auto got = index.counts(m, h, slice);
            const auto want = testing::oracle_counts(table, m, h, slice);
            CHECK(got.n_comp == want.n_comp);
            CHECK(got.n_mod == want.n_mod);
            CHECK(got.n_head == want.n_head);
            CHECK(got.n_total == want.n_total);
        }
    }

    // the validation-era attestation must not leak into any slice
    for (int slice : index.slices()) {
        CHECK(index.counts("steam", "wheel", slice).n_comp == 0);
    }
    CHECK(index.counts("steam", "engine", vs::kAllDecades).n_comp == 18);
}

TEST_CASE("compound features combine association and similarity per slice") {
    const auto table = seed_table();
    const dfm::AssociationIndex index(table);
    const auto aspect = vs::ContextAspect::CompoundCentric;

    vs::CooccurrenceBuilder b;
    b.add("steam engine", vs::Role::CompoundBigram, 0, 3);
    b.add("steam engine", vs::Role::CompoundBigram, 1, 1);
    b.add("engine", vs::Role::HeadOfCompound, 0, 2);
    b.add("engine", vs::Role::HeadOfCompound, 2, 5);
    b.add("steam", vs::Role::ModifierOfCompound, 1, 4);
    const auto m = b.finalize(3, 1870);

    const corpus::Compound comp{"steam", "engine"};
    const auto fv = dfm::compound_features(comp, index, m, aspect, 1870);

    const auto oc = testing::oracle_counts(table, "steam", "engine", 1870);
    check_feature(fv.ppmi, testing::oracle_ppmi(oc));
    check_feature(fv.llr, testing::oracle_llr(oc));
    check_feature(fv.lmi, testing::oracle_lmi(oc));
    check_feature(fv.sim_with_head, oracle_row_cosine(m, "steam engine", vs::Role::CompoundBigram,
                                                      "engine", vs::Role::HeadOfCompound));
    check_feature(fv.sim_with_mod, oracle_row_cosine(m, "steam engine", vs::Role::CompoundBigram,
                                                     "steam", vs::Role::ModifierOfCompound));
    check_feature(fv.sim_constituents,
                  oracle_row_cosine(m, "steam", vs::Role::ModifierOfCompound, "engine",
                                    vs::Role::HeadOfCompound));

    // a slice where the pair is unattested leaves everything missing, even
    // though the matrix rows exist
    const auto fv80 = dfm::compound_features({"coal", "mine"}, index, m, aspect, 1880);
    CHECK(fv80.ppmi.missing);
    CHECK(fv80.sim_with_head.missing);

    // attested pair with no matrix rows: association present, sims missing
    const auto fv_nosim = dfm::compound_features({"coal", "mine"}, index, m, aspect, 1870);
    CHECK_FALSE(fv_nosim.ppmi.missing);
    CHECK(fv_nosim.sim_with_head.missing);
    CHECK(fv_nosim.sim_constituents.missing);
}

TEST_CASE("feature builder aggregates constituent statistics like the oracle") {
    const auto table = seed_table();
    const auto aspect = vs::ContextAspect::CompoundCentric;
    const std::vector<corpus::Compound> train = {
        {"steam", "engine"}, {"steam", "mine"}, {"coal", "engine"}, {"coal", "mine"},
        {"water", "wheel"},
    };

    // two decade slices with overlapping but distinct rows
    vs::CooccurrenceBuilder b70;
    b70.add("steam engine", vs::Role::CompoundBigram, 0, 3);
    b70.add("steam engine", vs::Role::CompoundBigram, 1, 1);
    b70.add("coal engine", vs::Role::CompoundBigram, 1, 2);
    b70.add("coal mine", vs::Role::CompoundBigram, 2, 6);
    b70.add("engine", vs::Role::HeadOfCompound, 0, 2);
    b70.add("engine", vs::Role::HeadOfCompound, 2, 5);
    b70.add("mine", vs::Role::HeadOfCompound, 2, 3);
    b70.add("steam", vs::Role::ModifierOfCompound, 1, 4);
    b70.add("coal", vs::Role::ModifierOfCompound, 0, 1);
    b70.add("coal", vs::Role::ModifierOfCompound, 2, 2);
    const auto m70 = b70.finalize(3, 1870);

    vs::CooccurrenceBuilder b80;
    b80.add("steam engine", vs::Role::CompoundBigram, 1, 2);
    b80.add("steam mine", vs::Role::CompoundBigram, 0, 4);
    b80.add("engine", vs::Role::HeadOfCompound, 1, 1);
    b80.add("mine", vs::Role::HeadOfCompound, 0, 2);
    b80.add("steam", vs::Role::ModifierOfCompound, 0, 3);
    b80.add("water", vs::Role::ModifierOfCompound, 1, 7);
    b80.add("wheel", vs::Role::HeadOfCompound, 1, 2);
    b80.add("water wheel", vs::Role::CompoundBigram, 1, 5);
    const auto m80 = b80.finalize(3, 1880);

    const dfm::DfmFeatureBuilder builder(table, {&m70, &m80}, aspect,
                                         vs::TimeAspect::DecadeCentric, train,
                                         /*include_std=*/true);
    CHECK(builder.dim() == 2 * 24);  // 2 slices x (6 features x 2 roles x mean+std)
    CHECK(builder.slices() == std::vector<int>{1870, 1880});
    CHECK(builder.feature_names().size() == builder.dim());
    CHECK(builder.feature_names()[0] == "ppmi_mean_mod_1870");

    // oracle: recompute the per-slice feature of every training compound and
    // aggregate per constituent
    const dfm::AssociationIndex index(table);
    const vs::CooccurrenceMatrix* mats[] = {&m70, &m80};
    const int slices[] = {1870, 1880};
    auto oracle_feature = [&](const corpus::Compound& c, std::size_t s,
                              std::size_t f) -> std::optional<double> {
        const auto oc = testing::oracle_counts(table, c.modifier, c.head, slices[s]);
        if (oc.n_comp == 0) return std::nullopt;
        switch (f) {
            case 0: return testing::oracle_ppmi(oc);
            case 1: return testing::oracle_llr(oc);
            case 2: return testing::oracle_lmi(oc);
            case 3:
                return oracle_row_cosine(*mats[s], c.joined(), vs::Role::CompoundBigram, c.head,
                                         vs::Role::HeadOfCompound);
            case 4:
                return oracle_row_cosine(*mats[s], c.joined(), vs::Role::CompoundBigram,
                                         c.modifier, vs::Role::ModifierOfCompound);
            default:
                return oracle_row_cosine(*mats[s], c.modifier, vs::Role::ModifierOfCompound,
                                         c.head, vs::Role::HeadOfCompound);
        }
    };

    auto oracle_block = [&](const std::string& lexeme, bool is_modifier, std::size_t s,
                            std::size_t f) -> std::optional<testing::OracleMoments> {
        std::vector<std::optional<double>> values;
        for (const auto& c : train) {
            if ((is_modifier ? c.modifier : c.head) != lexeme) continue;
            values.push_back(oracle_feature(c, s, f));
        }
        return testing::oracle_moments(values);
    };

    auto check_candidate = [&](const std::string& mod, const std::string& head) {
        const auto row = builder.features(mod, head);
        REQUIRE(row.size() == builder.dim());
        std::size_t i = 0;
        for (std::size_t s = 0; s < 2; ++s) {
            for (int stds = 0; stds < 2; ++stds) {
                for (int role = 0; role < 2; ++role) {
                    const std::string& lex = role == 0 ? mod : head;
                    for (std::size_t f = 0; f < dfm::kFeaturesPerSlice; ++f, ++i) {
                        const auto want = oracle_block(lex, role == 0, s, f);
                        if (!want) {
                            CHECK(dfm::is_missing(row[i]));
                        } else {
                            REQUIRE_FALSE(dfm::is_missing(row[i]));
                            const double expect = stds == 0 ? want->mean : want->stddev;
                            CHECK(row[i] == doctest::Approx(expect).epsilon(1e-9).scale(1.0));
                        }
                    }
                }
            }
        }
    };

    check_candidate("steam", "engine");
    check_candidate("steam", "wheel");  // unattested candidate, known constituents
    check_candidate("coal", "wheel");

    // unknown constituents contribute a fully-missing block
    const auto ghost = builder.features("ghost", "engine");
    for (std::size_t s = 0; s < 2; ++s) {
        for (std::size_t f = 0; f < dfm::kFeaturesPerSlice; ++f) {
            CHECK(dfm::is_missing(ghost[s * 24 + f]));  // modifier means
        }
    }

    // missing values encode as NaN and round-trip through the sentinel
    const auto encoded = gbdt::encode_missing(builder.features("ghost", "engine"));
    for (double x : encoded) CHECK_FALSE(std::isnan(x));
}
