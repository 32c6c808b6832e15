#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "nncomp/corpus/compounds.hpp"
#include "nncomp/corpus/decades.hpp"
#include "nncomp/corpus/ngram.hpp"
#include "nncomp/corpus/splits.hpp"
#include "nncomp/corpus/vocabulary.hpp"
#include "nncomp/util/io.hpp"

using namespace nncomp;
namespace fs = std::filesystem;

namespace {

corpus::DecadeConfig test_decades() {
    corpus::DecadeConfig d;
    d.first_year = 1800;
    d.last_year = 2009;
    d.first_train_decade = 1800;
    d.last_train_decade = 1980;
    d.validation_decade = 1990;
    d.test_decade = 2000;
    d.validate();
    return d;
}

fs::path temp_dir() {
    auto p = fs::temp_directory_path() / "nncomp_test_corpus";
    fs::create_directories(p);
    return p;
}

corpus::NgramRecord make_record(const std::vector<std::pair<std::string, corpus::Pos>>& toks,
                                int year, std::uint64_t count) {
    corpus::NgramRecord r;
    for (const auto& [s, p] : toks) r.tokens.push_back({s, p});
    r.year = year;
    r.match_count = count;
    return r;
}

}  // namespace

TEST_CASE("pos tags round-trip through the 12-tag universal set") {
    using corpus::Pos;
    const Pos all[] = {Pos::Noun, Pos::Verb, Pos::Adj,  Pos::Adv,  Pos::Pron, Pos::Det,
                       Pos::Adp,  Pos::Num,  Pos::Conj, Pos::Prt,  Pos::Punct, Pos::X};
    std::set<std::string> tags;
    for (Pos p : all) {
        const auto tag = std::string(corpus::pos_tag(p));
        tags.insert(tag);
        REQUIRE(corpus::pos_from_tag(tag).has_value());
        CHECK(*corpus::pos_from_tag(tag) == p);
    }
    CHECK(tags.size() == 12);  // all distinct
    CHECK_FALSE(corpus::pos_from_tag("NN").has_value());
    CHECK_FALSE(corpus::pos_from_tag("").has_value());

    CHECK(corpus::is_context_pos(Pos::Noun));
    CHECK(corpus::is_context_pos(Pos::Adj));
    CHECK(corpus::is_context_pos(Pos::Verb));
    CHECK(corpus::is_context_pos(Pos::Adv));
    CHECK_FALSE(corpus::is_context_pos(Pos::Det));
    CHECK_FALSE(corpus::is_context_pos(Pos::Punct));
}

TEST_CASE("ngram line parsing accepts the tagged V2 format and tallies failures") {
    corpus::ParseError err;
    auto rec = corpus::parse_ngram_line("steam_NOUN engine_NOUN\t1885\t42\t7", 2, &err);
    REQUIRE(rec.has_value());
    CHECK(rec->year == 1885);
    CHECK(rec->match_count == 42);
    REQUIRE(rec->tokens.size() == 2);
    CHECK(rec->tokens[0].surface == "steam");
    CHECK(rec->tokens[0].pos == corpus::Pos::Noun);
    CHECK(rec->tokens[1].surface == "engine");

    // volume count optional per the 3-field minimum
    CHECK(corpus::parse_ngram_line("a_DET b_NOUN\t1900\t5", 2).has_value());

    auto fails = [&](const char* line, int n, corpus::ParseError want) {
        auto r = corpus::parse_ngram_line(line, n, &err);
        CHECK_FALSE(r.has_value());
        CHECK(err == want);
    };
    fails("steam_NOUN engine_NOUN", 2, corpus::ParseError::BadFieldCount);
    fails("steam_NOUN\t1885\t42\t7", 2, corpus::ParseError::TokenCountMismatch);
    fails("steam engine_NOUN\t1885\t42\t7", 2, corpus::ParseError::MissingPosTag);
    fails("steam_NN engine_NOUN\t1885\t42\t7", 2, corpus::ParseError::UnknownPosTag);
    fails("steam_NOUN engine_NOUN\tMDCCC\t42\t7", 2, corpus::ParseError::BadYear);
    fails("steam_NOUN engine_NOUN\t1885\t0\t7", 2, corpus::ParseError::BadCount);
    fails("steam_NOUN engine_NOUN\t1885\tmany\t7", 2, corpus::ParseError::BadCount);
}

TEST_CASE("head lemmatiser handles regular, guarded and irregular plurals") {
    auto lemma = [](const char* w) { return corpus::lemmatise_head(w); };
    CHECK(lemma("engines") == "engine");
    CHECK(lemma("Engines") == "engine");  // lowercases
    CHECK(lemma("stories") == "story");
    CHECK(lemma("boxes") == "box");
    CHECK(lemma("churches") == "church");
    CHECK(lemma("bushes") == "bush");
    CHECK(lemma("glasses") == "glass");
    CHECK(lemma("men") == "man");
    CHECK(lemma("policemen") == "policeman");
    CHECK(lemma("wolves") == "wolf");
    CHECK(lemma("mice") == "mouse");
    CHECK(lemma("engine") == "engine");

    // guards: -ss, -us, -is and listed invariants stay put
    CHECK(lemma("glass") == "glass");
    CHECK(lemma("status") == "status");
    CHECK(lemma("basis") == "basis");
    CHECK(lemma("species") == "species");
    CHECK(lemma("physics") == "physics");
    CHECK(lemma("gas") == "gas");  // short -s word kept by the n >= 4 guard
}

TEST_CASE("head lemmatiser is idempotent over a broad word list") {
    const char* words[] = {
        "engines", "stories",  "boxes",   "churches", "bushes",   "glasses", "men",
        "women",   "children", "wolves",  "knives",   "analyses", "matrices", "data",
        "fungi",   "radii",    "oxen",    "species",  "series",   "physics",  "news",
        "buses",   "gases",    "viruses", "statuses", "aliases",  "caches",   "niches",
        "heroes",  "pianos",   "lamps",   "crisis",   "axes",     "lenses",   "dies",
    };
    for (const char* w : words) {
        const auto once = corpus::lemmatise_head(w);
        CHECK(corpus::lemmatise_head(once) == once);
    }
}

TEST_CASE("compound pair extraction takes adjacent nouns not surrounded by nouns") {
    using corpus::Pos;
    const auto dc = test_decades();

    // N N with non-noun neighbours -> extracted, head lemmatised
    auto occ = corpus::extract_compounds(
        make_record({{"the", Pos::Det},
                     {"steam", Pos::Noun},
                     {"engines", Pos::Noun},
                     {"were", Pos::Verb},
                     {"loud", Pos::Adj}},
                    1885, 12),
        dc);
    REQUIRE(occ.size() == 1);
    CHECK(occ[0].modifier == "steam");
    CHECK(occ[0].head == "engine");
    CHECK(occ[0].decade == 1880);
    CHECK(occ[0].count == 12);

    // three nouns in a row: every adjacent pair is surrounded by a noun
    CHECK(corpus::extract_compounds(make_record({{"a", Pos::Det},
                                                 {"steam", Pos::Noun},
                                                 {"engine", Pos::Noun},
                                                 {"factory", Pos::Noun},
                                                 {"b", Pos::Det}},
                                                1885, 1),
                                    dc)
              .empty());

    // window edges count as non-noun: pair at the start is accepted
    auto edge = corpus::extract_compounds(make_record({{"steam", Pos::Noun},
                                                       {"engine", Pos::Noun},
                                                       {"was", Pos::Verb},
                                                       {"very", Pos::Adv},
                                                       {"loud", Pos::Adj}},
                                                      1885, 3),
                                          dc);
    REQUIRE(edge.size() == 1);
    CHECK(edge[0].modifier == "steam");

    // non-alphabetic surfaces are rejected
    CHECK(corpus::extract_compounds(make_record({{"the", Pos::Det},
                                                 {"steam-", Pos::Noun},
                                                 {"engine", Pos::Noun},
                                                 {"was", Pos::Verb},
                                                 {"loud", Pos::Adj}},
                                                1885, 3),
                                    dc)
              .empty());

    // out-of-range years contribute nothing
    CHECK(corpus::extract_compounds(make_record({{"the", Pos::Det},
                                                 {"steam", Pos::Noun},
                                                 {"engine", Pos::Noun},
                                                 {"was", Pos::Verb},
                                                 {"loud", Pos::Adj}},
                                                2015, 3),
                                    dc)
              .empty());

    // two disjoint pairs in one window
    auto two = corpus::extract_compounds(make_record({{"steam", Pos::Noun},
                                                      {"engine", Pos::Noun},
                                                      {"near", Pos::Adp},
                                                      {"coal", Pos::Noun},
                                                      {"mines", Pos::Noun}},
                                                     1885, 2),
                                         dc);
    REQUIRE(two.size() == 2);
    CHECK(two[0].head == "engine");
    CHECK(two[1].modifier == "coal");
    CHECK(two[1].head == "mine");
}

TEST_CASE("compound table accumulates, merges and round-trips through TSV") {
    const auto dc = test_decades();
    corpus::CompoundTable a(dc), b(dc);
    a.add({"steam", "engine", 1880, 5});
    a.add({"steam", "engine", 1880, 2});
    a.add({"steam", "engine", 1990, 4});
    a.add({"coal", "mine", 1920, 3});
    b.add({"steam", "engine", 1880, 1});
    b.add({"data", "set", 2000, 9});
    a.merge(b);

    CHECK(a.n_pairs() == 3);
    CHECK(a.count("steam", "engine", 1880) == 8);
    CHECK(a.count("steam", "engine", 1990) == 4);
    CHECK(a.count("steam", "engine", 1870) == 0);
    CHECK(a.attested("coal", "mine"));
    CHECK_FALSE(a.attested("mine", "coal"));
    CHECK_THROWS_AS(a.add({"x", "y", 1790, 1}), std::invalid_argument);

    auto entries = a.sorted_entries();
    REQUIRE(entries.size() == 3);
    CHECK(entries[0]->compound.modifier == "coal");  // sorted by (modifier, head)
    CHECK(entries[1]->compound.modifier == "data");
    CHECK(entries[2]->compound.modifier == "steam");

    const auto path = temp_dir() / "compounds.tsv";
    a.save_tsv(path);
    auto loaded = corpus::CompoundTable::load_tsv(path, dc);
    CHECK(loaded.n_pairs() == 3);
    CHECK(loaded.count("steam", "engine", 1880) == 8);
    CHECK(loaded.count("data", "set", 2000) == 9);
}

TEST_CASE("vocabulary ranks content lexemes by count with lexicographic ties") {
    corpus::VocabularyBuilder vb;
    vb.add_count("zebra", corpus::Pos::Noun, 10);
    vb.add_count("apple", corpus::Pos::Noun, 10);
    vb.add_count("run", corpus::Pos::Verb, 30);
    vb.add_count("run", corpus::Pos::Noun, 5);  // same lexeme, both usages pool
    vb.add_count("tiny", corpus::Pos::Adj, 1);

    auto vocab = vb.finish(3);
    REQUIRE(vocab.size() == 3);
    CHECK(vocab.entries()[0].lexeme == "run");
    CHECK(vocab.entries()[0].total_count == 35);
    CHECK(vocab.entries()[0].pos == corpus::Pos::Verb);  // most frequent usage wins
    CHECK(vocab.entries()[1].lexeme == "apple");         // tie broken lexicographically
    CHECK(vocab.entries()[2].lexeme == "zebra");
    CHECK(vocab.column("apple") == 1u);
    CHECK_FALSE(vocab.column("tiny").has_value());

    // only unigram records are legal input
    corpus::NgramRecord uni;
    uni.tokens = {{"Apple", corpus::Pos::Noun}};
    uni.year = 1900;
    uni.match_count = 4;
    vb.add(uni);  // lowercases

    corpus::NgramRecord bi;
    bi.tokens = {{"a", corpus::Pos::Det}, {"b", corpus::Pos::Noun}};
    bi.year = 1900;
    bi.match_count = 1;
    CHECK_THROWS_AS(vb.add(bi), std::invalid_argument);

    // non-content and non-alphabetic unigrams are ignored
    corpus::NgramRecord det;
    det.tokens = {{"the", corpus::Pos::Det}};
    det.year = 1900;
    det.match_count = 100;
    vb.add(det);
    corpus::NgramRecord messy;
    messy.tokens = {{"ab3", corpus::Pos::Noun}};
    messy.year = 1900;
    messy.match_count = 100;
    vb.add(messy);
    auto vocab2 = vb.finish(10);
    CHECK(vocab2.column("apple").has_value());
    CHECK_FALSE(vocab2.column("the").has_value());
    CHECK_FALSE(vocab2.column("ab3").has_value());

    const auto path = temp_dir() / "vocab.tsv";
    vocab2.save_tsv(path);
    auto loaded = corpus::ContextVocabulary::load_tsv(path);
    REQUIRE(loaded.size() == vocab2.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded.entries()[i].lexeme == vocab2.entries()[i].lexeme);
        CHECK(loaded.entries()[i].total_count == vocab2.entries()[i].total_count);
    }
    CHECK(loaded.column("apple") == vocab2.column("apple"));
}

TEST_CASE("temporal split assigns compounds by first attestation decade") {
    const auto dc = test_decades();
    corpus::CompoundTable table(dc);
    // training compound, well attested
    table.add({"steam", "engine", 1850, 10});
    table.add({"steam", "engine", 2000, 50});  // later use does not move it
    // training-era but below the count threshold
    table.add({"steam", "whistle", 1850, 2});
    // validation-era first attestation, count irrelevant
    table.add({"steam", "cloud", 1990, 1});
    // test-era novel compound of training-era constituents
    table.add({"engine", "cloud", 1860, 0});  // zero counts do not attest
    table.add({"cloud", "engine", 2000, 7});
    table.add({"cloud", "base", 1920, 4});  // puts "cloud"/"base" in training era
    table.add({"engine", "base", 1900, 6});
    // test-era compound with a brand-new constituent
    table.add({"nano", "engine", 2000, 9});
    // test-era compound below the novel threshold
    table.add({"base", "cloud", 2000, 2});

    const auto splits = corpus::split_compounds_by_first_attestation(table, {3, 3});

    auto names = [](const std::vector<corpus::Compound>& v) {
        std::set<std::string> out;
        for (const auto& c : v) out.insert(c.joined());
        return out;
    };
    CHECK(names(splits.train) ==
          std::set<std::string>{"steam engine", "cloud base", "engine base"});
    CHECK(names(splits.validation) == std::set<std::string>{"steam cloud"});
    CHECK(names(splits.test) == std::set<std::string>{"cloud engine"});
    CHECK(splits.dropped_new_constituent == 1);   // nano engine
    CHECK(splits.dropped_below_threshold == 2);   // steam whistle, base cloud

    const auto firsts = corpus::constituent_first_decades(table);
    CHECK(firsts.at("steam") == 1850);
    CHECK(firsts.at("engine") == 1850);
    CHECK(firsts.at("cloud") == 1920);
    CHECK(firsts.at("nano") == 2000);

    const auto path = temp_dir() / "splits.json";
    splits.save_json(path);
    const auto loaded = corpus::CompoundSplits::load_json(path);
    CHECK(names(loaded.train) == names(splits.train));
    CHECK(names(loaded.validation) == names(splits.validation));
    CHECK(names(loaded.test) == names(splits.test));
    CHECK(loaded.dropped_new_constituent == splits.dropped_new_constituent);
    CHECK(loaded.dropped_below_threshold == splits.dropped_below_threshold);
}

TEST_CASE("decade arithmetic and config validation") {
    const auto dc = test_decades();
    CHECK(corpus::DecadeConfig::decade_of_year(1999) == 1990);
    CHECK(corpus::DecadeConfig::decade_of_year(2000) == 2000);
    CHECK(dc.decade_index(1800) == 0);
    CHECK(dc.decade_index(2000) == 20);
    const auto train = dc.training_decades();
    REQUIRE(train.size() == 19);
    CHECK(train.front() == 1800);
    CHECK(train.back() == 1980);

    corpus::DecadeConfig bad = dc;
    bad.validation_decade = 1970;  // overlaps training
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = dc;
    bad.test_decade = 1990;  // equals validation
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = dc;
    bad.first_train_decade = 1795;  // not a decade id
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("line reader handles plain and gzip files alike") {
    const auto dir = temp_dir();
    const auto plain = dir / "lines.txt";
    {
        std::ofstream out(plain, std::ios::binary);
        out << "alpha\tbeta\r\nsecond line\nthird";
    }
    util::LineReader r(plain);
    std::string line;
    REQUIRE(r.next(line));
    CHECK(line == "alpha\tbeta");  // CR stripped
    REQUIRE(r.next(line));
    CHECK(line == "second line");
    REQUIRE(r.next(line));
    CHECK(line == "third");
    CHECK_FALSE(r.next(line));

    const auto gz = dir / "lines.txt.gz";
    REQUIRE(std::system(("gzip -c " + plain.string() + " > " + gz.string()).c_str()) == 0);
    util::LineReader rz(gz);
    REQUIRE(rz.next(line));
    CHECK(line == "alpha\tbeta");
    REQUIRE(rz.next(line));
    REQUIRE(rz.next(line));
    CHECK(line == "third");
    CHECK_FALSE(rz.next(line));
}
