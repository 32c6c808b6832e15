#include "nncomp/synth/generator.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "nncomp/corpus/pos.hpp"
#include "nncomp/util/rng.hpp"

namespace nncomp::synth {

namespace {

using corpus::Pos;

struct ClassDef {
    std::vector<std::string> words;  // constituent nouns
    std::vector<std::string> sig_verbs, sig_nouns, sig_adjs;
    bool trending = false;
};

struct World {
    ClassDef metals_a, metals_b, polymers_a, polymers_b;
    ClassDef hard_a, hard_b, soft_a, soft_b;
    ClassDef animals, habitats, abstractions;

    std::vector<const ClassDef*> all() const {
        return {&metals_a, &metals_b, &polymers_a, &polymers_b, &hard_a,      &hard_b,
                &soft_a,   &soft_b,   &animals,    &habitats,   &abstractions};
    }
};

World make_world() {
    World w;
    w.metals_a = {{"iron", "steel", "copper", "bronze", "brass", "zinc", "nickel", "cobalt",
                   "pewter", "chrome"},
                  {"forge", "smelt", "temper", "polish"},
                  {"ore", "ingot", "rust"},
                  {"gleaming", "metallic"},
                  false};
    w.metals_b = {{"silver", "gold", "platinum", "tungsten", "cadmium", "lithium", "manganese",
                   "magnesium", "titanium", "aluminium"},
                  {"mint", "refine", "assay", "conduct"},
                  {"luster", "bullion", "vein"},
                  {"precious", "dense"},
                  false};
    w.polymers_a = {{"plastic", "nylon", "vinyl", "rayon", "resin", "latex", "acrylic", "silicone",
                     "teflon", "polyester"},
                    {"mold", "extrude", "cure", "blend"},
                    {"monomer", "pellet", "additive"},
                    {"synthetic", "translucent"},
                    true};
    w.polymers_b = {{"rubber", "foam", "cellophane", "spandex", "neoprene", "bakelite", "lucite",
                     "mylar", "polythene", "vulcanite"},
                    {"stretch", "bond", "insulate", "seal"},
                    {"elastomer", "sponge", "balloon"},
                    {"elastic", "waterproof"},
                    true};
    w.hard_a = {{"knife", "blade", "wheel", "pipe", "hinge", "hammer", "chisel", "anvil", "gear",
                 "axle", "lever", "bracket"},
                {"sharpen", "swing", "strike", "grind"},
                {"edge", "grip", "workshop"},
                {"sturdy", "keen"},
                false};
    w.hard_b = {{"frame", "rail", "bolt", "spring", "valve", "piston", "crank", "shaft", "rivet",
                 "clamp", "socket", "flange"},
                {"fasten", "rotate", "assemble", "torque"},
                {"thread", "lathe", "fixture"},
                {"rigid", "precise"},
                false};
    w.soft_a = {{"bag", "tube", "sheet", "wrap", "liner", "sleeve", "sack", "mat", "film", "pouch",
                 "strap", "cushion"},
                {"fold", "pack", "carry", "stow"},
                {"cargo", "lining", "satchel"},
                {"roomy", "lightweight"},
                false};
    w.soft_b = {{"tarp", "curtain", "apron", "glove", "slipper", "casing", "membrane", "padding",
                 "webbing", "folder", "pocket", "mitten"},
                {"drape", "shield", "wipe", "hang"},
                {"garment", "fabric", "cloth"},
                {"snug", "protective"},
                false};
    w.animals = {{"fox", "wolf", "bear", "otter", "heron", "lynx", "mole", "crow", "hare",
                  "badger", "stoat", "shrew"},
                 {"hunt", "prowl", "roam", "stalk"},
                 {"forest", "prey", "fur"},
                 {"wild", "nocturnal"},
                 false};
    w.habitats = {{"den", "burrow", "nest", "trail", "lair", "thicket", "warren", "roost"},
                  {"dig", "hide", "shelter", "nestle"},
                  {"earth", "moss", "undergrowth"},
                  {"damp", "hidden"},
                  false};
    w.abstractions = {{"justice", "sorrow", "logic", "virtue", "notion", "belief", "wisdom",
                       "memory", "pride", "doubt", "honor", "mercy"},
                      {"believe", "argue", "ponder", "debate"},
                      {"principle", "discourse", "treatise"},
                      {"moral", "profound"},
                      false};
    return w;
}

const std::vector<std::string> kNoiseNouns = {"time",  "people", "way",  "day",  "place",
                                              "world", "house",  "water", "year", "hand"};
const std::vector<std::string> kNoiseVerbs = {"make", "take", "see",  "find",
                                              "give", "come", "know", "look"};
const std::vector<std::string> kNoiseAdjs = {"great", "small", "good", "new", "old", "long"};
const std::vector<std::string> kNoiseAdvs = {"still", "often", "never", "again", "once", "soon"};

struct RuleGroup {
    const ClassDef* mods;
    const ClassDef* heads;
    std::size_t n_train, n_val, n_test;
};

// attested compound with its emission schedule
struct Attested {
    corpus::Compound pair;
    const ClassDef* mod_class;
    int first_index;  // decade index of first attestation
};

const std::string& pick(const std::vector<std::string>& xs, util::Rng& rng) {
    return xs[rng.below(xs.size())];
}

std::string tok(const std::string& word, Pos pos) {
    return word + "_" + std::string(corpus::pos_tag(pos));
}

// one 0-..-4 token line with its per-decade count
struct Line {
    std::array<std::string, 5> toks;
    std::array<Pos, 5> pos;
    std::uint64_t count = 0;
};

class Tally {
public:
    void add(const std::string& word, Pos pos, int decade, std::uint64_t count) {
        counts_[word][decade][static_cast<std::size_t>(pos)] += count;
    }
    std::size_t write(std::ostream& out) const {
        std::size_t lines = 0;
        for (const auto& [word, by_decade] : counts_) {
            for (const auto& [decade, by_pos] : by_decade) {
                for (std::size_t p = 0; p < by_pos.size(); ++p) {
                    if (by_pos[p] == 0) continue;
                    const auto count = by_pos[p];
                    out << word << '_' << corpus::pos_tag(static_cast<Pos>(p)) << '\t'
                        << decade + 5 << '\t' << count << '\t'
                        << std::min<std::uint64_t>(count, 1 + count / 3) << '\n';
                    ++lines;
                }
            }
        }
        return lines;
    }

private:
    std::map<std::string, std::map<int, std::array<std::uint64_t, 12>>> counts_;
};

class Emitter {
public:
    Emitter(std::ostream& out, Tally& tally, int decade) : out_(out), tally_(tally), decade_(decade) {}

    void emit(const Line& line) {
        for (std::size_t i = 0; i < line.toks.size(); ++i) {
            if (i) out_ << ' ';
            out_ << tok(line.toks[i], line.pos[i]);
            tally_.add(line.toks[i], line.pos[i], decade_, line.count);
        }
        out_ << '\t' << decade_ + 5 << '\t' << line.count << '\t'
             << std::min<std::uint64_t>(line.count, 1 + line.count / 3) << '\n';
        ++lines_;
    }

    std::size_t lines() const { return lines_; }

private:
    std::ostream& out_;
    Tally& tally_;
    int decade_;
    std::size_t lines_ = 0;
};

// polymers ramp from nothing at their introduction decade up to ~10x;
// everything else stays flat
constexpr int kTrendIntroIndex = 6;

std::uint64_t class_weight(const ClassDef& c, int decade_index) {
    if (!c.trending) return 4;
    if (decade_index < kTrendIntroIndex) return 0;
    return 1 + static_cast<std::uint64_t>((decade_index - kTrendIntroIndex) * 9) / 13;
}

// pick a signature word of the requested kind from either class
const std::string& sig_verb(const ClassDef& c, util::Rng& rng) { return pick(c.sig_verbs, rng); }
const std::string& sig_noun(const ClassDef& c, util::Rng& rng) { return pick(c.sig_nouns, rng); }
const std::string& sig_adj(const ClassDef& c, util::Rng& rng) { return pick(c.sig_adjs, rng); }

Line standalone_line(const std::string& word, const ClassDef& c, std::size_t variant,
                     std::uint64_t count, util::Rng& rng) {
    Line l;
    l.count = count;
    switch (variant % 4) {
        case 0:
            l.toks = {sig_verb(c, rng), word, sig_adj(c, rng), pick(kNoiseAdvs, rng),
                      sig_noun(c, rng)};
            l.pos = {Pos::Verb, Pos::Noun, Pos::Adj, Pos::Adv, Pos::Noun};
            break;
        case 1:
            l.toks = {sig_noun(c, rng), sig_verb(c, rng), word, pick(kNoiseAdjs, rng),
                      pick(kNoiseVerbs, rng)};
            l.pos = {Pos::Noun, Pos::Verb, Pos::Noun, Pos::Adj, Pos::Verb};
            break;
        case 2:
            l.toks = {pick(kNoiseAdvs, rng), sig_adj(c, rng), word, sig_verb(c, rng),
                      sig_noun(c, rng)};
            l.pos = {Pos::Adv, Pos::Adj, Pos::Noun, Pos::Verb, Pos::Noun};
            break;
        default:
            l.toks = {sig_verb(c, rng), sig_noun(c, rng), pick(kNoiseAdvs, rng), word,
                      sig_adj(c, rng)};
            l.pos = {Pos::Verb, Pos::Noun, Pos::Adv, Pos::Noun, Pos::Adj};
            break;
    }
    return l;
}

Line compound_line(const Attested& a, const ClassDef& head_class, std::size_t variant,
                   std::uint64_t count, util::Rng& rng) {
    const ClassDef& mc = *a.mod_class;
    Line l;
    l.count = count;
    switch (variant % 4) {
        case 0:
            l.toks = {sig_verb(mc, rng), a.pair.modifier, a.pair.head, sig_verb(head_class, rng),
                      sig_noun(head_class, rng)};
            l.pos = {Pos::Verb, Pos::Noun, Pos::Noun, Pos::Verb, Pos::Noun};
            break;
        case 1:
            l.toks = {sig_noun(mc, rng), sig_adj(mc, rng), a.pair.modifier, a.pair.head,
                      sig_verb(head_class, rng)};
            l.pos = {Pos::Noun, Pos::Adj, Pos::Noun, Pos::Noun, Pos::Verb};
            break;
        case 2:
            l.toks = {sig_verb(head_class, rng), a.pair.modifier, a.pair.head, sig_adj(mc, rng),
                      pick(kNoiseNouns, rng)};
            l.pos = {Pos::Verb, Pos::Noun, Pos::Noun, Pos::Adj, Pos::Noun};
            break;
        default:
            l.toks = {pick(kNoiseAdvs, rng), sig_verb(mc, rng), a.pair.modifier, a.pair.head,
                      sig_adj(head_class, rng)};
            l.pos = {Pos::Adv, Pos::Verb, Pos::Noun, Pos::Noun, Pos::Adj};
            break;
    }
    return l;
}

Line noise_line(const World& world, util::Rng& rng) {
    // adventitious context mixing across classes, never with adjacent nouns
    const auto classes = world.all();
    const ClassDef& c1 = *classes[rng.below(classes.size())];
    const ClassDef& c2 = *classes[rng.below(classes.size())];
    Line l;
    l.count = 1 + rng.below(3);
    switch (rng.below(3)) {
        case 0:
            l.toks = {pick(kNoiseVerbs, rng), pick(kNoiseNouns, rng), sig_adj(c1, rng),
                      sig_noun(c2, rng), pick(kNoiseAdvs, rng)};
            l.pos = {Pos::Verb, Pos::Noun, Pos::Adj, Pos::Noun, Pos::Adv};
            break;
        case 1:
            l.toks = {sig_noun(c1, rng), sig_verb(c2, rng), pick(kNoiseAdjs, rng),
                      pick(kNoiseNouns, rng), sig_verb(c1, rng)};
            l.pos = {Pos::Noun, Pos::Verb, Pos::Adj, Pos::Noun, Pos::Verb};
            break;
        default:
            l.toks = {pick(kNoiseAdjs, rng), sig_noun(c1, rng), pick(kNoiseVerbs, rng),
                      sig_adj(c2, rng), pick(kNoiseNouns, rng)};
            l.pos = {Pos::Adj, Pos::Noun, Pos::Verb, Pos::Adj, Pos::Noun};
            break;
    }
    return l;
}

// coverage-first split of one group's pair grid into train/val/test/reserved
void allocate_group(const RuleGroup& g, util::Rng& rng, int n_train_decades, SynthWorld& out,
                    std::vector<Attested>& train_sched) {
    std::vector<corpus::Compound> pairs;
    for (const auto& m : g.mods->words)
        for (const auto& h : g.heads->words) pairs.push_back({m, h});
    rng.shuffle(pairs);

    // every constituent must be covered by a training pair, otherwise the
    // holdout rule would drop its test compounds
    std::vector<corpus::Compound> train;
    std::vector<corpus::Compound> rest;
    {
        std::unordered_set<std::string> mods_seen, heads_seen;
        for (const auto& p : pairs) {
            if (train.size() < g.n_train &&
                (!mods_seen.count(p.modifier) || !heads_seen.count(p.head))) {
                mods_seen.insert(p.modifier);
                heads_seen.insert(p.head);
                train.push_back(p);
            } else {
                rest.push_back(p);
            }
        }
        for (const auto& p : rest) {
            if (train.size() >= g.n_train) break;
            train.push_back(p);
        }
    }
    // rebuild rest = pairs minus train, in shuffle order
    {
        std::unordered_set<std::string> taken;
        for (const auto& p : train) taken.insert(p.joined());
        rest.clear();
        for (const auto& p : pairs)
            if (!taken.count(p.joined())) rest.push_back(p);
    }

    const bool trending = g.mods->trending;
    for (const auto& p : train) {
        Attested a;
        a.pair = p;
        a.mod_class = g.mods;
        if (trending) {
            // skew polymer inventions toward the later decades
            const int span = n_train_decades - kTrendIntroIndex;
            a.first_index = kTrendIntroIndex + std::max(static_cast<int>(rng.below(span)),
                                                        static_cast<int>(rng.below(span)));
        } else {
            a.first_index = static_cast<int>(rng.below(n_train_decades));
        }
        train_sched.push_back(a);
        out.train_pairs.push_back(p);
    }
    std::size_t i = 0;
    for (; i < rest.size() && i < g.n_val; ++i) out.validation_pairs.push_back(rest[i]);
    for (; i < rest.size() && i < g.n_val + g.n_test; ++i) out.test_pairs.push_back(rest[i]);
    for (; i < rest.size(); ++i) out.reserved_pairs.push_back(rest[i]);
}

}  // namespace

SynthStats generate_corpus(const SynthOptions& options, const std::filesystem::path& fivegram_path,
                           const std::filesystem::path& unigram_path) {
    options.decades.validate();
    const World world = make_world();
    for (const auto* c : world.all()) {
        for (const auto& word : c->words) {
            if (!corpus::is_alphabetic(word) || corpus::lemmatise_head(word) != word) {
                throw std::logic_error("synth word is not lemma-stable: " + word);
            }
        }
    }

    const auto train_decades = options.decades.training_decades();
    const int n_train_decades = static_cast<int>(train_decades.size());

    const std::vector<RuleGroup> groups = {
        {&world.metals_a, &world.hard_a, 60, 15, 30},
        {&world.metals_b, &world.hard_b, 60, 15, 30},
        {&world.polymers_a, &world.soft_a, 60, 15, 30},
        {&world.polymers_b, &world.soft_b, 60, 15, 30},
        {&world.animals, &world.habitats, 40, 8, 0},
    };

    util::Rng alloc_rng(util::mix_seed(options.seed, 0x574f524cULL));  // "WORL"
    SynthStats stats;
    std::vector<Attested> schedule;
    for (const auto& g : groups) {
        allocate_group(g, alloc_rng, n_train_decades, stats.world, schedule);
    }

    // head-class lookup for the context templates
    auto head_class_of = [&](const std::string& head) -> const ClassDef& {
        for (const auto* c : world.all())
            for (const auto& w : c->words)
                if (w == head) return *c;
        throw std::logic_error("unknown head class: " + head);
    };
    auto mod_class_of = [&](const std::string& mod) -> const ClassDef& {
        for (const auto* c : world.all())
            for (const auto& w : c->words)
                if (w == mod) return *c;
        throw std::logic_error("unknown modifier class: " + mod);
    };

    if (fivegram_path.has_parent_path())
        std::filesystem::create_directories(fivegram_path.parent_path());
    std::ofstream five(fivegram_path, std::ios::binary | std::ios::trunc);
    if (!five) throw std::runtime_error("cannot write " + fivegram_path.string());

    util::Rng rng(util::mix_seed(options.seed, 0x4c494e45ULL));  // "LINE"
    Tally tally;
    const auto decades = options.decades.all_decades();
    for (int d : decades) {
        const int i = options.decades.decade_index(d);
        Emitter em(five, tally, d);

        // standalone type-signature lines
        for (const auto* c : world.all()) {
            const std::uint64_t w = class_weight(*c, i);
            if (w == 0) continue;
            for (const auto& word : c->words) {
                for (std::size_t v = 0; v < options.standalone_variants; ++v) {
                    em.emit(standalone_line(word, *c, v, w * 3 + rng.below(3), rng));
                }
            }
        }

        // attested compounds active this decade
        for (const auto& a : schedule) {
            if (a.first_index > i) continue;
            const std::uint64_t mw = class_weight(*a.mod_class, i);
            const std::uint64_t count =
                std::min<std::uint64_t>(60, 3 + mw + static_cast<std::uint64_t>(i - a.first_index) +
                                                rng.below(3));
            const ClassDef& hc = head_class_of(a.pair.head);
            for (std::size_t v = 0; v < options.compound_variants; ++v) {
                em.emit(compound_line(a, hc, v, count, rng));
            }
        }
        if (d == options.decades.validation_decade || d == options.decades.test_decade) {
            for (const auto& p : stats.world.validation_pairs) {
                Attested a{p, &mod_class_of(p.modifier), i};
                const ClassDef& hc = head_class_of(p.head);
                for (std::size_t v = 0; v < options.compound_variants; ++v) {
                    em.emit(compound_line(a, hc, v, 4 + rng.below(3), rng));
                }
            }
        }
        if (d == options.decades.test_decade) {
            for (const auto& p : stats.world.test_pairs) {
                Attested a{p, &mod_class_of(p.modifier), i};
                const ClassDef& hc = head_class_of(p.head);
                for (std::size_t v = 0; v < options.compound_variants; ++v) {
                    em.emit(compound_line(a, hc, v, 5 + rng.below(4), rng));
                }
            }
        }

        for (std::size_t n = 0; n < options.noise_lines_per_decade; ++n) {
            em.emit(noise_line(world, rng));
        }
        stats.fivegram_lines += em.lines();
    }
    five.flush();
    if (!five) throw std::runtime_error("write failed: " + fivegram_path.string());

    if (unigram_path.has_parent_path())
        std::filesystem::create_directories(unigram_path.parent_path());
    std::ofstream uni(unigram_path, std::ios::binary | std::ios::trunc);
    if (!uni) throw std::runtime_error("cannot write " + unigram_path.string());
    stats.unigram_lines = tally.write(uni);
    uni.flush();
    if (!uni) throw std::runtime_error("write failed: " + unigram_path.string());
    return stats;
}

}  // namespace nncomp::synth
