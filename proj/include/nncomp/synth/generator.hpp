#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nncomp/corpus/compounds.hpp"
#include "nncomp/corpus/decades.hpp"

namespace nncomp::synth {

// Twenty decades, 1810s through 2000s: eighteen training decades, one
// validation decade, one test decade.
inline corpus::DecadeConfig default_decades() {
    corpus::DecadeConfig d;
    d.first_year = 1810;
    d.last_year = 2009;
    d.first_train_decade = 1810;
    d.last_train_decade = 1980;
    d.validation_decade = 1990;
    d.test_decade = 2000;
    return d;
}

struct SynthOptions {
    corpus::DecadeConfig decades = default_decades();
    std::uint64_t seed = 42;
    std::size_t standalone_variants = 8;  // lines per word per decade
    std::size_t compound_variants = 8;    // lines per active compound per decade
    std::size_t noise_lines_per_decade = 7000;
};

// The planted world: material modifiers pair with artifact heads of the
// matching subtype (metalsA x hardA, metalsB x hardB, polymersA x softA,
// polymersB x softB) and animals pair with habitats; every other pair is
// implausible and never attested. The polymer families ramp upward across
// the decades while the metals stay flat, so temporal models can see the
// trend. Subtype membership is carried only by co-occurrence signatures,
// which makes the compatibility rule an interaction between the two
// constituent embeddings rather than a property either has alone.
struct SynthWorld {
    std::vector<corpus::Compound> train_pairs;       // first attested in a training decade
    std::vector<corpus::Compound> validation_pairs;  // first attested in the validation decade
    std::vector<corpus::Compound> test_pairs;        // first attested in the test decade
    std::vector<corpus::Compound> reserved_pairs;    // plausible but never attested
};

struct SynthStats {
    SynthWorld world;
    std::size_t fivegram_lines = 0;
    std::size_t unigram_lines = 0;
};

// Writes a 5-gram shard and the matching unigram shard (vocabulary counts
// tallied from the very tokens emitted). Plain-text Google Books V2
// layout; deterministic for a given option set.
SynthStats generate_corpus(const SynthOptions& options,
                           const std::filesystem::path& fivegram_path,
                           const std::filesystem::path& unigram_path);

}  // namespace nncomp::synth
