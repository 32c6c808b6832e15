#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nncomp/corpus/decades.hpp"
#include "nncomp/corpus/ngram.hpp"

namespace nncomp::corpus {

bool is_alphabetic(std::string_view s);
std::string lower_ascii(std::string_view s);

// Head-noun lemmatiser: lowercases, then applies an irregular-plural table
// and guarded suffix rules. Idempotent by construction (property-tested).
std::string lemmatise_head(std::string_view surface);

struct Compound {
    std::string modifier;  // lowercased surface
    std::string head;      // lemmatised, lowercased

    auto operator<=>(const Compound&) const = default;
    std::string joined() const { return modifier + ' ' + head; }
};

// One attested occurrence of an N-N compound in one decade.
struct CompoundOccurrence {
    std::string modifier;
    std::string head;
    int decade = 0;
    std::uint64_t count = 0;
};

// Indices i such that (tokens[i], tokens[i+1]) is an accepted pair:
// adjacent nouns, in-window neighbours not nouns (window edges count as
// non-noun), both surfaces purely alphabetic.  Accepted pairs never share
// a token.
std::vector<std::size_t> compound_pair_positions(const NgramRecord& record);

// Adjacent NOUN-NOUN pairs whose in-window neighbours are not nouns, both
// tokens purely alphabetic, head lemmatised. Returns nothing for records
// outside the configured year range.
std::vector<CompoundOccurrence> extract_compounds(const NgramRecord& record,
                                                  const DecadeConfig& decades);

// Aggregated per-decade counts for every attested compound. Shard-parallel
// builds merge by count addition.
class CompoundTable {
public:
    explicit CompoundTable(const DecadeConfig& decades);

    void add(const CompoundOccurrence& occ);
    void merge(const CompoundTable& other);

    const DecadeConfig& decades() const { return decades_; }
    std::size_t n_pairs() const { return pairs_.size(); }

    bool attested(const std::string& modifier, const std::string& head) const;

    // count of (modifier, head) in one decade; 0 if unattested there
    std::uint64_t count(const std::string& modifier, const std::string& head, int decade) const;

    struct PairEntry {
        Compound compound;
        std::vector<std::uint64_t> counts_by_decade;  // indexed by DecadeConfig::decade_index
    };

    // deterministic order: sorted by (modifier, head)
    std::vector<const PairEntry*> sorted_entries() const;

    void save_tsv(const std::filesystem::path& path) const;
    static CompoundTable load_tsv(const std::filesystem::path& path, const DecadeConfig& decades);

private:
    DecadeConfig decades_;
    std::unordered_map<std::string, PairEntry> pairs_;  // key: "modifier head"
};

}  // namespace nncomp::corpus
