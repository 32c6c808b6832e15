#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nncomp/corpus/ngram.hpp"

namespace nncomp::corpus {

struct VocabEntry {
    std::string lexeme;        // lowercased
    Pos pos;                   // most frequent qualifying PoS for this lexeme
    std::uint64_t total_count; // summed over NOUN/ADJ/VERB/ADV usages
};

// Top-N context lexemes, ranked by total count (ties broken
// lexicographically). Column ids are dense and stable for a given input
// multiset, independent of shard order.
class ContextVocabulary {
public:
    static constexpr std::size_t kDefaultCap = 50000;

    ContextVocabulary() = default;
    explicit ContextVocabulary(std::vector<VocabEntry> ranked_entries);

    std::optional<std::uint32_t> column(const std::string& lexeme) const;
    const std::vector<VocabEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    void save_tsv(const std::filesystem::path& path) const;
    static ContextVocabulary load_tsv(const std::filesystem::path& path);

private:
    std::vector<VocabEntry> entries_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

// Streaming count aggregation over unigram records; mergeable across shards.
class VocabularyBuilder {
public:
    // Counts lexemes tagged NOUN/ADJ/VERB/ADV; everything else is ignored.
    // Non-alphabetic surfaces are excluded, matching the compound hygiene.
    void add(const NgramRecord& unigram);
    void add_count(const std::string& lexeme, Pos pos, std::uint64_t count);
    void merge(const VocabularyBuilder& other);

    ContextVocabulary finish(std::size_t cap = ContextVocabulary::kDefaultCap) const;

private:
    // per lexeme: counts for NOUN/ADJ/VERB/ADV
    std::unordered_map<std::string, std::array<std::uint64_t, 4>> counts_;
};

}  // namespace nncomp::corpus
