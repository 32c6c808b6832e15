#include "nncomp/corpus/vocabulary.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <stdexcept>

#include "nncomp/corpus/compounds.hpp"
#include "nncomp/util/io.hpp"

namespace nncomp::corpus {

namespace {

// slot order doubles as the tie-break between equally frequent PoS
constexpr std::array<Pos, 4> kQualifying = {Pos::Noun, Pos::Adj, Pos::Verb, Pos::Adv};

int qualifying_slot(Pos p) {
    for (std::size_t i = 0; i < kQualifying.size(); ++i)
        if (kQualifying[i] == p) return static_cast<int>(i);
    return -1;
}

}  // namespace

ContextVocabulary::ContextVocabulary(std::vector<VocabEntry> ranked_entries)
    : entries_(std::move(ranked_entries)) {
    index_.reserve(entries_.size());
    for (std::uint32_t i = 0; i < entries_.size(); ++i) {
        auto [it, inserted] = index_.emplace(entries_[i].lexeme, i);
        if (!inserted) throw std::invalid_argument("duplicate vocabulary lexeme: " + entries_[i].lexeme);
    }
}

std::optional<std::uint32_t> ContextVocabulary::column(const std::string& lexeme) const {
    auto it = index_.find(lexeme);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void ContextVocabulary::save_tsv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    for (const auto& e : entries_)
        out << e.lexeme << '\t' << pos_tag(e.pos) << '\t' << e.total_count << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

ContextVocabulary ContextVocabulary::load_tsv(const std::filesystem::path& path) {
    std::vector<VocabEntry> entries;
    util::LineReader reader(path);
    std::string line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw std::runtime_error("malformed vocabulary line: " + line);
        auto pos = pos_from_tag(line.substr(t1 + 1, t2 - t1 - 1));
        if (!pos) throw std::runtime_error("bad PoS in vocabulary line: " + line);
        entries.push_back({line.substr(0, t1), *pos, std::stoull(line.substr(t2 + 1))});
    }
    return ContextVocabulary(std::move(entries));
}

void VocabularyBuilder::add(const NgramRecord& unigram) {
    if (unigram.tokens.size() != 1) throw std::invalid_argument("vocabulary input must be unigrams");
    const Token& tok = unigram.tokens[0];
    if (!is_context_pos(tok.pos)) return;
    if (!is_alphabetic(tok.surface)) return;
    add_count(lower_ascii(tok.surface), tok.pos, unigram.match_count);
}

void VocabularyBuilder::add_count(const std::string& lexeme, Pos pos, std::uint64_t count) {
    int slot = qualifying_slot(pos);
    if (slot < 0) return;
    auto [it, inserted] = counts_.try_emplace(lexeme);
    if (inserted) it->second = {0, 0, 0, 0};
    it->second[static_cast<std::size_t>(slot)] += count;
}

void VocabularyBuilder::merge(const VocabularyBuilder& other) {
    for (const auto& [lexeme, slots] : other.counts_) {
        auto [it, inserted] = counts_.try_emplace(lexeme);
        if (inserted) it->second = {0, 0, 0, 0};
        for (std::size_t i = 0; i < slots.size(); ++i) it->second[i] += slots[i];
    }
}

ContextVocabulary VocabularyBuilder::finish(std::size_t cap) const {
    std::vector<VocabEntry> entries;
    entries.reserve(counts_.size());
    for (const auto& [lexeme, slots] : counts_) {
        std::uint64_t total = 0;
        std::size_t best = 0;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            total += slots[i];
            if (slots[i] > slots[best]) best = i;
        }
        if (total == 0) continue;
        entries.push_back({lexeme, kQualifying[best], total});
    }
    std::sort(entries.begin(), entries.end(), [](const VocabEntry& a, const VocabEntry& b) {
        if (a.total_count != b.total_count) return a.total_count > b.total_count;
        return a.lexeme < b.lexeme;
    });
    if (entries.size() > cap) entries.resize(cap);
    return ContextVocabulary(std::move(entries));
}

}  // namespace nncomp::corpus
