#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nncomp/corpus/pos.hpp"

namespace nncomp::corpus {

struct Token {
    std::string surface;
    Pos pos;
};

// One parsed line of a Books-Ngram-format file.
struct NgramRecord {
    std::vector<Token> tokens;
    int year = 0;
    std::uint64_t match_count = 0;
};

enum class ParseError {
    None,
    BadFieldCount,     // fewer than 3 tab-separated fields
    TokenCountMismatch,
    MissingPosTag,     // token has no _POS suffix (or an empty surface)
    UnknownPosTag,
    BadYear,
    BadCount,          // non-integer or zero match count
};

std::string_view parse_error_name(ParseError e);

// Parses `ngram TAB year TAB match_count TAB volume_count` with n
// space-separated `surface_POS` tokens. volume_count is accepted and
// discarded. Returns nullopt on malformed lines; *err says why so callers
// can tally skips.
std::optional<NgramRecord> parse_ngram_line(std::string_view line, int n,
                                            ParseError* err = nullptr);

// Per-file skip tallies, mergeable across shards.
struct ParseTally {
    std::uint64_t lines = 0;
    std::uint64_t parsed = 0;
    std::uint64_t skipped = 0;
    std::uint64_t out_of_range = 0;

    void merge(const ParseTally& o) {
        lines += o.lines;
        parsed += o.parsed;
        skipped += o.skipped;
        out_of_range += o.out_of_range;
    }
};

}  // namespace nncomp::corpus
