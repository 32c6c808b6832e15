#include "nncomp/corpus/ngram.hpp"

#include <charconv>

namespace nncomp::corpus {

std::optional<Pos> pos_from_tag(std::string_view tag) {
    if (tag == "NOUN") return Pos::Noun;
    if (tag == "VERB") return Pos::Verb;
    if (tag == "ADJ") return Pos::Adj;
    if (tag == "ADV") return Pos::Adv;
    if (tag == "PRON") return Pos::Pron;
    if (tag == "DET") return Pos::Det;
    if (tag == "ADP") return Pos::Adp;
    if (tag == "NUM") return Pos::Num;
    if (tag == "CONJ") return Pos::Conj;
    if (tag == "PRT") return Pos::Prt;
    if (tag == ".") return Pos::Punct;
    if (tag == "X") return Pos::X;
    return std::nullopt;
}

std::string_view pos_tag(Pos pos) {
    switch (pos) {
        case Pos::Noun: return "NOUN";
        case Pos::Verb: return "VERB";
        case Pos::Adj: return "ADJ";
        case Pos::Adv: return "ADV";
        case Pos::Pron: return "PRON";
        case Pos::Det: return "DET";
        case Pos::Adp: return "ADP";
        case Pos::Num: return "NUM";
        case Pos::Conj: return "CONJ";
        case Pos::Prt: return "PRT";
        case Pos::Punct: return ".";
        case Pos::X: return "X";
    }
    return "X";
}

std::string_view parse_error_name(ParseError e) {
    switch (e) {
        case ParseError::None: return "none";
        case ParseError::BadFieldCount: return "bad field count";
        case ParseError::TokenCountMismatch: return "token count mismatch";
        case ParseError::MissingPosTag: return "missing PoS tag";
        case ParseError::UnknownPosTag: return "unknown PoS tag";
        case ParseError::BadYear: return "bad year";
        case ParseError::BadCount: return "bad match count";
    }
    return "?";
}

namespace {

bool parse_u64(std::string_view s, std::uint64_t& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::optional<NgramRecord> parse_ngram_line(std::string_view line, int n, ParseError* err) {
    auto fail = [&](ParseError e) -> std::optional<NgramRecord> {
        if (err) *err = e;
        return std::nullopt;
    };

    // split into tab fields: ngram, year, match_count[, volume_count]
    std::string_view fields[4];
    int nfields = 0;
    std::size_t start = 0;
    while (nfields < 4) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields[nfields++] = line.substr(start);
            break;
        }
        fields[nfields++] = line.substr(start, tab - start);
        start = tab + 1;
    }
    if (nfields < 3) return fail(ParseError::BadFieldCount);

    NgramRecord rec;
    if (!parse_int(fields[1], rec.year)) return fail(ParseError::BadYear);
    if (!parse_u64(fields[2], rec.match_count) || rec.match_count == 0)
        return fail(ParseError::BadCount);

    // tokens: n space-separated surface_POS items
    std::string_view ngram = fields[0];
    rec.tokens.reserve(static_cast<std::size_t>(n));
    std::size_t pos = 0;
    while (pos < ngram.size()) {
        while (pos < ngram.size() && ngram[pos] == ' ') ++pos;
        if (pos >= ngram.size()) break;
        std::size_t end = ngram.find(' ', pos);
        if (end == std::string_view::npos) end = ngram.size();
        std::string_view tok = ngram.substr(pos, end - pos);
        pos = end;

        std::size_t us = tok.rfind('_');
        if (us == std::string_view::npos || us == 0) return fail(ParseError::MissingPosTag);
        auto tag = pos_from_tag(tok.substr(us + 1));
        if (!tag) {
            return fail(tok.substr(us + 1).empty() ? ParseError::MissingPosTag
                                                   : ParseError::UnknownPosTag);
        }
        rec.tokens.push_back({std::string(tok.substr(0, us)), *tag});
    }
    if (rec.tokens.size() != static_cast<std::size_t>(n))
        return fail(ParseError::TokenCountMismatch);

    if (err) *err = ParseError::None;
    return rec;
}

}  // namespace nncomp::corpus
