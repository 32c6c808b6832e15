#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace nncomp::corpus {

// Universal PoS tagset as used by the Books Ngram V2 tagged files.
enum class Pos : std::uint8_t {
    Noun,
    Verb,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    Num,
    Conj,
    Prt,
    Punct,
    X,
};

std::optional<Pos> pos_from_tag(std::string_view tag);
std::string_view pos_tag(Pos pos);

// PoS classes eligible as context-vocabulary members.
inline bool is_context_pos(Pos p) {
    return p == Pos::Noun || p == Pos::Adj || p == Pos::Verb || p == Pos::Adv;
}

}  // namespace nncomp::corpus
