#include "nncomp/vectorspace/contexts.hpp"

#include <optional>

namespace nncomp::vs {

namespace corpus = nncomp::corpus;

namespace {

// Emits one event per context position in `cols`, skipping the excluded
// target positions.
void emit_for_target(std::vector<ContextEvent>& out, const std::string& lexeme, Role role,
                     const std::vector<std::optional<std::uint32_t>>& cols,
                     std::size_t skip_a, std::size_t skip_b, std::uint64_t weight) {
    for (std::size_t p = 0; p < cols.size(); ++p) {
        if (p == skip_a || p == skip_b) continue;
        if (!cols[p]) continue;
        out.push_back({lexeme, role, *cols[p], weight});
    }
}

}  // namespace

std::vector<ContextEvent> collect_contexts(const corpus::NgramRecord& rec,
                                           const corpus::ContextVocabulary& vocab,
                                           ContextAspect aspect) {
    std::vector<ContextEvent> out;
    const auto& toks = rec.tokens;
    const std::size_t n = toks.size();
    constexpr std::size_t kNoSkip = static_cast<std::size_t>(-1);

    // Per-position context column: content-PoS, alphabetic, in vocabulary.
    std::vector<std::optional<std::uint32_t>> cols(n);
    for (std::size_t p = 0; p < n; ++p) {
        if (!corpus::is_context_pos(toks[p].pos)) continue;
        if (!corpus::is_alphabetic(toks[p].surface)) continue;
        cols[p] = vocab.column(corpus::lower_ascii(toks[p].surface));
    }

    const auto pairs = corpus::compound_pair_positions(rec);

    for (std::size_t i : pairs) {
        const std::string mod = corpus::lower_ascii(toks[i].surface);
        const std::string head = corpus::lemmatise_head(toks[i + 1].surface);
        emit_for_target(out, mod + ' ' + head, Role::CompoundBigram, cols, i, i + 1,
                        rec.match_count);
        if (aspect == ContextAspect::CompoundCentric) {
            // Constituents see the same contexts as the whole bigram: the
            // partner token never counts as its constituent's context.
            emit_for_target(out, mod, Role::ModifierOfCompound, cols, i, i + 1, rec.match_count);
            emit_for_target(out, head, Role::HeadOfCompound, cols, i, i + 1, rec.match_count);
        }
    }

    if (aspect == ContextAspect::CompoundAgnostic) {
        for (std::size_t p = 0; p < n; ++p) {
            if (toks[p].pos != corpus::Pos::Noun) continue;
            if (!corpus::is_alphabetic(toks[p].surface)) continue;
            const std::string surface = corpus::lower_ascii(toks[p].surface);
            emit_for_target(out, surface, Role::StandaloneWord, cols, p, kNoSkip, rec.match_count);
            // Heads are looked up lemmatised, so plural surfaces also feed the
            // lemma's row.
            const std::string lemma = corpus::lemmatise_head(toks[p].surface);
            if (lemma != surface)
                emit_for_target(out, lemma, Role::StandaloneWord, cols, p, kNoSkip,
                                rec.match_count);
        }
    }

    return out;
}

}  // namespace nncomp::vs
