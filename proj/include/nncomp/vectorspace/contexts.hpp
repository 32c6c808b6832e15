#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nncomp/corpus/compounds.hpp"
#include "nncomp/corpus/decades.hpp"
#include "nncomp/corpus/ngram.hpp"
#include "nncomp/corpus/vocabulary.hpp"
#include "nncomp/vectorspace/roles.hpp"

namespace nncomp::vs {

// One (target, context) co-occurrence event extracted from an n-gram
// record.  `weight` is the record's match count: every in-window context
// token contributes the full occurrence count of the n-gram.
struct ContextEvent {
    std::string lexeme;  // target lexeme (bigrams: "modifier head")
    Role role = Role::StandaloneWord;
    std::uint32_t column = 0;  // context-vocabulary column
    std::uint64_t weight = 0;
};

// Collects the co-occurrence events a single record contributes under the
// given context aspect.  Context tokens are vocabulary words with a
// content PoS anywhere in the window, excluding the target token(s)
// themselves.  CompoundCentric additionally excludes the partner
// constituent from a constituent's contexts and only targets tokens that
// participate in an extracted compound; CompoundAgnostic targets every
// alphabetic noun as a StandaloneWord (under both its surface form and,
// when distinct, its lemma, so heads can later be looked up lemmatised).
// CompoundBigram targets are collected under both aspects.
std::vector<ContextEvent> collect_contexts(const corpus::NgramRecord& rec,
                                           const corpus::ContextVocabulary& vocab,
                                           ContextAspect aspect);

}  // namespace nncomp::vs
