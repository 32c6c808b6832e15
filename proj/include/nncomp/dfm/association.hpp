#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nncomp/corpus/compounds.hpp"
#include "nncomp/vectorspace/cooccurrence.hpp"

namespace nncomp::dfm {

// Bigram-token counts behind Eq.-style association measures. All
// probabilities are over compound-bigram tokens of one slice (a training
// decade, or every training decade pooled).
struct AssociationCounts {
    std::uint64_t n_comp = 0;   // tokens of the bigram (m, h)
    std::uint64_t n_mod = 0;    // tokens of bigrams with modifier m
    std::uint64_t n_head = 0;   // tokens of bigrams with head h
    std::uint64_t n_total = 0;  // all bigram tokens in the slice
};

// A single feature value; `missing` marks the undefined-feature sentinel
// (zero marginals, absent vectors, unattested slices).
struct Feature {
    double value = 0.0;
    bool missing = true;

    static Feature present(double v) { return {v, false}; }
    static Feature absent() { return {0.0, true}; }
};

// max(log2(P(comp) / (P(mod) P(head))), 0); missing on any zero marginal.
Feature ppmi(const AssociationCounts& c);

// Unclipped base-2 PMI (internal to lmi, exposed for tests).
Feature pmi(const AssociationCounts& c);

// Dunning's log-likelihood ratio over the 2x2 contingency table
// {n_comp, n_mod-n_comp, n_head-n_comp, n_total-n_mod-n_head+n_comp},
// natural log, zero observed cells contributing zero.
Feature llr(const AssociationCounts& c);

// P(comp) * PMI (unclipped, so the sign follows the PMI sign).
Feature lmi(const AssociationCounts& c);

// Cosine over aligned dense vectors; missing when either is zero.
Feature cosine(std::span<const double> u, std::span<const double> v);

// Cosine over sparse rows (sorted column ids, parallel values).
Feature cosine_sparse(std::span<const std::uint32_t> cols_u, std::span<const double> vals_u,
                      std::span<const std::uint32_t> cols_v, std::span<const double> vals_v);

// Per-slice marginals over the compound table, restricted to training
// decades. Slices are the training decades plus the pooled vs::kAllDecades
// slice; validation- and test-era counts never enter any marginal.
class AssociationIndex {
public:
    explicit AssociationIndex(const corpus::CompoundTable& table);

    AssociationCounts counts(const std::string& modifier, const std::string& head,
                             int decade_or_all) const;

    const std::vector<int>& slices() const { return slices_; }  // decades then kAllDecades

private:
    struct SliceMarginals {
        std::unordered_map<std::string, std::uint64_t> comp;  // "m h"
        std::unordered_map<std::string, std::uint64_t> mod;
        std::unordered_map<std::string, std::uint64_t> head;
        std::uint64_t total = 0;
    };
    std::vector<int> slices_;
    std::unordered_map<int, SliceMarginals> marginals_;
};

}  // namespace nncomp::dfm
