#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nncomp/dfm/association.hpp"
#include "nncomp/sampling/candidates.hpp"
#include "nncomp/vectorspace/roles.hpp"

namespace nncomp::dfm {

inline constexpr std::size_t kFeaturesPerSlice = 6;

// Fixed feature order inside every slice block.
inline constexpr std::array<std::string_view, kFeaturesPerSlice> kFeatureShortNames = {
    "ppmi", "llr", "lmi", "sim_with_head", "sim_with_mod", "sim_constituents"};

struct FeatureVector {
    Feature ppmi, llr, lmi, sim_with_head, sim_with_mod, sim_constituents;

    Feature at(std::size_t i) const {
        const Feature* fields[kFeaturesPerSlice] = {&ppmi, &llr,         &lmi,
                                                    &sim_with_head, &sim_with_mod, &sim_constituents};
        return *fields[i];
    }
};

// Missing values travel as NaN; the tree learner routes them through a
// learned default direction.
inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double x) { return std::isnan(x); }

// The six per-slice features of one compound. An unattested slice
// (n_comp = 0) leaves every feature missing; an absent sparse vector
// leaves only the affected similarities missing.
FeatureVector compound_features(const corpus::Compound& comp, const AssociationIndex& index,
                                const vs::CooccurrenceMatrix& slice_matrix,
                                vs::ContextAspect aspect, int decade_or_all);

// Constituent-level aggregates over the training compounds, concatenated
// into the DFM model input for any candidate tuple. Candidates contribute
// nothing of their own: only their constituents' training-era aggregates
// enter the vector, which is what makes unseen compounds predictable.
//
// Layout per slice: 6 modifier means, 6 head means, then (std flag on)
// 6 modifier standard deviations and 6 head standard deviations.
// DecadeAgnostic has one pooled slice (dim 12), DecadeCentric one slice
// per training decade (dim 228 with the default flag).
class DfmFeatureBuilder {
public:
    DfmFeatureBuilder(const corpus::CompoundTable& table,
                      const std::vector<const vs::CooccurrenceMatrix*>& slice_matrices,
                      vs::ContextAspect aspect, vs::TimeAspect time,
                      const std::vector<corpus::Compound>& train_positives,
                      bool include_std = false);

    std::size_t dim() const { return names_.size(); }
    const std::vector<std::string>& feature_names() const { return names_; }
    const std::vector<int>& slices() const { return slices_; }

    // Length dim(); missing entries are NaN.
    std::vector<double> features(const std::string& modifier, const std::string& head) const;

private:
    struct Aggregate {
        double mean = 0.0;
        double stddev = 0.0;
        bool missing = true;
    };
    using SliceAggregates = std::array<Aggregate, kFeaturesPerSlice>;

    std::vector<int> slices_;
    bool include_std_ = false;
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::vector<SliceAggregates>> modifier_agg_;  // per slice
    std::unordered_map<std::string, std::vector<SliceAggregates>> head_agg_;

    void append_block(std::vector<double>& out, const std::vector<SliceAggregates>* agg,
                      std::size_t slice, bool stds) const;
};

// Feature matrix for a tuple list, one row per tuple, NaN cells left empty.
void save_features_csv(const std::filesystem::path& path, const DfmFeatureBuilder& builder,
                       const std::vector<sampling::CandidateTuple>& tuples);

}  // namespace nncomp::dfm
