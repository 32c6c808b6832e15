#include "nncomp/dfm/features.hpp"

#include <fstream>
#include <stdexcept>

namespace nncomp::dfm {

namespace {

Feature sparse_cosine_between(const vs::CooccurrenceMatrix& m, const std::string& lex_a,
                              vs::Role role_a, const std::string& lex_b, vs::Role role_b) {
    auto ra = m.row_of(lex_a, role_a);
    auto rb = m.row_of(lex_b, role_b);
    if (!ra || !rb) return Feature::absent();
    return cosine_sparse(m.row_cols(*ra), m.row_vals(*ra), m.row_cols(*rb), m.row_vals(*rb));
}

std::string slice_label(int decade_or_all) {
    return decade_or_all == vs::kAllDecades ? "all" : std::to_string(decade_or_all);
}

}  // namespace

FeatureVector compound_features(const corpus::Compound& comp, const AssociationIndex& index,
                                const vs::CooccurrenceMatrix& slice_matrix,
                                vs::ContextAspect aspect, int decade_or_all) {
    FeatureVector fv;
    const AssociationCounts counts = index.counts(comp.modifier, comp.head, decade_or_all);
    if (counts.n_comp == 0) return fv;  // unattested slice: everything missing

    fv.ppmi = ppmi(counts);
    fv.llr = llr(counts);
    fv.lmi = lmi(counts);

    const std::string bigram = comp.joined();
    const vs::Role mod_role = vs::modifier_role(aspect);
    const vs::Role head_role = vs::head_role(aspect);
    fv.sim_with_head = sparse_cosine_between(slice_matrix, bigram, vs::Role::CompoundBigram,
                                             comp.head, head_role);
    fv.sim_with_mod = sparse_cosine_between(slice_matrix, bigram, vs::Role::CompoundBigram,
                                            comp.modifier, mod_role);
    fv.sim_constituents =
        sparse_cosine_between(slice_matrix, comp.modifier, mod_role, comp.head, head_role);
    return fv;
}

DfmFeatureBuilder::DfmFeatureBuilder(const corpus::CompoundTable& table,
                                     const std::vector<const vs::CooccurrenceMatrix*>& slice_matrices,
                                     vs::ContextAspect aspect, vs::TimeAspect time,
                                     const std::vector<corpus::Compound>& train_positives,
                                     bool include_std)
    : include_std_(include_std) {
    if (time == vs::TimeAspect::DecadeCentric) {
        slices_ = table.decades().training_decades();
    } else {
        slices_ = {vs::kAllDecades};
    }
    if (slice_matrices.size() != slices_.size())
        throw std::invalid_argument("dfm: one matrix per slice required");
    for (std::size_t s = 0; s < slices_.size(); ++s) {
        if (slice_matrices[s]->decade() != slices_[s])
            throw std::invalid_argument("dfm: slice matrices out of order");
    }

    for (int s : slices_) {
        for (const char* role : {"mod", "head"}) {
            for (auto feat : kFeatureShortNames)
                names_.push_back(std::string(feat) + "_mean_" + role + '_' + slice_label(s));
        }
        if (include_std_) {
            for (const char* role : {"mod", "head"}) {
                for (auto feat : kFeatureShortNames)
                    names_.push_back(std::string(feat) + "_std_" + role + '_' + slice_label(s));
            }
        }
    }

    // Welford-free accumulation: counts, sums and sums of squares per
    // constituent, slice and feature; missing compound values are skipped.
    struct Accum {
        std::uint64_t n = 0;
        double sum = 0.0;
        double sumsq = 0.0;
    };
    using SliceAccum = std::array<Accum, kFeaturesPerSlice>;
    std::unordered_map<std::string, std::vector<SliceAccum>> mod_acc, head_acc;

    const AssociationIndex index(table);
    for (const corpus::Compound& comp : train_positives) {
        auto& ma = mod_acc.try_emplace(comp.modifier, slices_.size()).first->second;
        auto& ha = head_acc.try_emplace(comp.head, slices_.size()).first->second;
        for (std::size_t s = 0; s < slices_.size(); ++s) {
            const FeatureVector fv =
                compound_features(comp, index, *slice_matrices[s], aspect, slices_[s]);
            for (std::size_t f = 0; f < kFeaturesPerSlice; ++f) {
                const Feature feat = fv.at(f);
                if (feat.missing) continue;
                for (auto* acc : {&ma[s][f], &ha[s][f]}) {
                    acc->n += 1;
                    acc->sum += feat.value;
                    acc->sumsq += feat.value * feat.value;
                }
            }
        }
    }

    auto finalize = [&](const std::unordered_map<std::string, std::vector<SliceAccum>>& acc,
                        std::unordered_map<std::string, std::vector<SliceAggregates>>& out) {
        for (const auto& [lexeme, per_slice] : acc) {
            std::vector<SliceAggregates> aggs(per_slice.size());
            for (std::size_t s = 0; s < per_slice.size(); ++s) {
                for (std::size_t f = 0; f < kFeaturesPerSlice; ++f) {
                    const Accum& a = per_slice[s][f];
                    if (a.n == 0) continue;
                    const double mean = a.sum / static_cast<double>(a.n);
                    const double var =
                        std::max(0.0, a.sumsq / static_cast<double>(a.n) - mean * mean);
                    aggs[s][f] = {mean, std::sqrt(var), false};
                }
            }
            out.emplace(lexeme, std::move(aggs));
        }
    };
    finalize(mod_acc, modifier_agg_);
    finalize(head_acc, head_agg_);
}

void DfmFeatureBuilder::append_block(std::vector<double>& out,
                                     const std::vector<SliceAggregates>* agg, std::size_t slice,
                                     bool stds) const {
    for (std::size_t f = 0; f < kFeaturesPerSlice; ++f) {
        if (!agg || (*agg)[slice][f].missing) {
            out.push_back(missing_value());
        } else {
            out.push_back(stds ? (*agg)[slice][f].stddev : (*agg)[slice][f].mean);
        }
    }
}

std::vector<double> DfmFeatureBuilder::features(const std::string& modifier,
                                                const std::string& head) const {
    const std::vector<SliceAggregates>* mod_agg = nullptr;
    const std::vector<SliceAggregates>* head_agg = nullptr;
    if (auto it = modifier_agg_.find(modifier); it != modifier_agg_.end()) mod_agg = &it->second;
    if (auto it = head_agg_.find(head); it != head_agg_.end()) head_agg = &it->second;

    std::vector<double> out;
    out.reserve(dim());
    for (std::size_t s = 0; s < slices_.size(); ++s) {
        append_block(out, mod_agg, s, false);
        append_block(out, head_agg, s, false);
        if (include_std_) {
            append_block(out, mod_agg, s, true);
            append_block(out, head_agg, s, true);
        }
    }
    return out;
}

void save_features_csv(const std::filesystem::path& path, const DfmFeatureBuilder& builder,
                       const std::vector<sampling::CandidateTuple>& tuples) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "modifier,head,label";
    for (const std::string& name : builder.feature_names()) out << ',' << name;
    out << '\n';
    out.precision(17);
    for (const auto& t : tuples) {
        out << t.modifier << ',' << t.head << ',' << (t.attested ? "attested" : "corrupted");
        for (double v : builder.features(t.modifier, t.head)) {
            out << ',';
            if (!is_missing(v)) out << v;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace nncomp::dfm
