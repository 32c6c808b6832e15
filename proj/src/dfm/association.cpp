#include "nncomp/dfm/association.hpp"

#include <cmath>

namespace nncomp::dfm {

namespace {

bool any_zero_marginal(const AssociationCounts& c) {
    return c.n_comp == 0 || c.n_mod == 0 || c.n_head == 0 || c.n_total == 0;
}

}  // namespace

Feature pmi(const AssociationCounts& c) {
    if (any_zero_marginal(c)) return Feature::absent();
    const double p_comp = static_cast<double>(c.n_comp) / static_cast<double>(c.n_total);
    const double p_mod = static_cast<double>(c.n_mod) / static_cast<double>(c.n_total);
    const double p_head = static_cast<double>(c.n_head) / static_cast<double>(c.n_total);
    return Feature::present(std::log2(p_comp / (p_mod * p_head)));
}

Feature ppmi(const AssociationCounts& c) {
    Feature f = pmi(c);
    if (f.missing) return f;
    return Feature::present(f.value > 0.0 ? f.value : 0.0);
}

Feature llr(const AssociationCounts& c) {
    if (any_zero_marginal(c)) return Feature::absent();
    const double n = static_cast<double>(c.n_total);
    const double k[2][2] = {
        {static_cast<double>(c.n_comp), static_cast<double>(c.n_mod - c.n_comp)},
        {static_cast<double>(c.n_head - c.n_comp),
         static_cast<double>(c.n_total - c.n_mod - c.n_head + c.n_comp)},
    };
    const double row[2] = {k[0][0] + k[0][1], k[1][0] + k[1][1]};
    const double col[2] = {k[0][0] + k[1][0], k[0][1] + k[1][1]};
    double sum = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (k[i][j] <= 0.0) continue;  // 0 * log(0/E) := 0
            const double expected = row[i] * col[j] / n;
            sum += k[i][j] * std::log(k[i][j] / expected);
        }
    }
    return Feature::present(2.0 * sum);
}

Feature lmi(const AssociationCounts& c) {
    Feature f = pmi(c);
    if (f.missing) return f;
    const double p_comp = static_cast<double>(c.n_comp) / static_cast<double>(c.n_total);
    return Feature::present(p_comp * f.value);
}

Feature cosine(std::span<const double> u, std::span<const double> v) {
    double uu = 0.0, vv = 0.0, uv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        uu += u[i] * u[i];
        vv += v[i] * v[i];
        uv += u[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) return Feature::absent();
    return Feature::present(uv / (std::sqrt(uu) * std::sqrt(vv)));
}

Feature cosine_sparse(std::span<const std::uint32_t> cols_u, std::span<const double> vals_u,
                      std::span<const std::uint32_t> cols_v, std::span<const double> vals_v) {
    double uu = 0.0, vv = 0.0, uv = 0.0;
    for (double x : vals_u) uu += x * x;
    for (double x : vals_v) vv += x * x;
    std::size_t i = 0, j = 0;
    while (i < cols_u.size() && j < cols_v.size()) {
        if (cols_u[i] == cols_v[j]) {
            uv += vals_u[i] * vals_v[j];
            ++i;
            ++j;
        } else if (cols_u[i] < cols_v[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    if (uu == 0.0 || vv == 0.0) return Feature::absent();
    return Feature::present(uv / (std::sqrt(uu) * std::sqrt(vv)));
}

AssociationIndex::AssociationIndex(const corpus::CompoundTable& table) {
    const corpus::DecadeConfig& cfg = table.decades();
    slices_ = cfg.training_decades();
    slices_.push_back(vs::kAllDecades);
    for (int s : slices_) marginals_[s];

    SliceMarginals& pooled = marginals_.at(vs::kAllDecades);
    for (const auto* entry : table.sorted_entries()) {
        const std::string key = entry->compound.joined();
        std::uint64_t pooled_count = 0;
        for (int d : cfg.training_decades()) {
            const auto c = entry->counts_by_decade[static_cast<std::size_t>(cfg.decade_index(d))];
            if (c == 0) continue;
            SliceMarginals& m = marginals_.at(d);
            m.comp[key] += c;
            m.mod[entry->compound.modifier] += c;
            m.head[entry->compound.head] += c;
            m.total += c;
            pooled_count += c;
        }
        if (pooled_count == 0) continue;
        pooled.comp[key] += pooled_count;
        pooled.mod[entry->compound.modifier] += pooled_count;
        pooled.head[entry->compound.head] += pooled_count;
        pooled.total += pooled_count;
    }
}

AssociationCounts AssociationIndex::counts(const std::string& modifier, const std::string& head,
                                           int decade_or_all) const {
    auto it = marginals_.find(decade_or_all);
    if (it == marginals_.end())
        throw std::out_of_range("association index: unknown slice " + std::to_string(decade_or_all));
    const SliceMarginals& m = it->second;
    AssociationCounts c;
    c.n_total = m.total;
    if (auto f = m.comp.find(modifier + ' ' + head); f != m.comp.end()) c.n_comp = f->second;
    if (auto f = m.mod.find(modifier); f != m.mod.end()) c.n_mod = f->second;
    if (auto f = m.head.find(head); f != m.head.end()) c.n_head = f->second;
    return c;
}

}  // namespace nncomp::dfm
