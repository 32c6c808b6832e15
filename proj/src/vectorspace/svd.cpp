#include "nncomp/vectorspace/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nncomp/kernels/kernels.hpp"
#include "nncomp/util/rng.hpp"

namespace nncomp::vs {

std::string_view weighting_name(Weighting w) {
    switch (w) {
        case Weighting::Raw: return "raw";
        case Weighting::Log1p: return "log1p";
        case Weighting::Ppmi: return "ppmi";
    }
    throw std::logic_error("weighting_name: bad weighting");
}

Weighting weighting_from_name(std::string_view name) {
    if (name == "raw") return Weighting::Raw;
    if (name == "log1p") return Weighting::Log1p;
    if (name == "ppmi") return Weighting::Ppmi;
    throw std::invalid_argument("unknown weighting: " + std::string(name));
}

std::vector<double> weighted_values(const CooccurrenceMatrix& m, Weighting w) {
    std::vector<double> out;
    out.reserve(m.nnz());
    switch (w) {
        case Weighting::Raw:
            for (std::uint32_t r = 0; r < m.n_rows(); ++r)
                for (double v : m.row_vals(r)) out.push_back(v);
            break;
        case Weighting::Log1p:
            for (std::uint32_t r = 0; r < m.n_rows(); ++r)
                for (double v : m.row_vals(r)) out.push_back(std::log1p(v));
            break;
        case Weighting::Ppmi: {
            const std::vector<double> rs = m.row_sums();
            const std::vector<double> cs = m.col_sums();
            const double total = m.total();
            for (std::uint32_t r = 0; r < m.n_rows(); ++r) {
                auto cols = m.row_cols(r);
                auto vals = m.row_vals(r);
                for (std::size_t i = 0; i < cols.size(); ++i) {
                    const double pmi = std::log2(vals[i] * total / (rs[r] * cs[cols[i]]));
                    out.push_back(pmi > 0.0 ? pmi : 0.0);
                }
            }
            break;
        }
    }
    return out;
}

namespace {

// b (rows x cols, row-major) -> (cols x rows, row-major)
std::vector<double> transposed(const std::vector<double>& a, std::size_t rows, std::size_t cols) {
    std::vector<double> t(a.size());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) t[c * rows + r] = a[r * cols + c];
    return t;
}

// yt (n_rows x r) += A * omega, where omega is (n_cols x r) and A is the CSR
// matrix with substituted values `vals`.
void sparse_times_tall(const CooccurrenceMatrix& m, const std::vector<double>& vals,
                       const std::vector<double>& rhs, std::size_t r, std::vector<double>& out) {
    out.assign(m.n_rows() * r, 0.0);
    std::size_t idx = 0;
    for (std::uint32_t row = 0; row < m.n_rows(); ++row) {
        auto cols = m.row_cols(row);
        double* out_row = out.data() + static_cast<std::size_t>(row) * r;
        for (std::size_t i = 0; i < cols.size(); ++i, ++idx)
            kern::axpy(vals[idx], rhs.data() + static_cast<std::size_t>(cols[i]) * r, out_row, r);
    }
}

// out (n_cols x r) += A^T * lhs, where lhs is (n_rows x r).
void sparse_t_times_tall(const CooccurrenceMatrix& m, const std::vector<double>& vals,
                         const std::vector<double>& lhs, std::size_t r, std::vector<double>& out) {
    out.assign(static_cast<std::size_t>(m.n_cols()) * r, 0.0);
    std::size_t idx = 0;
    for (std::uint32_t row = 0; row < m.n_rows(); ++row) {
        auto cols = m.row_cols(row);
        const double* lhs_row = lhs.data() + static_cast<std::size_t>(row) * r;
        for (std::size_t i = 0; i < cols.size(); ++i, ++idx)
            kern::axpy(vals[idx], lhs_row, out.data() + static_cast<std::size_t>(cols[i]) * r, r);
    }
}

// Modified Gram-Schmidt over the rows of q (r rows of length n), with one
// re-orthogonalization pass. Rows that collapse below the tolerance are
// zeroed (rank deficiency).
void orthonormalize_rows(std::vector<double>& q, std::size_t r, std::size_t n) {
    const double frob = std::sqrt(kern::sqnorm(q.data(), q.size()));
    const double tol = 1e-12 * (frob > 0.0 ? frob : 1.0);
    for (std::size_t i = 0; i < r; ++i) {
        double* qi = q.data() + i * n;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < i; ++j) {
                const double* qj = q.data() + j * n;
                const double coef = kern::dot(qi, qj, n);
                kern::axpy(-coef, qj, qi, n);
            }
        }
        const double norm = std::sqrt(kern::sqnorm(qi, n));
        if (norm <= tol) {
            std::fill(qi, qi + n, 0.0);
        } else {
            kern::scale(qi, 1.0 / norm, n);
        }
    }
}

// Cyclic Jacobi eigensolver for a symmetric matrix (destroys `a`).
// Eigenvectors end up as columns of `vecs`.
void jacobi_eigh(std::vector<double> a, std::size_t r, std::vector<double>& lam,
                 std::vector<double>& vecs) {
    vecs.assign(r * r, 0.0);
    for (std::size_t i = 0; i < r; ++i) vecs[i * r + i] = 1.0;
    double scale = 0.0;
    for (double x : a) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) scale = 1.0;

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < r; ++p)
            for (std::size_t q = p + 1; q < r; ++q) off = std::max(off, std::abs(a[p * r + q]));
        if (off <= 1e-14 * scale) break;

        for (std::size_t p = 0; p < r; ++p) {
            for (std::size_t q = p + 1; q < r; ++q) {
                const double apq = a[p * r + q];
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a[q * r + q] - a[p * r + p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < r; ++k) {
                    const double akp = a[k * r + p];
                    const double akq = a[k * r + q];
                    a[k * r + p] = c * akp - s * akq;
                    a[k * r + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < r; ++k) {
                    const double apk = a[p * r + k];
                    const double aqk = a[q * r + k];
                    a[p * r + k] = c * apk - s * aqk;
                    a[q * r + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < r; ++k) {
                    const double vkp = vecs[k * r + p];
                    const double vkq = vecs[k * r + q];
                    vecs[k * r + p] = c * vkp - s * vkq;
                    vecs[k * r + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    lam.resize(r);
    for (std::size_t i = 0; i < r; ++i) lam[i] = a[i * r + i];
}

}  // namespace

SvdResult truncated_svd(const CooccurrenceMatrix& m, const SvdOptions& opts) {
    const std::size_t n_rows = m.n_rows();
    const std::size_t n_cols = m.n_cols();
    const std::size_t k = opts.rank;
    if (k == 0) throw std::invalid_argument("svd: rank must be positive");
    if (k > std::min(n_rows, n_cols))
        throw std::invalid_argument("svd: rank exceeds matrix dimensions");

    const std::vector<double> vals = weighted_values(m, opts.weighting);
    double mass = 0.0;
    for (double v : vals) mass += std::abs(v);
    if (mass == 0.0) throw std::invalid_argument("svd: weighted matrix has no mass");

    const std::size_t r = std::min(k + opts.oversampling, std::min(n_rows, n_cols));

    // Seeded Gaussian test matrix, drawn in fixed (column-block) order.
    util::Rng rng(util::mix_seed(opts.seed, 0x53564453u));  // "SVDS"
    std::vector<double> omega(n_cols * r);
    for (double& x : omega) x = rng.normal();

    // Range finding: Q spans A * omega after the requested power iterations.
    std::vector<double> tall;  // staging buffer, (n_rows x r) or (n_cols x r)
    sparse_times_tall(m, vals, omega, r, tall);
    std::vector<double> q = transposed(tall, n_rows, r);  // r x n_rows
    orthonormalize_rows(q, r, n_rows);

    for (int it = 0; it < opts.power_iterations; ++it) {
        std::vector<double> qt = transposed(q, r, n_rows);  // n_rows x r
        sparse_t_times_tall(m, vals, qt, r, tall);
        std::vector<double> z = transposed(tall, n_cols, r);  // r x n_cols
        orthonormalize_rows(z, r, n_cols);
        std::vector<double> zt = transposed(z, r, n_cols);  // n_cols x r
        sparse_times_tall(m, vals, zt, r, tall);
        q = transposed(tall, n_rows, r);
        orthonormalize_rows(q, r, n_rows);
    }

    // Project: B = Q A (r x n_cols), then eigendecompose B B^T.
    std::vector<double> qt = transposed(q, r, n_rows);  // n_rows x r
    std::vector<double> bt;                             // n_cols x r
    sparse_t_times_tall(m, vals, qt, r, bt);
    std::vector<double> b = transposed(bt, n_cols, r);  // r x n_cols

    std::vector<double> gram(r * r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double g = kern::dot(b.data() + i * n_cols, b.data() + j * n_cols, n_cols);
            gram[i * r + j] = g;
            gram[j * r + i] = g;
        }
    }

    std::vector<double> lam, w;
    jacobi_eigh(std::move(gram), r, lam, w);

    std::vector<std::size_t> order(r);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a2, std::size_t b2) { return lam[a2] > lam[b2]; });

    SvdResult res;
    res.n_rows = n_rows;
    res.n_cols = n_cols;
    res.rank = k;
    res.singular_values.resize(k);
    // wk: r x k, eigenvector columns for the top-k eigenvalues
    std::vector<double> wk(r * k);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t src = order[j];
        res.singular_values[j] = std::sqrt(std::max(lam[src], 0.0));
        for (std::size_t i = 0; i < r; ++i) wk[i * k + j] = w[i * r + src];
    }

    // U = Q^T wk, row by row.
    res.u.assign(n_rows * k, 0.0);
    for (std::size_t rr = 0; rr < n_rows; ++rr) {
        double* u_row = res.u.data() + rr * k;
        const double* qt_row = qt.data() + rr * r;
        for (std::size_t i = 0; i < r; ++i) kern::axpy(qt_row[i], wk.data() + i * k, u_row, k);
    }

    // V = B^T wk diag(1/sigma).
    std::vector<double> wk_inv(r * k, 0.0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (res.singular_values[j] > 0.0) wk_inv[i * k + j] = wk[i * k + j] / res.singular_values[j];
    res.v.assign(n_cols * k, 0.0);
    for (std::size_t c = 0; c < n_cols; ++c) {
        double* v_row = res.v.data() + c * k;
        const double* bt_row = bt.data() + c * r;
        for (std::size_t i = 0; i < r; ++i) kern::axpy(bt_row[i], wk_inv.data() + i * k, v_row, k);
    }

    // Sign convention keyed on the left singular vectors.
    for (std::size_t j = 0; j < k; ++j) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t rr = 0; rr < n_rows; ++rr) {
            const double a2 = std::abs(res.u[rr * k + j]);
            if (a2 > best) {
                best = a2;
                arg = rr;
            }
        }
        if (res.u[arg * k + j] < 0.0) {
            for (std::size_t rr = 0; rr < n_rows; ++rr) res.u[rr * k + j] = -res.u[rr * k + j];
            for (std::size_t c = 0; c < n_cols; ++c) res.v[c * k + j] = -res.v[c * k + j];
        }
    }

    res.row_embeddings.resize(n_rows * k);
    for (std::size_t rr = 0; rr < n_rows; ++rr)
        for (std::size_t j = 0; j < k; ++j)
            res.row_embeddings[rr * k + j] = res.u[rr * k + j] * res.singular_values[j];

    return res;
}

}  // namespace nncomp::vs
