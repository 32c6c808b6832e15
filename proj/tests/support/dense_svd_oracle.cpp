#include "support/dense_svd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nncomp::testing {

namespace {

// column-major workspace: col(j) is contiguous
struct ColMat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> d;

    double* col(std::size_t j) { return d.data() + j * rows; }
    const double* col(std::size_t j) const { return d.data() + j * rows; }
};

double col_dot(const ColMat& m, std::size_t p, std::size_t q) {
    const double* a = m.col(p);
    const double* b = m.col(q);
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) s += a[i] * b[i];
    return s;
}

void rotate_cols(ColMat& m, std::size_t p, std::size_t q, double c, double s) {
    double* a = m.col(p);
    double* b = m.col(q);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double ap = a[i], bq = b[i];
        a[i] = c * ap - s * bq;
        b[i] = s * ap + c * bq;
    }
}

}  // namespace

DenseSvd dense_svd(std::vector<double> a, std::size_t rows, std::size_t cols) {
    if (a.size() != rows * cols) throw std::invalid_argument("dense_svd: shape mismatch");
    const bool transposed = rows < cols;  // Jacobi wants rows >= cols
    const std::size_t m = transposed ? cols : rows;
    const std::size_t n = transposed ? rows : cols;

    ColMat b{m, n, std::vector<double>(m * n, 0.0)};
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double x = a[r * cols + c];
            if (transposed) {
                b.col(r)[c] = x;
            } else {
                b.col(c)[r] = x;
            }
        }
    }
    ColMat vt{n, n, std::vector<double>(n * n, 0.0)};
    for (std::size_t j = 0; j < n; ++j) vt.col(j)[j] = 1.0;

    // one-sided Jacobi sweeps until every column pair is orthogonal
    const double eps = 1e-14;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = col_dot(b, p, p);
                const double beta = col_dot(b, q, q);
                const double gamma = col_dot(b, p, q);
                if (std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t =
                    (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate_cols(b, p, q, c, s);
                rotate_cols(vt, p, q, c, s);
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(col_dot(b, j, j));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    DenseSvd out;
    out.rows = rows;
    out.cols = cols;
    out.s.resize(n);
    out.u.assign(m * n, 0.0);  // for the (possibly transposed) tall side
    out.v.assign(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.s[j] = sigma[src];
        const double inv = sigma[src] > 0 ? 1.0 / sigma[src] : 0.0;
        for (std::size_t i = 0; i < m; ++i) out.u[i * n + j] = b.col(src)[i] * inv;
        for (std::size_t i = 0; i < n; ++i) out.v[i * n + j] = vt.col(src)[i];
    }
    if (transposed) std::swap(out.u, out.v);
    return out;
}

}  // namespace nncomp::testing
