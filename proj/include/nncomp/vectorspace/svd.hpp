#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "nncomp/vectorspace/cooccurrence.hpp"

namespace nncomp::vs {

enum class Weighting : std::uint8_t {
    Raw,
    Log1p,
    Ppmi,
};

std::string_view weighting_name(Weighting w);
Weighting weighting_from_name(std::string_view name);

struct SvdOptions {
    std::size_t rank = 300;
    Weighting weighting = Weighting::Log1p;
    std::uint64_t seed = 0;
    std::size_t oversampling = 10;
    int power_iterations = 2;
};

struct SvdResult {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::size_t rank = 0;
    std::vector<double> singular_values;  // non-increasing, size rank
    std::vector<double> u;                // n_rows x rank, row-major, orthonormal columns
    std::vector<double> v;                // n_cols x rank, row-major, orthonormal columns
    std::vector<double> row_embeddings;   // n_rows x rank = U * diag(S)
};

// Cell values of `m` in CSR order after applying the weighting scheme.
// Ppmi uses base-2 log over the matrix's own marginals, clipped at zero.
std::vector<double> weighted_values(const CooccurrenceMatrix& m, Weighting w);

// Randomized truncated SVD (range finding with Gaussian oversampling and
// subspace power iterations, small eigenproblem solved by cyclic Jacobi).
// Deterministic for a given seed: the Gaussian draws come from the seeded
// generator in a fixed order and every reduction has a fixed evaluation
// order.  Sign convention: the largest-magnitude entry of each left
// singular vector is non-negative (first such entry on ties).  Throws
// std::invalid_argument when the rank is zero or exceeds min(rows, cols),
// or when the weighted matrix has no mass.
SvdResult truncated_svd(const CooccurrenceMatrix& m, const SvdOptions& opts);

}  // namespace nncomp::vs
