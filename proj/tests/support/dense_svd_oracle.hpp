#pragma once

#include <cstddef>
#include <vector>

// Dense SVD oracle for small matrices, used to validate the randomized
// truncated SVD. One-sided Jacobi: a different algorithm with none of the
// production code paths (no range finder, no seeded sampling).
namespace nncomp::testing {

struct DenseSvd {
    std::size_t rows = 0, cols = 0;
    std::vector<double> s;  // min(rows, cols), non-increasing
    std::vector<double> u;  // rows x min, row-major, orthonormal columns
    std::vector<double> v;  // cols x min, row-major, orthonormal columns
};

DenseSvd dense_svd(std::vector<double> a, std::size_t rows, std::size_t cols);

}  // namespace nncomp::testing
