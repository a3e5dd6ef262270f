#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qfa/matrix.hpp"

namespace qfa {

// A projective measurement: an ordered result set and one projector per
// result. Valid observables have Hermitian idempotent projectors that are
// pairwise orthogonal and sum to the identity.
struct Observable {
    std::vector<std::string> results;
    std::vector<Matrix> projectors;  // parallel to results, each n×n

    std::size_t dimension() const { return projectors.empty() ? 0 : projectors[0].rows(); }
    Backend backend() const;
    std::size_t result_index(std::string_view result) const;  // throws on unknown result
    const Matrix& projector_for(std::string_view result) const;

    // Diagonal 0/1 projectors from a partition of basis-state indices. Blocks
    // may be empty; together they must cover 0..n-1 exactly once.
    static Observable from_partition(Backend b, std::size_t n, std::vector<std::string> results,
                                     const std::vector<std::vector<std::size_t>>& blocks);

    // When every projector is diagonal 0/1, returns the partition (one index
    // block per result); empty otherwise. Lets serialization stay compact.
    std::vector<std::vector<std::size_t>> basis_partition() const;

    // All violated checks, empty when valid. On the float backend deviations
    // up to tol are accepted; the exact backend is checked exactly.
    std::vector<std::string> validate(double tol = 1e-9) const;
    void require_valid(double tol = 1e-9) const;

    Observable to_float() const;
};

}  // namespace qfa
