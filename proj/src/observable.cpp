#include "qfa/observable.hpp"

namespace qfa {

Backend Observable::backend() const {
    if (projectors.empty()) throw Error("observable has no projectors");
    return projectors[0].backend();
}

std::size_t Observable::result_index(std::string_view result) const {
    for (std::size_t i = 0; i < results.size(); ++i)
        if (results[i] == result) return i;
    throw Error("unknown measurement result '" + std::string(result) + "'");
}

const Matrix& Observable::projector_for(std::string_view result) const {
    return projectors[result_index(result)];
}

Observable Observable::from_partition(Backend b, std::size_t n, std::vector<std::string> results,
                                      const std::vector<std::vector<std::size_t>>& blocks) {
    if (results.size() != blocks.size())
        throw Error("partition needs exactly one block per measurement result");
    std::vector<bool> seen(n, false);
    Observable o;
    o.results = std::move(results);
    for (const auto& block : blocks) {
        Matrix p = Matrix::zeros(b, n, n);
        for (std::size_t idx : block) {
            if (idx >= n) throw Error("partition index " + std::to_string(idx) + " out of range");
            if (seen[idx])
                throw Error("partition index " + std::to_string(idx) + " used twice");
            seen[idx] = true;
            p.set(idx, idx, Scalar::one(b));
        }
        o.projectors.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!seen[i]) throw Error("partition does not cover state " + std::to_string(i));
    return o;
}

std::vector<std::vector<std::size_t>> Observable::basis_partition() const {
    std::vector<std::vector<std::size_t>> blocks(results.size());
    const std::size_t n = dimension();
    for (std::size_t r = 0; r < projectors.size(); ++r) {
        const Matrix& p = projectors[r];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Scalar v = p.at(i, j);
                if (i == j) {
                    if (v == Scalar::one(p.backend()))
                        blocks[r].push_back(i);
                    else if (!v.is_zero())
                        return {};
                } else if (!v.is_zero()) {
                    return {};
                }
            }
    }
    return blocks;
}

std::vector<std::string> Observable::validate(double tol) const {
    std::vector<std::string> issues;
    if (results.size() != projectors.size()) {
        issues.push_back("one projector per result is required");
        return issues;
    }
    if (projectors.empty()) {
        issues.push_back("observable has no results");
        return issues;
    }
    const std::size_t n = dimension();
    const Backend b = backend();
    const bool exact = b == Backend::exact;
    auto deviates = [&](const Matrix& x, const Matrix& y) {
        return exact ? !(x == y) : x.max_abs_diff(y) > tol;
    };
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        const Matrix& p = projectors[i];
        if (p.rows() != n || p.cols() != n || p.backend() != b) {
            issues.push_back("projector for '" + results[i] + "' has inconsistent shape or backend");
            return issues;
        }
        if (deviates(p, conj_transpose(p)))
            issues.push_back("projector for '" + results[i] + "' is not Hermitian");
        if (deviates(mat_mul(p, p), p))
            issues.push_back("projector for '" + results[i] + "' is not idempotent");
    }
    for (std::size_t i = 0; i < projectors.size(); ++i)
        for (std::size_t j = i + 1; j < projectors.size(); ++j)
            if (deviates(mat_mul(projectors[i], projectors[j]), Matrix::zeros(b, n, n)))
                issues.push_back("projectors for '" + results[i] + "' and '" + results[j] +
                                 "' are not orthogonal");
    Matrix sum = Matrix::zeros(b, n, n);
    for (const Matrix& p : projectors) sum = sum + p;
    if (deviates(sum, Matrix::identity(b, n)))
        issues.push_back("projectors do not sum to the identity");
    for (std::size_t i = 0; i < results.size(); ++i)
        for (std::size_t j = i + 1; j < results.size(); ++j)
            if (results[i] == results[j]) issues.push_back("duplicate result '" + results[i] + "'");
    return issues;
}

void Observable::require_valid(double tol) const {
    auto issues = validate(tol);
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

Observable Observable::to_float() const {
    Observable o;
    o.results = results;
    for (const Matrix& p : projectors) o.projectors.push_back(p.to_float());
    return o;
}

}  // namespace qfa
