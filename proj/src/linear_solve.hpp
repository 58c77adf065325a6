#pragma once

// Exact sparse linear algebra over the rationals.

#include "pomega/rational.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pomega::detail {

using RationalMatrix = std::vector<std::vector<Rational>>;
using SparseRow = std::map<std::size_t, Rational>;

/// Solves A X = B for square nonsingular A by Gaussian elimination on sparse
/// rows. B may have several columns. Pivots are taken in column order, each
/// from the sparsest remaining row that has the column.
inline RationalMatrix solve_sparse(std::vector<SparseRow> a, RationalMatrix b)
{
    const auto n = a.size();
    const auto cols = n == 0 ? 0 : b.front().size();
    std::vector<std::set<std::size_t>> rows_with(n);
    for (std::size_t r = 0; r < n; ++r) {
        std::erase_if(a[r], [](const auto& entry) { return entry.second == 0; });
        for (const auto& [c, v] : a[r])
            rows_with[c].insert(r);
    }

    std::vector<char> used(n, 0);
    std::vector<std::size_t> pivot_row(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = n;
        for (auto r : rows_with[col])
            if (!used[r] && (pivot == n || a[r].size() < a[pivot].size()))
                pivot = r;
        if (pivot == n)
            throw std::logic_error("singular system in absorption solve");
        used[pivot] = 1;
        pivot_row[col] = pivot;

        const Rational inv = 1 / a[pivot].at(col);
        for (auto& [c, v] : a[pivot])
            v *= inv;
        for (std::size_t j = 0; j < cols; ++j)
            b[pivot][j] *= inv;

        const std::vector<std::size_t> targets(rows_with[col].begin(), rows_with[col].end());
        for (auto r : targets) {
            if (r == pivot)
                continue;
            const Rational factor = a[r].at(col);
            for (const auto& [c, v] : a[pivot]) {
                auto [it, fresh] = a[r].try_emplace(c, 0);
                it->second -= factor * v;
                if (fresh)
                    rows_with[c].insert(r);
                else if (it->second == 0) {
                    a[r].erase(it);
                    rows_with[c].erase(r);
                }
            }
            for (std::size_t j = 0; j < cols; ++j)
                b[r][j] -= factor * b[pivot][j];
        }
    }

    RationalMatrix x(n);
    for (std::size_t col = 0; col < n; ++col)
        x[col] = std::move(b[pivot_row[col]]);
    return x;
}

} // namespace pomega::detail
