#include "precosym/linalg.hpp"

#include "precosym/errors.hpp"

#include <algorithm>

namespace precosym {

namespace {

struct PivotPick {
    int row = -1;
    int col = -1;
    bool constant = false;
    int complexity = 0;
};

int complexity_of(const Expression& e) {
    return e.num().total_degree() + e.den().total_degree();
}

// Deterministic pivot choice: nonzero rational constants first, then the
// lowest-complexity entry, ties broken by (row, col).
PivotPick pick_pivot(const Matrix& M, const std::vector<bool>& row_done,
                     const std::vector<bool>& col_done) {
    PivotPick best;
    for (std::size_t r = 0; r < M.size(); ++r) {
        if (row_done[r]) continue;
        for (std::size_t c = 0; c < M[r].size(); ++c) {
            if (col_done[c]) continue;
            const Expression& e = M[r][c];
            if (e.is_zero()) continue;
            bool cst = e.is_constant();
            int cx = cst ? 0 : complexity_of(e);
            if (best.row < 0 || std::make_tuple(!cst, cx) <
                                    std::make_tuple(!best.constant, best.complexity)) {
                best = PivotPick{static_cast<int>(r), static_cast<int>(c), cst, cx};
            }
        }
    }
    return best;
}

}  // namespace

int generic_rank(Matrix M, AssumptionLedger& ledger, const std::string& note) {
    if (M.empty()) return 0;
    std::vector<bool> row_done(M.size(), false);
    std::vector<bool> col_done(M[0].size(), false);
    int rank = 0;
    while (true) {
        PivotPick p = pick_pivot(M, row_done, col_done);
        if (p.row < 0) break;
        const Expression piv = M[p.row][p.col];
        if (!p.constant) ledger.record(piv, note + " (elimination pivot)");
        for (std::size_t r = 0; r < M.size(); ++r) {
            if (row_done[r] || static_cast<int>(r) == p.row) continue;
            if (M[r][p.col].is_zero()) continue;
            Expression factor = M[r][p.col] / piv;
            for (std::size_t c = 0; c < M[r].size(); ++c)
                M[r][c] = M[r][c] - factor * M[p.row][c];
        }
        row_done[p.row] = true;
        col_done[p.col] = true;
        ++rank;
    }
    return rank;
}

std::vector<std::vector<Expression>> nullspace(Matrix M, AssumptionLedger& ledger,
                                               const std::string& note) {
    if (M.empty()) return {};
    const std::size_t ncols = M[0].size();
    const ContextPtr ctx = [&]() -> ContextPtr {
        for (auto& row : M)
            for (auto& e : row) return e.context();
        throw internal_error("nullspace of empty matrix");
    }();

    std::vector<bool> row_done(M.size(), false);
    std::vector<bool> col_done(ncols, false);
    // (pivot row, pivot col) pairs of the echelon form.
    std::vector<std::pair<int, int>> pivots;
    while (true) {
        PivotPick p = pick_pivot(M, row_done, col_done);
        if (p.row < 0) break;
        const Expression piv = M[p.row][p.col];
        if (!p.constant) ledger.record(piv, note + " (elimination pivot)");
        // Normalise the pivot row, clear the column everywhere (Gauss-Jordan).
        for (std::size_t c = 0; c < ncols; ++c) M[p.row][c] = M[p.row][c] / piv;
        for (std::size_t r = 0; r < M.size(); ++r) {
            if (static_cast<int>(r) == p.row) continue;
            if (M[r][p.col].is_zero()) continue;
            Expression factor = M[r][p.col];
            for (std::size_t c = 0; c < ncols; ++c)
                M[r][c] = M[r][c] - factor * M[p.row][c];
        }
        row_done[p.row] = true;
        col_done[p.col] = true;
        pivots.emplace_back(p.row, p.col);
    }
    std::sort(pivots.begin(), pivots.end(),
              [](auto& a, auto& b) { return a.second < b.second; });

    std::vector<std::vector<Expression>> basis;
    for (std::size_t c = 0; c < ncols; ++c) {
        if (col_done[c]) continue;
        std::vector<Expression> v(ncols, Expression::zero(ctx));
        v[c] = Expression::one(ctx);
        for (auto& [pr, pc] : pivots) v[pc] = -M[pr][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

Expression determinant(Matrix M) {
    const std::size_t n = M.size();
    if (n == 0) throw internal_error("determinant of empty matrix");
    for (auto& row : M)
        if (row.size() != n) throw internal_error("determinant of non-square matrix");
    const ContextPtr ctx = M[0][0].context();
    // Bareiss fraction-free elimination with row pivoting.
    Expression sign = Expression::one(ctx);
    Expression prev = Expression::one(ctx);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (M[k][k].is_zero()) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && M[swap_row][k].is_zero()) ++swap_row;
            if (swap_row == n) return Expression::zero(ctx);
            std::swap(M[k], M[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
        prev = M[k][k];
    }
    return sign * M[n - 1][n - 1];
}

}  // namespace precosym
