#include "exact_linalg.hpp"

namespace turan::detail {

std::vector<std::size_t> rref(RationalMatrix& m, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t p = row;
        while (p < m.size() && sgn(m[p][col]) == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[row]);
        const Rational inv = 1 / m[row][col];
        for (std::size_t c = col; c < cols; ++c) m[row][c] *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || sgn(m[r][col]) == 0) continue;
            const Rational f = m[r][col];
            for (std::size_t c = col; c < cols; ++c)
                if (sgn(m[row][c]) != 0) m[r][c] -= f * m[row][c];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::vector<std::vector<Rational>> nullspace(RationalMatrix m, std::size_t cols) {
    const std::vector<std::size_t> pivots = rref(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
        Integer l = 1;
        for (const Rational& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
        for (Rational& x : v) x *= l;
        basis.push_back(std::move(v));
    }
    return basis;
}

std::size_t rank(RationalMatrix m, std::size_t cols) { return rref(m, cols).size(); }

std::optional<std::vector<Rational>> solve(RationalMatrix m, std::vector<Rational> b, std::size_t cols) {
    for (std::size_t r = 0; r < m.size(); ++r) m[r].push_back(b[r]);
    const std::vector<std::size_t> pivots = rref(m, cols + 1);
    if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
    std::vector<Rational> x(cols, Rational(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m[r][cols];
    return x;
}

}  // namespace turan::detail
