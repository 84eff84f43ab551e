#include "turan/ldlt.hpp"

#include "turan/error.hpp"

namespace turan {

LdltResult ldlt(const FieldMatrix& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) throw DomainError("ldlt: matrix is not square");
        for (std::size_t j = 0; j < i; ++j)
            if (!(a[i][j] == a[j][i])) throw DomainError("ldlt: matrix is not symmetric");
    }

    LdltResult out;
    out.lower.assign(n, std::vector<FieldElement>(n));
    for (std::size_t i = 0; i < n; ++i) out.lower[i][i] = FieldElement(1);
    FieldMatrix s = a;  // lower triangle holds the running Schur complement

    for (std::size_t k = 0; k < n; ++k) {
        const FieldElement pivot = s[k][k];
        const int sign = pivot.sign();
        if (sign < 0) {
            out.positive_semidefinite = false;
            out.failed_step = k;
            out.failed_value = pivot;
            out.reason = "negative pivot";
            return out;
        }
        if (sign == 0) {
            for (std::size_t i = k + 1; i < n; ++i) {
                if (!s[i][k].is_zero()) {
                    out.positive_semidefinite = false;
                    out.failed_step = k;
                    out.failed_value = s[i][k];
                    out.reason = "zero pivot with nonzero entry in row " + std::to_string(i);
                    return out;
                }
            }
            out.diagonal.push_back(pivot);
            continue;
        }
        const FieldElement inv = pivot.inverse();
        for (std::size_t i = k + 1; i < n; ++i) out.lower[i][k] = s[i][k] * inv;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (s[i][k].is_zero()) continue;
            for (std::size_t j = k + 1; j <= i; ++j) s[i][j] -= out.lower[i][k] * s[j][k];
        }
        out.diagonal.push_back(pivot);
    }
    return out;
}

bool is_positive_semidefinite(const FieldMatrix& a) { return ldlt(a).positive_semidefinite; }

FieldMatrix reassemble(const LdltResult& f) {
    const std::size_t n = f.lower.size();
    if (f.diagonal.size() != n) throw DomainError("reassemble: incomplete factorization");
    FieldMatrix out(n, std::vector<FieldElement>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k <= std::min(i, j); ++k)
                if (!f.lower[i][k].is_zero() && !f.lower[j][k].is_zero())
                    out[i][j] += f.lower[i][k] * f.diagonal[k] * f.lower[j][k];
    return out;
}

}  // namespace turan
