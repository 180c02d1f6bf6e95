#ifndef VDCLAB_LINALG_HPP
#define VDCLAB_LINALG_HPP

#include <cstdint>
#include <vector>

#include "vdclab/field.hpp"

namespace vdclab {

// Gaussian elimination over F_{q^k}. Matrices are row-major vectors of rows.
using FfeMatrix = std::vector<std::vector<FieldElem>>;

inline unsigned rank_ffe(FfeMatrix m, const FieldCtx& F) {
    unsigned rank = 0;
    const unsigned rows = static_cast<unsigned>(m.size());
    if (rows == 0) return 0;
    const unsigned cols = static_cast<unsigned>(m[0].size());
    for (unsigned col = 0; col < cols && rank < rows; ++col) {
        unsigned pivot = rank;
        while (pivot < rows && F.is_zero(m[pivot][col])) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        FieldElem inv = F.inv(m[rank][col]);
        for (unsigned j = col; j < cols; ++j) m[rank][j] = F.mul(m[rank][j], inv);
        for (unsigned i = 0; i < rows; ++i) {
            if (i == rank || F.is_zero(m[i][col])) continue;
            FieldElem f = m[i][col];
            for (unsigned j = col; j < cols; ++j)
                m[i][j] = F.sub(m[i][j], F.mul(f, m[rank][j]));
        }
        ++rank;
    }
    return rank;
}

// Basis of the right kernel {x : M x = 0}; each basis vector has length cols.
inline FfeMatrix kernel_basis_ffe(FfeMatrix m, const FieldCtx& F) {
    const unsigned rows = static_cast<unsigned>(m.size());
    const unsigned cols = rows ? static_cast<unsigned>(m[0].size()) : 0;
    std::vector<int> pivot_of_col(cols, -1);
    unsigned rank = 0;
    for (unsigned col = 0; col < cols && rank < rows; ++col) {
        unsigned pivot = rank;
        while (pivot < rows && F.is_zero(m[pivot][col])) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        FieldElem inv = F.inv(m[rank][col]);
        for (unsigned j = col; j < cols; ++j) m[rank][j] = F.mul(m[rank][j], inv);
        for (unsigned i = 0; i < rows; ++i) {
            if (i == rank || F.is_zero(m[i][col])) continue;
            FieldElem f = m[i][col];
            for (unsigned j = col; j < cols; ++j)
                m[i][j] = F.sub(m[i][j], F.mul(f, m[rank][j]));
        }
        pivot_of_col[col] = static_cast<int>(rank);
        ++rank;
    }
    FfeMatrix basis;
    for (unsigned free = 0; free < cols; ++free) {
        if (pivot_of_col[free] >= 0) continue;
        std::vector<FieldElem> v(cols, F.zero());
        v[free] = F.one();
        for (unsigned col = 0; col < cols; ++col) {
            int pr = pivot_of_col[col];
            if (pr < 0) continue;
            v[col] = F.neg(m[static_cast<unsigned>(pr)][free]);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace vdclab

#endif
