#pragma once

#include <optional>
#include <vector>

#include "hyptel/rfuncn.hpp"

namespace hyptel {

using VecQ = std::vector<RFuncN>;
using MatQ = std::vector<VecQ>;   // row-major

// A * v with sigma_n applied to v first (entrywise n -> n+1); the twisted
// action of S_n on coordinate vectors.
VecQ twisted_apply(const MatQ& a, const VecQ& v);

MatQ mat_mul(const MatQ& a, const MatQ& b);
MatQ mat_add(const MatQ& a, const MatQ& b);
MatQ mat_scalar(const MatQ& a, const RFuncN& s);
MatQ mat_identity(std::size_t d);
VecQ mat_vec(const MatQ& a, const VecQ& v);
bool is_zero_vec(const VecQ& v);

// Incremental row echelon over Q(n) that remembers, for every inserted row,
// its expression in terms of the original inserted rows.
class EchelonQ {
public:
    explicit EchelonQ(std::size_t width);

    // Reduces row against the current basis.  If it drops to zero, returns
    // the combination c (over all rows inserted so far, the new one last)
    // with sum c_i * row_i = 0 and c_new = 1; otherwise stores the reduced
    // row and returns nullopt.
    std::optional<VecQ> insert(VecQ row);

    // Reduce a vector without inserting; returns (residual, combination of
    // inserted rows that was subtracted).
    std::pair<VecQ, VecQ> reduce(VecQ row) const;

    std::size_t rank() const { return rows_.size(); }
    std::size_t inserted() const { return n_inserted_; }

private:
    std::size_t width_;
    std::size_t n_inserted_ = 0;
    std::vector<VecQ> rows_;            // echelonized, leading entry 1
    std::vector<std::size_t> pivot_;    // pivot column per row
    std::vector<VecQ> combo_;           // row i = sum combo_[i][j] * inserted j
};

// Minimal monic relation sum_j c_j * v_j = 0 among the twisted Krylov
// iterates v_0 = v, v_{j+1} = A * sigma_n(v_j).  Returns the coefficients
// c_0..c_t with c_t = 1; t <= dim always holds.
std::vector<RFuncN> krylov_relation(const MatQ& a, const VecQ& v);

}  // namespace hyptel
