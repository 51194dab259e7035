#include "hyptel/linalg.hpp"

#include "hyptel/errors.hpp"

namespace hyptel {

VecQ twisted_apply(const MatQ& a, const VecQ& v) {
    std::size_t d = a.size();
    VecQ sv(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sv[i] = v[i].shifted(1);
    VecQ out(d);
    for (std::size_t i = 0; i < d; ++i) {
        RFuncN acc;
        for (std::size_t j = 0; j < sv.size(); ++j) {
            if (!a[i][j].is_zero() && !sv[j].is_zero()) acc += a[i][j] * sv[j];
        }
        out[i] = acc;
    }
    return out;
}

MatQ mat_mul(const MatQ& a, const MatQ& b) {
    std::size_t n = a.size(), m = b[0].size(), l = b.size();
    MatQ out(n, VecQ(m));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < l; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j) {
                if (b[k][j].is_zero()) continue;
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return out;
}

MatQ mat_add(const MatQ& a, const MatQ& b) {
    MatQ out = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] += b[i][j];
    }
    return out;
}

MatQ mat_scalar(const MatQ& a, const RFuncN& s) {
    MatQ out = a;
    for (auto& row : out) {
        for (auto& x : row) x = x * s;
    }
    return out;
}

MatQ mat_identity(std::size_t d) {
    MatQ out(d, VecQ(d));
    for (std::size_t i = 0; i < d; ++i) out[i][i] = RFuncN(1L);
    return out;
}

VecQ mat_vec(const MatQ& a, const VecQ& v) {
    VecQ out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        RFuncN acc;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (!a[i][j].is_zero() && !v[j].is_zero()) acc += a[i][j] * v[j];
        }
        out[i] = acc;
    }
    return out;
}

bool is_zero_vec(const VecQ& v) {
    for (const auto& x : v) {
        if (!x.is_zero()) return false;
    }
    return true;
}

EchelonQ::EchelonQ(std::size_t width) : width_(width) {}

std::pair<VecQ, VecQ> EchelonQ::reduce(VecQ row) const {
    VecQ used(n_inserted_);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const RFuncN& x = row[pivot_[r]];
        if (x.is_zero()) continue;
        RFuncN f = x;
        for (std::size_t j = 0; j < width_; ++j) {
            if (!rows_[r][j].is_zero()) row[j] -= f * rows_[r][j];
        }
        for (std::size_t j = 0; j < combo_[r].size(); ++j) {
            if (!combo_[r][j].is_zero()) used[j] += f * combo_[r][j];
        }
    }
    return {std::move(row), std::move(used)};
}

std::optional<VecQ> EchelonQ::insert(VecQ row) {
    auto [res, used] = reduce(std::move(row));
    ++n_inserted_;
    std::size_t p = width_;
    for (std::size_t j = 0; j < width_; ++j) {
        if (!res[j].is_zero()) {
            p = j;
            break;
        }
    }
    if (p == width_) {
        // Dependent: inserted row = sum used_j * row_j.
        VecQ combo(n_inserted_);
        for (std::size_t j = 0; j < used.size(); ++j) combo[j] = -used[j];
        combo[n_inserted_ - 1] = RFuncN(1L);
        return combo;
    }
    RFuncN inv = res[p].inverse();
    for (auto& x : res) {
        if (!x.is_zero()) x = x * inv;
    }
    VecQ combo(n_inserted_);
    for (std::size_t j = 0; j < used.size(); ++j) combo[j] = -(inv * used[j]);
    combo[n_inserted_ - 1] = inv;
    rows_.push_back(std::move(res));
    pivot_.push_back(p);
    combo_.push_back(std::move(combo));
    return std::nullopt;
}

std::vector<RFuncN> krylov_relation(const MatQ& a, const VecQ& v) {
    std::size_t d = a.size();
    EchelonQ ech(d);
    VecQ cur = v;
    for (std::size_t j = 0; j <= d; ++j) {
        auto dep = ech.insert(cur);
        if (dep) {
            // Make the relation monic in its top iterate.
            return *dep;
        }
        cur = twisted_apply(a, cur);
    }
    throw InternalError("no Krylov relation within the dimension bound");
}

}  // namespace hyptel
