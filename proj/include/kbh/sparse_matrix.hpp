#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "gaussian_rational.hpp"

namespace kbh {

using SparseRow = std::vector<std::pair<std::uint32_t, GaussianRational>>;
using DenseVector = std::vector<GaussianRational>;

/// Row-major sparse matrix over Q(i). Rows are kept sorted by column and
/// never store a zero.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), data_(rows) {}

    static SparseMatrix identity(std::size_t n) {
        SparseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace_back(static_cast<std::uint32_t>(i), GaussianRational(1));
        return m;
    }

    std::size_t rows() const { return data_.size(); }
    std::size_t cols() const { return cols_; }

    std::size_t nonzeros() const {
        std::size_t total = 0;
        for (const auto& r : data_) total += r.size();
        return total;
    }

    const SparseRow& row(std::size_t r) const { return data_.at(r); }

    GaussianRational at(std::size_t r, std::size_t c) const {
        check_bounds(r, c);
        const auto& row = data_[r];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const auto& e, std::size_t col) { return e.first < col; });
        if (it != row.end() && it->first == c) return it->second;
        return {};
    }

    // Adds value to entry (r, c); the entry disappears if the sum is zero.
    void add(std::size_t r, std::size_t c, const GaussianRational& value) {
        check_bounds(r, c);
        if (value.is_zero()) return;
        auto& row = data_[r];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const auto& e, std::size_t col) { return e.first < col; });
        if (it != row.end() && it->first == c) {
            it->second += value;
            if (it->second.is_zero()) row.erase(it);
        } else {
            row.emplace(it, static_cast<std::uint32_t>(c), value);
        }
    }

    void set(std::size_t r, std::size_t c, const GaussianRational& value) {
        check_bounds(r, c);
        auto& row = data_[r];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const auto& e, std::size_t col) { return e.first < col; });
        bool present = it != row.end() && it->first == c;
        if (value.is_zero()) {
            if (present) row.erase(it);
        } else if (present) {
            it->second = value;
        } else {
            row.emplace(it, static_cast<std::uint32_t>(c), value);
        }
    }

    SparseMatrix transpose() const {
        SparseMatrix t(cols_, rows());
        for (std::size_t r = 0; r < rows(); ++r)
            for (const auto& [c, v] : data_[r]) t.data_[c].emplace_back(static_cast<std::uint32_t>(r), v);
        return t;
    }

    DenseVector apply(const DenseVector& v) const {
        if (v.size() != cols_) throw StructuralError("SparseMatrix::apply: vector length mismatch");
        DenseVector out(rows());
        for (std::size_t r = 0; r < rows(); ++r)
            for (const auto& [c, x] : data_[r])
                if (!v[c].is_zero()) out[r] += x * v[c];
        return out;
    }

    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
        return a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    void check_bounds(std::size_t r, std::size_t c) const {
        if (r >= rows() || c >= cols_) throw StructuralError("SparseMatrix: index out of bounds");
    }

    std::size_t cols_ = 0;
    std::vector<SparseRow> data_;
};

/// a * b.
inline SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols() != b.rows()) throw StructuralError("multiply: inner dimensions differ");
    SparseMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (const auto& [k, x] : a.row(r))
            for (const auto& [c, y] : b.row(k)) out.add(r, c, x * y);
    return out;
}

inline bool is_zero(const SparseMatrix& m) { return m.nonzeros() == 0; }

namespace detail {

// target -= factor * pivot, both sorted by column.
inline void axpy_row(SparseRow& target, const GaussianRational& factor, const SparseRow& pivot) {
    SparseRow out;
    out.reserve(target.size() + pivot.size());
    auto a = target.begin();
    auto b = pivot.begin();
    while (a != target.end() || b != pivot.end()) {
        if (b == pivot.end() || (a != target.end() && a->first < b->first)) {
            out.push_back(std::move(*a++));
        } else if (a == target.end() || b->first < a->first) {
            out.emplace_back(b->first, -(factor * b->second));
            ++b;
        } else {
            GaussianRational v = std::move(a->second);
            v -= factor * b->second;
            if (!v.is_zero()) out.emplace_back(a->first, std::move(v));
            ++a;
            ++b;
        }
    }
    target = std::move(out);
}

inline void normalize_row(SparseRow& row) {
    if (row.empty() || row.front().second.is_one()) return;
    GaussianRational inv = row.front().second.inverse();
    for (auto& e : row) e.second *= inv;
}

// Row echelon form with unit leading entries, keyed by leading column.
// Rows are fed shortest-first, which keeps fill-in low on the very sparse
// differentials this library produces.
inline std::map<std::uint32_t, SparseRow> echelon(const SparseMatrix& m) {
    std::vector<std::size_t> order(m.rows());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return m.row(x).size() < m.row(y).size(); });

    std::map<std::uint32_t, SparseRow> pivots;
    for (std::size_t idx : order) {
        SparseRow row = m.row(idx);
        while (!row.empty()) {
            auto it = pivots.find(row.front().first);
            if (it == pivots.end()) break;
            GaussianRational factor = row.front().second;
            axpy_row(row, factor, it->second);
        }
        if (row.empty()) continue;
        normalize_row(row);
        std::uint32_t lead = row.front().first;
        pivots.emplace(lead, std::move(row));
    }
    return pivots;
}

}  // namespace detail

/// Exact rank over Q(i).
inline std::size_t rank(const SparseMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    // Eliminating along the shorter side is cheaper.
    if (m.rows() > m.cols()) return detail::echelon(m.transpose()).size();
    return detail::echelon(m).size();
}

/// Basis of the right null space {v : m v = 0}; cols() - rank(m) vectors.
inline std::vector<DenseVector> kernel_basis(const SparseMatrix& m) {
    auto pivots = detail::echelon(m);

    // Back-substitute to reduced row echelon form, largest lead first so that
    // each pivot row only meets already-reduced rows.
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        SparseRow& row = it->second;
        for (std::size_t pos = 1; pos < row.size();) {
            auto other = pivots.find(row[pos].first);
            if (other == pivots.end() || other->first == it->first) {
                ++pos;
                continue;
            }
            GaussianRational factor = row[pos].second;
            std::uint32_t col = row[pos].first;
            detail::axpy_row(row, factor, other->second);
            // Entries before col are untouched; resume right after it.
            pos = static_cast<std::size_t>(
                std::upper_bound(row.begin(), row.end(), col,
                                 [](std::uint32_t c, const auto& e) { return c < e.first; }) -
                row.begin());
        }
    }

    std::vector<DenseVector> basis;
    for (std::uint32_t free = 0; free < m.cols(); ++free) {
        if (pivots.count(free)) continue;
        DenseVector v(m.cols());
        v[free] = GaussianRational(1);
        for (const auto& [lead, row] : pivots) {
            auto e = std::lower_bound(row.begin(), row.end(), free,
                                      [](const auto& x, std::uint32_t c) { return x.first < c; });
            if (e != row.end() && e->first == free) v[lead] = -e->second;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace kbh
