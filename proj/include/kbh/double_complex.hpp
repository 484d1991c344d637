#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "sparse_matrix.hpp"

namespace kbh {

/// Dimensions of one spectral-sequence page. e[s][t] is E_r^{s,t};
/// d_ranks[s][t] is the rank of d_r : E_r^{s,t} -> E_r^{s+r,t-r+1}.
struct PageTable {
    int r = 0;
    std::vector<std::vector<std::int64_t>> e;
    std::vector<std::vector<std::int64_t>> d_ranks;

    std::int64_t total(int k) const {
        std::int64_t sum = 0;
        for (std::size_t s = 0; s < e.size(); ++s) {
            int t = k - static_cast<int>(s);
            if (t >= 0 && t < static_cast<int>(e[s].size())) sum += e[s][t];
        }
        return sum;
    }

    bool all_differentials_zero() const {
        for (const auto& row : d_ranks)
            for (auto v : row)
                if (v != 0) return false;
        return true;
    }

    friend bool operator==(const PageTable&, const PageTable&) = default;
};

/// Bounded first-quadrant double complex with blocks (s,t),
/// 0 <= s <= s_max, 0 <= t <= t_max, total degree s + t.
/// vertical(s,t): (s,t) -> (s,t+1); horizontal(s,t): (s,t) -> (s+1,t).
/// The two differentials anticommute, so D = vertical + horizontal.
///
/// Filtering by s and taking vertical cohomology first gives a spectral
/// sequence with d_r of bidegree (r, 1-r). All page dimensions are
/// computed from ranks of staircase submatrices of D: with
///   Z_r^s = {x in F^s : Dx in F^{s+r}},
///   E_r^s = Z_r^s / (Z_{r-1}^{s+1} + D Z_{r-1}^{s-r+1}),
/// and D Z_{r-1}^{s-r+1} meeting F^{s+1} exactly in D Z_r^{s-r+1}, every
/// dimension reduces to dim Z_r^s = dim F^s - rank(D: F^s -> C / F^{s+r}).
class DoubleComplex {
public:
    DoubleComplex(int s_max, int t_max) : s_max_(s_max), t_max_(t_max) {
        dims_.assign(s_max + 1, std::vector<std::size_t>(t_max + 1, 0));
        vertical_.assign(s_max + 1, std::vector<SparseMatrix>(t_max + 1));
        horizontal_.assign(s_max + 1, std::vector<SparseMatrix>(t_max + 1));
    }

    int s_max() const { return s_max_; }
    int t_max() const { return t_max_; }
    int max_degree() const { return s_max_ + t_max_; }

    std::size_t dim(int s, int t) const {
        if (s < 0 || s > s_max_ || t < 0 || t > t_max_) return 0;
        return dims_[s][t];
    }

    void set_dim(int s, int t, std::size_t d) { dims_.at(s).at(t) = d; }

    void set_vertical(int s, int t, SparseMatrix m) {
        check_shape(m, dim(s, t + 1), dim(s, t), "vertical");
        vertical_.at(s).at(t) = std::move(m);
    }
    void set_horizontal(int s, int t, SparseMatrix m) {
        check_shape(m, dim(s + 1, t), dim(s, t), "horizontal");
        horizontal_.at(s).at(t) = std::move(m);
    }

    const SparseMatrix& vertical(int s, int t) const { return vertical_.at(s).at(t); }
    const SparseMatrix& horizontal(int s, int t) const { return horizontal_.at(s).at(t); }

    // Block-wise D^2 = 0: vertical^2, horizontal^2 and the anticommutator.
    bool d_squared_zero() const {
        for (int s = 0; s <= s_max_; ++s)
            for (int t = 0; t <= t_max_; ++t) {
                if (t + 2 <= t_max_ && !is_zero(multiply(vertical_[s][t + 1], vertical_[s][t]))) return false;
                if (s + 2 <= s_max_ && !is_zero(multiply(horizontal_[s + 1][t], horizontal_[s][t]))) return false;
                if (s + 1 <= s_max_ && t + 1 <= t_max_) {
                    SparseMatrix a = multiply(vertical_[s + 1][t], horizontal_[s][t]);
                    SparseMatrix b = multiply(horizontal_[s][t + 1], vertical_[s][t]);
                    for (std::size_t r = 0; r < b.rows(); ++r)
                        for (const auto& [c, v] : b.row(r)) a.add(r, c, v);
                    if (!is_zero(a)) return false;
                }
            }
        return true;
    }

    std::size_t total_dim(int k) const {
        std::size_t sum = 0;
        for (int s = 0; s <= s_max_; ++s) sum += dim(s, k - s);
        return sum;
    }

    /// Total cohomology dimensions, k = 0..max_degree().
    std::vector<std::int64_t> total_cohomology() const {
        std::vector<std::int64_t> out;
        for (int k = 0; k <= max_degree(); ++k) {
            auto dk = static_cast<std::int64_t>(total_dim(k));
            out.push_back(dk - rank_of(k, 0, s_max_) - rank_of(k - 1, 0, s_max_));
        }
        return out;
    }

    /// Vertical cohomology dimension of column s at height t (the E_1 term).
    std::int64_t vertical_cohomology(int s, int t) const {
        auto d = static_cast<std::int64_t>(dim(s, t));
        std::int64_t out_rank = t <= t_max_ && t >= 0 ? static_cast<std::int64_t>(rank(vertical_[s][t])) : 0;
        std::int64_t in_rank = t >= 1 ? static_cast<std::int64_t>(rank(vertical_[s][t - 1])) : 0;
        return d - out_rank - in_rank;
    }

    /// Pages E_1 .. E_{r_max}. Page s_max+1 and later all equal E_infinity.
    std::vector<PageTable> pages(int r_max) const {
        if (r_max < 1) throw StructuralError("pages: r_max must be at least 1");
        std::vector<PageTable> out;
        PageTable current = page_dims(1);
        for (int r = 1; r <= r_max; ++r) {
            PageTable next = page_dims(r + 1);
            fill_ranks(current, next);
            out.push_back(current);
            current = std::move(next);
        }
        return out;
    }

    PageTable infinity_page() const {
        PageTable p = page_dims(s_max_ + 1);
        p.d_ranks.assign(s_max_ + 1, std::vector<std::int64_t>(t_max_ + 1, 0));
        return p;
    }

private:
    static void check_shape(const SparseMatrix& m, std::size_t rows, std::size_t cols, const char* what) {
        if (m.rows() != rows || m.cols() != cols)
            throw StructuralError(std::string("DoubleComplex: ") + what + " block has wrong shape");
    }

    // Rank of D in total degree k restricted to column blocks and row
    // blocks s in [lo, hi].
    std::int64_t rank_of(int k, int lo, int hi) const {
        if (k < 0 || k > max_degree()) return 0;
        lo = std::max(lo, 0);
        hi = std::min(hi, s_max_);
        if (lo > hi) return 0;
        auto key = std::make_tuple(k, lo, hi);
        {
            std::lock_guard<std::mutex> lock(cache_.mutex);
            auto it = cache_.values.find(key);
            if (it != cache_.values.end()) return it->second;
        }

        std::vector<std::size_t> col_offset(hi - lo + 2, 0), row_offset(hi - lo + 2, 0);
        for (int s = lo; s <= hi; ++s) {
            col_offset[s - lo + 1] = col_offset[s - lo] + dim(s, k - s);
            row_offset[s - lo + 1] = row_offset[s - lo] + dim(s, k + 1 - s);
        }
        SparseMatrix d(row_offset.back(), col_offset.back());
        for (int s = lo; s <= hi; ++s) {
            int t = k - s;
            if (t < 0 || t > t_max_ || dim(s, t) == 0) continue;
            if (t + 1 <= t_max_) place(d, vertical_[s][t], row_offset[s - lo], col_offset[s - lo]);
            if (s + 1 <= hi) place(d, horizontal_[s][t], row_offset[s + 1 - lo], col_offset[s - lo]);
        }
        auto value = static_cast<std::int64_t>(rank(d));
        std::lock_guard<std::mutex> lock(cache_.mutex);
        cache_.values.emplace(key, value);
        return value;
    }

    static void place(SparseMatrix& target, const SparseMatrix& block, std::size_t row0, std::size_t col0) {
        for (std::size_t r = 0; r < block.rows(); ++r)
            for (const auto& [c, v] : block.row(r)) target.set(row0 + r, col0 + c, v);
    }

    std::int64_t filtration_dim(int s, int k) const {
        std::int64_t sum = 0;
        for (int u = std::max(s, 0); u <= s_max_; ++u) sum += static_cast<std::int64_t>(dim(u, k - u));
        return sum;
    }

    // dim Z_r^s in total degree k; r may exceed s_max (then Z_r = Z_inf).
    std::int64_t cycles(int r, int s, int k) const {
        if (k < 0 || k > max_degree()) return 0;
        std::int64_t f = filtration_dim(s, k);
        if (r <= 0) return f;
        return f - rank_of(k, s, s + r - 1);
    }

    std::int64_t cycles_inf(int s, int k) const {
        if (k < 0 || k > max_degree()) return 0;
        return filtration_dim(s, k) - rank_of(k, s, s_max_);
    }

    // dim D(Z_r^u) for Z_r^u in degree k.
    std::int64_t boundary_image(int r, int u, int k) const { return cycles(r, u, k) - cycles_inf(u, k); }

    std::int64_t page_entry(int r, int s, int k) const {
        std::int64_t z = cycles(r, s, k);
        std::int64_t lower = cycles(r - 1, s + 1, k);
        int u = s - r + 1;
        std::int64_t b = boundary_image(r - 1, u, k - 1) - boundary_image(r, u, k - 1);
        return z - lower - b;
    }

    PageTable page_dims(int r) const {
        PageTable p;
        p.r = r;
        p.e.assign(s_max_ + 1, std::vector<std::int64_t>(t_max_ + 1, 0));
        for (int s = 0; s <= s_max_; ++s)
            for (int t = 0; t <= t_max_; ++t) {
                std::int64_t v = page_entry(r, s, s + t);
                if (v < 0) throw InternalError("spectral sequence: negative page dimension");
                if (v > static_cast<std::int64_t>(dim(s, t)))
                    throw InternalError("spectral sequence: page entry exceeds chain dimension");
                p.e[s][t] = v;
            }
        return p;
    }

    // Ranks of d_r from E_r and E_{r+1}: along each chain
    // (s,t) -> (s+r,t-r+1) -> ..., E_{r+1} = E_r - rank(out) - rank(in).
    void fill_ranks(PageTable& page, const PageTable& next) const {
        int r = page.r;
        page.d_ranks.assign(s_max_ + 1, std::vector<std::int64_t>(t_max_ + 1, 0));
        for (int s = 0; s <= s_max_; ++s)
            for (int t = 0; t <= t_max_; ++t) {
                std::int64_t in = 0;
                int src_s = s - r, src_t = t + r - 1;
                if (src_s >= 0 && src_t >= 0 && src_t <= t_max_) in = page.d_ranks[src_s][src_t];
                std::int64_t out = page.e[s][t] - next.e[s][t] - in;
                int dst_s = s + r, dst_t = t - r + 1;
                bool target_exists = dst_s <= s_max_ && dst_t >= 0 && dst_t <= t_max_;
                if (out < 0 || (!target_exists && out != 0))
                    throw InternalError("spectral sequence: inconsistent differential ranks at page " +
                                        std::to_string(r));
                page.d_ranks[s][t] = out;
            }
    }

    int s_max_;
    int t_max_;
    std::vector<std::vector<std::size_t>> dims_;
    std::vector<std::vector<SparseMatrix>> vertical_;
    std::vector<std::vector<SparseMatrix>> horizontal_;
    // Memoised staircase ranks; guarded so const queries may run concurrently.
    struct RankCache {
        std::mutex mutex;
        std::map<std::tuple<int, int, int>, std::int64_t> values;

        RankCache() = default;
        RankCache(const RankCache& o) : values(o.snapshot()) {}
        RankCache(RankCache&& o) noexcept : values(std::move(o.values)) {}
        RankCache& operator=(const RankCache& o) {
            if (this != &o) {
                auto copy = o.snapshot();
                std::lock_guard<std::mutex> lock(mutex);
                values = std::move(copy);
            }
            return *this;
        }
        RankCache& operator=(RankCache&& o) noexcept {
            values = std::move(o.values);
            return *this;
        }
        std::map<std::tuple<int, int, int>, std::int64_t> snapshot() const {
            std::lock_guard<std::mutex> lock(const_cast<std::mutex&>(mutex));
            return values;
        }
    };
    mutable RankCache cache_;
};

}  // namespace kbh
