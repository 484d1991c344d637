#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "double_complex.hpp"
#include "errors.hpp"
#include "exterior.hpp"
#include "lie_model.hpp"
#include "sparse_matrix.hpp"

namespace kbh {

/// Dimensions indexed by total degree k = 0..2n.
struct DimVector {
    int n = 0;
    std::vector<std::int64_t> dims;

    DimVector() = default;
    DimVector(int n_, std::vector<std::int64_t> d) : n(n_), dims(std::move(d)) {
        if (n < 0) throw StructuralError("DimVector: negative dimension");
        if (dims.size() != static_cast<std::size_t>(2 * n + 1))
            throw StructuralError("DimVector: expected " + std::to_string(2 * n + 1) + " entries, got " +
                                  std::to_string(dims.size()));
        for (auto v : dims)
            if (v < 0) throw StructuralError("DimVector: negative entry");
    }

    static DimVector zero(int n) { return DimVector(n, std::vector<std::int64_t>(2 * n + 1, 0)); }

    // Entry k, or 0 outside 0..2n.
    std::int64_t operator[](int k) const {
        if (k < 0 || k > 2 * n) return 0;
        return dims[static_cast<std::size_t>(k)];
    }

    friend bool operator==(const DimVector&, const DimVector&) = default;
};

/// Table h[p][q], 0 <= p, q <= n.
struct HodgeDiamond {
    int n = 0;
    std::vector<std::vector<std::int64_t>> h;

    HodgeDiamond() = default;
    HodgeDiamond(int n_, std::vector<std::vector<std::int64_t>> table) : n(n_), h(std::move(table)) {
        if (n < 0) throw StructuralError("HodgeDiamond: negative dimension");
        if (h.size() != static_cast<std::size_t>(n + 1)) throw StructuralError("HodgeDiamond: expected n+1 rows");
        for (const auto& row : h) {
            if (row.size() != static_cast<std::size_t>(n + 1))
                throw StructuralError("HodgeDiamond: expected n+1 columns");
            for (auto v : row)
                if (v < 0) throw StructuralError("HodgeDiamond: negative entry");
        }
    }

    std::int64_t at(int p, int q) const {
        if (p < 0 || q < 0 || p > n || q > n) return 0;
        return h[p][q];
    }

    friend bool operator==(const HodgeDiamond&, const HodgeDiamond&) = default;
};

inline std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t out = 1;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

namespace detail {

inline std::map<Mask, std::size_t> index_of(const std::vector<Mask>& masks) {
    std::map<Mask, std::size_t> out;
    for (std::size_t i = 0; i < masks.size(); ++i) out.emplace(masks[i], i);
    return out;
}

// Basis of the invariant (p,q)-forms: holomorphic masks outer, antiholomorphic inner.
struct BidegreeBasis {
    int n;
    std::vector<std::vector<Mask>> by_weight;
    std::vector<std::map<Mask, std::size_t>> index;

    explicit BidegreeBasis(int n_) : n(n_) {
        for (int w = 0; w <= n; ++w) {
            by_weight.push_back(masks_of_weight(n, w));
            index.push_back(index_of(by_weight.back()));
        }
    }

    std::size_t dim(int p, int q) const { return by_weight[p].size() * by_weight[q].size(); }

    std::size_t position(Mask first, Mask second) const {
        int p = popcount(first), q = popcount(second);
        return index[p].at(first) * by_weight[q].size() + index[q].at(second);
    }
};

// Matrix of a linear operator on forms from bidegree (p,q) to (p2,q2).
template <class Op>
SparseMatrix form_operator_matrix(const BidegreeBasis& basis, int p, int q, int p2, int q2, Op op) {
    int n = basis.n;
    bool target_ok = p2 >= 0 && p2 <= n && q2 >= 0 && q2 <= n;
    SparseMatrix m(target_ok ? basis.dim(p2, q2) : 0, basis.dim(p, q));
    if (!target_ok) return m;
    for (Mask h : basis.by_weight[p])
        for (Mask a : basis.by_weight[q]) {
            std::size_t col = basis.position(h, a);
            Form image = op(Monomial{h, a});
            for (const auto& [mono, c] : image.terms()) {
                if (mono.p() != p2 || mono.q() != q2) throw InternalError("operator left its target bidegree");
                m.add(basis.position(mono.hol, mono.anti), col, c);
            }
        }
    return m;
}

}  // namespace detail

/// Double complex (Lambda^{p,q}, del_pi, dbar) with column s = n - p and
/// row t = q, so the total degree is k = n - p + q.
inline DoubleComplex koszul_brylinski_complex(const LieModel& model, const Polyvector& pi) {
    int n = model.n();
    detail::BidegreeBasis basis(n);
    DoubleComplex dc(n, n);
    for (int s = 0; s <= n; ++s)
        for (int t = 0; t <= n; ++t) dc.set_dim(s, t, basis.dim(n - s, t));
    for (int s = 0; s <= n; ++s)
        for (int t = 0; t <= n; ++t) {
            int p = n - s, q = t;
            if (t + 1 <= n)
                dc.set_vertical(s, t, detail::form_operator_matrix(basis, p, q, p, q + 1,
                                                                   [&](const Monomial& m) { return model.delbar(m); }));
            if (s + 1 <= n)
                dc.set_horizontal(s, t, detail::form_operator_matrix(basis, p, q, p - 1, q, [&](const Monomial& m) {
                                      return d_pi(model, pi, m);
                                  }));
        }
    return dc;
}

/// Double complex (Lambda^p g^{1,0} (x) Lambda^{0,q}, b_pi, dbar) with
/// s = p, t = q. On P (x) phi, b_pi acts as (-1)^q [pi, P] (x) phi and dbar
/// as P (x) dbar(phi); the sign makes them anticommute.
inline DoubleComplex lichnerowicz_poisson_complex(const LieModel& model, const Polyvector& pi) {
    int n = model.n();
    detail::BidegreeBasis basis(n);
    DoubleComplex dc(n, n);
    for (int s = 0; s <= n; ++s)
        for (int t = 0; t <= n; ++t) dc.set_dim(s, t, basis.dim(s, t));

    // [pi, X_P] for every polyvector mask P.
    std::map<Mask, Polyvector> bracket;
    for (Mask m = 0; m <= full_mask(n); ++m) bracket.emplace(m, schouten(pi, Polyvector(n, m), model));

    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            if (q + 1 <= n) {
                SparseMatrix v(basis.dim(p, q + 1), basis.dim(p, q));
                for (Mask P : basis.by_weight[p])
                    for (Mask J : basis.by_weight[q]) {
                        Form image = model.delbar(Monomial{0, J});
                        for (const auto& [mono, c] : image.terms())
                            v.add(basis.position(P, mono.anti), basis.position(P, J), c);
                    }
                dc.set_vertical(p, q, std::move(v));
            }
            if (p + 1 <= n) {
                SparseMatrix h(basis.dim(p + 1, q), basis.dim(p, q));
                GaussianRational sign((q & 1) ? -1 : 1);
                for (Mask P : basis.by_weight[p])
                    for (Mask J : basis.by_weight[q])
                        for (const auto& [mask, c] : bracket.at(P).terms()) {
                            if (popcount(mask) != p + 1) throw InternalError("Schouten bracket changed degree");
                            h.add(basis.position(mask, J), basis.position(P, J), sign * c);
                        }
                dc.set_horizontal(p, q, std::move(h));
            }
        }
    return dc;
}

/// Lie-algebra Dolbeault numbers h^{p,q} = dim H^q(Lambda^{p,*}, dbar).
inline HodgeDiamond dolbeault_dims(const LieModel& model) {
    require_valid(model);
    DoubleComplex dc = koszul_brylinski_complex(model, Polyvector(model.n()));
    int n = model.n();
    std::vector<std::vector<std::int64_t>> h(n + 1, std::vector<std::int64_t>(n + 1, 0));
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) h[p][q] = dc.vertical_cohomology(n - p, q);
    // dbar only sees the antiholomorphic factor, so every row is a
    // binomial multiple of row 0.
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q)
            if (h[p][q] != binomial(n, p) * h[0][q])
                throw InternalError("dolbeault_dims: product law h^{p,q} = C(n,p) h^{0,q} violated");
    return HodgeDiamond(n, std::move(h));
}

inline void require_d_squared_zero(const DoubleComplex& dc, const char* what) {
    if (!dc.d_squared_zero()) throw InternalError(std::string(what) + ": total differential does not square to zero");
}

/// Koszul-Brylinski homology dimensions, total degree k = n - p + q.
inline DimVector kb_dims(const LieModel& model, const Polyvector& pi) {
    require_valid(model);
    require_poisson(model, pi);
    DoubleComplex dc = koszul_brylinski_complex(model, pi);
    require_d_squared_zero(dc, "kb_dims");
    return DimVector(model.n(), dc.total_cohomology());
}

/// Lichnerowicz-Poisson cohomology dimensions, total degree k = p + q.
inline DimVector lp_dims(const LieModel& model, const Polyvector& pi) {
    require_valid(model);
    require_poisson(model, pi);
    DoubleComplex dc = lichnerowicz_poisson_complex(model, pi);
    require_d_squared_zero(dc, "lp_dims");
    return DimVector(model.n(), dc.total_cohomology());
}

struct SpectralSequence {
    std::vector<PageTable> pages;  // E_1 .. E_{r_max}
    PageTable infinity;
};

/// Pages of the Dolbeault-Koszul-Brylinski spectral sequence,
/// E_1^{s,t} = h^{n-s,t}, d_r of bidegree (r, 1-r).
inline SpectralSequence spectral_sequence(const LieModel& model, const Polyvector& pi, int r_max) {
    require_valid(model);
    require_poisson(model, pi);
    DoubleComplex dc = koszul_brylinski_complex(model, pi);
    require_d_squared_zero(dc, "spectral_pages");
    SpectralSequence out{dc.pages(r_max), dc.infinity_page()};
    auto totals = dc.total_cohomology();
    for (int k = 0; k <= dc.max_degree(); ++k)
        if (out.infinity.total(k) != totals[static_cast<std::size_t>(k)])
            throw InternalError("spectral sequence does not converge to the total cohomology at k = " +
                                std::to_string(k));
    return out;
}

inline std::vector<PageTable> spectral_pages(const LieModel& model, const Polyvector& pi, int r_max) {
    return spectral_sequence(model, pi, r_max).pages;
}

/// Sum of h^{p,q} over p - q = n - k: the E_1 total in degree k.
inline DimVector e1_totals(const HodgeDiamond& h) {
    int n = h.n;
    std::vector<std::int64_t> out(2 * n + 1, 0);
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) out[static_cast<std::size_t>(n - p + q)] += h.h[p][q];
    return DimVector(n, std::move(out));
}

struct DegeneracyCheck {
    bool degenerate = true;
    std::vector<std::int64_t> defect;  // indexed by k = 0..2n
};

/// E_1-degeneracy by the dimension criterion: defect[k] = E_1 total minus
/// dim H_k, which is never negative.
inline DegeneracyCheck check_e1_degeneracy(const LieModel& model, const Polyvector& pi) {
    DimVector e1 = e1_totals(dolbeault_dims(model));
    DimVector kb = kb_dims(model, pi);
    DegeneracyCheck out;
    for (int k = 0; k <= 2 * model.n(); ++k) {
        std::int64_t d = e1[k] - kb[k];
        if (d < 0) throw InternalError("check_e1_degeneracy: homology exceeds the E_1 bound");
        out.defect.push_back(d);
        if (d != 0) out.degenerate = false;
    }
    return out;
}

inline bool check_duality(const DimVector& dv) {
    for (int k = 0; k <= 2 * dv.n; ++k)
        if (dv[k] != dv[2 * dv.n - k]) return false;
    return true;
}

/// del_pi of the invariant holomorphic volume form w^{12...n} vanishes.
inline bool check_unimodular(const LieModel& model, const Polyvector& pi) {
    require_poisson(model, pi);
    Form volume(model.n(), Monomial{full_mask(model.n()), 0});
    return d_pi(model, pi, volume).is_zero();
}

inline std::int64_t euler_characteristic(const DimVector& dv) {
    std::int64_t sum = 0;
    for (int k = 0; k <= 2 * dv.n; ++k) sum += (k % 2 == 0 ? 1 : -1) * dv[k];
    return sum;
}

/// sum_{p,q} (-1)^{n-p+q} h^{p,q}.
inline std::int64_t euler_characteristic(const HodgeDiamond& h) { return euler_characteristic(e1_totals(h)); }

}  // namespace kbh
