#pragma once

#include <bit>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "exterior.hpp"
#include "sparse_matrix.hpp"

namespace kbh {

/// Invariant model of a complex-parallelisable Lie group: dimension n and
/// the holomorphic structure equations dw^k (absent generators are closed).
///
/// The barred generators follow the conjugate equations
/// dbar wb^k = conj(dw^k), and dbar w^k = 0 = del wb^k.
class LieModel {
public:
    LieModel() = default;

    LieModel(std::string name, int n, std::map<int, Form> d_hol) : name_(std::move(name)), n_(n) {
        if (n < 0 || n > kMaxDim) throw StructuralError("LieModel: dimension out of range");
        hol_d_.assign(n + 1, Form(n));
        bar_d_.assign(n + 1, Form(n));
        for (auto& [k, form] : d_hol) {
            if (k < 1 || k > n)
                throw StructuralError("LieModel: structure equation for unknown generator w" + std::to_string(k));
            if (form.n() != n) throw StructuralError("LieModel: structure form has wrong dimension");
            if (!form.is_homogeneous(2, 0))
                throw StructuralError("LieModel: dw" + std::to_string(k) + " must be a (2,0)-form");
            hol_d_[k] = form;
            bar_d_[k] = form.conjugate();
        }
    }

    const std::string& name() const { return name_; }
    int n() const { return n_; }

    // dw^k as supplied (zero for closed generators).
    const Form& structure(int k) const { return hol_d_.at(check_index(k)); }
    // dbar wb^k.
    const Form& bar_structure(int k) const { return bar_d_.at(check_index(k)); }

    std::map<int, Form> structure_equations() const {
        std::map<int, Form> out;
        for (int k = 1; k <= n_; ++k)
            if (!hol_d_[k].is_zero()) out.emplace(k, hol_d_[k]);
        return out;
    }

    /// Structure constant c^k_{ij} of [X_i, X_j] = sum_k c^k_{ij} X_k,
    /// recovered from <dw^k, X_i ^ X_j> = -c^k_{ij}.
    GaussianRational structure_constant(int i, int j, int k) const {
        if (i == j) return {};
        int s = i < j ? 1 : -1;
        return GaussianRational(-s) * structure(k).coefficient(Monomial{bit(i) | bit(j), 0});
    }

    Polyvector bracket(int i, int j) const {
        Polyvector out(n_);
        for (int k = 1; k <= n_; ++k) out.add(bit(k), structure_constant(i, j, k));
        return out;
    }

    // Holomorphic part del and antiholomorphic part dbar of the invariant
    // exterior derivative, as graded derivations.
    Form del(const Form& a) const { return derive(a, hol_d_, true); }
    Form delbar(const Form& a) const { return derive(a, bar_d_, false); }

    Form del(const Monomial& m) const { return derive(m, hol_d_, true); }
    Form delbar(const Monomial& m) const { return derive(m, bar_d_, false); }

    friend bool operator==(const LieModel& a, const LieModel& b) {
        return a.name_ == b.name_ && a.n_ == b.n_ && a.hol_d_ == b.hol_d_;
    }

private:
    int check_index(int k) const {
        if (k < 1 || k > n_) throw StructuralError("LieModel: generator index out of range");
        return k;
    }

    // d(g_1 ^ ... ^ g_m) = sum_r (-1)^(r-1) d(g_r) ^ (g_1 ^ .. g_r^ .. ^ g_m);
    // d(g_r) has even degree, so moving it to the front costs no sign.
    Form derive(const Monomial& m, const std::vector<Form>& diffs, bool holomorphic) const {
        Form out(n_);
        Mask gens = holomorphic ? m.hol : m.anti;
        int offset = holomorphic ? 0 : m.p();
        for (Mask rest = gens; rest; rest &= rest - 1) {
            int k = std::countr_zero(rest) + 1;
            const Form& dk = diffs[k];
            if (dk.is_zero()) continue;
            int position = offset + popcount(gens & (bit(k) - 1));
            Monomial remainder = holomorphic ? Monomial{m.hol & ~bit(k), m.anti} : Monomial{m.hol, m.anti & ~bit(k)};
            int sign = (position & 1) ? -1 : 1;
            for (const auto& [md, cd] : dk.terms()) {
                auto [s, prod] = wedge(md, remainder);
                if (s != 0) out.add(prod, GaussianRational(s * sign) * cd);
            }
        }
        return out;
    }

    Form derive(const Form& a, const std::vector<Form>& diffs, bool holomorphic) const {
        if (a.n() != n_) throw StructuralError("LieModel: form has wrong dimension");
        Form out(n_);
        for (const auto& [m, c] : a.terms()) out += c * derive(m, diffs, holomorphic);
        return out;
    }

    std::string name_;
    int n_ = 0;
    std::vector<Form> hol_d_;
    std::vector<Form> bar_d_;
};

struct ValidationReport {
    bool valid = true;
    // Generators k with del(dw^k) != 0, together with that 3-form.
    std::vector<std::pair<int, Form>> failures;
};

/// Integrability: del^2 w^k = 0 for every generator (the Jacobi identity of
/// the dual Lie algebra).
inline ValidationReport validate(const LieModel& model) {
    ValidationReport report;
    for (int k = 1; k <= model.n(); ++k) {
        Form dd = model.del(model.structure(k));
        if (!dd.is_zero()) {
            report.valid = false;
            report.failures.emplace_back(k, std::move(dd));
        }
    }
    return report;
}

inline void require_valid(const LieModel& model) {
    auto report = validate(model);
    if (!report.valid) {
        const auto& [k, witness] = report.failures.front();
        throw DomainRefusal("model '" + model.name() + "' is not integrable: d(dw" + std::to_string(k) +
                            ") = " + witness.str());
    }
}

/// Nilpotency of the Lie algebra, via the lower central series.
inline bool is_nilpotent(const LieModel& model) {
    int n = model.n();
    // Current term of the series as a spanning set of coefficient vectors.
    std::vector<Polyvector> span;
    for (int k = 1; k <= n; ++k) span.push_back(Polyvector::vector_field(n, k));
    std::size_t dim = static_cast<std::size_t>(n);
    while (dim > 0) {
        std::vector<Polyvector> next;
        for (int i = 1; i <= n; ++i)
            for (const auto& v : span) {
                Polyvector b(n);
                for (const auto& [m, c] : v.terms()) b += c * model.bracket(i, std::countr_zero(m) + 1);
                if (!b.is_zero()) next.push_back(std::move(b));
            }
        SparseMatrix mat(next.size(), static_cast<std::size_t>(n));
        for (std::size_t r = 0; r < next.size(); ++r)
            for (const auto& [m, c] : next[r].terms()) mat.set(r, std::countr_zero(m), c);
        std::size_t next_dim = rank(mat);
        if (next_dim == dim) return false;
        dim = next_dim;
        span = std::move(next);
    }
    return true;
}

namespace detail {

inline Polyvector schouten_monomials(const LieModel& model, Mask a, Mask b) {
    int n = model.n();
    Polyvector out(n);
    int r = 0;
    for (Mask ra = a; ra; ra &= ra - 1, ++r) {
        int i = std::countr_zero(ra) + 1;
        Mask a_rest = a & ~bit(i);
        int s = 0;
        for (Mask rb = b; rb; rb &= rb - 1, ++s) {
            int j = std::countr_zero(rb) + 1;
            Mask b_rest = b & ~bit(j);
            Polyvector xy = model.bracket(i, j);
            if (xy.is_zero()) continue;
            // (-1)^{r+s} [X_i, X_j] ^ A\X_i ^ B\X_j with 0-based r, s.
            int sign = ((r + s) & 1) ? -1 : 1;
            int tail = merge_sign(a_rest, b_rest);
            if (tail == 0) continue;
            for (const auto& [mk, ck] : xy.terms()) {
                int head = merge_sign(mk, a_rest | b_rest);
                if (head == 0) continue;
                out.add(mk | a_rest | b_rest, GaussianRational(sign * tail * head) * ck);
            }
        }
    }
    return out;
}

}  // namespace detail

/// Schouten bracket of constant invariant polyvectors, extending the Lie
/// bracket of the model by the graded biderivation rule.
inline Polyvector schouten(const Polyvector& a, const Polyvector& b, const LieModel& model) {
    if (a.n() != model.n() || b.n() != model.n()) throw StructuralError("schouten: mismatched dimension");
    Polyvector out(model.n());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            if (ma == 0 || mb == 0) continue;
            out += (ca * cb) * detail::schouten_monomials(model, ma, mb);
        }
    return out;
}

/// Koszul-Brylinski operator del_pi = iota_pi o del - del o iota_pi,
/// bidegree (-1, 0).
inline Form d_pi(const LieModel& model, const Polyvector& pi, const Form& a) {
    return contract(pi, model.del(a)) - model.del(contract(pi, a));
}

inline Form d_pi(const LieModel& model, const Polyvector& pi, const Monomial& m) {
    return d_pi(model, pi, Form(model.n(), m));
}

/// Every basis monomial of the invariant bigraded algebra, ordered by
/// (p, q) and then by mask.
inline std::vector<Monomial> all_monomials(int n) {
    std::vector<Monomial> out;
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q)
            for (Mask h : masks_of_weight(n, p))
                for (Mask a : masks_of_weight(n, q)) out.push_back(Monomial{h, a});
    return out;
}

struct PoissonCheck {
    bool poisson = false;
    // [pi, pi]_S; zero exactly when poisson.
    Polyvector witness;
    // Whether del_pi o del_pi vanishes on every basis monomial.
    bool operator_squares_to_zero = true;
};

/// [pi, pi]_S = 0 decides. The operator test del_pi^2 = 0 is implied by
/// it, so a Poisson pi with del_pi^2 != 0 is an internal error. The
/// converse fails in general: del_pi^2 only sees [pi,pi]_S through its
/// action on invariant forms, which can vanish for a nonzero trivector.
inline PoissonCheck check_poisson(const LieModel& model, const Polyvector& pi) {
    if (pi.n() != model.n()) throw StructuralError("check_poisson: mismatched dimension");
    if (!pi.is_zero() && pi.degree() != 2) throw StructuralError("check_poisson: pi must be a bivector");
    PoissonCheck out;
    out.witness = schouten(pi, pi, model);
    out.poisson = out.witness.is_zero();
    for (const Monomial& m : all_monomials(model.n())) {
        Form once = d_pi(model, pi, m);
        if (once.is_zero()) continue;
        if (!d_pi(model, pi, once).is_zero()) {
            out.operator_squares_to_zero = false;
            break;
        }
    }
    if (out.poisson && !out.operator_squares_to_zero)
        throw InternalError("check_poisson: [pi,pi]_S = 0 but del_pi^2 != 0 for pi = " + pi.str());
    return out;
}

inline void require_poisson(const LieModel& model, const Polyvector& pi) {
    auto check = check_poisson(model, pi);
    if (!check.poisson)
        throw DomainRefusal("pi = " + pi.str() + " is not Poisson: [pi,pi]_S = " + check.witness.str());
}

/// Lie derivative L_X = iota_X o del + del o iota_X along a constant
/// holomorphic vector field.
inline Form lie_derivative(const LieModel& model, const Polyvector& x, const Form& a) {
    if (!x.is_zero() && x.degree() != 1) throw StructuralError("lie_derivative: x must be a vector field");
    return interior(x, model.del(a)) + model.del(interior(x, a));
}

/// [alpha, beta] = L_{pi#alpha} beta - L_{pi#beta} alpha - del(pi(alpha, beta))
/// on invariant (1,0)-forms.
inline Form form_bracket(const LieModel& model, const Polyvector& pi, const Form& alpha, const Form& beta) {
    if (!alpha.is_homogeneous(1, 0) || !beta.is_homogeneous(1, 0))
        throw StructuralError("form_bracket: arguments must have bidegree (1,0)");
    Form out = lie_derivative(model, anchor(pi, alpha), beta);
    out -= lie_derivative(model, anchor(pi, beta), alpha);
    out -= model.del(Form::scalar(model.n(), pairing(pi, alpha, beta)));
    return out;
}

}  // namespace kbh
