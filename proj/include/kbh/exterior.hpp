#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "gaussian_rational.hpp"

namespace kbh {

// Generators are numbered 1..n in the public API; bit (k-1) of a mask
// stands for generator k.
using Mask = std::uint32_t;

inline constexpr int kMaxDim = 16;

constexpr Mask bit(int k) { return Mask{1} << (k - 1); }

constexpr int popcount(Mask m) { return std::popcount(m); }

constexpr Mask full_mask(int n) { return n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1; }

// Sign of sorting the concatenation of two increasing index sequences:
// (-1)^#{(a, b) in A x B : a > b}. Zero when they overlap.
constexpr int merge_sign(Mask a, Mask b) {
    if (a & b) return 0;
    int inversions = 0;
    for (Mask rest = b; rest; rest &= rest - 1) {
        Mask low = rest & (~rest + 1);
        inversions += std::popcount(a & ~((low << 1) - 1));
    }
    return (inversions & 1) ? -1 : 1;
}

inline std::vector<Mask> masks_of_weight(int n, int weight) {
    std::vector<Mask> out;
    for (Mask m = 0; m <= full_mask(n); ++m)
        if (std::popcount(m) == weight) out.push_back(m);
    return out;
}

inline std::string index_list(Mask m, int n) {
    std::string out;
    for (int k = 1; k <= n; ++k) {
        if (!(m & bit(k))) continue;
        if (n > 9 && !out.empty()) out += ',';
        out += std::to_string(k);
    }
    return out;
}

/// Basis element w^I ^ wb^J, written in the fixed order
/// w^1 < ... < w^n < wb^1 < ... < wb^n. Carries no sign.
struct Monomial {
    Mask hol = 0;
    Mask anti = 0;

    int p() const { return popcount(hol); }
    int q() const { return popcount(anti); }
    int degree() const { return p() + q(); }

    friend auto operator<=>(const Monomial&, const Monomial&) = default;

    // "w^134 ^ wb^35"; the empty monomial renders as "1".
    std::string str(int n) const {
        std::string out;
        if (hol) out = "w^" + index_list(hol, n);
        if (anti) {
            if (!out.empty()) out += " ^ ";
            out += "wb^" + index_list(anti, n);
        }
        return out.empty() ? "1" : out;
    }
};

// Sign and product of two monomials (sign 0 when they share a generator).
inline std::pair<int, Monomial> wedge(const Monomial& a, const Monomial& b) {
    int s = merge_sign(a.hol, b.hol) * merge_sign(a.anti, b.anti);
    if (s == 0) return {0, {}};
    if ((a.q() * b.p()) & 1) s = -s;
    return {s, Monomial{a.hol | b.hol, a.anti | b.anti}};
}

namespace detail {

template <class Terms, class RenderKey>
std::string render_terms(const Terms& terms, RenderKey render_key) {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [key, c] : terms) {
        // Pure real or pure imaginary coefficients carry their sign outside.
        bool simple = c.is_real() || sgn(c.re()) == 0;
        bool negative = simple && (sgn(c.re()) < 0 || sgn(c.im()) < 0);
        GaussianRational mag = negative ? -c : c;
        std::string mag_str = simple ? mag.str() : "(" + mag.str() + ")";
        out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
        std::string name = render_key(key);
        if (name == "1")
            out += mag_str;
        else
            out += (mag.is_one() ? "" : mag_str + " ") + name;
        first = false;
    }
    return out;
}

}  // namespace detail

/// Sparse linear combination of monomials over Q(i) in n complex
/// dimensions. Zero coefficients are never stored.
class Form {
public:
    using Terms = std::map<Monomial, GaussianRational>;

    Form() = default;
    explicit Form(int n) : n_(n) { check_dim(n); }
    Form(int n, const Monomial& m, GaussianRational c = GaussianRational(1)) : n_(n) {
        check_dim(n);
        check_monomial(m);
        add(m, c);
    }

    static Form scalar(int n, const GaussianRational& c) { return Form(n, Monomial{}, c); }
    static Form generator(int n, int k) { return Form(n, Monomial{bit(k), 0}); }
    static Form bar_generator(int n, int k) { return Form(n, Monomial{0, bit(k)}); }

    int n() const { return n_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    GaussianRational coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? GaussianRational() : it->second;
    }

    void add(const Monomial& m, const GaussianRational& c) {
        if (c.is_zero()) return;
        check_monomial(m);
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Form& operator+=(const Form& o) {
        same_dim(o);
        for (const auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }
    Form& operator-=(const Form& o) {
        same_dim(o);
        for (const auto& [m, c] : o.terms_) add(m, -c);
        return *this;
    }
    Form& operator*=(const GaussianRational& c) {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, v] : terms_) v *= c;
        return *this;
    }
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(const GaussianRational& c, Form a) { return a *= c; }
    Form operator-() const { return GaussianRational(-1) * *this; }

    friend bool operator==(const Form& a, const Form& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }

    // Coefficient-wise conjugate with holomorphic and antiholomorphic
    // indices exchanged. Maps (p,q)-forms to (q,p)-forms; for monomials
    // w^I ^ wb^J -> wb^I ^ w^J, which is reordered into w^J ^ wb^I.
    Form conjugate() const {
        Form out(n_);
        for (const auto& [m, c] : terms_) {
            int s = ((m.p() * m.q()) & 1) ? -1 : 1;
            out.add(Monomial{m.anti, m.hol}, GaussianRational(s) * c.conj());
        }
        return out;
    }

    bool is_homogeneous(int p, int q) const {
        for (const auto& [m, c] : terms_)
            if (m.p() != p || m.q() != q) return false;
        return true;
    }

    std::string str() const {
        return detail::render_terms(terms_, [&](const Monomial& m) { return m.str(n_); });
    }

private:
    static void check_dim(int n) {
        if (n < 0 || n > kMaxDim) throw StructuralError("Form: dimension out of range");
    }
    void check_monomial(const Monomial& m) const {
        if ((m.hol | m.anti) & ~full_mask(n_)) throw StructuralError("Form: generator index exceeds dimension");
    }
    void same_dim(const Form& o) const {
        if (o.n_ != n_) throw StructuralError("Form: mismatched dimension");
    }

    int n_ = 0;
    Terms terms_;
};

inline Form wedge(const Form& a, const Form& b) {
    if (a.n() != b.n()) throw StructuralError("wedge: mismatched dimension");
    Form out(a.n());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            auto [s, m] = wedge(ma, mb);
            if (s != 0) out.add(m, GaussianRational(s) * ca * cb);
        }
    return out;
}

/// Constant-coefficient holomorphic polyvector sum c_I X_I over n
/// generators X_1..X_n.
class Polyvector {
public:
    using Terms = std::map<Mask, GaussianRational>;

    Polyvector() = default;
    explicit Polyvector(int n) : n_(n) {
        if (n < 0 || n > kMaxDim) throw StructuralError("Polyvector: dimension out of range");
    }
    Polyvector(int n, Mask m, GaussianRational c = GaussianRational(1)) : Polyvector(n) { add(m, c); }

    static Polyvector vector_field(int n, int k) { return Polyvector(n, bit(k)); }
    static Polyvector bivector(int n, int i, int j, GaussianRational c = GaussianRational(1)) {
        if (i == j) return Polyvector(n);
        int s = i < j ? 1 : -1;
        return Polyvector(n, bit(i) | bit(j), GaussianRational(s) * c);
    }

    int n() const { return n_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Degree of a homogeneous polyvector; -1 for zero or mixed degree.
    int degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) {
            if (d >= 0 && popcount(m) != d) return -1;
            d = popcount(m);
        }
        return d;
    }

    GaussianRational coefficient(Mask m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? GaussianRational() : it->second;
    }

    void add(Mask m, const GaussianRational& c) {
        if (c.is_zero()) return;
        if (m & ~full_mask(n_)) throw StructuralError("Polyvector: generator index exceeds dimension");
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Polyvector& operator+=(const Polyvector& o) {
        if (o.n_ != n_) throw StructuralError("Polyvector: mismatched dimension");
        for (const auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }
    Polyvector& operator-=(const Polyvector& o) {
        if (o.n_ != n_) throw StructuralError("Polyvector: mismatched dimension");
        for (const auto& [m, c] : o.terms_) add(m, -c);
        return *this;
    }
    Polyvector& operator*=(const GaussianRational& c) {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, v] : terms_) v *= c;
        return *this;
    }
    friend Polyvector operator+(Polyvector a, const Polyvector& b) { return a += b; }
    friend Polyvector operator-(Polyvector a, const Polyvector& b) { return a -= b; }
    friend Polyvector operator*(const GaussianRational& c, Polyvector a) { return a *= c; }

    friend bool operator==(const Polyvector& a, const Polyvector& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }

    // "X1^X2 - 2 X2^X3"; a degree-0 term renders as its coefficient.
    std::string str() const {
        return detail::render_terms(terms_, [&](Mask m) {
            if (m == 0) return std::string("1");
            std::string out;
            for (int k = 1; k <= n_; ++k)
                if (m & bit(k)) out += (out.empty() ? "X" : "^X") + std::to_string(k);
            return out;
        });
    }

private:
    int n_ = 0;
    Terms terms_;
};

inline Polyvector wedge(const Polyvector& a, const Polyvector& b) {
    if (a.n() != b.n()) throw StructuralError("wedge: mismatched dimension");
    Polyvector out(a.n());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            int s = merge_sign(ma, mb);
            if (s != 0) out.add(ma | mb, GaussianRational(s) * ca * cb);
        }
    return out;
}

/// iota_{X_k} on a monomial: removes w^k, with the sign of moving it to
/// the front. Sign 0 when w^k is absent.
inline std::pair<int, Monomial> interior(int k, const Monomial& m) {
    if (!(m.hol & bit(k))) return {0, m};
    int before = popcount(m.hol & (bit(k) - 1));
    return {(before & 1) ? -1 : 1, Monomial{m.hol & ~bit(k), m.anti}};
}

/// Interior product of a polyvector into a form. A term X_{i1}^...^X_{ia}
/// (i1 < ... < ia) acts as iota_{X_ia} o ... o iota_{X_i1}, so that
/// iota_{X_i ^ X_j}(w^i ^ w^j) = 1 for i < j.
inline Form interior(const Polyvector& v, const Form& a) {
    if (v.n() != a.n()) throw StructuralError("interior: mismatched dimension");
    Form out(a.n());
    for (const auto& [mv, cv] : v.terms()) {
        for (const auto& [ma, ca] : a.terms()) {
            if ((ma.hol & mv) != mv) continue;
            int sign = 1;
            Monomial cur = ma;
            for (Mask rest = mv; rest; rest &= rest - 1) {
                int k = std::countr_zero(rest) + 1;
                auto [s, next] = interior(k, cur);
                sign *= s;
                cur = next;
            }
            out.add(cur, GaussianRational(sign) * cv * ca);
        }
    }
    return out;
}

/// iota_pi for a bivector pi; lowers bidegree by (2,0).
inline Form contract(const Polyvector& pi, const Form& a) {
    if (pi.n() != a.n()) throw StructuralError("contract: mismatched dimension");
    if (!pi.is_zero() && pi.degree() != 2) throw StructuralError("contract: pi must be a bivector");
    return interior(pi, a);
}

/// pi^sharp(alpha) for a (1,0)-form alpha: contraction of alpha into the
/// first slot of pi, so that <pi^sharp(alpha), beta> = iota_pi(alpha ^ beta).
inline Polyvector anchor(const Polyvector& pi, const Form& alpha) {
    if (pi.n() != alpha.n()) throw StructuralError("anchor: mismatched dimension");
    if (!pi.is_zero() && pi.degree() != 2) throw StructuralError("anchor: pi must be a bivector");
    if (!alpha.is_homogeneous(1, 0)) throw StructuralError("anchor: alpha must have bidegree (1,0)");
    Polyvector out(pi.n());
    for (const auto& [mp, cp] : pi.terms()) {
        int i = std::countr_zero(mp) + 1;
        int j = std::countr_zero(mp & (mp - 1)) + 1;
        for (const auto& [ma, ca] : alpha.terms()) {
            if (ma.hol == bit(i)) out.add(bit(j), cp * ca);
            if (ma.hol == bit(j)) out.add(bit(i), -(cp * ca));
        }
    }
    return out;
}

/// pi(alpha, beta) = <pi^sharp(alpha), beta> for (1,0)-forms.
inline GaussianRational pairing(const Polyvector& pi, const Form& alpha, const Form& beta) {
    if (!beta.is_homogeneous(1, 0)) throw StructuralError("pairing: beta must have bidegree (1,0)");
    Polyvector v = anchor(pi, alpha);
    GaussianRational out;
    for (const auto& [mv, cv] : v.terms()) out += cv * beta.coefficient(Monomial{mv, 0});
    return out;
}

}  // namespace kbh
