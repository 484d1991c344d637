#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "homology.hpp"

namespace kbh {

/// Inputs of the blow-up combinator: the ambient table x (dimension n),
/// the centre table z (dimension n - c), the codimension c, and the
/// caller's assertion that the centre satisfies the ddbar-lemma.
struct BlowupSpec {
    DimVector x;
    DimVector z;
    int c = 2;
    bool z_ddbar = false;
};

/// H_k(blow-up) = H_k(X) + H_{k-c}(Z)^{c-1}, valid when Z satisfies the
/// ddbar-lemma. Without it the correction term is a quotient that
/// dimension data cannot determine, so the call is refused.
inline DimVector blowup_dims(const BlowupSpec& spec) {
    if (spec.c < 2) throw StructuralError("blowup_dims: codimension must be at least 2");
    int n = spec.x.n;
    if (n - spec.c < 0) throw StructuralError("blowup_dims: codimension exceeds the ambient dimension");
    if (spec.z.n != n - spec.c)
        throw StructuralError("blowup_dims: centre table has dimension " + std::to_string(spec.z.n) + ", expected " +
                              std::to_string(n - spec.c));
    if (!spec.z_ddbar)
        throw DomainRefusal(
            "blowup_dims: the centre is not asserted to satisfy the ddbar-lemma; the general formula needs the "
            "quotient H_{k-1}(E) / rho^* H_{k-c}(Z), which is not determined by dimension data");
    std::vector<std::int64_t> out(spec.x.dims);
    for (int k = 0; k <= 2 * n; ++k) out[static_cast<std::size_t>(k)] += (spec.c - 1) * spec.z[k - spec.c];
    DimVector result(n, std::move(out));
    for (int k = 0; k <= 2 * n; ++k) {
        bool stable = k <= spec.c - 1 || k >= 2 * n - spec.c + 1;
        if (stable && result[k] != spec.x[k]) throw InternalError("blowup_dims: low/high degree stability violated");
    }
    return result;
}

/// Projectivisation of a rank-c bundle over Z (Z with the ddbar-lemma):
/// ambient dimension dim Z + c - 1 and H_k = c * H_{k+1-c}(Z).
inline DimVector pbundle_dims(const DimVector& z, int c) {
    if (c < 2) throw StructuralError("pbundle_dims: rank must be at least 2");
    int m = z.n + c - 1;
    std::vector<std::int64_t> out(2 * m + 1, 0);
    for (int k = 0; k <= 2 * m; ++k) out[static_cast<std::size_t>(k)] = c * z[k + 1 - c];
    return DimVector(m, std::move(out));
}

/// X x P^n with the product structure: H_k = (n+1) * H_{k-n}(X).
inline DimVector product_pn_dims(const DimVector& x, int n) {
    if (n < 1) throw StructuralError("product_pn_dims: projective dimension must be at least 1");
    return pbundle_dims(x, n + 1);
}

/// Trivial Poisson structure: H_k = sum_{p-q = n-k} h^{p,q}.
inline DimVector trivial_poisson_dims(const HodgeDiamond& h) { return e1_totals(h); }

/// E_1-defects of a blow-up from those of X (dimension n) and Z
/// (dimension n - c). The blow-up degenerates iff both inputs do.
inline DegeneracyCheck degeneracy_transfer(const std::vector<std::int64_t>& x_defects,
                                           const std::vector<std::int64_t>& z_defects, int c) {
    if (c < 2) throw StructuralError("degeneracy_transfer: codimension must be at least 2");
    if (x_defects.size() % 2 == 0 || z_defects.size() % 2 == 0)
        throw StructuralError("degeneracy_transfer: defect tables must have odd length 2n+1");
    int n = static_cast<int>(x_defects.size() / 2);
    if (static_cast<int>(z_defects.size() / 2) != n - c)
        throw StructuralError("degeneracy_transfer: centre defects have the wrong dimension");
    DegeneracyCheck out;
    for (int k = 0; k <= 2 * n; ++k) {
        std::int64_t d = x_defects[static_cast<std::size_t>(k)];
        int j = k - c;
        if (j >= 0 && j < static_cast<int>(z_defects.size())) d += (c - 1) * z_defects[static_cast<std::size_t>(j)];
        if (d < 0) throw StructuralError("degeneracy_transfer: negative defect");
        out.defect.push_back(d);
        if (d != 0) out.degenerate = false;
    }
    return out;
}

}  // namespace kbh
