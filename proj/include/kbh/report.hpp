#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "double_complex.hpp"
#include "homology.hpp"

namespace kbh {

struct EulerCheck {
    std::int64_t homology = 0;
    std::int64_t hodge = 0;
    bool equal() const { return homology == hodge; }
};

/// Verdicts requested by a run; unset fields were not computed.
struct CheckVerdicts {
    std::optional<bool> poisson;
    std::string schouten_witness;  // [pi,pi]_S when not Poisson
    std::optional<bool> unimodular;
    std::optional<DegeneracyCheck> e1;
    std::optional<bool> kb_duality;
    std::optional<bool> lp_duality;
    std::optional<bool> lp_kb_duality;  // lp[2n-k] == kb[k]
    std::optional<EulerCheck> euler;

    bool empty() const {
        return !poisson && !unimodular && !e1 && !kb_duality && !lp_duality && !lp_kb_duality && !euler;
    }
};

struct ValidationSummary {
    bool integrable = true;
    std::vector<std::string> failures;  // "d(dw2) = ..."
};

struct Report {
    std::string model;  // model name, or the formula that produced the table
    int n = 0;
    std::optional<std::string> pi;
    std::string scope;  // "manifold" or "invariant-model"; empty for formula results
    std::optional<ValidationSummary> validation;
    std::optional<HodgeDiamond> hodge;
    std::optional<DimVector> kb;
    std::optional<DimVector> lp;
    std::vector<PageTable> pages;
    std::optional<PageTable> infinity;
    CheckVerdicts checks;
    std::optional<double> seconds;
};

inline std::string scope_description(const std::string& scope) {
    if (scope == "manifold") return "manifold dimensions (nilpotent model: invariant forms compute the cohomology)";
    if (scope == "invariant-model") return "invariant-model dimensions (no quotient manifold is asserted)";
    return scope;
}

namespace detail {

inline std::size_t digits(std::int64_t v) { return std::to_string(v).size(); }

inline void render_diamond(std::ostream& os, const HodgeDiamond& h) {
    int n = h.n;
    std::size_t width = 1;
    for (const auto& row : h.h)
        for (auto v : row) width = std::max(width, digits(v));
    std::size_t cell = width + 1 + (width + 1) % 2;  // even, at least one space of padding
    std::size_t half = cell / 2;
    os << "Hodge diamond h^{p,q} (row r lists p+q = r with p descending):\n";
    for (int r = 0; r <= 2 * n; ++r) {
        int hi = std::min(r, n), lo = std::max(0, r - n);
        int count = hi - lo + 1;
        std::string line(2 + static_cast<std::size_t>(n + 1 - count) * half, ' ');
        for (int p = hi; p >= lo; --p) {
            std::string v = std::to_string(h.at(p, r - p));
            line += std::string(cell - v.size(), ' ') + v;
        }
        os << line << "\n";
    }
}

inline void render_dims(std::ostream& os, const std::string& title, const DimVector& dv) {
    std::size_t width = 3;
    for (auto v : dv.dims) width = std::max(width, digits(v));
    os << title << ":\n";
    os << "  " << std::setw(3) << "k" << "  " << std::setw(static_cast<int>(width)) << "dim" << "\n";
    for (int k = 0; k <= 2 * dv.n; ++k)
        os << "  " << std::setw(3) << k << "  " << std::setw(static_cast<int>(width)) << dv[k] << "\n";
}

inline void render_page(std::ostream& os, const PageTable& page, const std::string& label) {
    std::size_t s_count = page.e.size();
    std::size_t t_count = s_count ? page.e.front().size() : 0;
    std::size_t width = 2;
    for (const auto& row : page.e)
        for (auto v : row) width = std::max(width, digits(v));
    int w = static_cast<int>(width);
    os << label << " (rows t, columns s):\n";
    for (std::size_t ti = t_count; ti-- > 0;) {
        os << "  t=" << std::setw(2) << ti << " |";
        for (std::size_t s = 0; s < s_count; ++s) os << " " << std::setw(w) << page.e[s][ti];
        os << "\n";
    }
    os << "        +" << std::string(s_count * (width + 1), '-') << "\n";
    os << "     s = ";
    for (std::size_t s = 0; s < s_count; ++s) os << std::setw(w) << s << (s + 1 < s_count ? " " : "");
    os << "\n";
    bool any = false;
    for (std::size_t s = 0; s < page.d_ranks.size(); ++s)
        for (std::size_t t = 0; t < page.d_ranks[s].size(); ++t) {
            auto rk = page.d_ranks[s][t];
            if (rk == 0) continue;
            if (!any) os << "  nonzero d_" << page.r << ":\n";
            any = true;
            os << "    (" << s << "," << t << ") -> (" << s + static_cast<std::size_t>(page.r) << ","
               << static_cast<long long>(t) + 1 - page.r << ")  rank " << rk << "  [total degree " << s + t
               << " -> " << s + t + 1 << "]\n";
        }
    if (!any && page.r > 0) os << "  d_" << page.r << " = 0\n";
}

inline const char* yes_no(bool b) { return b ? "true" : "false"; }

inline void render_checks(std::ostream& os, const CheckVerdicts& c) {
    os << "checks:\n";
    if (c.poisson) {
        os << "  poisson: " << yes_no(*c.poisson) << "\n";
        if (!*c.poisson) os << "    [pi,pi]_S = " << c.schouten_witness << "\n";
    }
    if (c.unimodular) os << "  unimodular: " << yes_no(*c.unimodular) << "\n";
    if (c.e1) {
        os << "  E1-degenerate: " << yes_no(c.e1->degenerate) << "\n";
        if (!c.e1->degenerate) {
            os << "    defect:";
            for (std::size_t k = 0; k < c.e1->defect.size(); ++k)
                if (c.e1->defect[k] != 0) os << " k=" << k << " -> " << c.e1->defect[k] << ";";
            os << "\n";
        }
    }
    if (c.kb_duality) os << "  duality (kb[k] = kb[2n-k]): " << yes_no(*c.kb_duality) << "\n";
    if (c.lp_duality) os << "  duality (lp[k] = lp[2n-k]): " << yes_no(*c.lp_duality) << "\n";
    if (c.lp_kb_duality) os << "  lp[2n-k] = kb[k]: " << yes_no(*c.lp_kb_duality) << "\n";
    if (c.euler)
        os << "  euler: homology " << c.euler->homology << ", hodge " << c.euler->hodge << ", equal "
           << yes_no(c.euler->equal()) << "\n";
}

inline nlohmann::json page_json(const PageTable& p) {
    return nlohmann::json{{"r", p.r}, {"e", p.e}, {"d_ranks", p.d_ranks}};
}

}  // namespace detail

inline std::string render_text(const Report& r) {
    std::ostringstream os;
    os << "model: " << r.model << " (n = " << r.n << ")\n";
    if (r.pi) os << "pi: " << *r.pi << "\n";
    if (!r.scope.empty()) os << "scope: " << scope_description(r.scope) << "\n";
    if (r.validation) {
        os << "\nintegrable: " << detail::yes_no(r.validation->integrable) << "\n";
        for (const auto& f : r.validation->failures) os << "  " << f << "\n";
    }
    if (r.hodge) {
        os << "\n";
        detail::render_diamond(os, *r.hodge);
    }
    if (r.kb) {
        os << "\n";
        detail::render_dims(os, r.pi ? "Koszul-Brylinski homology H_k" : "H_k", *r.kb);
    }
    if (r.lp) {
        os << "\n";
        detail::render_dims(os, "Lichnerowicz-Poisson cohomology H^k", *r.lp);
    }
    for (const auto& p : r.pages) {
        os << "\n";
        detail::render_page(os, p, "E_" + std::to_string(p.r));
    }
    if (r.infinity) {
        os << "\n";
        detail::render_page(os, *r.infinity, "E_inf");
    }
    if (!r.checks.empty()) {
        os << "\n";
        detail::render_checks(os, r.checks);
    }
    if (r.seconds) os << "\nelapsed: " << std::fixed << std::setprecision(3) << *r.seconds << " s\n";
    return os.str();
}

inline nlohmann::json to_json(const Report& r) {
    using nlohmann::json;
    json j = json::object();
    j["model"] = r.model;
    j["n"] = r.n;
    j["pi"] = r.pi ? json(*r.pi) : json(nullptr);
    if (!r.scope.empty()) j["scope"] = r.scope;
    if (r.validation) {
        j["integrable"] = r.validation->integrable;
        if (!r.validation->failures.empty()) j["integrability_failures"] = r.validation->failures;
    }
    if (r.hodge) j["hodge"] = r.hodge->h;
    if (r.kb) j["kb"] = r.kb->dims;
    if (r.lp) j["lp"] = r.lp->dims;
    if (!r.pages.empty()) {
        json pages = json::array();
        for (const auto& p : r.pages) pages.push_back(detail::page_json(p));
        j["pages"] = pages;
    }
    if (r.infinity) j["infinity"] = detail::page_json(*r.infinity);
    if (!r.checks.empty()) {
        const auto& c = r.checks;
        json checks = json::object();
        if (c.poisson) {
            checks["poisson"] = *c.poisson;
            if (!*c.poisson) checks["schouten"] = c.schouten_witness;
        }
        if (c.unimodular) checks["unimodular"] = *c.unimodular;
        if (c.e1) {
            checks["e1_degenerate"] = c.e1->degenerate;
            checks["e1_defect"] = c.e1->defect;
        }
        if (c.kb_duality) checks["kb_duality"] = *c.kb_duality;
        if (c.lp_duality) checks["lp_duality"] = *c.lp_duality;
        if (c.lp_kb_duality) checks["lp_kb_duality"] = *c.lp_kb_duality;
        if (c.euler)
            checks["euler"] = json{{"homology", c.euler->homology}, {"hodge", c.euler->hodge}, {"equal", c.euler->equal()}};
        j["checks"] = checks;
    }
    if (r.seconds) j["seconds"] = *r.seconds;
    return j;
}

inline std::string render_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

}  // namespace kbh
