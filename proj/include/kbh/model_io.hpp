#pragma once

#include <bit>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "exterior.hpp"
#include "homology.hpp"
#include "lie_model.hpp"

namespace kbh {

// Model file grammar (line oriented, '#' starts a comment, ';' also ends a
// statement):
//
//   model <ident>
//   dim <n>
//   d w<k> = <terms over w<i>^w<j>, i < j>      e.g.  d w2 = - w1^w3
//   pi = <terms over X<i>^X<j>, i < j>          e.g.  pi = X1^X2 + X2^X3
//
// A term is [+|-] [coef] [*] gen^gen with coef an integer or fraction,
// optionally followed by i ("3/2", "2i", "i"). A right-hand side of "0"
// is allowed. Generators without a d-line are closed.

struct ParsedModel {
    LieModel model;
    std::optional<Polyvector> pi;
};

namespace detail {

class Cursor {
public:
    Cursor(std::string_view text, std::size_t line, std::size_t column0)
        : text_(text), line_(line), column0_(column0) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool done() {
        skip_space();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    std::string word() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_' || text_[pos_] == '-' || text_[pos_] == '.'))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }
    // Digits, '/' and an optional trailing 'i'.
    std::string coefficient_token() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/'))
            ++pos_;
        if (pos_ < text_.size() && text_[pos_] == 'i') ++pos_;
        // Swallow stray characters so a malformed token is reported whole.
        while (pos_ < text_.size() && text_[pos_] != 'w' && text_[pos_] != 'X' &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/' || text_[pos_] == '.'))
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }
    int integer() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        if (pos_ - start > 6) fail("integer too large");
        return std::stoi(std::string(text_.substr(start, pos_ - start)));
    }
    std::size_t column() const { return column0_ + pos_ + 1; }
    std::size_t line() const { return line_; }
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, column(), what); }
    [[noreturn]] void fail_at(std::size_t column, const std::string& what) const {
        throw ParseError(line_, column, what);
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_;
    std::size_t column0_;
};

// gen<i> ^ gen<j> with i < j; returns (i, j).
inline std::pair<int, int> parse_wedge(Cursor& cur, char gen, int n) {
    auto one = [&]() {
        std::size_t col = cur.column();
        if (!cur.accept(gen)) cur.fail(std::string("expected generator ") + gen + "<k>");
        int k = cur.integer();
        if (k < 1 || k > n)
            cur.fail_at(col, std::string("unknown generator ") + gen + std::to_string(k) + " (dim " +
                                 std::to_string(n) + ")");
        return k;
    };
    int i = one();
    std::size_t col = cur.column();
    cur.expect('^');
    int j = one();
    if (i >= j) cur.fail_at(col, "wedge terms must be written with increasing indices (i < j)");
    return {i, j};
}

// Sum of coefficient * gen<i>^gen<j> terms up to the end of the cursor.
inline std::map<std::pair<int, int>, GaussianRational> parse_terms(Cursor& cur, char gen, int n) {
    std::map<std::pair<int, int>, GaussianRational> out;
    if (cur.peek() == '0') {
        std::string tok = cur.coefficient_token();
        if (tok != "0" || !cur.done()) cur.fail("malformed zero right-hand side");
        return out;
    }
    bool first = true;
    while (!cur.done()) {
        bool negative = false;
        if (cur.accept('+')) {
        } else if (cur.accept('-')) {
            negative = true;
        } else if (!first) {
            cur.fail("expected '+' or '-' between terms");
        }
        GaussianRational coef(1);
        char c = cur.peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == 'i') {
            std::size_t col = cur.column();
            std::string tok = cur.coefficient_token();
            try {
                coef = GaussianRational::parse(tok);
            } catch (const std::exception&) {
                cur.fail_at(col, "malformed coefficient '" + tok + "'");
            }
            if (coef.is_zero()) cur.fail_at(col, "zero coefficient");
            cur.accept('*');
        }
        auto key = parse_wedge(cur, gen, n);
        if (negative) coef = -coef;
        auto [it, inserted] = out.try_emplace(key, coef);
        if (!inserted) it->second += coef;
        first = false;
    }
    if (first) cur.fail("empty right-hand side");
    return out;
}

inline Polyvector terms_to_polyvector(const std::map<std::pair<int, int>, GaussianRational>& terms, int n) {
    Polyvector pi(n);
    for (const auto& [ij, c] : terms) pi += Polyvector::bivector(n, ij.first, ij.second, c);
    return pi;
}

inline Form terms_to_form(const std::map<std::pair<int, int>, GaussianRational>& terms, int n) {
    Form f(n);
    for (const auto& [ij, c] : terms) f.add(Monomial{bit(ij.first) | bit(ij.second), 0}, c);
    return f;
}

}  // namespace detail

/// Parses a bivector expression such as "X1^X2 + 2i X2^X3".
inline Polyvector parse_polyvector(std::string_view text, int n) {
    detail::Cursor cur(text, 1, 0);
    return detail::terms_to_polyvector(detail::parse_terms(cur, 'X', n), n);
}

inline ParsedModel parse_model(std::string_view text) {
    std::optional<std::string> name;
    std::optional<int> n;
    std::map<int, Form> structure;
    std::optional<Polyvector> pi;

    std::size_t line_no = 0;
    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        std::size_t line_end = text.find('\n', line_start);
        if (line_end == std::string_view::npos) line_end = text.size();
        ++line_no;
        std::string_view line = text.substr(line_start, line_end - line_start);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        std::size_t stmt_start = 0;
        while (stmt_start <= line.size()) {
            std::size_t stmt_end = line.find(';', stmt_start);
            if (stmt_end == std::string_view::npos) stmt_end = line.size();
            detail::Cursor cur(line.substr(stmt_start, stmt_end - stmt_start), line_no, stmt_start);
            if (!cur.done()) {
                std::size_t keyword_col = cur.column();
                std::string keyword = cur.word();
                if (keyword == "model") {
                    if (name) cur.fail_at(keyword_col, "duplicate model line");
                    std::string ident = cur.word();
                    if (ident.empty() || !std::isalpha(static_cast<unsigned char>(ident.front())))
                        cur.fail("expected a model identifier");
                    name = ident;
                } else if (keyword == "dim") {
                    if (n) cur.fail_at(keyword_col, "duplicate dim line");
                    std::size_t col = cur.column();
                    int value = cur.integer();
                    if (value < 1 || value > kMaxDim)
                        cur.fail_at(col, "dimension must be between 1 and " + std::to_string(kMaxDim));
                    n = value;
                } else if (keyword == "d") {
                    if (!n) cur.fail_at(keyword_col, "d-line before dim line");
                    std::size_t col = cur.column();
                    if (!cur.accept('w')) cur.fail("expected w<k> after d");
                    int k = cur.integer();
                    if (k < 1 || k > *n) cur.fail_at(col, "unknown generator w" + std::to_string(k));
                    if (structure.count(k)) cur.fail_at(col, "duplicate d-line for w" + std::to_string(k));
                    cur.expect('=');
                    structure.emplace(k, detail::terms_to_form(detail::parse_terms(cur, 'w', *n), *n));
                } else if (keyword == "pi") {
                    if (!n) cur.fail_at(keyword_col, "pi line before dim line");
                    if (pi) cur.fail_at(keyword_col, "duplicate pi line");
                    cur.expect('=');
                    pi = detail::terms_to_polyvector(detail::parse_terms(cur, 'X', *n), *n);
                } else {
                    cur.fail_at(keyword_col, "unknown statement '" + keyword + "'");
                }
                if (!cur.done()) cur.fail("unexpected trailing input");
            }
            stmt_start = stmt_end + 1;
        }
        line_start = line_end + 1;
    }
    if (!name) throw ParseError(line_no, 1, "missing model line");
    if (!n) throw ParseError(line_no, 1, "missing dim line");
    return ParsedModel{LieModel(*name, *n, std::move(structure)), std::move(pi)};
}

namespace detail {

// Right-hand side in the model grammar; complex coefficients become a
// real term followed by an imaginary one.
template <class Terms, class KeyName>
std::string grammar_terms(const Terms& terms, KeyName key_name) {
    std::vector<std::pair<mpq_class, std::string>> flat;  // (signed magnitude, suffix)
    for (const auto& [key, c] : terms) {
        if (sgn(c.re()) != 0) flat.emplace_back(c.re(), key_name(key));
        if (sgn(c.im()) != 0) flat.emplace_back(c.im(), "i " + key_name(key));
    }
    if (flat.empty()) return "0";
    std::string out;
    for (std::size_t idx = 0; idx < flat.size(); ++idx) {
        const auto& [value, name] = flat[idx];
        bool negative = sgn(value) < 0;
        mpq_class mag = abs(value);
        if (idx == 0)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        bool imaginary = name.rfind("i ", 0) == 0;
        std::string bare = imaginary ? name.substr(2) : name;
        if (mag != 1)
            out += mag.get_str() + (imaginary ? "i " : " ") + bare;
        else
            out += (imaginary ? "i " : "") + bare;
    }
    return out;
}

inline std::string pair_name(char gen, Mask m) {
    int i = std::countr_zero(m) + 1;
    int j = std::countr_zero(m & (m - 1)) + 1;
    return std::string(1, gen) + std::to_string(i) + "^" + gen + std::to_string(j);
}

}  // namespace detail

inline std::string format_polyvector(const Polyvector& pi) {
    if (!pi.is_zero() && pi.degree() != 2) throw StructuralError("format_polyvector: only bivectors have a grammar");
    return detail::grammar_terms(pi.terms(), [](Mask m) { return detail::pair_name('X', m); });
}

/// Canonical model file text; parse_model(format_model(m)) == m.
inline std::string format_model(const LieModel& model, const std::optional<Polyvector>& pi = std::nullopt) {
    std::ostringstream os;
    os << "model " << model.name() << "\n";
    os << "dim " << model.n() << "\n";
    for (const auto& [k, form] : model.structure_equations()) {
        std::map<Mask, GaussianRational> terms;
        for (const auto& [m, c] : form.terms()) terms.emplace(m.hol, c);
        os << "d w" << k << " = " << detail::grammar_terms(terms, [](Mask m) { return detail::pair_name('w', m); })
           << "\n";
    }
    if (pi) os << "pi = " << format_polyvector(*pi) << "\n";
    return os.str();
}


// Built-in models, written in the public grammar.
inline const std::map<std::string, std::string>& builtin_sources() {
    static const std::map<std::string, std::string> sources = [] {
        std::map<std::string, std::string> out;
        out["iwasawa3"] =
            "# Iwasawa manifold: quotient of the complex Heisenberg group H(3; C)\n"
            "model iwasawa3\n"
            "dim 3\n"
            "d w2 = - w1^w3\n";
        out["nil6"] =
            "# Six-dimensional complex-parallelisable nilmanifold from 4x4 unipotent matrices\n"
            "model nil6\n"
            "dim 6\n"
            "d w2 = - w1^w4\n"
            "d w3 = - w1^w5 - w2^w6\n"
            "d w5 = - w4^w6\n";
        for (int n = 1; n <= 8; ++n)
            out["torus" + std::to_string(n)] =
                "# Complex torus, abelian model\nmodel torus" + std::to_string(n) + "\ndim " + std::to_string(n) + "\n";
        return out;
    }();
    return sources;
}

inline bool is_builtin(const std::string& name) { return builtin_sources().count(name) != 0; }

inline LieModel builtin_model(const std::string& name) {
    auto it = builtin_sources().find(name);
    if (it == builtin_sources().end()) throw StructuralError("unknown built-in model '" + name + "'");
    return parse_model(it->second).model;
}

inline std::vector<std::string> builtin_names() {
    std::vector<std::string> out;
    for (const auto& [name, src] : builtin_sources()) out.push_back(name);
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StructuralError("cannot open file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

namespace detail {

inline std::vector<std::int64_t> parse_integer_list(std::string_view text) {
    std::vector<std::int64_t> out;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size() || v < 0) throw StructuralError("malformed dimension entry '" + token + "'");
        out.push_back(v);
        token.clear();
    };
    for (char c : text) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
            flush();
        else
            token += c;
    }
    flush();
    return out;
}

// Inline text or the contents of an @file; '#' comments are dropped
// unless the text is JSON.
inline std::string resolve_literal(const std::string& literal) {
    std::string text = !literal.empty() && literal.front() == '@' ? read_file(literal.substr(1)) : literal;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) return text;
    std::string out;
    bool comment = false;
    for (char c : text) {
        if (c == '#') comment = true;
        if (c == '\n') comment = false;
        if (!comment) out += c;
    }
    return out;
}

inline bool looks_like_json(const std::string& text) {
    auto pos = text.find_first_not_of(" \t\r\n");
    return pos != std::string::npos && (text[pos] == '{' || text[pos] == '[');
}

}  // namespace detail

/// Dimension vector from an inline literal ("1,6,15,20,15,6,1"), an
/// @file reference, or JSON (an array, or an object with a "kb", "lp" or
/// "dims" array). The length must be odd: 2n+1 entries.
inline DimVector parse_dim_vector(const std::string& literal) {
    std::string text = detail::resolve_literal(literal);
    std::vector<std::int64_t> values;
    if (detail::looks_like_json(text)) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw StructuralError(std::string("malformed JSON dimension vector: ") + e.what());
        }
        if (j.is_object()) {
            for (const char* key : {"dims", "kb", "lp"})
                if (j.contains(key)) {
                    j = j[key];
                    break;
                }
        }
        if (!j.is_array()) throw StructuralError("JSON dimension vector must be an array");
        for (const auto& v : j) {
            if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
                throw StructuralError("JSON dimension vector entries must be nonnegative integers");
            values.push_back(v.get<std::int64_t>());
        }
    } else {
        values = detail::parse_integer_list(text);
    }
    if (values.empty() || values.size() % 2 == 0)
        throw StructuralError("dimension vector needs an odd number (2n+1) of entries, got " +
                              std::to_string(values.size()));
    int n = static_cast<int>(values.size() / 2);
    return DimVector(n, std::move(values));
}

/// Hodge table from rows "h00,h01,...;h10,h11,..." (row p lists
/// h^{p,0..n}; rows split by ';' or newlines), an @file reference, or JSON
/// (an array of arrays, or an object with a "hodge" field).
inline HodgeDiamond parse_diamond(const std::string& literal) {
    std::string text = detail::resolve_literal(literal);
    std::vector<std::vector<std::int64_t>> rows;
    if (detail::looks_like_json(text)) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw StructuralError(std::string("malformed JSON diamond: ") + e.what());
        }
        if (j.is_object() && j.contains("hodge")) j = j["hodge"];
        if (!j.is_array()) throw StructuralError("JSON diamond must be an array of rows");
        for (const auto& row : j) {
            if (!row.is_array()) throw StructuralError("JSON diamond must be an array of rows");
            std::vector<std::int64_t> r;
            for (const auto& v : row) {
                if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
                    throw StructuralError("diamond entries must be nonnegative integers");
                r.push_back(v.get<std::int64_t>());
            }
            rows.push_back(std::move(r));
        }
    } else {
        std::string row;
        auto flush = [&] {
            auto values = detail::parse_integer_list(row);
            if (!values.empty()) rows.push_back(std::move(values));
            row.clear();
        };
        for (char c : text) {
            if (c == ';' || c == '\n')
                flush();
            else
                row += c;
        }
        flush();
    }
    if (rows.empty()) throw StructuralError("empty Hodge diamond");
    int n = static_cast<int>(rows.size()) - 1;
    return HodgeDiamond(n, std::move(rows));
}

}  // namespace kbh
