#pragma once

#include <gmpxx.h>

#include <cctype>
#include <ostream>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace kbh {

/// Exact element re + im*i of Q(i). Both parts are GMP rationals kept in
/// canonical form, so structural equality is field equality.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
    GaussianRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }

    static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    GaussianRational conj() const { return {re_, -im_}; }

    GaussianRational operator-() const { return {-re_, -im_}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        if (is_real() && o.is_real()) {
            re_ *= o.re_;
            return *this;
        }
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class m = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) { return *this *= o.inverse(); }

    GaussianRational inverse() const {
        if (is_zero()) throw std::domain_error("GaussianRational: division by zero");
        if (is_real()) return {1 / re_, mpq_class(0)};
        mpq_class norm = re_ * re_ + im_ * im_;
        return {re_ / norm, -im_ / norm};
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    // "0", "-3/2", "2i", "-i", "1+2i", "1/2-3/4i".
    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        if (sgn(re_) != 0) out = re_.get_str();
        if (sgn(im_) != 0) {
            mpq_class mag = abs(im_);
            if (sgn(im_) < 0)
                out += "-";
            else if (!out.empty())
                out += "+";
            if (mag != 1) out += mag.get_str();
            out += "i";
        }
        return out;
    }

    // Inverse of str(): an optional real part followed by an optional
    // imaginary part, e.g. "3", "-3/2", "i", "2i", "1+2i", "1/2-3/4i".
    static GaussianRational parse(std::string_view text) {
        auto fail = [&] { throw std::invalid_argument("malformed coefficient '" + std::string(text) + "'"); };
        if (text.empty()) fail();
        std::size_t pos = 0;
        GaussianRational result;
        bool seen_any = false;
        while (pos < text.size()) {
            bool negative = false;
            if (text[pos] == '+' || text[pos] == '-') {
                negative = text[pos] == '-';
                ++pos;
            } else if (seen_any) {
                fail();
            }
            std::size_t start = pos;
            while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/'))
                ++pos;
            std::string digits(text.substr(start, pos - start));
            bool imaginary = pos < text.size() && text[pos] == 'i';
            if (imaginary) ++pos;
            if (digits.empty() && !imaginary) fail();
            mpq_class value(1);
            if (!digits.empty()) {
                if (digits.front() == '/' || digits.back() == '/' ||
                    digits.find('/') != digits.rfind('/'))
                    fail();
                if (value.set_str(digits, 10) != 0) fail();
                if (value.get_den() == 0) fail();
                value.canonicalize();
            }
            if (negative) value = -value;
            if (imaginary)
                result += GaussianRational(mpq_class(0), value);
            else
                result += GaussianRational(value);
            seen_any = true;
        }
        return result;
    }

    friend std::ostream& operator<<(std::ostream& os, const GaussianRational& g) { return os << g.str(); }

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

}  // namespace kbh
