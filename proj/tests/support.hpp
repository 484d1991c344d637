#pragma once

#include <initializer_list>

#include <kbh/exterior.hpp>

namespace kbh::test {

inline Mask mask(std::initializer_list<int> idx) {
    Mask m = 0;
    for (int k : idx) m |= bit(k);
    return m;
}

// w^{hol} ^ wb^{anti}, indices listed in increasing order.
inline Monomial mono(std::initializer_list<int> hol, std::initializer_list<int> anti = {}) {
    return Monomial{mask(hol), mask(anti)};
}

inline Form form(int n, std::initializer_list<int> hol, std::initializer_list<int> anti = {}, long c = 1) {
    return Form(n, mono(hol, anti), GaussianRational(c));
}

inline Polyvector X(int n, std::initializer_list<int> idx, long c = 1) {
    return Polyvector(n, mask(idx), GaussianRational(c));
}

}  // namespace kbh::test
