#ifndef BLAZ_DCT_HPP
#define BLAZ_DCT_HPP

#include <cmath>

#include "blaz/block.hpp"

namespace blaz {

namespace detail {

// Orthonormal DCT-II basis, t(i,u) = a_i * cos((2u+1) i pi / 16) with
// a_0 = sqrt(1/8) and a_i = sqrt(1/4) otherwise.
inline const block8& dct_basis() {
    static const block8 t = [] {
        block8 m;
        const double pi = std::acos(-1.0);
        for (int i = 0; i < block_dim; ++i) {
            const double ai = (i == 0) ? std::sqrt(1.0 / 8.0) : std::sqrt(1.0 / 4.0);
            for (int u = 0; u < block_dim; ++u)
                m(i, u) = ai * std::cos((2 * u + 1) * i * pi / 16.0);
        }
        return m;
    }();
    return t;
}

}  // namespace detail

// Two-dimensional DCT-II, d = T x T'. Separable form of
// d(i,j) = a_i a_j sum_{u,v} x(u,v) cos((2u+1)i pi/16) cos((2v+1)j pi/16).
inline block8 dct2(const block8& x) {
    const block8& t = detail::dct_basis();
    block8 tmp;  // tmp = T x
    for (int i = 0; i < block_dim; ++i)
        for (int v = 0; v < block_dim; ++v) {
            double acc = 0.0;
            for (int u = 0; u < block_dim; ++u) acc += t(i, u) * x(u, v);
            tmp(i, v) = acc;
        }
    block8 d;  // d = tmp T'
    for (int i = 0; i < block_dim; ++i)
        for (int j = 0; j < block_dim; ++j) {
            double acc = 0.0;
            for (int v = 0; v < block_dim; ++v) acc += tmp(i, v) * t(j, v);
            d(i, j) = acc;
        }
    return d;
}

// Inverse transform, x = T' d T; exact inverse of dct2 up to rounding since
// the basis is orthonormal.
inline block8 idct2(const block8& d) {
    const block8& t = detail::dct_basis();
    block8 tmp;  // tmp = T' d
    for (int u = 0; u < block_dim; ++u)
        for (int j = 0; j < block_dim; ++j) {
            double acc = 0.0;
            for (int i = 0; i < block_dim; ++i) acc += t(i, u) * d(i, j);
            tmp(u, j) = acc;
        }
    block8 x;  // x = tmp T
    for (int u = 0; u < block_dim; ++u)
        for (int v = 0; v < block_dim; ++v) {
            double acc = 0.0;
            for (int j = 0; j < block_dim; ++j) acc += tmp(u, j) * t(j, v);
            x(u, v) = acc;
        }
    return x;
}

}  // namespace blaz

#endif  // BLAZ_DCT_HPP
