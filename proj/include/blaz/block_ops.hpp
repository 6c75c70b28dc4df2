#ifndef BLAZ_BLOCK_OPS_HPP
#define BLAZ_BLOCK_OPS_HPP

#include <stdexcept>

#include "blaz/codec.hpp"

namespace blaz {

namespace detail {

inline int merge_scale_factor(int phi1, int phi2) {
    const int phi = (phi1 * phi2) / (phi1 + phi2);
    return phi < 1 ? 1 : (phi > 255 ? 255 : phi);
}

// Shared core of add/sub. rhs_sign is +1 for addition, -1 for subtraction;
// the combined slope is s1 + s2 in both cases, only the coefficient weight
// of the right operand flips sign.
inline compressed_block combine(const compressed_block& b1, const compressed_block& b2,
                                double rhs_sign) {
    const double f = b1.first + rhs_sign * b2.first;

    // A constant operand only shifts the first element; keep the other
    // operand's coefficients untouched instead of degrading them through
    // the scale-factor merge.
    if (b2.slope == 0.0) return {f, b1.slope, b1.scale_factor, b1.coeffs};
    if (b1.slope == 0.0) {
        compressed_block out{f, b2.slope, b2.scale_factor, b2.coeffs};
        if (rhs_sign < 0.0)
            for (auto& c : out.coeffs) c = (c == -127) ? std::int8_t(127) : std::int8_t(-c);
        return out;
    }

    const double s = b1.slope + b2.slope;
    if (s == 0.0) {
        // Opposite slopes (possible after scaling by a negative constant)
        // leave no scale to redistribute; fall back to dense arithmetic.
        const block8 d1 = decompress_block(b1);
        const block8 d2 = decompress_block(b2);
        block8 sum;
        for (int k = 0; k < block_cells; ++k) sum.a[k] = d1.a[k] + rhs_sign * d2.a[k];
        return compress_block(sum);
    }

    compressed_block out;
    out.first = f;
    out.slope = s;
    const int phi = merge_scale_factor(b1.scale_factor, b2.scale_factor);
    out.scale_factor = std::uint8_t(phi);
    const double a1 = b1.slope / s;
    const double a2 = rhs_sign * b2.slope / s;
    const double w1 = a1 / double(b1.scale_factor) * double(phi);
    const double w2 = a2 / double(b2.scale_factor) * double(phi);
    for (int k = 0; k < kept_coeff_count; ++k)
        out.coeffs[k] = clamp_coeff(w1 * double(b1.coeffs[k]) + w2 * double(b2.coeffs[k]));
    return out;
}

}  // namespace detail

// Addition directly on the compressed form. The coefficient arrays are
// merged with weights that re-normalize both operands to the combined slope
// s1+s2 and to the merged scale factor phi1*phi2/(phi1+phi2).
inline compressed_block add(const compressed_block& b1, const compressed_block& b2) {
    return detail::combine(b1, b2, +1.0);
}

inline compressed_block sub(const compressed_block& b1, const compressed_block& b2) {
    return detail::combine(b1, b2, -1.0);
}

// Multiplication by a constant touches only the first element and the slope.
inline compressed_block scale(const compressed_block& b, double c) {
    if (!std::isfinite(c)) throw std::invalid_argument("scale: non-finite constant");
    return {b.first * c, b.slope * c, b.scale_factor, b.coeffs};
}

// Prefix of a block reconstruction; the materialized lines match the full
// decompression bitwise.
struct partial_reconstruction {
    block8 values;
    int extent = 0;  // number of materialized lines
};

// Rows 0..last_row of decompress_block(b).
inline partial_reconstruction reconstruct_rows(const compressed_block& b, int last_row) {
    if (last_row < 0 || last_row >= block_dim)
        throw std::out_of_range("reconstruct_rows: row index out of range");
    partial_reconstruction out;
    out.extent = last_row + 1;
    const block8 slopes = dequantize_prediction(b);
    detail::integrate_rows(b, slopes, last_row, out.values);
    return out;
}

// Columns 0..last_col of decompress_block(b). Column c depends only on
// columns 0..c-1, mirroring the row case.
inline partial_reconstruction reconstruct_cols(const compressed_block& b, int last_col) {
    if (last_col < 0 || last_col >= block_dim)
        throw std::out_of_range("reconstruct_cols: column index out of range");
    partial_reconstruction out;
    out.extent = last_col + 1;
    const block8 slopes = dequantize_prediction(b);
    block8& m = out.values;
    const double s = b.slope;
    m(0, 0) = b.first;
    for (int i = 1; i < block_dim; ++i) m(i, 0) = m(i - 1, 0) + s * slopes(i, 0);
    for (int j = 1; j <= last_col; ++j) {
        m(0, j) = m(0, j - 1) + s * slopes(0, j);
        for (int i = 1; i < block_dim; ++i)
            m(i, j) = (m(i - 1, j) + m(i, j - 1)) / 2.0 + s * slopes(i, j);
    }
    return out;
}

// Dot product of line i of b1 with column j of b2 on partially reconstructed
// blocks, accumulated in ascending k.
inline double dot(const compressed_block& b1, const compressed_block& b2, int i, int j) {
    if (i < 0 || i >= block_dim || j < 0 || j >= block_dim)
        throw std::out_of_range("dot: index out of range");
    const partial_reconstruction rows = reconstruct_rows(b1, i);
    const partial_reconstruction cols = reconstruct_cols(b2, j);
    double r = 0.0;
    for (int k = 0; k < block_dim; ++k) r += rows.values(i, k) * cols.values(k, j);
    return r;
}

// Full 8x8 product; each operand is decompressed once. Entry (i,j) equals
// dot(b1, b2, i, j) bitwise.
inline block8 block_mul(const compressed_block& b1, const compressed_block& b2) {
    const block8 d1 = decompress_block(b1);
    const block8 d2 = decompress_block(b2);
    block8 out;
    for (int i = 0; i < block_dim; ++i)
        for (int j = 0; j < block_dim; ++j) {
            double r = 0.0;
            for (int k = 0; k < block_dim; ++k) r += d1(i, k) * d2(k, j);
            out(i, j) = r;
        }
    return out;
}

}  // namespace blaz

#endif  // BLAZ_BLOCK_OPS_HPP
