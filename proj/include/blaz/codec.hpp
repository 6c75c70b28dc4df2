#ifndef BLAZ_CODEC_HPP
#define BLAZ_CODEC_HPP

#include <cmath>
#include <stdexcept>

#include "blaz/block.hpp"
#include "blaz/dct.hpp"

namespace blaz {

struct normalization {
    double first = 0.0;  // block element (0,0), stored verbatim
    block8 deltas;       // differences against preceding elements, (0,0) == 0
};

// First normalization step: replace every element by the difference against
// its preceding neighbours. Row 0 and column 0 use the single predecessor,
// interior cells average the vertical and horizontal difference.
inline normalization normalize(const block8& m) {
    if (!all_finite(m)) throw std::invalid_argument("normalize: non-finite input");
    normalization out;
    out.first = m(0, 0);
    block8& d = out.deltas;
    d(0, 0) = 0.0;
    for (int j = 1; j < block_dim; ++j) d(0, j) = m(0, j) - m(0, j - 1);
    for (int i = 1; i < block_dim; ++i) d(i, 0) = m(i, 0) - m(i - 1, 0);
    for (int i = 1; i < block_dim; ++i)
        for (int j = 1; j < block_dim; ++j)
            d(i, j) = ((m(i, j) - m(i - 1, j)) + (m(i, j) - m(i, j - 1))) / 2.0;
    return out;
}

// Exact inverse of normalize: integrates the delta grid back into values.
inline block8 denormalize(double first, const block8& deltas) {
    block8 m;
    m(0, 0) = first;
    for (int j = 1; j < block_dim; ++j) m(0, j) = m(0, j - 1) + deltas(0, j);
    for (int i = 1; i < block_dim; ++i) m(i, 0) = m(i - 1, 0) + deltas(i, 0);
    for (int i = 1; i < block_dim; ++i)
        for (int j = 1; j < block_dim; ++j)
            m(i, j) = (m(i - 1, j) + m(i, j - 1)) / 2.0 + deltas(i, j);
    return m;
}

// Mean absolute delta over the nonzero entries; 0 for a constant block.
inline double mean_slope(const block8& deltas) {
    double sum = 0.0;
    int nonzero = 0;
    for (double v : deltas.a) {
        if (v != 0.0) {
            sum += std::fabs(v);
            ++nonzero;
        }
    }
    return nonzero == 0 ? 0.0 : sum / nonzero;
}

// 256-level uniform quantizer over [s - s_max, s + s_max]. Transient: used
// while compressing, never stored.
struct slope_quantizer {
    double lo = 0.0;
    double step = 0.0;
    static constexpr int levels = 256;

    int encode(double v) const {
        if (step == 0.0) return 0;
        return clamp_index((v - lo) / step);
    }
    double decode(int k) const { return lo + k * step; }
};

struct prediction_block {
    std::array<std::uint8_t, block_cells> indices{};  // quantizer indexes
    block8 snapped;                                   // decoded slope values
};

struct prediction_result {
    prediction_block prediction;
    slope_quantizer quantizer;
};

// Snaps every normalized slope to the nearest of 256 equidistant reference
// slopes spanning [s - s_max, s + s_max].
inline prediction_result predict(const block8& slopes, double slope_mean) {
    if (!(slope_mean > 0.0)) throw std::invalid_argument("predict: mean slope must be positive");
    double s_max = 0.0;
    for (double v : slopes.a) s_max = std::max(s_max, std::fabs(v));
    prediction_result out;
    out.quantizer.lo = slope_mean - s_max;
    out.quantizer.step = 2.0 * s_max / slope_quantizer::levels;
    for (int k = 0; k < block_cells; ++k) {
        const int idx = out.quantizer.encode(slopes.a[k]);
        out.prediction.indices[k] = std::uint8_t(idx);
        out.prediction.snapped.a[k] = out.quantizer.decode(idx);
    }
    return out;
}

struct coeff_quantization {
    std::uint8_t scale_factor = 1;
    std::array<std::int8_t, kept_coeff_count> coeffs{};
};

// Scales the transform grid into signed-byte range with scale_factor =
// floor(127/m), m the largest coefficient magnitude, and keeps the 28
// coefficients of the frozen keep set.
inline coeff_quantization quantize_coeffs(const block8& d) {
    double m = 0.0;
    for (double v : d.a) m = std::max(m, std::fabs(v));
    coeff_quantization out;
    if (m == 0.0) {
        out.scale_factor = 1;
        return out;
    }
    double phi = std::floor(127.0 / m);
    if (phi < 1.0) phi = 1.0;
    if (phi > 255.0) phi = 255.0;
    out.scale_factor = std::uint8_t(phi);
    for (int k = 0; k < kept_coeff_count; ++k) {
        const auto [r, c] = kept_coeff_positions[k];
        out.coeffs[k] = clamp_coeff(phi * d(r, c));
    }
    return out;
}

// Full pipeline for one block: normalize, divide by the mean slope, snap to
// the reference slopes, transform the snapped grid and quantize. A constant
// block (mean slope 0) short-circuits to {f, 0, 1, zeros}.
inline compressed_block compress_block(const block8& m) {
    const normalization n = normalize(m);
    const double s = mean_slope(n.deltas);
    compressed_block out;
    out.first = n.first;
    out.slope = s;
    if (s == 0.0) return out;

    block8 slopes;
    for (int k = 0; k < block_cells; ++k) slopes.a[k] = n.deltas.a[k] / s;
    const prediction_result p = predict(slopes, s);
    const block8 d = dct2(p.prediction.snapped);
    const coeff_quantization q = quantize_coeffs(d);
    out.scale_factor = q.scale_factor;
    out.coeffs = q.coeffs;
    return out;
}

// Recovers the normalized slope grid from the stored coefficients: descale,
// re-expand with zeros in the discarded positions, inverse transform.
inline block8 dequantize_prediction(const compressed_block& cb) {
    if (cb.slope == 0.0) return block8{};
    block8 d;
    for (int k = 0; k < kept_coeff_count; ++k) {
        const auto [r, c] = kept_coeff_positions[k];
        d(r, c) = double(cb.coeffs[k]) / double(cb.scale_factor);
    }
    return idct2(d);
}

namespace detail {

// Integrates rows 0..last_row of the reconstruction; row r depends only on
// rows 0..r-1, so a prefix of rows is enough for partial decompression.
inline void integrate_rows(const compressed_block& cb, const block8& slopes, int last_row,
                           block8& out) {
    const double s = cb.slope;
    out(0, 0) = cb.first;
    for (int j = 1; j < block_dim; ++j) out(0, j) = out(0, j - 1) + s * slopes(0, j);
    for (int i = 1; i <= last_row; ++i) {
        out(i, 0) = out(i - 1, 0) + s * slopes(i, 0);
        for (int j = 1; j < block_dim; ++j)
            out(i, j) = (out(i - 1, j) + out(i, j - 1)) / 2.0 + s * slopes(i, j);
    }
}

}  // namespace detail

// Inverse pipeline: rebuild the slope grid, rescale by the stored mean slope
// and integrate. Exact for constant blocks.
inline block8 decompress_block(const compressed_block& cb) {
    const block8 slopes = dequantize_prediction(cb);
    block8 out;
    detail::integrate_rows(cb, slopes, block_dim - 1, out);
    return out;
}

}  // namespace blaz

#endif  // BLAZ_CODEC_HPP
