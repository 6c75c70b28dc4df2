#ifndef BLAZ_BLOCK_HPP
#define BLAZ_BLOCK_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace blaz {

inline constexpr int block_dim = 8;
inline constexpr int block_cells = block_dim * block_dim;

// Retained transform coefficients: the first two rows in full, then
// rows 2..7 of the first two columns.
inline constexpr int kept_coeff_count = 28;

// f + s as raw binary64, one scale byte, 28 coefficient bytes.
inline constexpr int block_payload_bytes = 8 + 8 + 1 + kept_coeff_count;
inline constexpr double compression_rate =
    double(block_cells * 8 * 8) / double(block_payload_bytes * 8);

// 8x8 grid of binary64 values, row major. Used for dense blocks as well as
// the delta/slope/transform grids the codec passes between stages.
struct block8 {
    std::array<double, block_cells> a{};

    double&       operator()(int r, int c)       { return a[r * block_dim + c]; }
    const double& operator()(int r, int c) const { return a[r * block_dim + c]; }
};

// Fixed-rate compressed form of one 8x8 block: first element, mean slope,
// coefficient scale byte and the 28 retained transform coefficients.
struct compressed_block {
    double first = 0.0;
    double slope = 0.0;
    std::uint8_t scale_factor = 1;                       // in [1,255]
    std::array<std::int8_t, kept_coeff_count> coeffs{};  // each in [-127,127]
};

// Position of coefficient k inside the 8x8 transform grid. The order is
// frozen: k 0..7 -> row 0, k 8..15 -> row 1, k 16..21 -> column 0 rows 2..7,
// k 22..27 -> column 1 rows 2..7.
struct coeff_position {
    std::uint8_t row;
    std::uint8_t col;
};

inline constexpr std::array<coeff_position, kept_coeff_count> kept_coeff_positions = [] {
    std::array<coeff_position, kept_coeff_count> p{};
    int k = 0;
    for (int c = 0; c < block_dim; ++c) p[k++] = {0, std::uint8_t(c)};
    for (int c = 0; c < block_dim; ++c) p[k++] = {1, std::uint8_t(c)};
    for (int r = 2; r < block_dim; ++r) p[k++] = {std::uint8_t(r), 0};
    for (int r = 2; r < block_dim; ++r) p[k++] = {std::uint8_t(r), 1};
    return p;
}();

// Rounds to the nearest integer, halfway cases away from zero. Valid for
// |x| < 2^52; the codec only rounds quantizer indexes and scaled transform
// coefficients, which are no larger than a few hundred.
inline double round_half_away(double x) {
    const double t = double(static_cast<long long>(x));  // trunc, exact here
    const double frac = x - t;                           // exact
    if (frac >= 0.5) return t + 1.0;
    if (frac <= -0.5) return t - 1.0;
    return t;
}

inline int clamp_index(double x) {
    const double r = round_half_away(x);
    if (r <= 0.0) return 0;
    if (r >= 255.0) return 255;
    return int(r);
}

inline std::int8_t clamp_coeff(double x) {
    const double r = round_half_away(x);
    if (r <= -127.0) return -127;
    if (r >= 127.0) return 127;
    return std::int8_t(r);
}

inline bool all_finite(const block8& b) {
    for (double v : b.a)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace blaz

#endif  // BLAZ_BLOCK_HPP
