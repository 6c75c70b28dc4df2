#ifndef BLAZ_TEST_UTIL_HPP
#define BLAZ_TEST_UTIL_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <random>

#include "blaz/blaz.hpp"

namespace blaz::testing {

template <class F>
block8 make_block(F&& f) {
    block8 b;
    for (int i = 0; i < block_dim; ++i)
        for (int j = 0; j < block_dim; ++j) b(i, j) = f(i, j);
    return b;
}

inline block8 constant_block(double c) {
    return make_block([&](int, int) { return c; });
}

// The worked reference block: the bilinear ramp i*j/100 whose full pipeline
// (slope 0.04, scale factor 20, the index matrix below) is pinned by the
// golden tests.
inline block8 ramp_block() {
    return make_block([](int i, int j) { return double(i * j) / 100.0; });
}

// Expected quantizer indexes for ramp_block().
inline constexpr std::array<std::array<int, 8>, 8> ramp_indices = {{
    {125, 125, 125, 125, 125, 125, 125, 125},
    {125, 143, 153, 162, 171, 180, 189, 198},
    {125, 153, 162, 171, 180, 189, 198, 207},
    {125, 162, 171, 180, 189, 198, 207, 217},
    {125, 171, 180, 189, 198, 207, 217, 226},
    {125, 180, 189, 198, 207, 217, 226, 235},
    {125, 189, 198, 207, 217, 226, 235, 244},
    {125, 198, 207, 217, 226, 235, 244, 253},
}};

// Expected scaled transform grid for ramp_block(), tolerance +-2 per entry.
inline constexpr std::array<std::array<int, 8>, 8> ramp_coeff_grid = {{
    {122, -51, -11, -14, -8, -8, -4, -2},
    {-51, 15, 7, 7, 5, 4, 3, 1},
    {-11, 7, 0, 0, 0, 0, 0, 0},
    {-14, 7, 0, 1, 0, 0, 0, 0},
    {-8, 5, 0, 0, 0, 0, 0, 0},
    {-8, 4, 0, 0, 0, 0, 0, 0},
    {-4, 3, 0, 0, 0, 0, 0, 0},
    {-2, 1, 0, 0, 0, 0, 0, 0},
}};

inline bool bit_equal(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

inline bool bit_equal(const block8& a, const block8& b) {
    return std::memcmp(a.a.data(), b.a.data(), sizeof a.a) == 0;
}

inline bool bit_equal(const compressed_block& a, const compressed_block& b) {
    return bit_equal(a.first, b.first) && bit_equal(a.slope, b.slope) &&
           a.scale_factor == b.scale_factor && a.coeffs == b.coeffs;
}

// Smooth random surface: low-order polynomial plus mild noise, scaled over
// several orders of magnitude. Always non-constant.
inline block8 random_smooth_block(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> mag(-3.0, 3.0);
    const double s = std::pow(10.0, mag(rng));
    const double c0 = coef(rng), cx = coef(rng), cy = coef(rng);
    const double cxx = coef(rng), cyy = coef(rng), cxy = coef(rng);
    std::uniform_real_distribution<double> noise(-0.02, 0.02);
    return make_block([&](int i, int j) {
        const double x = j / 7.0, y = i / 7.0;
        return s * (c0 + cx * x + cy * y + cxx * x * x + cyy * y * y + cxy * x * y + noise(rng));
    });
}

inline block8 random_rough_block(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> v(-100.0, 100.0);
    return make_block([&](int, int) { return v(rng); });
}

inline compressed_block random_compressed_block(std::mt19937_64& rng) {
    return compress_block(random_smooth_block(rng));
}

}  // namespace blaz::testing

#endif  // BLAZ_TEST_UTIL_HPP
