#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace blaz;
using namespace blaz::testing;

namespace {

dense_matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const double c0 = coef(rng), cx = coef(rng), cy = coef(rng), cxy = coef(rng);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    dense_matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const double x = double(j) / double(cols), y = double(i) / double(rows);
            m(i, j) = c0 + cx * x + cy * y + cxy * x * y + noise(rng);
        }
    return m;
}

// Reference padding: explicit pad-then-tile construction.
dense_matrix pad_to_blocks(const dense_matrix& m) {
    const std::size_t pr = (m.rows + 7) / 8 * 8;
    const std::size_t pc = (m.cols + 7) / 8 * 8;
    dense_matrix p(pr, pc);
    for (std::size_t i = 0; i < pr; ++i)
        for (std::size_t j = 0; j < pc; ++j)
            p(i, j) = m(std::min(i, m.rows - 1), std::min(j, m.cols - 1));
    return p;
}

block8 tile_of(const dense_matrix& padded, std::size_t br, std::size_t bc) {
    block8 t;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) t(i, j) = padded(br * 8 + i, bc * 8 + j);
    return t;
}

}  // namespace

TEST(CompressMatrix, SixteenSquareTilesIndependently) {
    std::mt19937_64 rng(61);
    const dense_matrix m = random_matrix(16, 16, rng);
    const compressed_matrix cm = compress_matrix(m);
    EXPECT_EQ(cm.block_rows, 2u);
    EXPECT_EQ(cm.block_cols, 2u);
    const dense_matrix padded = pad_to_blocks(m);
    for (std::size_t br = 0; br < 2; ++br)
        for (std::size_t bc = 0; bc < 2; ++bc)
            EXPECT_TRUE(bit_equal(cm.block(br, bc), compress_block(tile_of(padded, br, bc))));
}

TEST(CompressMatrix, SingleBlockEqualsCompressBlock) {
    std::mt19937_64 rng(62);
    const dense_matrix m = random_matrix(8, 8, rng);
    const compressed_matrix cm = compress_matrix(m);
    ASSERT_EQ(cm.blocks.size(), 1u);
    block8 b;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) b(i, j) = m(i, j);
    EXPECT_TRUE(bit_equal(cm.blocks[0], compress_block(b)));
}

TEST(CompressMatrix, PaddingReplicatesEdges) {
    std::mt19937_64 rng(63);
    const dense_matrix m = random_matrix(9, 9, rng);
    const compressed_matrix cm = compress_matrix(m);
    EXPECT_EQ(cm.block_rows, 2u);
    EXPECT_EQ(cm.block_cols, 2u);
    const dense_matrix padded = pad_to_blocks(m);
    for (std::size_t br = 0; br < 2; ++br)
        for (std::size_t bc = 0; bc < 2; ++bc)
            ASSERT_TRUE(bit_equal(cm.block(br, bc), compress_block(tile_of(padded, br, bc))));
    const dense_matrix back = decompress_matrix(cm);
    EXPECT_EQ(back.rows, 9u);
    EXPECT_EQ(back.cols, 9u);
}

TEST(CompressMatrix, RejectsEmpty) {
    EXPECT_THROW(compress_matrix(dense_matrix{}), std::invalid_argument);
}

TEST(CompressMatrix, ParallelMatchesSequentialBitwise) {
    std::mt19937_64 rng(64);
    const dense_matrix m = random_matrix(40, 56, rng);
    const compressed_matrix seq = compress_matrix(m);
    const compressed_matrix par = compress_matrix(m, 4);
    ASSERT_EQ(seq.blocks.size(), par.blocks.size());
    for (std::size_t t = 0; t < seq.blocks.size(); ++t)
        ASSERT_TRUE(bit_equal(seq.blocks[t], par.blocks[t]));
    const dense_matrix d1 = decompress_matrix(seq);
    const dense_matrix d2 = decompress_matrix(par, 4);
    for (std::size_t k = 0; k < d1.values.size(); ++k) ASSERT_TRUE(bit_equal(d1.values[k], d2.values[k]));
}

TEST(DecompressMatrix, RoundTripKeepsDimensions) {
    std::mt19937_64 rng(65);
    for (std::size_t rows = 1; rows <= 64; rows += 7)
        for (std::size_t cols = 1; cols <= 64; cols += 9) {
            const dense_matrix m = random_matrix(rows, cols, rng);
            const dense_matrix back = decompress_matrix(compress_matrix(m));
            ASSERT_EQ(back.rows, rows);
            ASSERT_EQ(back.cols, cols);
        }
}

TEST(DecompressMatrix, NineBySeventeenKeepsDimensions) {
    std::mt19937_64 rng(66);
    const dense_matrix m = random_matrix(9, 17, rng);
    const dense_matrix back = decompress_matrix(compress_matrix(m));
    EXPECT_EQ(back.rows, 9u);
    EXPECT_EQ(back.cols, 17u);
}

TEST(DecompressMatrix, EightSquareMatchesBlockDecompression) {
    std::mt19937_64 rng(67);
    const dense_matrix m = random_matrix(8, 8, rng);
    const compressed_matrix cm = compress_matrix(m);
    const dense_matrix back = decompress_matrix(cm);
    const block8 tile = decompress_block(cm.blocks[0]);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) ASSERT_TRUE(bit_equal(back(i, j), tile(i, j)));
}

TEST(MatElementwise, AddCommutesBitwise) {
    std::mt19937_64 rng(68);
    const dense_matrix a = random_matrix(24, 24, rng);
    const dense_matrix b = random_matrix(24, 24, rng);
    const compressed_matrix ca = compress_matrix(a);
    const compressed_matrix cb = compress_matrix(b);
    const compressed_matrix ab = mat_add(ca, cb);
    const compressed_matrix ba = mat_add(cb, ca);
    for (std::size_t t = 0; t < ab.blocks.size(); ++t)
        ASSERT_TRUE(bit_equal(ab.blocks[t], ba.blocks[t]));
}

TEST(MatElementwise, ScaleByOneIsIdentity) {
    std::mt19937_64 rng(69);
    const compressed_matrix ca = compress_matrix(random_matrix(17, 33, rng));
    const compressed_matrix s = mat_scale(ca, 1.0);
    ASSERT_EQ(s.blocks.size(), ca.blocks.size());
    for (std::size_t t = 0; t < s.blocks.size(); ++t)
        ASSERT_TRUE(bit_equal(s.blocks[t], ca.blocks[t]));
}

TEST(MatElementwise, SubOfSelfDecompressesToZero) {
    std::mt19937_64 rng(70);
    const compressed_matrix ca = compress_matrix(random_matrix(20, 12, rng));
    const dense_matrix diff = decompress_matrix(mat_sub(ca, ca));
    for (double v : diff.values) ASSERT_EQ(v, 0.0);
}

TEST(MatElementwise, DimensionMismatchThrows) {
    std::mt19937_64 rng(71);
    const compressed_matrix a = compress_matrix(random_matrix(16, 16, rng));
    const compressed_matrix b = compress_matrix(random_matrix(16, 24, rng));
    EXPECT_THROW(mat_add(a, b), std::invalid_argument);
    EXPECT_THROW(mat_sub(a, b), std::invalid_argument);
}

TEST(MatDot, MatchesDenseDotOverDecompressedBitwise) {
    std::mt19937_64 rng(72);
    const dense_matrix a = random_matrix(24, 24, rng);
    const dense_matrix b = random_matrix(24, 24, rng);
    const compressed_matrix ca = compress_matrix(a);
    const compressed_matrix cb = compress_matrix(b);
    const dense_matrix da = decompress_matrix(ca);
    const dense_matrix db = decompress_matrix(cb);
    for (std::size_t i = 0; i < 24; i += 5)
        for (std::size_t j = 0; j < 24; j += 7)
            ASSERT_TRUE(bit_equal(mat_dot(ca, cb, i, j), ref::dot(da, db, i, j)))
                << "(" << i << "," << j << ")";
}

TEST(MatDot, PaddedInnerDimensionMatchesDenseDot) {
    std::mt19937_64 rng(73);
    const dense_matrix a = random_matrix(12, 20, rng);
    const dense_matrix b = random_matrix(20, 10, rng);
    const compressed_matrix ca = compress_matrix(a);
    const compressed_matrix cb = compress_matrix(b);
    const dense_matrix da = decompress_matrix(ca);
    const dense_matrix db = decompress_matrix(cb);
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 10; ++j)
            ASSERT_TRUE(bit_equal(mat_dot(ca, cb, i, j), ref::dot(da, db, i, j)));
}

TEST(MatDot, ZeroOperandGivesZero) {
    std::mt19937_64 rng(74);
    const compressed_matrix ca = compress_matrix(random_matrix(16, 16, rng));
    const compressed_matrix zero = compress_matrix(dense_matrix(16, 16));
    EXPECT_EQ(mat_dot(ca, zero, 3, 5), 0.0);
}

TEST(MatDot, SingleBlockReducesToBlockDot) {
    std::mt19937_64 rng(75);
    const dense_matrix a = random_matrix(8, 8, rng);
    const dense_matrix b = random_matrix(8, 8, rng);
    const compressed_matrix ca = compress_matrix(a);
    const compressed_matrix cb = compress_matrix(b);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            ASSERT_TRUE(bit_equal(mat_dot(ca, cb, i, j), dot(ca.blocks[0], cb.blocks[0], i, j)));
}

TEST(MatDot, ErrorsOnBadArguments) {
    std::mt19937_64 rng(76);
    const compressed_matrix a = compress_matrix(random_matrix(16, 16, rng));
    const compressed_matrix b = compress_matrix(random_matrix(24, 16, rng));
    EXPECT_THROW(mat_dot(a, b, 0, 0), std::invalid_argument);  // inner mismatch
    EXPECT_THROW(mat_dot(a, a, 16, 0), std::out_of_range);
}

TEST(MatMul, SingleBlockTileEqualsBlockMul) {
    std::mt19937_64 rng(77);
    const dense_matrix a = random_matrix(8, 8, rng);
    const dense_matrix b = random_matrix(8, 8, rng);
    const compressed_matrix ca = compress_matrix(a);
    const compressed_matrix cb = compress_matrix(b);
    const dense_matrix pre = mat_mul_dense(ca, cb);
    const block8 want = block_mul(ca.blocks[0], cb.blocks[0]);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) ASSERT_TRUE(bit_equal(pre(i, j), want(i, j)));
}

TEST(MatMul, EntriesEqualMatDotBitwise) {
    std::mt19937_64 rng(78);
    const dense_matrix a = random_matrix(20, 28, rng);
    const dense_matrix b = random_matrix(28, 12, rng);
    const compressed_matrix ca = compress_matrix(a);
    const compressed_matrix cb = compress_matrix(b);
    const dense_matrix prod = mat_mul_dense(ca, cb);
    ASSERT_EQ(prod.rows, 20u);
    ASSERT_EQ(prod.cols, 12u);
    for (std::size_t i = 0; i < prod.rows; ++i)
        for (std::size_t j = 0; j < prod.cols; ++j)
            ASSERT_TRUE(bit_equal(prod(i, j), mat_dot(ca, cb, i, j)))
                << "(" << i << "," << j << ")";
}

TEST(MatMul, ByZeroMatrixIsZero) {
    std::mt19937_64 rng(79);
    const compressed_matrix ca = compress_matrix(random_matrix(16, 16, rng));
    const compressed_matrix zero = compress_matrix(dense_matrix(16, 16));
    const dense_matrix prod = decompress_matrix(mat_mul(ca, zero));
    for (double v : prod.values) ASSERT_EQ(v, 0.0);
}

TEST(MatMul, CompressedOutputMatchesDenseAccumulationClosely) {
    std::mt19937_64 rng(80);
    const dense_matrix a = random_matrix(32, 32, rng);
    const dense_matrix b = random_matrix(32, 32, rng);
    const compressed_matrix ca = compress_matrix(a);
    const compressed_matrix cb = compress_matrix(b);
    const dense_matrix pre = mat_mul_dense(ca, cb);
    const dense_matrix post = decompress_matrix(mat_mul(ca, cb));
    double scale_abs = 0.0;
    for (double v : pre.values) scale_abs = std::max(scale_abs, std::fabs(v));
    for (std::size_t k = 0; k < pre.values.size(); ++k)
        ASSERT_NEAR(post.values[k], pre.values[k], 0.05 * std::max(1.0, scale_abs));
}

TEST(MatMul, DimensionMismatchThrows) {
    std::mt19937_64 rng(81);
    const compressed_matrix a = compress_matrix(random_matrix(16, 16, rng));
    const compressed_matrix b = compress_matrix(random_matrix(24, 16, rng));
    EXPECT_THROW(mat_mul(a, b), std::invalid_argument);
}

TEST(MatMul, ParallelMatchesSequentialBitwise) {
    std::mt19937_64 rng(82);
    const dense_matrix a = random_matrix(40, 24, rng);
    const dense_matrix b = random_matrix(24, 32, rng);
    const compressed_matrix ca = compress_matrix(a);
    const compressed_matrix cb = compress_matrix(b);
    const dense_matrix seq = mat_mul_dense(ca, cb);
    const dense_matrix par = mat_mul_dense(ca, cb, 4);
    for (std::size_t k = 0; k < seq.values.size(); ++k)
        ASSERT_TRUE(bit_equal(seq.values[k], par.values[k]));
}

TEST(DenseReference, AddOfNegationIsZero) {
    std::mt19937_64 rng(83);
    const dense_matrix a = random_matrix(13, 21, rng);
    const dense_matrix z = ref::add(a, ref::scale(a, -1.0));
    for (double v : z.values) ASSERT_EQ(v, 0.0);
}

TEST(DenseReference, MulByIdentityKeepsOperand) {
    std::mt19937_64 rng(84);
    const dense_matrix a = random_matrix(16, 16, rng);
    dense_matrix eye(16, 16);
    for (std::size_t i = 0; i < 16; ++i) eye(i, i) = 1.0;
    const dense_matrix prod = ref::mul(a, eye);
    for (std::size_t k = 0; k < a.values.size(); ++k) ASSERT_EQ(prod.values[k], a.values[k]);
}

TEST(DenseReference, DotMatchesNaiveLoop) {
    std::mt19937_64 rng(85);
    const dense_matrix a = random_matrix(12, 20, rng);
    const dense_matrix b = random_matrix(20, 12, rng);
    for (std::size_t i = 0; i < 12; i += 3)
        for (std::size_t j = 0; j < 12; j += 4) {
            double want = 0.0;
            for (std::size_t k = 0; k < 20; ++k) want = want + a(i, k) * b(k, j);
            ASSERT_TRUE(bit_equal(ref::dot(a, b, i, j), want));
        }
}

TEST(DenseReference, MulEntriesMatchDot) {
    std::mt19937_64 rng(86);
    const dense_matrix a = random_matrix(12, 20, rng);
    const dense_matrix b = random_matrix(20, 12, rng);
    const dense_matrix prod = ref::mul(a, b);
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 12; ++j)
            ASSERT_TRUE(bit_equal(prod(i, j), ref::dot(a, b, i, j)));
}
