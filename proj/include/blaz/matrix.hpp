#ifndef BLAZ_MATRIX_HPP
#define BLAZ_MATRIX_HPP

#include <cstddef>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "blaz/block_ops.hpp"
#include "blaz/codec.hpp"

namespace blaz {

struct dense_matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row major, rows*cols entries

    dense_matrix() = default;
    dense_matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    double&       operator()(std::size_t r, std::size_t c)       { return values[r * cols + c]; }
    const double& operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

// Logical dimensions plus the row-major grid of compressed 8x8 tiles that
// covers them (dimensions padded up to multiples of 8 by edge replication).
struct compressed_matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t block_rows = 0;
    std::size_t block_cols = 0;
    std::vector<compressed_block> blocks;

    compressed_block&       block(std::size_t br, std::size_t bc)       { return blocks[br * block_cols + bc]; }
    const compressed_block& block(std::size_t br, std::size_t bc) const { return blocks[br * block_cols + bc]; }
};

namespace detail {

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = count * w / workers;
        const std::size_t hi = count * (w + 1) / workers;
        pool.emplace_back([lo, hi, &body, &error, &error_mutex] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                const std::lock_guard<std::mutex> guard(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// Reads entry (r,c) of the edge-replicated padding of m.
inline double padded_at(const dense_matrix& m, std::size_t r, std::size_t c) {
    if (r >= m.rows) r = m.rows - 1;
    if (c >= m.cols) c = m.cols - 1;
    return m(r, c);
}

inline block8 extract_tile(const dense_matrix& m, std::size_t br, std::size_t bc) {
    block8 t;
    for (int i = 0; i < block_dim; ++i)
        for (int j = 0; j < block_dim; ++j)
            t(i, j) = padded_at(m, br * block_dim + i, bc * block_dim + j);
    return t;
}

inline void require_same_dims(const compressed_matrix& a, const compressed_matrix& b,
                              const char* what) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                                    " vs " + std::to_string(b.rows) + "x" +
                                    std::to_string(b.cols) + ")");
}

}  // namespace detail

inline compressed_matrix compress_matrix(const dense_matrix& m, unsigned threads = 1) {
    if (m.rows == 0 || m.cols == 0) throw std::invalid_argument("compress_matrix: empty matrix");
    compressed_matrix cm;
    cm.rows = m.rows;
    cm.cols = m.cols;
    cm.block_rows = (m.rows + block_dim - 1) / block_dim;
    cm.block_cols = (m.cols + block_dim - 1) / block_dim;
    cm.blocks.resize(cm.block_rows * cm.block_cols);
    detail::parallel_for(cm.blocks.size(), threads, [&](std::size_t t) {
        const std::size_t br = t / cm.block_cols;
        const std::size_t bc = t % cm.block_cols;
        cm.blocks[t] = compress_block(detail::extract_tile(m, br, bc));
    });
    return cm;
}

inline dense_matrix decompress_matrix(const compressed_matrix& cm, unsigned threads = 1) {
    dense_matrix m(cm.rows, cm.cols);
    detail::parallel_for(cm.blocks.size(), threads, [&](std::size_t t) {
        const std::size_t br = t / cm.block_cols;
        const std::size_t bc = t % cm.block_cols;
        const block8 tile = decompress_block(cm.blocks[t]);
        const std::size_t imax = std::min<std::size_t>(block_dim, cm.rows - br * block_dim);
        const std::size_t jmax = std::min<std::size_t>(block_dim, cm.cols - bc * block_dim);
        for (std::size_t i = 0; i < imax; ++i)
            for (std::size_t j = 0; j < jmax; ++j)
                m(br * block_dim + i, bc * block_dim + j) = tile(int(i), int(j));
    });
    return m;
}

inline compressed_matrix mat_add(const compressed_matrix& a, const compressed_matrix& b,
                                 unsigned threads = 1) {
    detail::require_same_dims(a, b, "mat_add");
    compressed_matrix out = a;
    detail::parallel_for(out.blocks.size(), threads,
                         [&](std::size_t t) { out.blocks[t] = add(a.blocks[t], b.blocks[t]); });
    return out;
}

inline compressed_matrix mat_sub(const compressed_matrix& a, const compressed_matrix& b,
                                 unsigned threads = 1) {
    detail::require_same_dims(a, b, "mat_sub");
    compressed_matrix out = a;
    detail::parallel_for(out.blocks.size(), threads,
                         [&](std::size_t t) { out.blocks[t] = sub(a.blocks[t], b.blocks[t]); });
    return out;
}

inline compressed_matrix mat_scale(const compressed_matrix& a, double c, unsigned threads = 1) {
    compressed_matrix out = a;
    detail::parallel_for(out.blocks.size(), threads,
                         [&](std::size_t t) { out.blocks[t] = scale(a.blocks[t], c); });
    return out;
}

// Dot product of row i of a with column j of b using partial tile
// reconstructions. Contributions from padding beyond the logical inner
// dimension are skipped, so the result matches a dense dot over the
// decompressed matrices bitwise.
inline double mat_dot(const compressed_matrix& a, const compressed_matrix& b, std::size_t i,
                      std::size_t j) {
    if (a.cols != b.rows) throw std::invalid_argument("mat_dot: inner dimension mismatch");
    if (i >= a.rows || j >= b.cols) throw std::out_of_range("mat_dot: index out of range");
    const std::size_t bi = i / block_dim;
    const int ri = int(i % block_dim);
    const std::size_t bj = j / block_dim;
    const int cj = int(j % block_dim);
    double r = 0.0;
    for (std::size_t t = 0; t < a.block_cols; ++t) {
        const partial_reconstruction rows = reconstruct_rows(a.block(bi, t), ri);
        const partial_reconstruction cols = reconstruct_cols(b.block(t, bj), cj);
        const int klim = int(std::min<std::size_t>(block_dim, a.cols - t * block_dim));
        for (int k = 0; k < klim; ++k) r += rows.values(ri, k) * cols.values(k, cj);
    }
    return r;
}

namespace detail {

// Per-multiply cache: every operand tile decompressed exactly once.
inline std::vector<block8> decompress_tiles(const compressed_matrix& cm, unsigned threads) {
    std::vector<block8> tiles(cm.blocks.size());
    parallel_for(tiles.size(), threads,
                 [&](std::size_t t) { tiles[t] = decompress_block(cm.blocks[t]); });
    return tiles;
}

// Dense product tile (I,J): sum over the inner block index t of the 8x8
// products of cached tiles, ascending t then ascending k per entry — the
// same accumulation order as mat_dot.
inline void accumulate_product_tile(const std::vector<block8>& ta, const std::vector<block8>& tb,
                                    std::size_t block_cols_a, std::size_t block_cols_b,
                                    std::size_t inner_cols, std::size_t I, std::size_t J,
                                    block8& acc) {
    for (std::size_t t = 0; t < block_cols_a; ++t) {
        const block8& da = ta[I * block_cols_a + t];
        const block8& db = tb[t * block_cols_b + J];
        const int klim = int(std::min<std::size_t>(block_dim, inner_cols - t * block_dim));
        for (int i = 0; i < block_dim; ++i)
            for (int k = 0; k < klim; ++k) {
                const double av = da(i, k);
                for (int j = 0; j < block_dim; ++j) acc(i, j) += av * db(k, j);
            }
    }
}

template <class Emit>
void mat_mul_impl(const compressed_matrix& a, const compressed_matrix& b, unsigned threads,
                  Emit&& emit) {
    if (a.cols != b.rows) throw std::invalid_argument("mat_mul: inner dimension mismatch");
    const std::vector<block8> ta = decompress_tiles(a, threads);
    const std::vector<block8> tb = decompress_tiles(b, threads);
    parallel_for(a.block_rows * b.block_cols, threads, [&](std::size_t tile) {
        const std::size_t I = tile / b.block_cols;
        const std::size_t J = tile % b.block_cols;
        block8 acc;
        accumulate_product_tile(ta, tb, a.block_cols, b.block_cols, a.cols, I, J, acc);
        emit(I, J, acc);
    });
}

}  // namespace detail

// Block-wise product; the accumulated dense tile is compressed once per
// output tile rather than chaining compressed additions.
inline compressed_matrix mat_mul(const compressed_matrix& a, const compressed_matrix& b,
                                 unsigned threads = 1) {
    compressed_matrix out;
    out.rows = a.rows;
    out.cols = b.cols;
    out.block_rows = (out.rows + block_dim - 1) / block_dim;
    out.block_cols = (out.cols + block_dim - 1) / block_dim;
    out.blocks.resize(out.block_rows * out.block_cols);
    detail::mat_mul_impl(a, b, threads, [&](std::size_t I, std::size_t J, const block8& acc) {
        out.block(I, J) = compress_block(acc);
    });
    return out;
}

// Same accumulation as mat_mul, returned dense instead of re-compressed.
// Entry (i,j) equals mat_dot(a, b, i, j) bitwise.
inline dense_matrix mat_mul_dense(const compressed_matrix& a, const compressed_matrix& b,
                                  unsigned threads = 1) {
    dense_matrix out(a.rows, b.cols);
    detail::mat_mul_impl(a, b, threads, [&](std::size_t I, std::size_t J, const block8& acc) {
        const std::size_t imax = std::min<std::size_t>(block_dim, out.rows - I * block_dim);
        const std::size_t jmax = std::min<std::size_t>(block_dim, out.cols - J * block_dim);
        for (std::size_t i = 0; i < imax; ++i)
            for (std::size_t j = 0; j < jmax; ++j)
                out(I * block_dim + i, J * block_dim + j) = acc(int(i), int(j));
    });
    return out;
}

// Uncompressed baselines used by the benchmarks and as test oracles.
namespace ref {

inline void require_same_dims(const dense_matrix& a, const dense_matrix& b, const char* what) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

inline dense_matrix add(const dense_matrix& a, const dense_matrix& b) {
    require_same_dims(a, b, "ref::add");
    dense_matrix out(a.rows, a.cols);
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = a.values[k] + b.values[k];
    return out;
}

inline dense_matrix sub(const dense_matrix& a, const dense_matrix& b) {
    require_same_dims(a, b, "ref::sub");
    dense_matrix out(a.rows, a.cols);
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = a.values[k] - b.values[k];
    return out;
}

inline dense_matrix scale(const dense_matrix& a, double c) {
    dense_matrix out(a.rows, a.cols);
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = a.values[k] * c;
    return out;
}

inline double dot(const dense_matrix& a, const dense_matrix& b, std::size_t i, std::size_t j) {
    if (a.cols != b.rows) throw std::invalid_argument("ref::dot: inner dimension mismatch");
    if (i >= a.rows || j >= b.cols) throw std::out_of_range("ref::dot: index out of range");
    double r = 0.0;
    for (std::size_t k = 0; k < a.cols; ++k) r += a(i, k) * b(k, j);
    return r;
}

// Textbook i-k-j product; per-entry accumulation is in ascending k.
inline dense_matrix mul(const dense_matrix& a, const dense_matrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("ref::mul: inner dimension mismatch");
    dense_matrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double av = a(i, k);
            for (std::size_t j = 0; j < b.cols; ++j) out(i, j) += av * b(k, j);
        }
    return out;
}

}  // namespace ref

}  // namespace blaz

#endif  // BLAZ_MATRIX_HPP
