#ifndef BLAZ_BENCH_HPP
#define BLAZ_BENCH_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blaz/matrix.hpp"

namespace blaz {

// The six reference surfaces the accuracy suite samples on [-2,2]^2.
struct test_function {
    std::string_view name;
    double (*eval)(double x, double y);
};

inline const std::array<test_function, 6>& test_functions() {
    static const std::array<test_function, 6> fns = {{
        {"f1", [](double x, double y) { return x * y; }},
        {"f2", [](double x, double y) { return x * y / (1.0 + x * x + y * y); }},
        {"f3", [](double x, double y) { return x * x - y; }},
        {"f4", [](double x, double y) { return (x * x) * (y * y); }},
        {"f5", [](double x, double y) { return std::cos(std::sqrt(x * x + y * y)); }},
        {"f6",
         [](double x, double y) {
             return std::cos(x * x + y * y) * std::exp(-0.1 * (x * x + y * y));
         }},
    }};
    return fns;
}

inline const test_function* find_test_function(std::string_view name) {
    for (const test_function& f : test_functions())
        if (f.name == name) return &f;
    return nullptr;
}

// n x n sampling of fn with nodes x_j = -2 + 4j/(n-1) on both axes;
// M(i,j) = fn(x_j, y_i).
inline dense_matrix gen_matrix(const test_function& fn, std::size_t n) {
    if (n < 2) throw std::invalid_argument("gen_matrix: size must be at least 2");
    std::vector<double> nodes(n);
    for (std::size_t j = 0; j < n; ++j) nodes[j] = -2.0 + 4.0 * double(j) / double(n - 1);
    dense_matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = fn.eval(nodes[j], nodes[i]);
    return m;
}

struct error_stats {
    double mean_rel_error = 0.0;
    std::size_t excluded = 0;  // entries with |reference| below the threshold
};

inline constexpr double rel_error_threshold = 1e-12;

// Mean of |(candidate - reference) / reference| over the entries whose
// reference magnitude is at least 1e-12; the rest are excluded and counted.
// If every entry is excluded the error is reported as 0 with
// excluded == rows*cols, which callers should treat as "metric undefined".
inline error_stats mean_relative_error(const dense_matrix& reference,
                                       const dense_matrix& candidate) {
    if (reference.rows != candidate.rows || reference.cols != candidate.cols)
        throw std::invalid_argument("mean_relative_error: dimension mismatch");
    double sum = 0.0;
    std::size_t kept = 0;
    for (std::size_t k = 0; k < reference.values.size(); ++k) {
        const double r = reference.values[k];
        if (std::fabs(r) < rel_error_threshold) continue;
        sum += std::fabs((candidate.values[k] - r) / r);
        ++kept;
    }
    error_stats out;
    out.excluded = reference.values.size() - kept;
    out.mean_rel_error = kept == 0 ? 0.0 : sum / double(kept);
    return out;
}

struct accuracy_row {
    std::string op;   // roundtrip | add | scale | mul
    std::string lhs;  // operand id, f1..f6
    std::string rhs;  // second operand id, scalar constant, or empty
    std::size_t n = 0;
    double error = 0.0;
    std::size_t excluded = 0;
};

// Reproduces the accuracy table: 6 round trips, the 15 pairwise additions,
// multiplication of each matrix by the constant 2, and all 36 products.
// Products are measured on the dense result assembled from the per-entry
// compressed dot products (no re-compression of the output).
inline std::vector<accuracy_row> accuracy_suite(std::size_t n, unsigned threads = 1) {
    const auto& fns = test_functions();
    std::vector<dense_matrix> m;
    std::vector<compressed_matrix> c;
    std::vector<dense_matrix> u;
    m.reserve(fns.size());
    for (const test_function& f : fns) m.push_back(gen_matrix(f, n));
    for (const dense_matrix& d : m) c.push_back(compress_matrix(d, threads));
    for (const compressed_matrix& cm : c) u.push_back(decompress_matrix(cm, threads));

    std::vector<accuracy_row> rows;
    rows.reserve(6 + 15 + 6 + 36);
    auto push = [&](std::string op, std::string lhs, std::string rhs, const error_stats& e) {
        rows.push_back({std::move(op), std::move(lhs), std::move(rhs), n, e.mean_rel_error,
                        e.excluded});
    };

    for (std::size_t i = 0; i < 6; ++i)
        push("roundtrip", std::string(fns[i].name), "", mean_relative_error(m[i], u[i]));

    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j) {
            const dense_matrix got = decompress_matrix(mat_add(c[i], c[j], threads), threads);
            push("add", std::string(fns[i].name), std::string(fns[j].name),
                 mean_relative_error(ref::add(m[i], m[j]), got));
        }

    for (std::size_t i = 0; i < 6; ++i) {
        const dense_matrix got = decompress_matrix(mat_scale(c[i], 2.0, threads), threads);
        push("scale", std::string(fns[i].name), "2",
             mean_relative_error(ref::scale(m[i], 2.0), got));
    }

    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            const dense_matrix got = mat_mul_dense(c[i], c[j], threads);
            push("mul", std::string(fns[i].name), std::string(fns[j].name),
                 mean_relative_error(ref::mul(m[i], m[j]), got));
        }
    return rows;
}

inline void write_accuracy_csv(const std::vector<accuracy_row>& rows, std::ostream& out) {
    out << "op,lhs,rhs,n,error,excluded\n";
    char buf[64];
    for (const accuracy_row& r : rows) {
        std::snprintf(buf, sizeof buf, "%.9e", r.error);
        out << r.op << ',' << r.lhs << ',' << r.rhs << ',' << r.n << ',' << buf << ','
            << r.excluded << '\n';
    }
}

enum class bench_op { add, scale, dot, matmul, compress, decompress };

inline const char* name_of(bench_op op) {
    switch (op) {
        case bench_op::add: return "add";
        case bench_op::scale: return "scale";
        case bench_op::dot: return "dot";
        case bench_op::matmul: return "matmul";
        case bench_op::compress: return "compress";
        case bench_op::decompress: return "decompress";
    }
    return "?";
}

inline const std::array<bench_op, 6>& all_bench_ops() {
    static const std::array<bench_op, 6> ops = {bench_op::add,    bench_op::scale,
                                                bench_op::dot,    bench_op::matmul,
                                                bench_op::compress, bench_op::decompress};
    return ops;
}

struct bench_row {
    std::string op;
    std::size_t n = 0;
    std::string variant;  // compressed | dense | compressed-parallel
    double seconds = 0.0;
    int repeats = 0;
};

namespace detail {

// Keeps results observable so the timed kernels cannot be optimized away.
inline volatile double bench_sink = 0.0;

inline void consume(double v) { bench_sink = v; }

template <class F>
double time_median(F&& run, int repeats) {
    using clock = std::chrono::steady_clock;
    run();  // warmup
    std::vector<double> samples(static_cast<std::size_t>(repeats));
    for (double& s : samples) {
        const auto t0 = clock::now();
        run();
        const auto t1 = clock::now();
        s = std::chrono::duration<double>(t1 - t0).count();
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t mid = samples.size() / 2;
    return samples.size() % 2 ? samples[mid] : (samples[mid - 1] + samples[mid]) / 2.0;
}

}  // namespace detail

// Times the requested operations over compressed and dense operands at each
// size: median wall time of `repeats` runs after one warmup. The matrices
// are f1 and f4 samplings; the dot product is taken at (n/2, n/2). With
// parallel_threads > 1 an extra "compressed-parallel" variant row is
// emitted for the block-dispatched operations.
inline std::vector<bench_row> bench_suite(std::span<const std::size_t> sizes,
                                          std::span<const bench_op> ops, int repeats,
                                          unsigned parallel_threads = 1) {
    if (repeats < 5) throw std::invalid_argument("bench_suite: at least 5 repeats required");
    std::vector<bench_row> rows;
    for (const std::size_t n : sizes) {
        const dense_matrix a = gen_matrix(test_functions()[0], n);
        const dense_matrix b = gen_matrix(test_functions()[3], n);
        const compressed_matrix ca = compress_matrix(a);
        const compressed_matrix cb = compress_matrix(b);
        const std::size_t mid = n / 2;

        auto record = [&](bench_op op, const char* variant, auto&& run) {
            rows.push_back({name_of(op), n, variant, detail::time_median(run, repeats), repeats});
        };
        auto record_pair = [&](bench_op op, auto&& compressed_run, auto&& dense_run) {
            record(op, "compressed", compressed_run);
            record(op, "dense", dense_run);
        };

        for (const bench_op op : ops) {
            switch (op) {
                case bench_op::add:
                    record_pair(
                        op, [&] { detail::consume(mat_add(ca, cb).blocks[0].first); },
                        [&] { detail::consume(ref::add(a, b).values[0]); });
                    if (parallel_threads > 1)
                        record(op, "compressed-parallel", [&] {
                            detail::consume(mat_add(ca, cb, parallel_threads).blocks[0].first);
                        });
                    break;
                case bench_op::scale:
                    record_pair(
                        op, [&] { detail::consume(mat_scale(ca, 2.0).blocks[0].first); },
                        [&] { detail::consume(ref::scale(a, 2.0).values[0]); });
                    if (parallel_threads > 1)
                        record(op, "compressed-parallel", [&] {
                            detail::consume(
                                mat_scale(ca, 2.0, parallel_threads).blocks[0].first);
                        });
                    break;
                case bench_op::dot:
                    record_pair(
                        op, [&] { detail::consume(mat_dot(ca, cb, mid, mid)); },
                        [&] { detail::consume(ref::dot(a, b, mid, mid)); });
                    break;
                case bench_op::matmul:
                    record_pair(
                        op, [&] { detail::consume(mat_mul(ca, cb).blocks[0].first); },
                        [&] { detail::consume(ref::mul(a, b).values[0]); });
                    if (parallel_threads > 1)
                        record(op, "compressed-parallel", [&] {
                            detail::consume(
                                mat_mul(ca, cb, parallel_threads).blocks[0].first);
                        });
                    break;
                case bench_op::compress:
                    record(op, "compressed",
                           [&] { detail::consume(compress_matrix(a).blocks[0].first); });
                    break;
                case bench_op::decompress:
                    record(op, "compressed",
                           [&] { detail::consume(decompress_matrix(ca).values[0]); });
                    break;
            }
        }
    }
    return rows;
}

inline void write_bench_csv(const std::vector<bench_row>& rows, std::ostream& out) {
    out << "op,n,variant,seconds\n";
    char buf[64];
    for (const bench_row& r : rows) {
        std::snprintf(buf, sizeof buf, "%.9e", r.seconds);
        out << r.op << ',' << r.n << ',' << r.variant << ',' << buf << '\n';
    }
}

}  // namespace blaz

#endif  // BLAZ_BENCH_HPP
