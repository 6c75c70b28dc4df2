// blaz - fixed-rate lossy matrix compression with compressed-domain arithmetic.
//
// Exit codes: 0 success, 1 usage error, 2 I/O or format error,
// 3 dimension/argument error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blaz/blaz.hpp"

namespace fs = std::filesystem;

namespace {

struct argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw blaz::io_error("cannot open input file: " + path);
    return in;
}

// All writers go through a temp file + rename so a failure never leaves a
// partial output behind.
template <class WriteFn>
void write_atomically(const std::string& path, bool force, WriteFn&& write) {
    if (!force && fs::exists(path))
        throw blaz::io_error("output exists (use --force to overwrite): " + path);
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw blaz::io_error("cannot open output file: " + tmp.string());
        write(out);
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw blaz::io_error("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw blaz::io_error("cannot rename temporary file onto " + path);
    }
}

blaz::dense_matrix load_dense(const std::string& path) {
    auto in = open_input(path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return blaz::import_csv(in);
    return blaz::read_dense(in);
}

blaz::compressed_matrix load_compressed(const std::string& path) {
    auto in = open_input(path);
    return blaz::read_compressed(in);
}

const blaz::test_function& lookup_function(const std::string& id) {
    const blaz::test_function* fn = blaz::find_test_function(id);
    if (!fn) throw argument_error("unknown test function '" + id + "' (expected f1..f6)");
    return *fn;
}

std::vector<std::size_t> parse_sizes(const std::string& csv) {
    std::vector<std::size_t> sizes;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(tok, &pos);
        } catch (const std::exception&) {
            throw argument_error("bad size '" + tok + "'");
        }
        if (pos != tok.size() || v < 2) throw argument_error("bad size '" + tok + "'");
        sizes.push_back(v);
    }
    if (sizes.empty()) throw argument_error("no sizes given");
    return sizes;
}

std::vector<blaz::bench_op> parse_ops(const std::string& csv) {
    std::vector<blaz::bench_op> ops;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        bool found = false;
        for (const blaz::bench_op op : blaz::all_bench_ops())
            if (tok == blaz::name_of(op)) {
                ops.push_back(op);
                found = true;
            }
        if (!found)
            throw argument_error("unknown op '" + tok +
                                 "' (expected add,scale,dot,matmul,compress,decompress)");
    }
    if (ops.empty()) throw argument_error("no ops given");
    return ops;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-rate lossy matrix compression with compressed-domain arithmetic"};
    app.require_subcommand(1);

    bool force = false;
    unsigned threads = 1;
    app.add_flag("--force", force, "overwrite existing output files");
    app.add_option("--threads", threads, "worker threads for block dispatch (default 1)");

    std::string fn_id, in_path, in_path2, out_path;
    std::size_t gen_n = 0;
    double scalar = 0.0;
    long long dot_i = 0, dot_j = 0;
    std::size_t accuracy_n = 512;
    std::string bench_sizes = "80,400,1000,2000";
    std::string bench_ops = "add,scale,dot,matmul,compress,decompress";
    int bench_repeats = 5;

    CLI::App* gen = app.add_subcommand("gen", "sample a test function into a dense matrix file");
    gen->add_option("function", fn_id, "test function id, f1..f6")->required();
    gen->add_option("n", gen_n, "matrix size (n x n)")->required();
    gen->add_option("-o,--output", out_path, "output .blzd path")->required();

    CLI::App* compress = app.add_subcommand("compress", "compress a dense matrix file");
    compress->add_option("input", in_path, "input .blzd (or .csv) path")->required();
    compress->add_option("-o,--output", out_path, "output .blzc path")->required();

    CLI::App* decompress = app.add_subcommand("decompress", "decompress to a dense matrix file");
    decompress->add_option("input", in_path, "input .blzc path")->required();
    decompress->add_option("-o,--output", out_path, "output .blzd path")->required();

    CLI::App* info = app.add_subcommand("info", "describe a compressed matrix file");
    info->add_option("input", in_path, "input .blzc path")->required();

    CLI::App* add_cmd = app.add_subcommand("add", "add two compressed matrices");
    add_cmd->add_option("a", in_path, "left operand .blzc")->required();
    add_cmd->add_option("b", in_path2, "right operand .blzc")->required();
    add_cmd->add_option("-o,--output", out_path, "output .blzc path")->required();

    CLI::App* sub_cmd = app.add_subcommand("sub", "subtract two compressed matrices");
    sub_cmd->add_option("a", in_path, "left operand .blzc")->required();
    sub_cmd->add_option("b", in_path2, "right operand .blzc")->required();
    sub_cmd->add_option("-o,--output", out_path, "output .blzc path")->required();

    CLI::App* scale_cmd = app.add_subcommand("scale", "multiply a compressed matrix by a constant");
    scale_cmd->add_option("input", in_path, "input .blzc path")->required();
    scale_cmd->add_option("c", scalar, "constant (decimal or scientific)")->required();
    scale_cmd->add_option("-o,--output", out_path, "output .blzc path")->required();

    CLI::App* dot_cmd = app.add_subcommand("dot", "dot product of row i of a with column j of b");
    dot_cmd->add_option("a", in_path, "left operand .blzc")->required();
    dot_cmd->add_option("b", in_path2, "right operand .blzc")->required();
    dot_cmd->add_option("i", dot_i, "zero-based row index")->required();
    dot_cmd->add_option("j", dot_j, "zero-based column index")->required();

    CLI::App* matmul = app.add_subcommand("matmul", "multiply two compressed matrices");
    matmul->add_option("a", in_path, "left operand .blzc")->required();
    matmul->add_option("b", in_path2, "right operand .blzc")->required();
    matmul->add_option("-o,--output", out_path, "output .blzc path")->required();

    CLI::App* accuracy = app.add_subcommand("accuracy", "emit the accuracy table as CSV");
    accuracy->add_option("-n,--size", accuracy_n, "matrix size (default 512)");
    accuracy->add_option("-o,--output", out_path, "output .csv path")->required();

    CLI::App* bench = app.add_subcommand("bench", "time operations and emit CSV");
    bench->add_option("--sizes", bench_sizes, "comma-separated sizes (default 80,400,1000,2000)");
    bench->add_option("--ops", bench_ops,
                      "comma-separated ops (default add,scale,dot,matmul,compress,decompress)");
    bench->add_option("--repeats", bench_repeats, "timing repeats, at least 5 (default 5)");
    bench->add_option("-o,--output", out_path, "output .csv path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help exits cleanly
        app.exit(e);
        return 1;
    }

    try {
        if (*gen) {
            if (gen_n < 2) throw argument_error("n must be at least 2");
            const blaz::dense_matrix m = blaz::gen_matrix(lookup_function(fn_id), gen_n);
            write_atomically(out_path, force, [&](std::ostream& out) { blaz::write_dense(m, out); });
        } else if (*compress) {
            const blaz::dense_matrix m = load_dense(in_path);
            const blaz::compressed_matrix cm = blaz::compress_matrix(m, threads);
            write_atomically(out_path, force,
                             [&](std::ostream& out) { blaz::write_compressed(cm, out); });
        } else if (*decompress) {
            const blaz::compressed_matrix cm = load_compressed(in_path);
            const blaz::dense_matrix m = blaz::decompress_matrix(cm, threads);
            write_atomically(out_path, force, [&](std::ostream& out) { blaz::write_dense(m, out); });
        } else if (*info) {
            const blaz::compressed_matrix cm = load_compressed(in_path);
            std::printf("dimensions:       %zu x %zu\n", cm.rows, cm.cols);
            std::printf("block grid:       %zu x %zu (%zu blocks)\n", cm.block_rows, cm.block_cols,
                        cm.blocks.size());
            std::printf("block payload:    %d bytes\n", blaz::block_payload_bytes);
            std::printf("compression rate: %.4f\n", blaz::compression_rate);
        } else if (*add_cmd || *sub_cmd) {
            const blaz::compressed_matrix a = load_compressed(in_path);
            const blaz::compressed_matrix b = load_compressed(in_path2);
            const blaz::compressed_matrix r =
                *add_cmd ? blaz::mat_add(a, b, threads) : blaz::mat_sub(a, b, threads);
            write_atomically(out_path, force,
                             [&](std::ostream& out) { blaz::write_compressed(r, out); });
        } else if (*scale_cmd) {
            const blaz::compressed_matrix a = load_compressed(in_path);
            const blaz::compressed_matrix r = blaz::mat_scale(a, scalar, threads);
            write_atomically(out_path, force,
                             [&](std::ostream& out) { blaz::write_compressed(r, out); });
        } else if (*dot_cmd) {
            if (dot_i < 0 || dot_j < 0) throw argument_error("indices must be non-negative");
            const blaz::compressed_matrix a = load_compressed(in_path);
            const blaz::compressed_matrix b = load_compressed(in_path2);
            const double r = blaz::mat_dot(a, b, std::size_t(dot_i), std::size_t(dot_j));
            std::printf("%.17g\n", r);
        } else if (*matmul) {
            const blaz::compressed_matrix a = load_compressed(in_path);
            const blaz::compressed_matrix b = load_compressed(in_path2);
            const blaz::compressed_matrix r = blaz::mat_mul(a, b, threads);
            write_atomically(out_path, force,
                             [&](std::ostream& out) { blaz::write_compressed(r, out); });
        } else if (*accuracy) {
            if (accuracy_n < 2) throw argument_error("size must be at least 2");
            const auto rows = blaz::accuracy_suite(accuracy_n, threads);
            write_atomically(out_path, force,
                             [&](std::ostream& out) { blaz::write_accuracy_csv(rows, out); });
        } else if (*bench) {
            const auto sizes = parse_sizes(bench_sizes);
            const auto ops = parse_ops(bench_ops);
            if (bench_repeats < 5) throw argument_error("repeats must be at least 5");
            const auto rows = blaz::bench_suite(sizes, ops, bench_repeats, threads);
            write_atomically(out_path, force,
                             [&](std::ostream& out) { blaz::write_bench_csv(rows, out); });
        }
    } catch (const argument_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const blaz::io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::out_of_range& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
