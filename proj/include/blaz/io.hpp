#ifndef BLAZ_IO_HPP
#define BLAZ_IO_HPP

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "blaz/matrix.hpp"

namespace blaz {

// File-format and stream failures (bad magic, truncation, malformed CSV, ...).
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr char compressed_magic[4] = {'B', 'L', 'Z', 'C'};
inline constexpr char dense_magic[4] = {'B', 'L', 'Z', 'D'};
inline constexpr std::uint8_t format_version = 1;
inline constexpr std::size_t header_bytes = 4 + 1 + 4 + 4;

inline void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(char(v & 0xff));
    out.push_back(char((v >> 8) & 0xff));
    out.push_back(char((v >> 16) & 0xff));
    out.push_back(char((v >> 24) & 0xff));
}

inline void put_f64(std::string& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(char((bits >> (8 * i)) & 0xff));
}

inline std::uint32_t get_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
           std::uint32_t(p[3]) << 24;
}

inline double get_f64(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t(p[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

inline void write_all(std::ostream& out, const std::string& bytes, const char* what) {
    out.write(bytes.data(), std::streamsize(bytes.size()));
    if (!out) throw io_error(std::string(what) + ": write failed");
}

inline void read_exact(std::istream& in, unsigned char* buf, std::size_t n, const std::string& what) {
    in.read(reinterpret_cast<char*>(buf), std::streamsize(n));
    if (std::size_t(in.gcount()) != n) throw io_error(what);
}

struct header {
    std::uint32_t rows;
    std::uint32_t cols;
};

inline void put_header(std::string& out, const char magic[4], std::uint32_t rows,
                       std::uint32_t cols) {
    out.append(magic, 4);
    out.push_back(char(format_version));
    put_u32(out, rows);
    put_u32(out, cols);
}

inline header read_header(std::istream& in, const char magic[4], const char* kind) {
    unsigned char buf[header_bytes];
    read_exact(in, buf, header_bytes, std::string(kind) + ": truncated header");
    if (std::memcmp(buf, magic, 4) != 0)
        throw io_error(std::string(kind) + ": magic mismatch (not a " + kind + " file)");
    if (buf[4] != format_version)
        throw io_error(std::string(kind) + ": unsupported version " + std::to_string(buf[4]));
    const header h{get_u32(buf + 5), get_u32(buf + 9)};
    if (h.rows == 0 || h.cols == 0)
        throw io_error(std::string(kind) + ": zero dimension in header");
    return h;
}

}  // namespace detail

// Writes the 13-byte header followed by the blocks in row-major grid order,
// 45 bytes each: f, s (binary64 little endian), the scale byte and the 28
// coefficients in the frozen keep-set order. Returns the byte count.
inline std::size_t write_compressed(const compressed_matrix& cm, std::ostream& out) {
    std::string bytes;
    bytes.reserve(detail::header_bytes + cm.blocks.size() * block_payload_bytes);
    detail::put_header(bytes, detail::compressed_magic, std::uint32_t(cm.rows),
                       std::uint32_t(cm.cols));
    for (const compressed_block& b : cm.blocks) {
        if (!std::isfinite(b.first) || !std::isfinite(b.slope))
            throw io_error("write_compressed: non-finite block field");
        detail::put_f64(bytes, b.first);
        detail::put_f64(bytes, b.slope);
        bytes.push_back(char(b.scale_factor));
        for (std::int8_t c : b.coeffs) bytes.push_back(char(c));
    }
    detail::write_all(out, bytes, "write_compressed");
    return bytes.size();
}

inline compressed_matrix read_compressed(std::istream& in) {
    const detail::header h = detail::read_header(in, detail::compressed_magic, "compressed matrix");
    compressed_matrix cm;
    cm.rows = h.rows;
    cm.cols = h.cols;
    cm.block_rows = (cm.rows + block_dim - 1) / block_dim;
    cm.block_cols = (cm.cols + block_dim - 1) / block_dim;
    cm.blocks.resize(cm.block_rows * cm.block_cols);
    unsigned char buf[block_payload_bytes];
    for (std::size_t t = 0; t < cm.blocks.size(); ++t) {
        detail::read_exact(in, buf, block_payload_bytes,
                           "compressed matrix: truncated at block " + std::to_string(t));
        compressed_block& b = cm.blocks[t];
        b.first = detail::get_f64(buf);
        b.slope = detail::get_f64(buf + 8);
        b.scale_factor = buf[16];
        if (b.scale_factor == 0)
            throw io_error("compressed matrix: zero scale factor in block " + std::to_string(t));
        for (int k = 0; k < kept_coeff_count; ++k) b.coeffs[k] = std::int8_t(buf[17 + k]);
    }
    return cm;
}

inline std::size_t write_dense(const dense_matrix& m, std::ostream& out) {
    std::string bytes;
    bytes.reserve(detail::header_bytes + m.values.size() * 8);
    detail::put_header(bytes, detail::dense_magic, std::uint32_t(m.rows), std::uint32_t(m.cols));
    for (double v : m.values) detail::put_f64(bytes, v);
    detail::write_all(out, bytes, "write_dense");
    return bytes.size();
}

inline dense_matrix read_dense(std::istream& in) {
    const detail::header h = detail::read_header(in, detail::dense_magic, "dense matrix");
    dense_matrix m(h.rows, h.cols);
    std::vector<unsigned char> buf(m.values.size() * 8);
    detail::read_exact(in, buf.data(), buf.size(), "dense matrix: truncated payload");
    for (std::size_t k = 0; k < m.values.size(); ++k)
        m.values[k] = detail::get_f64(buf.data() + 8 * k);
    return m;
}

// Comma-separated decimal rows, '.' decimal separator, one matrix row per
// line. All rows must have the same number of cells.
inline dense_matrix import_csv(std::istream& in) {
    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
        ++rows;
        std::size_t row_cells = 0;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = line.find(',', pos);
            std::string cell = line.substr(pos, comma == std::string::npos ? comma : comma - pos);
            const char* begin = cell.data();
            const char* end = begin + cell.size();
            while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
            while (end != begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(begin, end, v);
            if (ec != std::errc{} || ptr != end)
                throw io_error("csv: non-numeric cell at row " + std::to_string(rows) +
                               ", column " + std::to_string(row_cells + 1));
            values.push_back(v);
            ++row_cells;
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (rows == 1)
            cols = row_cells;
        else if (row_cells != cols)
            throw io_error("csv: row " + std::to_string(rows) + " has " +
                           std::to_string(row_cells) + " cells, expected " + std::to_string(cols));
    }
    if (rows == 0) throw io_error("csv: empty input");
    dense_matrix m(rows, cols);
    m.values = std::move(values);
    return m;
}

}  // namespace blaz

#endif  // BLAZ_IO_HPP
