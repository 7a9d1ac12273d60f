#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "zeroone/dataset.hpp"
#include "zeroone/error.hpp"

namespace zeroone {

// IDX (MNIST convention): big-endian u32 magic and dims, unsigned byte data.
// Image magic 0x00000803 (3 dims), label magic 0x00000801 (1 dim).

namespace detail {

inline std::uint32_t read_be32(std::istream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw DataError("truncated idx file: " + path);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

inline void write_be32(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace detail

// Returns raw pixel values 0..255 as reals; normalization is a separate op.
inline Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw DataError("cannot open idx file: " + images_path);
    const std::uint32_t img_magic = detail::read_be32(img, images_path);
    if (img_magic != 0x00000803u)
        throw DataError("idx magic mismatch (want 0x00000803): " + images_path);
    const std::uint32_t n = detail::read_be32(img, images_path);
    const std::uint32_t rows = detail::read_be32(img, images_path);
    const std::uint32_t cols = detail::read_be32(img, images_path);

    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) throw DataError("cannot open idx file: " + labels_path);
    const std::uint32_t lab_magic = detail::read_be32(lab, labels_path);
    if (lab_magic != 0x00000801u)
        throw DataError("idx magic mismatch (want 0x00000801): " + labels_path);
    const std::uint32_t n_lab = detail::read_be32(lab, labels_path);
    if (n != n_lab)
        throw DataError("idx image/label count mismatch: " + std::to_string(n) +
                        " images vs " + std::to_string(n_lab) + " labels");

    Dataset data;
    data.n = n;
    data.d = static_cast<std::size_t>(rows) * cols;
    if (data.n == 0 || data.d == 0) throw DataError("empty idx dataset: " + images_path);
    data.x.resize(data.n * data.d);
    data.y.resize(data.n);
    std::vector<unsigned char> buf(data.d);
    for (std::size_t i = 0; i < data.n; ++i) {
        if (!img.read(reinterpret_cast<char*>(buf.data()),
                      static_cast<std::streamsize>(buf.size())))
            throw DataError("truncated idx file: " + images_path);
        for (std::size_t j = 0; j < data.d; ++j)
            data.x[i * data.d + j] = static_cast<double>(buf[j]);
        unsigned char y;
        if (!lab.read(reinterpret_cast<char*>(&y), 1))
            throw DataError("truncated idx file: " + labels_path);
        data.y[i] = static_cast<int>(y);
    }
    data.normalized = false;
    return data;
}

// Writes [0,255]-valued features back out as bytes (values must be integral
// after rounding; used for generated MNIST-format fixtures).
inline void save_idx(const std::string& images_path, const std::string& labels_path,
                     const Dataset& data, std::uint32_t rows, std::uint32_t cols) {
    if (static_cast<std::size_t>(rows) * cols != data.d)
        throw UsageError("idx rows*cols must equal dataset dim");
    std::ofstream img(images_path, std::ios::binary);
    if (!img) throw DataError("cannot write idx file: " + images_path);
    detail::write_be32(img, 0x00000803u);
    detail::write_be32(img, static_cast<std::uint32_t>(data.n));
    detail::write_be32(img, rows);
    detail::write_be32(img, cols);
    std::vector<unsigned char> buf(data.d);
    for (std::size_t i = 0; i < data.n; ++i) {
        for (std::size_t j = 0; j < data.d; ++j) {
            const double v = data.x[i * data.d + j];
            if (v < 0.0 || v > 255.0)
                throw DataError("pixel outside [0,255] while writing idx");
            buf[j] = static_cast<unsigned char>(v + 0.5);
        }
        img.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size()));
    }
    std::ofstream lab(labels_path, std::ios::binary);
    if (!lab) throw DataError("cannot write idx file: " + labels_path);
    detail::write_be32(lab, 0x00000801u);
    detail::write_be32(lab, static_cast<std::uint32_t>(data.n));
    for (std::size_t i = 0; i < data.n; ++i) {
        if (data.y[i] < 0 || data.y[i] > 255) throw DataError("label outside byte range");
        const unsigned char y = static_cast<unsigned char>(data.y[i]);
        lab.write(reinterpret_cast<const char*>(&y), 1);
    }
}

}  // namespace zeroone
