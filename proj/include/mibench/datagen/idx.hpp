#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "mibench/matrix.hpp"

namespace mibench {

// IDX container format: 4-byte big-endian magic (0x00000803 image tensors,
// 0x00000801 label vectors), big-endian dimension sizes, then unsigned bytes.
constexpr std::uint32_t kIdxImagesMagic = 2051;
constexpr std::uint32_t kIdxLabelsMagic = 2049;

struct IdxImages {
  Index count = 0;
  Index rows = 0;
  Index cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols

  // Pixels scaled to [0, 1].
  Matrix image(Index i) const {
    Matrix m(rows, cols);
    const std::size_t base = static_cast<std::size_t>(i) * rows * cols;
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c)
        m(r, c) = pixels[base + static_cast<std::size_t>(r * cols + c)] / 255.0;
    return m;
  }
};

struct IdxLabels {
  std::vector<std::uint8_t> labels;
};

using IdxFile = std::variant<IdxImages, IdxLabels>;

namespace detail {

inline std::uint32_t read_be32(const std::vector<std::uint8_t>& buf, std::size_t offset,
                               const std::string& path) {
  if (offset + 4 > buf.size())
    throw FormatError(path + ": truncated file at offset " + std::to_string(offset));
  return (static_cast<std::uint32_t>(buf[offset]) << 24) |
         (static_cast<std::uint32_t>(buf[offset + 1]) << 16) |
         (static_cast<std::uint32_t>(buf[offset + 2]) << 8) |
         static_cast<std::uint32_t>(buf[offset + 3]);
}

inline void write_be32(std::ofstream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                         static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(bytes, 4);
}

}  // namespace detail

inline IdxFile load_idx(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());

  const std::uint32_t magic = detail::read_be32(buf, 0, path);
  if (magic == kIdxImagesMagic) {
    const std::uint32_t n = detail::read_be32(buf, 4, path);
    const std::uint32_t r = detail::read_be32(buf, 8, path);
    const std::uint32_t c = detail::read_be32(buf, 12, path);
    const std::uint64_t total = static_cast<std::uint64_t>(n) * r * c;
    if (r == 0 || c == 0 || total > (1ull << 33))
      throw FormatError(path + ": dimension overflow at offset 4");
    if (buf.size() != 16 + total)
      throw FormatError(path + ": truncated file at offset 16 (expected " +
                        std::to_string(16 + total) + " bytes, got " +
                        std::to_string(buf.size()) + ")");
    IdxImages images;
    images.count = static_cast<Index>(n);
    images.rows = static_cast<Index>(r);
    images.cols = static_cast<Index>(c);
    images.pixels.assign(buf.begin() + 16, buf.end());
    return images;
  }
  if (magic == kIdxLabelsMagic) {
    const std::uint32_t n = detail::read_be32(buf, 4, path);
    if (buf.size() != 8 + static_cast<std::size_t>(n))
      throw FormatError(path + ": truncated file at offset 8");
    IdxLabels labels;
    labels.labels.assign(buf.begin() + 8, buf.end());
    return labels;
  }
  throw FormatError(path + ": bad magic " + std::to_string(magic) + " at offset 0");
}

inline void save_idx(const std::string& path, const IdxImages& images) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  detail::write_be32(out, kIdxImagesMagic);
  detail::write_be32(out, static_cast<std::uint32_t>(images.count));
  detail::write_be32(out, static_cast<std::uint32_t>(images.rows));
  detail::write_be32(out, static_cast<std::uint32_t>(images.cols));
  out.write(reinterpret_cast<const char*>(images.pixels.data()),
            static_cast<std::streamsize>(images.pixels.size()));
  if (!out) throw IoError("write failed: " + path);
}

inline void save_idx(const std::string& path, const IdxLabels& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  detail::write_be32(out, kIdxLabelsMagic);
  detail::write_be32(out, static_cast<std::uint32_t>(labels.labels.size()));
  out.write(reinterpret_cast<const char*>(labels.labels.data()),
            static_cast<std::streamsize>(labels.labels.size()));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace mibench
