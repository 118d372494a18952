#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "mibench/matrix.hpp"

namespace mibench {

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Embedding matrix container: little-endian, 8-byte magic "MIBEMB01",
// u32 rows, u32 cols, then rows*cols float32 values row-major.
constexpr char kEmbeddingMagic[8] = {'M', 'I', 'B', 'E', 'M', 'B', '0', '1'};

inline void write_embedding_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(kEmbeddingMagic, 8);
  const std::uint32_t rows = static_cast<std::uint32_t>(m.rows());
  const std::uint32_t cols = static_cast<std::uint32_t>(m.cols());
  out.write(reinterpret_cast<const char*>(&rows), 4);
  out.write(reinterpret_cast<const char*>(&cols), 4);
  MatrixF narrow = m.cast<float>();
  out.write(reinterpret_cast<const char*>(narrow.data()),
            static_cast<std::streamsize>(sizeof(float) * narrow.size()));
  if (!out) throw IoError("write failed: " + path);
}

inline Matrix read_embedding_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kEmbeddingMagic, 8) != 0)
    throw FormatError(path + ": bad embedding magic at offset 0");
  std::uint32_t rows = 0, cols = 0;
  if (!in.read(reinterpret_cast<char*>(&rows), 4) || !in.read(reinterpret_cast<char*>(&cols), 4))
    throw FormatError(path + ": truncated header at offset 8");
  if (rows == 0 || cols == 0 || static_cast<std::uint64_t>(rows) * cols > (1ull << 31))
    throw FormatError(path + ": dimension overflow at offset 8");
  MatrixF narrow(rows, cols);
  if (!in.read(reinterpret_cast<char*>(narrow.data()),
               static_cast<std::streamsize>(sizeof(float) * narrow.size())))
    throw FormatError(path + ": truncated payload at offset 16");
  return narrow.cast<double>();
}

// Fixed "%.10g" float formatting so same-seed runs emit byte-identical files.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace mibench
