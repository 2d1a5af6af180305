#pragma once

// Field container:
//   bytes 0..7   magic "SPHMEAN1"
//   bytes 8..11  header length L, little-endian uint32
//   bytes 12..   UTF-8 JSON header {n, shape, box, space, dtype: "c128"}
//   then         prod(shape) complex doubles, little-endian, (re, im) interleaved, row-major

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "spheremean/errors.hpp"
#include "spheremean/field.hpp"

namespace spheremean {

inline constexpr std::string_view kFieldMagic = "SPHMEAN1";

struct FieldHeader {
  Grid grid;
  Space space;
  std::size_t payload_offset;
};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

inline void put_f64(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

inline double get_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) bits = (bits << 8) | p[b];
  return std::bit_cast<double>(bits);
}

/// Writes to a sibling temporary file, then renames over the target.
inline void write_atomically(const std::filesystem::path& path, std::string_view bytes) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing", 0);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + tmp.string(), 0);
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string(), 0);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline FieldHeader parse_header(std::string_view bytes) {
  if (bytes.size() < kFieldMagic.size()) throw IoError("truncated magic", bytes.size());
  if (bytes.substr(0, kFieldMagic.size()) != kFieldMagic) throw IoError("bad magic, not a field file", 0);
  if (bytes.size() < 12) throw IoError("truncated header length", bytes.size());
  std::uint32_t len = 0;
  for (int b = 3; b >= 0; --b) len = (len << 8) | static_cast<unsigned char>(bytes[8 + b]);
  if (bytes.size() < 12 + static_cast<std::size_t>(len)) throw IoError("truncated JSON header", bytes.size());
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(bytes.substr(12, len));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed JSON header: ") + e.what(), 12);
  }
  try {
    const int n = h.at("n").get<int>();
    if (n < 1 || n > 3) throw UnsupportedDimensionError("unsupported dimension n=" + std::to_string(n), 12);
    if (h.at("dtype").get<std::string>() != "c128") throw IoError("unsupported dtype", 12);
    const auto shape = h.at("shape").get<std::vector<std::size_t>>();
    const auto box = h.at("box").get<std::vector<double>>();
    if (static_cast<int>(shape.size()) != n || static_cast<int>(box.size()) != n)
      throw IoError("shape/box length does not match n", 12);
    const auto space_name = h.at("space").get<std::string>();
    Space space;
    if (space_name == "physical")
      space = Space::physical;
    else if (space_name == "frequency")
      space = Space::frequency;
    else
      throw IoError("unknown space '" + space_name + "'", 12);
    return FieldHeader{Grid(shape, box), space, 12 + static_cast<std::size_t>(len)};
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed JSON header: ") + e.what(), 12);
  } catch (const ConfigurationError& e) {
    throw IoError(std::string("invalid grid in header: ") + e.what(), 12);
  }
}

}  // namespace detail

inline std::string encode_field(const Field& f) {
  nlohmann::json h;
  h["n"] = f.grid.n();
  h["shape"] = f.grid.shape();
  h["box"] = f.grid.box();
  h["space"] = to_string(f.space);
  h["dtype"] = "c128";
  const std::string header = h.dump();
  std::string out(kFieldMagic);
  detail::put_u32(out, static_cast<std::uint32_t>(header.size()));
  out += header;
  out.reserve(out.size() + 16 * f.values.size());
  for (const auto& z : f.values) {
    detail::put_f64(out, z.real());
    detail::put_f64(out, z.imag());
  }
  return out;
}

inline Field decode_field(std::string_view bytes) {
  const FieldHeader h = detail::parse_header(bytes);
  const std::size_t count = h.grid.size();
  const std::size_t expected = h.payload_offset + 16 * count;
  if (bytes.size() < expected)
    throw IoError("truncated payload: expected " + std::to_string(expected) + " bytes", bytes.size());
  if (bytes.size() > expected) throw IoError("trailing bytes after payload", expected);
  Field f(h.grid, h.space);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + h.payload_offset;
  for (std::size_t i = 0; i < count; ++i, p += 16) f.values[i] = cplx(detail::get_f64(p), detail::get_f64(p + 8));
  return f;
}

inline void write_field(const Field& f, const std::filesystem::path& path) {
  detail::write_atomically(path, encode_field(f));
}

inline Field read_field(const std::filesystem::path& path) { return decode_field(detail::read_all(path)); }

/// Reads magic and JSON header only.
inline FieldHeader read_field_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string(), 0);
  std::string prefix(12, '\0');
  in.read(prefix.data(), 12);
  prefix.resize(static_cast<std::size_t>(in.gcount()));
  if (prefix.size() < 12) return detail::parse_header(prefix);
  std::uint32_t len = 0;
  for (int b = 3; b >= 0; --b) len = (len << 8) | static_cast<unsigned char>(prefix[8 + b]);
  std::string header(len, '\0');
  in.read(header.data(), len);
  header.resize(static_cast<std::size_t>(in.gcount()));
  return detail::parse_header(prefix + header);
}

}  // namespace spheremean
