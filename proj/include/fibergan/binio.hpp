// SPDX-License-Identifier: Apache-2.0
#ifndef FIBERGAN_BINIO_HPP
#define FIBERGAN_BINIO_HPP

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "fibergan/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "file formats assume a little-endian host");

namespace fibergan {

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  static_assert(std::is_trivially_copyable_v<T>);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& value) {
  static_assert(std::is_trivially_copyable_v<T>);
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoError("unexpected end of file");
}

inline void write_string(std::ostream& out, const std::string& s) {
  write_pod(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in) {
  std::uint32_t len = 0;
  read_pod(in, len);
  if (len > (1u << 20)) throw IoError("implausible string length");
  std::string s(len, '\0');
  in.read(s.data(), static_cast<std::streamsize>(len));
  if (!in) throw IoError("unexpected end of file");
  return s;
}

}  // namespace fibergan

#endif
