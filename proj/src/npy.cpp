#include "repcount/npy.hpp"

#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "repcount/errors.hpp"

namespace repcount {
namespace {

// Pulls the value of a python-dict-literal key out of the header text.
// The header is machine-written with a fixed structure, so simple string
// surgery is reliable here.
std::string header_value(const std::string& header, const std::string& key) {
  const std::string quoted = "'" + key + "'";
  const std::size_t at = header.find(quoted);
  if (at == std::string::npos) {
    throw ParseError("npy header missing key '" + key + "'");
  }
  std::size_t colon = header.find(':', at + quoted.size());
  if (colon == std::string::npos) {
    throw ParseError("npy header malformed near '" + key + "'");
  }
  ++colon;
  while (colon < header.size() && header[colon] == ' ') ++colon;
  std::size_t end = colon;
  if (header[colon] == '\'') {
    end = header.find('\'', colon + 1);
    if (end == std::string::npos) {
      throw ParseError("npy header has an unterminated string");
    }
    return header.substr(colon + 1, end - colon - 1);
  }
  if (header[colon] == '(') {
    end = header.find(')', colon);
    if (end == std::string::npos) {
      throw ParseError("npy header has an unterminated tuple");
    }
    return header.substr(colon, end - colon + 1);
  }
  while (end < header.size() && header[end] != ',' && header[end] != '}') {
    ++end;
  }
  return header.substr(colon, end - colon);
}

std::vector<std::size_t> parse_shape(const std::string& tuple) {
  std::vector<std::size_t> shape;
  std::size_t i = 0;
  while (i < tuple.size()) {
    if (std::isdigit(static_cast<unsigned char>(tuple[i]))) {
      std::size_t end = i;
      while (end < tuple.size() &&
             std::isdigit(static_cast<unsigned char>(tuple[end]))) {
        ++end;
      }
      shape.push_back(std::stoull(tuple.substr(i, end - i)));
      i = end;
    } else {
      ++i;
    }
  }
  return shape;
}

template <typename T>
void convert_payload(const std::vector<char>& raw, std::vector<double>& out) {
  const std::size_t count = raw.size() / sizeof(T);
  out.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    T v;
    std::memcpy(&v, raw.data() + i * sizeof(T), sizeof(T));
    out[i] = static_cast<double>(v);
  }
}

}  // namespace

NpyArray load_npy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MissingFile("cannot open npy file '" + path + "'");
  }

  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, "\x93NUMPY", 6) != 0) {
    throw ParseError("'" + path + "' is not an npy file");
  }
  const int major = magic[6];
  std::uint32_t header_len = 0;
  if (major == 1) {
    std::uint8_t buf[2];
    if (!in.read(reinterpret_cast<char*>(buf), 2)) {
      throw ParseError("'" + path + "' is truncated in the header length");
    }
    header_len = buf[0] | (static_cast<std::uint32_t>(buf[1]) << 8);
  } else if (major == 2) {
    std::uint8_t buf[4];
    if (!in.read(reinterpret_cast<char*>(buf), 4)) {
      throw ParseError("'" + path + "' is truncated in the header length");
    }
    header_len = buf[0] | (static_cast<std::uint32_t>(buf[1]) << 8) |
                 (static_cast<std::uint32_t>(buf[2]) << 16) |
                 (static_cast<std::uint32_t>(buf[3]) << 24);
  } else {
    throw ParseError("unsupported npy format version " +
                     std::to_string(major) + " in '" + path + "'");
  }

  std::string header(header_len, '\0');
  if (!in.read(header.data(), header_len)) {
    throw ParseError("'" + path + "' is truncated in the header");
  }

  const std::string descr = header_value(header, "descr");
  const std::string order = header_value(header, "fortran_order");
  if (order.find("True") != std::string::npos) {
    throw ParseError("'" + path +
                     "' is Fortran-ordered; only C order is supported");
  }

  NpyArray array;
  array.shape = parse_shape(header_value(header, "shape"));
  std::size_t expect = 1;
  for (std::size_t d : array.shape) expect *= d;

  std::size_t elem_size;
  if (descr == "<f8") {
    elem_size = 8;
  } else if (descr == "<f4") {
    elem_size = 4;
  } else if (descr == "<i8") {
    elem_size = 8;
  } else if (descr == "<i4") {
    elem_size = 4;
  } else {
    throw ParseError("unsupported npy dtype '" + descr + "' in '" + path +
                     "' (need little-endian f8/f4/i8/i4)");
  }

  std::vector<char> raw(expect * elem_size);
  if (!in.read(raw.data(), static_cast<std::streamsize>(raw.size()))) {
    throw ParseError("'" + path + "' payload is shorter than its shape");
  }

  if (descr == "<f8") {
    convert_payload<double>(raw, array.data);
  } else if (descr == "<f4") {
    convert_payload<float>(raw, array.data);
  } else if (descr == "<i8") {
    convert_payload<std::int64_t>(raw, array.data);
  } else {
    convert_payload<std::int32_t>(raw, array.data);
  }
  return array;
}

}  // namespace repcount
