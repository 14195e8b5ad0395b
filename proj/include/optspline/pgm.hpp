#ifndef OPTSPLINE_PGM_HPP
#define OPTSPLINE_PGM_HPP

// Binary (P5) Netpbm graymaps with maxval 255.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "resample.hpp"

namespace optspline {

namespace detail {

inline void skip_pgm_space(std::istream &is) {
  while (is) {
    const int c = is.peek();
    if (c == '#') {
      std::string comment;
      std::getline(is, comment);
    } else if (std::isspace(c)) {
      is.get();
    } else {
      break;
    }
  }
}

inline long read_pgm_int(std::istream &is, const char *what) {
  skip_pgm_space(is);
  long v = -1;
  if (!(is >> v) || v < 0)
    throw std::runtime_error(std::string("PGM: bad ") + what);
  return v;
}

} // namespace detail

inline GrayImage read_pgm(std::istream &is) {
  char magic[2] = {0, 0};
  is.read(magic, 2);
  if (!is || magic[0] != 'P' || magic[1] != '5')
    throw std::runtime_error("PGM: not a binary graymap (expected P5)");
  const long w = detail::read_pgm_int(is, "width");
  const long h = detail::read_pgm_int(is, "height");
  const long maxval = detail::read_pgm_int(is, "maxval");
  if (w < 1 || h < 1)
    throw std::runtime_error("PGM: empty image");
  if (maxval != 255)
    throw std::runtime_error("PGM: only maxval 255 is supported, got " + std::to_string(maxval));
  const int sep = is.get(); // single whitespace before the raster
  if (!std::isspace(sep))
    throw std::runtime_error("PGM: missing separator before raster");
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(w * h));
  is.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (is.gcount() != static_cast<std::streamsize>(raw.size()))
    throw std::runtime_error("PGM: truncated raster");
  GrayImage img(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t i = 0; i < raw.size(); ++i)
    img.pixels[i] = raw[i];
  return img;
}

inline GrayImage read_pgm(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw std::runtime_error("cannot open '" + path + "'");
  return read_pgm(is);
}

/// Writes `P5\n<w> <h>\n255\n` followed by the quantized raster.
inline void write_pgm(std::ostream &os, const GrayImage &img) {
  os << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  const auto q = img.quantized();
  os.write(reinterpret_cast<const char *>(q.data()), static_cast<std::streamsize>(q.size()));
}

inline void write_pgm(const std::string &path, const GrayImage &img) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw std::runtime_error("cannot open '" + path + "' for writing");
  write_pgm(os, img);
}

} // namespace optspline

#endif
