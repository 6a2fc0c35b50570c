#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/signal.hpp"

namespace structsparse {

/// 8-bit grayscale image, row-major.
struct GrayImage {
  Index width = 0;
  Index height = 0;
  std::vector<unsigned char> pixels;

  /// Pixels scaled to [0, 1].
  Signal to_signal() const {
    Signal x(static_cast<Index>(pixels.size()));
    for (std::size_t i = 0; i < pixels.size(); ++i) x(static_cast<Index>(i)) = pixels[i] / 255.0;
    return x;
  }

  /// Inverse of to_signal: clamps to [0,1] and rounds to the nearest level.
  static GrayImage from_signal(const Signal& x, Index width, Index height) {
    if (x.size() != width * height) throw InvalidParameter("GrayImage: size mismatch");
    GrayImage img{width, height, std::vector<unsigned char>(static_cast<std::size_t>(x.size()))};
    for (Index i = 0; i < x.size(); ++i) {
      const double v = std::clamp(x(i), 0.0, 1.0);
      img.pixels[static_cast<std::size_t>(i)] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    return img;
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

namespace detail {

inline void skip_ws_and_comments(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

inline long read_header_int(std::istream& in) {
  skip_ws_and_comments(in);
  long v = -1;
  if (!(in >> v)) throw IoError("pgm: malformed header");
  return v;
}

}  // namespace detail

inline GrayImage read_pgm(std::istream& in) {
  std::string magic(2, '\0');
  if (!in.read(magic.data(), 2) || (magic != "P2" && magic != "P5"))
    throw IoError("pgm: expected P2 or P5 magic");
  GrayImage img;
  img.width = detail::read_header_int(in);
  img.height = detail::read_header_int(in);
  const long maxval = detail::read_header_int(in);
  if (img.width <= 0 || img.height <= 0) throw IoError("pgm: bad dimensions");
  if (maxval <= 0 || maxval > 255) throw IoError("pgm: only 8-bit images are supported");
  const auto count = static_cast<std::size_t>(img.width * img.height);
  img.pixels.resize(count);
  const double scale = 255.0 / static_cast<double>(maxval);
  if (magic == "P5") {
    in.get();  // single whitespace after maxval
    if (!in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(count)))
      throw IoError("pgm: truncated binary payload");
    if (maxval != 255)
      for (auto& p : img.pixels) p = static_cast<unsigned char>(std::lround(p * scale));
  } else {
    for (auto& p : img.pixels) {
      long v = -1;
      detail::skip_ws_and_comments(in);
      if (!(in >> v) || v < 0 || v > maxval) throw IoError("pgm: bad ASCII sample");
      p = static_cast<unsigned char>(std::lround(v * scale));
    }
  }
  return img;
}

inline GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("pgm: cannot open " + path);
  return read_pgm(in);
}

enum class PgmFormat { ascii, binary };

inline void write_pgm(std::ostream& out, const GrayImage& img, PgmFormat fmt = PgmFormat::binary) {
  out << (fmt == PgmFormat::binary ? "P5" : "P2") << '\n'
      << img.width << ' ' << img.height << "\n255\n";
  if (fmt == PgmFormat::binary) {
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
  } else {
    for (Index r = 0; r < img.height; ++r) {
      for (Index c = 0; c < img.width; ++c) {
        if (c) out << ' ';
        out << static_cast<int>(img.pixels[static_cast<std::size_t>(r * img.width + c)]);
      }
      out << '\n';
    }
  }
  if (!out) throw IoError("pgm: write failed");
}

inline void write_pgm(const std::string& path, const GrayImage& img,
                      PgmFormat fmt = PgmFormat::binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("pgm: cannot open " + path + " for writing");
  write_pgm(out, img, fmt);
}

}  // namespace structsparse
