#include "loggrad/pgm.hpp"

#include <fstream>
#include <sstream>

namespace loggrad {

namespace {

// Reads the next header token, skipping whitespace and '#' comment lines.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
    } else if (!std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      while ((c = in.get()) != EOF && !std::isspace(c) && c != '#') {
        tok.push_back(static_cast<char>(c));
      }
      if (c == '#') in.unget();
      return tok;
    }
  }
  throw std::runtime_error("PGM: truncated header");
}

int parse_int(const std::string& tok, const char* what) {
  try {
    size_t pos = 0;
    int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("PGM: malformed ") + what + " '" + tok + "'");
  }
}

}  // namespace

GrayImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("PGM: cannot open " + path);

  std::string magic = next_token(in);
  if (magic != "P5") throw std::runtime_error("PGM: unsupported format '" + magic + "' in " + path);

  int width = parse_int(next_token(in), "width");
  int height = parse_int(next_token(in), "height");
  int maxval = parse_int(next_token(in), "maxval");
  if (width <= 0 || height <= 0) throw std::runtime_error("PGM: bad dimensions in " + path);
  if (maxval != 255 && maxval != 65535)
    throw std::runtime_error("PGM: unsupported maxval " + std::to_string(maxval) + " in " + path);
  // next_token has already consumed the single whitespace byte that
  // separates the maxval from the payload

  GrayImage img(height, width);
  const size_t n = img.size();
  if (maxval == 255) {
    std::vector<uint8_t> buf(n);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in.gcount()) != n)
      throw std::runtime_error("PGM: truncated payload in " + path);
    for (size_t i = 0; i < n; ++i) img.pixels[i] = static_cast<uint16_t>(buf[i] * 257);
  } else {
    std::vector<uint8_t> buf(2 * n);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(2 * n));
    if (static_cast<size_t>(in.gcount()) != 2 * n)
      throw std::runtime_error("PGM: truncated payload in " + path);
    for (size_t i = 0; i < n; ++i)
      img.pixels[i] = static_cast<uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
  }
  return img;
}

void save_pgm(const GrayImage& img, const std::string& path, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16)
    throw std::invalid_argument("save_pgm: bit_depth must be 8 or 16");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("PGM: cannot write " + path);

  const int maxval = bit_depth == 8 ? 255 : 65535;
  out << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
  if (bit_depth == 8) {
    std::vector<uint8_t> buf(img.size());
    for (size_t i = 0; i < img.size(); ++i)
      buf[i] = static_cast<uint8_t>((img.pixels[i] + 128) / 257);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  } else {
    std::vector<uint8_t> buf(2 * img.size());
    for (size_t i = 0; i < img.size(); ++i) {
      buf[2 * i] = static_cast<uint8_t>(img.pixels[i] >> 8);
      buf[2 * i + 1] = static_cast<uint8_t>(img.pixels[i] & 0xff);
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw std::runtime_error("PGM: write failed for " + path);
}

}  // namespace loggrad
