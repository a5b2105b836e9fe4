#include "fop/netpbm.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "fop/error.hpp"

namespace fop {

namespace {

void skip_space_and_comments(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string discard;
      std::getline(in, discard);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const char* field) {
  skip_space_and_comments(in);
  int value = -1;
  if (!(in >> value) || value < 0) throw_data(std::string("netpbm: bad or missing ") + field);
  return value;
}

std::string read_magic(std::istream& in) {
  char magic[2] = {0, 0};
  if (!in.read(magic, 2)) throw_data("netpbm: missing magic number");
  return std::string(magic, 2);
}

// Exactly one whitespace byte separates the header from a binary raster.
void consume_raster_separator(std::istream& in) {
  const int c = in.get();
  if (c == EOF || !std::isspace(c)) throw_data("netpbm: malformed header terminator");
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_data("cannot create " + path.string());
  return out;
}

}  // namespace

BinaryImage read_pbm(std::istream& in) {
  const std::string magic = read_magic(in);
  if (magic != "P1" && magic != "P4") throw_data("not a PBM file (magic " + magic + ")");
  const int cols = read_header_int(in, "width");
  const int rows = read_header_int(in, "height");
  if (rows == 0 || cols == 0) throw_data("PBM has zero size");

  std::vector<std::uint8_t> bits(static_cast<std::size_t>(rows) * cols);
  if (magic == "P1") {
    for (auto& b : bits) {
      skip_space_and_comments(in);
      const int c = in.get();
      if (c != '0' && c != '1') throw_data("PBM: truncated or invalid ASCII raster");
      b = static_cast<std::uint8_t>(c - '0');
    }
  } else {
    consume_raster_separator(in);
    const std::size_t row_bytes = (static_cast<std::size_t>(cols) + 7) / 8;
    std::vector<char> row(row_bytes);
    for (int i = 0; i < rows; ++i) {
      if (!in.read(row.data(), static_cast<std::streamsize>(row_bytes))) {
        throw_data("PBM: truncated binary raster");
      }
      for (int j = 0; j < cols; ++j) {
        const auto byte = static_cast<unsigned char>(row[static_cast<std::size_t>(j) / 8]);
        bits[static_cast<std::size_t>(i) * cols + j] = (byte >> (7 - j % 8)) & 1u;
      }
    }
  }
  return BinaryImage(rows, cols, std::move(bits));
}

BinaryImage read_pbm(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_pbm(in);
}

void write_pbm(std::ostream& out, const BinaryImage& img, PnmEncoding encoding) {
  const int rows = img.rows();
  const int cols = img.cols();
  if (encoding == PnmEncoding::ascii) {
    out << "P1\n" << cols << ' ' << rows << '\n';
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        out << static_cast<char>('0' + img(i, j));
        // Keep lines under the 70 characters netpbm recommends.
        out << ((j + 1 == cols || (j + 1) % 35 == 0) ? '\n' : ' ');
      }
    }
  } else {
    out << "P4\n" << cols << ' ' << rows << '\n';
    const std::size_t row_bytes = (static_cast<std::size_t>(cols) + 7) / 8;
    std::vector<char> row(row_bytes);
    for (int i = 0; i < rows; ++i) {
      std::fill(row.begin(), row.end(), 0);
      for (int j = 0; j < cols; ++j) {
        if (img(i, j)) row[static_cast<std::size_t>(j) / 8] |= static_cast<char>(0x80u >> (j % 8));
      }
      out.write(row.data(), static_cast<std::streamsize>(row_bytes));
    }
  }
  if (!out) throw_data("PBM: write failed");
}

void write_pbm(const std::filesystem::path& path, const BinaryImage& img, PnmEncoding encoding) {
  auto out = open_out(path);
  write_pbm(out, img, encoding);
}

GrayImage read_pgm(std::istream& in) {
  const std::string magic = read_magic(in);
  if (magic != "P2" && magic != "P5") throw_data("not a PGM file (magic " + magic + ")");
  const int cols = read_header_int(in, "width");
  const int rows = read_header_int(in, "height");
  const int maxval = read_header_int(in, "maxval");
  if (rows == 0 || cols == 0) throw_data("PGM has zero size");
  if (maxval < 1 || maxval > 65535) throw_data("PGM maxval out of range");

  std::vector<int> pixels(static_cast<std::size_t>(rows) * cols);
  if (magic == "P2") {
    for (auto& v : pixels) {
      skip_space_and_comments(in);
      if (!(in >> v)) throw_data("PGM: truncated or invalid ASCII raster");
      if (v < 0 || v > maxval) throw_data("PGM: sample exceeds maxval");
    }
  } else {
    consume_raster_separator(in);
    const bool wide = maxval > 255;
    std::vector<unsigned char> raster(pixels.size() * (wide ? 2 : 1));
    if (!in.read(reinterpret_cast<char*>(raster.data()), static_cast<std::streamsize>(raster.size()))) {
      throw_data("PGM: truncated binary raster");
    }
    for (std::size_t p = 0; p < pixels.size(); ++p) {
      const int v = wide ? (raster[2 * p] << 8) | raster[2 * p + 1] : raster[p];
      if (v > maxval) throw_data("PGM: sample exceeds maxval");
      pixels[p] = v;
    }
  }
  return GrayImage(rows, cols, maxval + 1, std::move(pixels));
}

GrayImage read_pgm(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_pgm(in);
}

void write_pgm(std::ostream& out, const GrayImage& img, PnmEncoding encoding) {
  const int maxval = img.levels() - 1;
  if (maxval < 1 || maxval > 65535) throw_invalid("PGM needs 2..65536 gray levels");
  const auto pixels = img.pixels();
  if (encoding == PnmEncoding::ascii) {
    out << "P2\n" << img.cols() << ' ' << img.rows() << '\n' << maxval << '\n';
    for (int i = 0; i < img.rows(); ++i) {
      for (int j = 0; j < img.cols(); ++j) {
        out << img(i, j) << ((j + 1 == img.cols() || (j + 1) % 12 == 0) ? '\n' : ' ');
      }
    }
  } else {
    out << "P5\n" << img.cols() << ' ' << img.rows() << '\n' << maxval << '\n';
    const bool wide = maxval > 255;
    std::vector<unsigned char> raster;
    raster.reserve(pixels.size() * (wide ? 2 : 1));
    for (const int v : pixels) {
      if (wide) raster.push_back(static_cast<unsigned char>(v >> 8));
      raster.push_back(static_cast<unsigned char>(v & 0xff));
    }
    out.write(reinterpret_cast<const char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
  }
  if (!out) throw_data("PGM: write failed");
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img, PnmEncoding encoding) {
  auto out = open_out(path);
  write_pgm(out, img, encoding);
}

bool is_pbm_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  const std::string magic = read_magic(in);
  if (magic == "P1" || magic == "P4") return true;
  if (magic == "P2" || magic == "P5") return false;
  throw_data(path.string() + ": unsupported image format (expected PBM or PGM)");
}

}  // namespace fop
