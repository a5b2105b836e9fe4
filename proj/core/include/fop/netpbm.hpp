#pragma once

#include <filesystem>
#include <iosfwd>

#include "fop/image.hpp"

namespace fop {

enum class PnmEncoding { ascii, binary };

/// PBM (P1/P4). A PBM '1' (black) is an on pixel.
BinaryImage read_pbm(std::istream& in);
BinaryImage read_pbm(const std::filesystem::path& path);
void write_pbm(std::ostream& out, const BinaryImage& img, PnmEncoding encoding = PnmEncoding::binary);
void write_pbm(const std::filesystem::path& path, const BinaryImage& img,
               PnmEncoding encoding = PnmEncoding::binary);

/// PGM (P2/P5). levels = maxval + 1; samples wider than 8 bits are big-endian.
GrayImage read_pgm(std::istream& in);
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(std::ostream& out, const GrayImage& img, PnmEncoding encoding = PnmEncoding::binary);
void write_pgm(const std::filesystem::path& path, const GrayImage& img,
               PnmEncoding encoding = PnmEncoding::binary);

/// Peeks at the magic number: true for P1/P4, false for P2/P5, throws otherwise.
bool is_pbm_file(const std::filesystem::path& path);

}  // namespace fop
