#ifndef ECRSEG_NRRD_HPP
#define ECRSEG_NRRD_HPP

#include <filesystem>

#include "ecrseg/volume.hpp"

namespace ecrseg {

/// NRRD-subset reader: text header (dimension: 3, sizes, type, encoding: raw,
/// endian: little, optional spacings / space origin / data file) followed by a
/// little-endian raw payload, attached after the blank line or detached in a
/// sibling file. Scalar types uint8, int16, uint16, float32, float64; values
/// are widened to float64.
Volume read_volume(const std::filesystem::path& path);

/// Writes a float64 attached-payload file that read_volume round-trips
/// bit-identically.
void write_volume(const Volume& v, const std::filesystem::path& path);

/// Masks are uint8 files; any nonzero voxel reads back as 1.
Mask read_mask(const std::filesystem::path& path);
void write_mask(const Mask& m, const std::filesystem::path& path);

}  // namespace ecrseg

#endif
