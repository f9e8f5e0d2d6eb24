#pragma once

#include <cstdint>
#include <filesystem>

#include "mricls/volume.hpp"

namespace mricls {

// On-disk voxel encodings understood by both readers.
enum class VoxelType : std::uint8_t { U8 = 0, I16 = 1, F32 = 2 };

// Loads an Analyze 7.5 header/image pair (the format OASIS distributes).
// Endianness is auto-detected from the sizeof_hdr field at offset 0, which
// must read 348 under one of the two byte orders. Supported datatype codes:
// 2 (unsigned 8-bit), 4 (signed 16-bit), 16 (32-bit float). Voxel data is
// widened to double. `kind` tags the result; label values are validated when
// kind = SegmentationLabels. Orientation/flip header fields are ignored;
// volumes are used as stored. Non-positive pixdim entries fall back to 1 mm.
Volume load_analyze(const std::filesystem::path& header_path,
                    const std::filesystem::path& image_path,
                    VolumeKind kind = VolumeKind::Intensity);

// RVOL is the self-describing raw format used for tests and synthetic data:
//   bytes 0..3   magic "RVOL"
//   bytes 4..15  nx, ny, nz as little-endian uint32
//   byte  16     voxel type code (0 = u8, 1 = i16, 2 = f32)
//   byte  17     kind code (0 = intensity, 1 = segmentation labels)
// followed by voxels in x-fastest order, little-endian. Voxel size is
// 1 mm isotropic.
inline constexpr std::size_t kRvolHeaderSize = 18;

Volume load_rvol(const std::filesystem::path& path);

// Writes the bit-exact RVOL layout. load_rvol(write_rvol(v)) reproduces
// dims, kind, and voxel values exactly when the values are representable in
// the chosen voxel type (u8/i16 payloads are rounded and clamped, f32 is a
// float cast). The two-argument overload picks u8 for segmentation volumes
// and f32 otherwise.
void write_rvol(const Volume& v, const std::filesystem::path& path, VoxelType type);
void write_rvol(const Volume& v, const std::filesystem::path& path);

} // namespace mricls
