#include "mricls/volume_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

namespace mricls {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad())
        throw DataError("read failed on " + path.string());
    return bytes;
}

std::uint16_t read_u16(const std::uint8_t* b, bool big) {
    return big ? static_cast<std::uint16_t>((b[0] << 8) | b[1])
               : static_cast<std::uint16_t>((b[1] << 8) | b[0]);
}

std::int16_t read_i16(const std::uint8_t* b, bool big) {
    return static_cast<std::int16_t>(read_u16(b, big));
}

std::uint32_t read_u32(const std::uint8_t* b, bool big) {
    if (big)
        return (static_cast<std::uint32_t>(b[0]) << 24) |
               (static_cast<std::uint32_t>(b[1]) << 16) |
               (static_cast<std::uint32_t>(b[2]) << 8) | static_cast<std::uint32_t>(b[3]);
    return (static_cast<std::uint32_t>(b[3]) << 24) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[1]) << 8) | static_cast<std::uint32_t>(b[0]);
}

float read_f32(const std::uint8_t* b, bool big) {
    return std::bit_cast<float>(read_u32(b, big));
}

int bytes_per_voxel(VoxelType t) {
    switch (t) {
    case VoxelType::U8: return 1;
    case VoxelType::I16: return 2;
    case VoxelType::F32: return 4;
    }
    return 0;
}

void decode_voxels(const std::uint8_t* src, std::size_t count, VoxelType t, bool big,
                   std::vector<double>& out) {
    out.resize(count);
    switch (t) {
    case VoxelType::U8:
        for (std::size_t i = 0; i < count; ++i)
            out[i] = static_cast<double>(src[i]);
        break;
    case VoxelType::I16:
        for (std::size_t i = 0; i < count; ++i)
            out[i] = static_cast<double>(read_i16(src + 2 * i, big));
        break;
    case VoxelType::F32:
        for (std::size_t i = 0; i < count; ++i)
            out[i] = static_cast<double>(read_f32(src + 4 * i, big));
        break;
    }
}

// Analyze 7.5 header offsets.
constexpr std::size_t kAnalyzeHeaderSize = 348;
constexpr std::size_t kOffDim = 40;      // 8 x int16, dim[0] = rank
constexpr std::size_t kOffDatatype = 70; // int16
constexpr std::size_t kOffBitpix = 72;   // int16
constexpr std::size_t kOffPixdim = 76;   // 8 x float32
constexpr std::size_t kOffVoxOffset = 108; // float32

} // namespace

Volume load_analyze(const std::filesystem::path& header_path,
                    const std::filesystem::path& image_path, VolumeKind kind) {
    const auto hdr = read_file(header_path);
    if (hdr.size() < kAnalyzeHeaderSize)
        throw DataError("malformed Analyze header " + header_path.string() + ": " +
                        std::to_string(hdr.size()) + " bytes, expected 348");

    bool big = false;
    if (read_u32(hdr.data(), false) == kAnalyzeHeaderSize)
        big = false;
    else if (read_u32(hdr.data(), true) == kAnalyzeHeaderSize)
        big = true;
    else
        throw DataError("malformed Analyze header " + header_path.string() +
                        ": sizeof_hdr is not 348 under either byte order");

    const int rank = read_i16(hdr.data() + kOffDim, big);
    if (rank < 3 || rank > 7)
        throw DataError("unsupported Analyze file " + header_path.string() +
                        ": dim[0] = " + std::to_string(rank));
    const int nx = read_i16(hdr.data() + kOffDim + 2, big);
    const int ny = read_i16(hdr.data() + kOffDim + 4, big);
    const int nz = read_i16(hdr.data() + kOffDim + 6, big);
    if (nx < 1 || ny < 1 || nz < 1)
        throw DataError("malformed Analyze header " + header_path.string() +
                        ": non-positive dimension");
    if (rank >= 4) {
        const int nt = read_i16(hdr.data() + kOffDim + 8, big);
        if (nt > 1)
            throw DataError("unsupported Analyze file " + header_path.string() +
                            ": contains " + std::to_string(nt) + " volumes");
    }

    const int datatype = read_i16(hdr.data() + kOffDatatype, big);
    VoxelType type;
    switch (datatype) {
    case 2: type = VoxelType::U8; break;
    case 4: type = VoxelType::I16; break;
    case 16: type = VoxelType::F32; break;
    default:
        throw DataError("unsupported Analyze datatype code " + std::to_string(datatype) +
                        " in " + header_path.string());
    }
    const int bpp = bytes_per_voxel(type);
    const int bitpix = read_i16(hdr.data() + kOffBitpix, big);
    if (bitpix != 0 && bitpix != bpp * 8)
        throw DataError("malformed Analyze header " + header_path.string() + ": bitpix " +
                        std::to_string(bitpix) + " does not match datatype " +
                        std::to_string(datatype));

    Volume v;
    v.nx = nx;
    v.ny = ny;
    v.nz = nz;
    v.kind = kind;
    const double pd[3] = {
        static_cast<double>(read_f32(hdr.data() + kOffPixdim + 4, big)),
        static_cast<double>(read_f32(hdr.data() + kOffPixdim + 8, big)),
        static_cast<double>(read_f32(hdr.data() + kOffPixdim + 12, big)),
    };
    v.dx = (std::isfinite(pd[0]) && pd[0] > 0.0) ? pd[0] : 1.0;
    v.dy = (std::isfinite(pd[1]) && pd[1] > 0.0) ? pd[1] : 1.0;
    v.dz = (std::isfinite(pd[2]) && pd[2] > 0.0) ? pd[2] : 1.0;

    const float vox_offset = read_f32(hdr.data() + kOffVoxOffset, big);
    const std::size_t offset =
        vox_offset > 0.0f ? static_cast<std::size_t>(vox_offset) : 0u;

    const auto img = read_file(image_path);
    const std::size_t need = v.voxel_count() * static_cast<std::size_t>(bpp);
    if (img.size() < offset + need)
        throw DataError("truncated Analyze image " + image_path.string() + ": need " +
                        std::to_string(offset + need) + " bytes, found " +
                        std::to_string(img.size()));

    decode_voxels(img.data() + offset, v.voxel_count(), type, big, v.data);
    validate(v);
    return v;
}

Volume load_rvol(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    if (bytes.size() < kRvolHeaderSize)
        throw DataError("truncated RVOL header in " + path.string());
    if (std::memcmp(bytes.data(), "RVOL", 4) != 0)
        throw DataError("bad RVOL magic in " + path.string());

    const std::uint32_t nx = read_u32(bytes.data() + 4, false);
    const std::uint32_t ny = read_u32(bytes.data() + 8, false);
    const std::uint32_t nz = read_u32(bytes.data() + 12, false);
    if (nx < 1 || ny < 1 || nz < 1)
        throw DataError("RVOL dims must be >= 1 in " + path.string());
    const std::uint64_t nvox =
        static_cast<std::uint64_t>(nx) * static_cast<std::uint64_t>(ny) *
        static_cast<std::uint64_t>(nz);
    if (nvox > (1ull << 31))
        throw DataError("RVOL dims too large in " + path.string());

    const std::uint8_t dtype_code = bytes[16];
    if (dtype_code > 2)
        throw DataError("RVOL voxel-type code " + std::to_string(dtype_code) +
                        " out of range in " + path.string());
    const std::uint8_t kind_code = bytes[17];
    if (kind_code > 1)
        throw DataError("RVOL kind code " + std::to_string(kind_code) +
                        " out of range in " + path.string());

    const auto type = static_cast<VoxelType>(dtype_code);
    const std::size_t need =
        static_cast<std::size_t>(nvox) * static_cast<std::size_t>(bytes_per_voxel(type));
    if (bytes.size() - kRvolHeaderSize != need)
        throw DataError("RVOL payload size mismatch in " + path.string() + ": expected " +
                        std::to_string(need) + " bytes, found " +
                        std::to_string(bytes.size() - kRvolHeaderSize));

    Volume v;
    v.nx = static_cast<int>(nx);
    v.ny = static_cast<int>(ny);
    v.nz = static_cast<int>(nz);
    v.kind = kind_code == 0 ? VolumeKind::Intensity : VolumeKind::SegmentationLabels;
    decode_voxels(bytes.data() + kRvolHeaderSize, static_cast<std::size_t>(nvox), type,
                  /*big=*/false, v.data);
    validate(v);
    return v;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

} // namespace

void write_rvol(const Volume& v, const std::filesystem::path& path, VoxelType type) {
    validate(v);

    std::vector<std::uint8_t> bytes;
    bytes.reserve(kRvolHeaderSize + v.voxel_count() * bytes_per_voxel(type));
    bytes.insert(bytes.end(), {'R', 'V', 'O', 'L'});
    put_u32(bytes, static_cast<std::uint32_t>(v.nx));
    put_u32(bytes, static_cast<std::uint32_t>(v.ny));
    put_u32(bytes, static_cast<std::uint32_t>(v.nz));
    bytes.push_back(static_cast<std::uint8_t>(type));
    bytes.push_back(v.kind == VolumeKind::Intensity ? 0 : 1);

    for (double value : v.data) {
        switch (type) {
        case VoxelType::U8: {
            const double r = std::llround(std::clamp(value, 0.0, 255.0));
            bytes.push_back(static_cast<std::uint8_t>(r));
            break;
        }
        case VoxelType::I16: {
            const double clamped = std::clamp(value, -32768.0, 32767.0);
            const auto r = static_cast<std::int16_t>(std::llround(clamped));
            const auto u = static_cast<std::uint16_t>(r);
            bytes.push_back(static_cast<std::uint8_t>(u & 0xff));
            bytes.push_back(static_cast<std::uint8_t>(u >> 8));
            break;
        }
        case VoxelType::F32: {
            const auto u = std::bit_cast<std::uint32_t>(static_cast<float>(value));
            put_u32(bytes, u);
            break;
        }
        }
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw DataError("write failed on " + path.string());
}

void write_rvol(const Volume& v, const std::filesystem::path& path) {
    write_rvol(v, path,
               v.kind == VolumeKind::SegmentationLabels ? VoxelType::U8 : VoxelType::F32);
}

} // namespace mricls
