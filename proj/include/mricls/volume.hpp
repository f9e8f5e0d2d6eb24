#pragma once

#include <cstddef>
#include <vector>

#include "mricls/errors.hpp"

namespace mricls {

enum class VolumeKind { Intensity, SegmentationLabels };

// Slicing planes. Axial = constant z, coronal = constant y, sagittal =
// constant x. Storage is x-fastest throughout.
enum class Orientation { Axial, Coronal, Sagittal };

// Segmentation label codes (background / CSF / grey matter / white matter).
inline constexpr int kLabelBackground = 0;
inline constexpr int kLabelCsf = 1;
inline constexpr int kLabelGrey = 2;
inline constexpr int kLabelWhite = 3;

// 3-D scalar field. Voxels are stored x-fastest: data[x + nx*(y + ny*z)].
// All voxel values are held as doubles regardless of the on-disk type.
// Volumes are treated as immutable once built; concurrent readers are fine.
struct Volume {
    int nx = 0, ny = 0, nz = 0;
    double dx = 1.0, dy = 1.0, dz = 1.0; // voxel size in mm
    VolumeKind kind = VolumeKind::Intensity;
    std::vector<double> data;

    std::size_t voxel_count() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
               static_cast<std::size_t>(nz);
    }
    double at(int x, int y, int z) const {
        return data[static_cast<std::size_t>(x) +
                    static_cast<std::size_t>(nx) *
                        (static_cast<std::size_t>(y) +
                         static_cast<std::size_t>(ny) * static_cast<std::size_t>(z))];
    }
    double& at(int x, int y, int z) {
        return data[static_cast<std::size_t>(x) +
                    static_cast<std::size_t>(nx) *
                        (static_cast<std::size_t>(y) +
                         static_cast<std::size_t>(ny) * static_cast<std::size_t>(z))];
    }
};

// Throws DataError unless dims are >= 1, voxel sizes > 0, the data length
// matches the dims, and (for segmentation volumes) every value is an
// integer in {0, 1, 2, 3}.
void validate(const Volume& v);

// 2-D plane cut from a volume, u-fastest: data[u + nu*v]. The in-plane axes
// are (x, y) for axial, (x, z) for coronal, (y, z) for sagittal slices.
struct Slice2D {
    int nu = 0, nv = 0;
    Orientation orientation = Orientation::Axial;
    int index = 0; // plane index along the sliced axis in the source volume
    std::vector<double> data;

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv);
    }
    double at(int u, int v) const {
        return data[static_cast<std::size_t>(u) +
                    static_cast<std::size_t>(nu) * static_cast<std::size_t>(v)];
    }
    double& at(int u, int v) {
        return data[static_cast<std::size_t>(u) +
                    static_cast<std::size_t>(nu) * static_cast<std::size_t>(v)];
    }
};

// Cuts the plane at `index` along the axis fixed by `orientation`.
// Throws DataError when the index is outside the axis extent.
Slice2D extract_slice(const Volume& v, Orientation orientation, int index);

} // namespace mricls
