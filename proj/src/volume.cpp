#include "mricls/volume.hpp"

#include <cmath>
#include <string>

namespace mricls {

void validate(const Volume& v) {
    if (v.nx < 1 || v.ny < 1 || v.nz < 1)
        throw DataError("volume dims must all be >= 1, got " + std::to_string(v.nx) + "x" +
                        std::to_string(v.ny) + "x" + std::to_string(v.nz));
    if (!(v.dx > 0.0) || !(v.dy > 0.0) || !(v.dz > 0.0))
        throw DataError("volume voxel sizes must be positive");
    if (v.data.size() != v.voxel_count())
        throw DataError("volume data length " + std::to_string(v.data.size()) +
                        " does not match dims (" + std::to_string(v.voxel_count()) +
                        " voxels)");
    if (v.kind == VolumeKind::SegmentationLabels) {
        for (double value : v.data) {
            if (!(value == std::floor(value)) || value < kLabelBackground ||
                value > kLabelWhite)
                throw DataError("segmentation volume contains invalid label " +
                                std::to_string(value) + " (labels must be integers 0..3)");
        }
    }
}

Slice2D extract_slice(const Volume& v, Orientation orientation, int index) {
    Slice2D s;
    s.orientation = orientation;
    s.index = index;
    switch (orientation) {
    case Orientation::Axial: // constant z, in-plane (x, y)
        if (index < 0 || index >= v.nz)
            throw DataError("axial slice index " + std::to_string(index) +
                            " out of range [0, " + std::to_string(v.nz) + ")");
        s.nu = v.nx;
        s.nv = v.ny;
        s.data.resize(s.pixel_count());
        for (int y = 0; y < v.ny; ++y)
            for (int x = 0; x < v.nx; ++x)
                s.at(x, y) = v.at(x, y, index);
        break;
    case Orientation::Coronal: // constant y, in-plane (x, z)
        if (index < 0 || index >= v.ny)
            throw DataError("coronal slice index " + std::to_string(index) +
                            " out of range [0, " + std::to_string(v.ny) + ")");
        s.nu = v.nx;
        s.nv = v.nz;
        s.data.resize(s.pixel_count());
        for (int z = 0; z < v.nz; ++z)
            for (int x = 0; x < v.nx; ++x)
                s.at(x, z) = v.at(x, index, z);
        break;
    case Orientation::Sagittal: // constant x, in-plane (y, z)
        if (index < 0 || index >= v.nx)
            throw DataError("sagittal slice index " + std::to_string(index) +
                            " out of range [0, " + std::to_string(v.nx) + ")");
        s.nu = v.ny;
        s.nv = v.nz;
        s.data.resize(s.pixel_count());
        for (int z = 0; z < v.nz; ++z)
            for (int y = 0; y < v.ny; ++y)
                s.at(y, z) = v.at(index, y, z);
        break;
    }
    return s;
}

} // namespace mricls
