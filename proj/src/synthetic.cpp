#include "mricls/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "mricls/rng.hpp"
#include "mricls/volume_io.hpp"

namespace mricls {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPrevalence = 100.0 / 416.0;

std::string format(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

} // namespace

std::filesystem::path generate_synthetic(const SynthConfig& config,
                                         const std::filesystem::path& out_dir) {
    if (config.n_subjects < 20)
        throw DataError("generate_synthetic: need at least 20 subjects");
    if (config.nx < 8 || config.ny < 8 || config.nz < 8)
        throw DataError("generate_synthetic: dims must be at least 8x8x8");

    std::filesystem::create_directories(out_dir / "vol");
    Rng rng(config.seed);
    const double effect = config.class_effect;
    const int nx = config.nx, ny = config.ny, nz = config.nz;
    const double cx = (nx - 1) / 2.0, cy = (ny - 1) / 2.0, cz = (nz - 1) / 2.0;
    const double rx = 0.42 * nx, ry = 0.42 * ny, rz = 0.42 * nz;

    std::string manifest = "id,age,gender,etiv,nwbv,cdr,masked_path,segmented_path\n";

    for (int s = 0; s < config.n_subjects; ++s) {
        const bool demented = rng.uniform() < kPrevalence;

        // CDR severity split mirrors the 70/28/2 distribution of the scored
        // cohort; healthy subjects score 0.
        double cdr = 0.0;
        const double sev = rng.uniform();
        if (demented)
            cdr = sev < 0.70 ? 0.5 : (sev < 0.98 ? 1.0 : 2.0);

        double age = rng.normal(72.0, 9.0) + (demented ? 6.0 * effect : 0.0);
        age = std::clamp(age, 18.0, 98.0);
        const bool male = rng.uniform() < 0.5;
        double etiv = std::clamp(rng.normal(1.45e6, 1.2e5), 9.0e5, 2.1e6);
        double nwbv = rng.normal(0.78, 0.03) - (demented ? 0.05 * effect : 0.0);
        nwbv = std::clamp(nwbv, 0.55, 0.95);

        // Tissue mixture inside the brain ellipsoid. Dementia trades grey
        // matter for CSF.
        double csf_frac = 0.20 + (demented ? 0.10 * effect : 0.0) + rng.normal(0.0, 0.015);
        double grey_frac = 0.45 - (demented ? 0.10 * effect : 0.0) + rng.normal(0.0, 0.015);
        csf_frac = std::clamp(csf_frac, 0.02, 0.60);
        grey_frac = std::clamp(grey_frac, 0.05, 0.80);

        Volume masked;
        masked.nx = nx;
        masked.ny = ny;
        masked.nz = nz;
        masked.kind = VolumeKind::Intensity;
        masked.data.resize(masked.voxel_count());

        Volume seg;
        seg.nx = nx;
        seg.ny = ny;
        seg.nz = nz;
        seg.kind = VolumeKind::SegmentationLabels;
        seg.data.resize(seg.voxel_count());

        // Fixed off-center dip drives the PCA coefficients apart; the
        // left/right gradient perturbs the U-flip symmetry.
        const double qx = 0.30 * nx, qy = 0.65 * ny;
        const double dip = demented ? 25.0 * effect : 0.0;
        const double grad = demented ? 12.0 * effect : 0.0;

        for (int z = 0; z < nz; ++z) {
            for (int y = 0; y < ny; ++y) {
                for (int x = 0; x < nx; ++x) {
                    const double ex = (x - cx) / rx, ey = (y - cy) / ry, ez = (z - cz) / rz;
                    const bool inside = ex * ex + ey * ey + ez * ez <= 1.0;
                    if (!inside) {
                        masked.at(x, y, z) = 0.0;
                        seg.at(x, y, z) = kLabelBackground;
                        continue;
                    }
                    const double base = 110.0 + 40.0 * std::sin(2.0 * kPi * x / nx) *
                                                    std::cos(2.0 * kPi * y / ny) +
                                        25.0 * std::cos(2.0 * kPi * z / nz);
                    const double dx2 = (x - qx) * (x - qx) + (y - qy) * (y - qy);
                    const double bump = dip * std::exp(-dx2 / (0.02 * nx * ny));
                    const double slope = grad * (x - cx) / rx;
                    double value = base - bump + slope + rng.normal(0.0, 6.0);
                    masked.at(x, y, z) = std::max(value, 1.0);

                    const double u = rng.uniform();
                    if (u < csf_frac)
                        seg.at(x, y, z) = kLabelCsf;
                    else if (u < csf_frac + grey_frac)
                        seg.at(x, y, z) = kLabelGrey;
                    else
                        seg.at(x, y, z) = kLabelWhite;
                }
            }
        }

        char name[32];
        std::snprintf(name, sizeof name, "SYN_%04d", s);
        const std::string masked_rel = std::string("vol/") + name + "_masked.rvol";
        const std::string seg_rel = std::string("vol/") + name + "_seg.rvol";
        write_rvol(masked, out_dir / masked_rel, VoxelType::F32);
        write_rvol(seg, out_dir / seg_rel, VoxelType::U8);

        manifest += name;
        manifest += "," + format("%.1f", age);
        manifest += male ? ",M" : ",F";
        manifest += "," + format("%.0f", etiv);
        manifest += "," + format("%.4f", nwbv);
        manifest += "," + format("%.1f", cdr);
        manifest += "," + masked_rel;
        manifest += "," + seg_rel;
        manifest += "\n";
    }

    const std::filesystem::path manifest_path = out_dir / "manifest.csv";
    std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot write " + manifest_path.string());
    out << manifest;
    if (!out)
        throw DataError("write failed on " + manifest_path.string());
    return manifest_path;
}

} // namespace mricls
