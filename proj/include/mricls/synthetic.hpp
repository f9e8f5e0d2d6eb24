#pragma once

#include <cstdint>
#include <filesystem>

namespace mricls {

// Desk-scale synthetic cohort: RVOL volume pairs plus a manifest. Roughly
// 24% of subjects are generated "demented" (CDR > 0) with reduced grey-label
// fraction, reduced nWBV, higher mean age, and a left/right intensity
// gradient, each scaled by class_effect. At class_effect = 1 the cohort is
// near-separable; at 0 the classes are identically distributed. Fully
// deterministic given the seed.
struct SynthConfig {
    int n_subjects = 200;
    int nx = 16, ny = 16, nz = 16;
    double class_effect = 1.0;
    std::uint64_t seed = 0;
};

// Writes <out_dir>/manifest.csv and <out_dir>/vol/*.rvol; returns the
// manifest path. Requires n_subjects >= 20 and dims >= 8 on every axis.
std::filesystem::path generate_synthetic(const SynthConfig& config,
                                         const std::filesystem::path& out_dir);

} // namespace mricls
