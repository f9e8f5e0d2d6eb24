#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mricls/volume.hpp"

namespace mricls {

enum class Gender { F = 0, M = 1 };

// Axis a slice is mirrored along: U reverses the u index (left/right),
// V reverses the v index (up/down).
enum class FlipAxis { U, V };

// Per-feature divisor used when standardizing: the population standard
// deviation (conventional z-scoring, the default) or the population variance.
enum class NormalizeBy { StdDev, Variance };

// One row of subject metadata plus the paths of its two volumes.
struct SubjectRecord {
    std::string id;
    double age = 0.0;
    Gender gender = Gender::F;
    double etiv = 0.0; // estimated total intracranial volume, mm^3
    double nwbv = 0.0; // normalized whole-brain volume, fraction in (0, 1]
    double cdr = 0.0;  // clinical dementia rating, one of {0, 0.5, 1, 2}
    std::filesystem::path masked_volume_path;
    std::filesystem::path segmented_volume_path;
};

// Throws DataError on out-of-range age/etiv/nwbv or a CDR outside {0, 0.5, 1, 2}.
void validate(const SubjectRecord& r);

inline constexpr int kFeatureCount = 11;

// Feature indices, in the fixed feature-vector order.
namespace feat {
inline constexpr int kAge = 0;
inline constexpr int kGender = 1;
inline constexpr int kEtiv = 2;
inline constexpr int kNwbv = 3;
inline constexpr int kWhiteSum = 4;
inline constexpr int kGreySum = 5;
inline constexpr int kCsfSum = 6;
inline constexpr int kUpDownSymmetry = 7;
inline constexpr int kLeftRightSymmetry = 8;
inline constexpr int kCoronalPca = 9;
inline constexpr int kAxialPca = 10;
} // namespace feat

inline constexpr std::array<const char*, kFeatureCount> kFeatureNames = {
    "age",
    "gender",
    "etiv",
    "nwbv",
    "white_sum",
    "grey_sum",
    "csf_sum",
    "updown_axial_symmetry",
    "leftright_axial_symmetry",
    "coronal_pca_coeff",
    "axial_pca_coeff",
};

// Ordered 11-feature vector with a feature mask for ablations. Masked-off
// entries keep their raw values but are excluded from standardization and
// from the vectors handed to the classifier.
struct FeatureVector {
    std::array<double, kFeatureCount> values{};
    std::array<bool, kFeatureCount> mask{};

    FeatureVector() { mask.fill(true); }
    explicit FeatureVector(const std::array<double, kFeatureCount>& v) : values(v) {
        mask.fill(true);
    }

    int active_count() const;
    std::vector<double> active_values() const;
};

// Symmetry measure of a slice: the zero-lag correlation of the slice with
// its mirrored self, normalized by total intensity:
//   psi = sum_uv I(u,v) * I'(u,v) / sum_uv I(u,v).
// Throws DataError when total intensity is not positive (empty slice).
double slice_symmetry(const Slice2D& slice, FlipAxis axis);

// Mean of slice_symmetry over all axial slices with positive total
// intensity; empty slices are skipped. Requires an intensity volume; throws
// DataError when every slice is empty.
double volume_symmetry(const Volume& volume, FlipAxis axis);

struct TissueSums {
    std::int64_t white = 0;
    std::int64_t grey = 0;
    std::int64_t csf = 0;
};

// Voxel counts per tissue label (3 = white, 2 = grey, 1 = CSF); background
// is ignored. Requires a segmentation volume.
TissueSums tissue_sums(const Volume& segmented);

// Image-derived feature entries (sums + symmetries), split out so callers
// that hold slices but not whole volumes can assemble vectors later.
struct ImageFeatures {
    TissueSums sums;
    double updown_symmetry = 0.0;    // V-flip over axial slices
    double leftright_symmetry = 0.0; // U-flip over axial slices
};

ImageFeatures image_features(const Volume& masked, const Volume& segmented);

FeatureVector build_feature_vector(const SubjectRecord& record, const ImageFeatures& img,
                                   double coronal_coeff, double axial_coeff);

// Full 11-feature assembly: tabular fields, tissue sums, the two axial
// symmetries of the masked volume (up/down = V flip, left/right = U flip),
// and the supplied eigenbrain coefficients. Gender is encoded F = 0, M = 1.
FeatureVector assemble_features(const SubjectRecord& record, const Volume& masked,
                                const Volume& segmented, double coronal_coeff,
                                double axial_coeff);

// Per-feature centering and scaling, fitted on training vectors only.
struct Standardizer {
    std::array<double, kFeatureCount> means{};
    std::array<double, kFeatureCount> scales{}; // > 0
    std::array<bool, kFeatureCount> mask{};
};

// Means are sample means; scales are population standard deviations (or
// variances in Variance mode). Constant features get scale 1 so they map to
// zero instead of dividing by zero. Requires >= 2 vectors with equal masks.
Standardizer fit_standardizer(std::span<const FeatureVector> vectors,
                              NormalizeBy normalize = NormalizeBy::StdDev);

// Replaces each active value by (value - mean) / scale; masked-off entries
// pass through. Throws DataError when the masks disagree.
FeatureVector apply_standardizer(const Standardizer& s, const FeatureVector& v);

} // namespace mricls
