#include "mricls/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mricls {

namespace {

bool valid_cdr(double cdr) {
    return cdr == 0.0 || cdr == 0.5 || cdr == 1.0 || cdr == 2.0;
}

double slice_total(const Slice2D& s) {
    double total = 0.0;
    for (double x : s.data)
        total += x;
    return total;
}

} // namespace

void validate(const SubjectRecord& r) {
    if (!valid_cdr(r.cdr))
        throw DataError("subject " + r.id + ": CDR " + std::to_string(r.cdr) +
                        " is not one of {0, 0.5, 1, 2}");
    if (!(r.age > 0.0))
        throw DataError("subject " + r.id + ": age must be positive");
    if (!(r.etiv > 0.0))
        throw DataError("subject " + r.id + ": eTIV must be positive");
    if (!(r.nwbv > 0.0) || r.nwbv > 1.0)
        throw DataError("subject " + r.id + ": nWBV must be in (0, 1]");
}

int FeatureVector::active_count() const {
    int n = 0;
    for (bool b : mask)
        n += b ? 1 : 0;
    return n;
}

std::vector<double> FeatureVector::active_values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(kFeatureCount));
    for (int i = 0; i < kFeatureCount; ++i)
        if (mask[static_cast<std::size_t>(i)])
            out.push_back(values[static_cast<std::size_t>(i)]);
    return out;
}

double slice_symmetry(const Slice2D& slice, FlipAxis axis) {
    double numer = 0.0;
    double denom = 0.0;
    for (int v = 0; v < slice.nv; ++v) {
        for (int u = 0; u < slice.nu; ++u) {
            const double a = slice.at(u, v);
            const double b = axis == FlipAxis::U ? slice.at(slice.nu - 1 - u, v)
                                                 : slice.at(u, slice.nv - 1 - v);
            numer += a * b;
            denom += a;
        }
    }
    if (!(denom > 0.0))
        throw DataError("slice_symmetry: slice has no positive total intensity");
    return numer / denom;
}

double volume_symmetry(const Volume& volume, FlipAxis axis) {
    if (volume.kind != VolumeKind::Intensity)
        throw DataError("volume_symmetry requires an intensity volume");
    double sum = 0.0;
    int counted = 0;
    for (int z = 0; z < volume.nz; ++z) {
        const Slice2D slice = extract_slice(volume, Orientation::Axial, z);
        if (slice_total(slice) > 0.0) {
            sum += slice_symmetry(slice, axis);
            ++counted;
        }
    }
    if (counted == 0)
        throw DataError("volume_symmetry: every axial slice is empty");
    return sum / counted;
}

TissueSums tissue_sums(const Volume& segmented) {
    if (segmented.kind != VolumeKind::SegmentationLabels)
        throw DataError("tissue_sums requires a segmentation volume");
    TissueSums sums;
    for (double value : segmented.data) {
        if (value == kLabelWhite)
            ++sums.white;
        else if (value == kLabelGrey)
            ++sums.grey;
        else if (value == kLabelCsf)
            ++sums.csf;
    }
    return sums;
}

ImageFeatures image_features(const Volume& masked, const Volume& segmented) {
    ImageFeatures img;
    img.sums = tissue_sums(segmented);
    img.updown_symmetry = volume_symmetry(masked, FlipAxis::V);
    img.leftright_symmetry = volume_symmetry(masked, FlipAxis::U);
    return img;
}

FeatureVector build_feature_vector(const SubjectRecord& record, const ImageFeatures& img,
                                   double coronal_coeff, double axial_coeff) {
    FeatureVector fv;
    fv.values[feat::kAge] = record.age;
    fv.values[feat::kGender] = record.gender == Gender::M ? 1.0 : 0.0;
    fv.values[feat::kEtiv] = record.etiv;
    fv.values[feat::kNwbv] = record.nwbv;
    fv.values[feat::kWhiteSum] = static_cast<double>(img.sums.white);
    fv.values[feat::kGreySum] = static_cast<double>(img.sums.grey);
    fv.values[feat::kCsfSum] = static_cast<double>(img.sums.csf);
    fv.values[feat::kUpDownSymmetry] = img.updown_symmetry;
    fv.values[feat::kLeftRightSymmetry] = img.leftright_symmetry;
    fv.values[feat::kCoronalPca] = coronal_coeff;
    fv.values[feat::kAxialPca] = axial_coeff;
    for (int f = 0; f < kFeatureCount; ++f)
        if (!std::isfinite(fv.values[static_cast<std::size_t>(f)]))
            throw DataError("subject " + record.id + ": feature '" +
                            kFeatureNames[static_cast<std::size_t>(f)] +
                            "' is not finite");
    return fv;
}

FeatureVector assemble_features(const SubjectRecord& record, const Volume& masked,
                                const Volume& segmented, double coronal_coeff,
                                double axial_coeff) {
    validate(record);
    return build_feature_vector(record, image_features(masked, segmented), coronal_coeff,
                                axial_coeff);
}

Standardizer fit_standardizer(std::span<const FeatureVector> vectors,
                              NormalizeBy normalize) {
    if (vectors.size() < 2)
        throw DataError("fit_standardizer needs at least 2 vectors, got " +
                        std::to_string(vectors.size()));
    const auto& mask = vectors.front().mask;
    for (const auto& v : vectors)
        if (v.mask != mask)
            throw DataError("fit_standardizer: inconsistent feature masks");

    Standardizer s;
    s.mask = mask;
    s.scales.fill(1.0);
    const double n = static_cast<double>(vectors.size());
    for (int f = 0; f < kFeatureCount; ++f) {
        if (!mask[static_cast<std::size_t>(f)])
            continue;
        double mean = 0.0;
        for (const auto& v : vectors)
            mean += v.values[static_cast<std::size_t>(f)];
        mean /= n;
        double var = 0.0;
        for (const auto& v : vectors) {
            const double d = v.values[static_cast<std::size_t>(f)] - mean;
            var += d * d;
        }
        var /= n; // population convention
        const double sd = std::sqrt(var);
        s.means[static_cast<std::size_t>(f)] = mean;
        if (sd <= 1e-12 * std::max(1.0, std::fabs(mean)))
            s.scales[static_cast<std::size_t>(f)] = 1.0; // constant feature
        else
            s.scales[static_cast<std::size_t>(f)] =
                normalize == NormalizeBy::StdDev ? sd : var;
    }
    return s;
}

FeatureVector apply_standardizer(const Standardizer& s, const FeatureVector& v) {
    if (v.mask != s.mask)
        throw DataError("apply_standardizer: feature mask differs from the fitted mask");
    FeatureVector out = v;
    for (int f = 0; f < kFeatureCount; ++f) {
        if (!s.mask[static_cast<std::size_t>(f)])
            continue;
        out.values[static_cast<std::size_t>(f)] =
            (v.values[static_cast<std::size_t>(f)] - s.means[static_cast<std::size_t>(f)]) /
            s.scales[static_cast<std::size_t>(f)];
    }
    return out;
}

} // namespace mricls
