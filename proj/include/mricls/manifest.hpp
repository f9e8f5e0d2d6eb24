#pragma once

#include <filesystem>
#include <vector>

#include "mricls/features.hpp"

namespace mricls {

// Loads a comma-separated manifest with a required header row. Recognized
// columns (case-insensitive): id, age, gender, etiv, nwbv, cdr, masked_path,
// segmented_path. Unknown columns are ignored. Gender must be M or F (any
// case); CDR must parse to one of {0, 0.5, 1, 2} — subjects with a missing
// or unscored CDR are rejected by name. Ids must be unique. Relative volume
// paths are resolved against the manifest's directory.
std::vector<SubjectRecord> load_manifest(const std::filesystem::path& path);

// +1 (demented) iff CDR > 0, else -1.
int label_subject(const SubjectRecord& record);

} // namespace mricls
