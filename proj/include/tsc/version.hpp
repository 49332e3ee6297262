#pragma once

namespace tsc {

inline constexpr const char* kVersion = "0.1.0";

// Schema tags written into every artifact. Readers accept any minor
// revision of a known major and reject everything else.
inline constexpr const char* kDatasetSchema = "tsc.dataset/1";
inline constexpr const char* kCoresetSchema = "tsc.coreset/1";
inline constexpr const char* kParamsSchema = "tsc.params/1";
inline constexpr const char* kLabelsSchema = "tsc.labels/1";
inline constexpr const char* kReportSchema = "tsc.report/1";
inline constexpr const char* kManifestSchema = "tsc.manifest/1";

}  // namespace tsc
