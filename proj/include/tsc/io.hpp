#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "tsc/datagen.hpp"
#include "tsc/eval.hpp"
#include "tsc/types.hpp"

namespace tsc::io {

// Datasets: text form is a `# schema: <tag>` line, then the column header
// `entity_id,t,f0,...`, then rows sorted by (entity_id, t), LF line ends,
// full double round-trip precision. Binary form is little-endian and
// length-prefixed. read_dataset sniffs the format.
void write_dataset(const std::filesystem::path& path,
                   const TimeSeriesDataset& data, bool binary = false);
TimeSeriesDataset read_dataset(const std::filesystem::path& path);

struct CoresetMeta {
  std::string method;
  std::uint64_t seed = 0;
  int m_entities = 0;
  int l_times = 0;
};
void write_coreset(const std::filesystem::path& path, const Coreset& coreset,
                   const CoresetMeta& meta);
Coreset read_coreset(const std::filesystem::path& path,
                     CoresetMeta* meta = nullptr);

void write_params(const std::filesystem::path& path, const MixtureParams& p);
MixtureParams read_params(const std::filesystem::path& path);

// Ground truth: planted parameters plus per-entity labels in one file.
void write_ground_truth(const std::filesystem::path& path,
                        const GroundTruth& truth);
GroundTruth read_ground_truth(const std::filesystem::path& path);

// Reports: timing fields are wall-clock measurements, the one part of a run
// that is not a function of the seed, so writers can leave them out to keep
// artifacts reproducible byte for byte.
void write_report_json(const std::filesystem::path& path,
                       const ExperimentReport& report,
                       bool include_timings = true);
void write_report_csv(const std::filesystem::path& path,
                      const ExperimentReport& report,
                      bool include_timings = true);

// Reproducibility record: the exact command line, the full configuration,
// the seed, and a content hash per artifact written by the run.
struct RunManifest {
  std::string command;
  std::string config_json;  // full config echo, JSON text
  std::uint64_t seed = 0;
  std::map<std::string, std::string> artifact_hashes;  // path -> fnv1a hex
  std::string tool_version;
};
void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

std::uint64_t fnv1a_file(const std::filesystem::path& path);
std::string fnv1a_hex(std::uint64_t h);

}  // namespace tsc::io
