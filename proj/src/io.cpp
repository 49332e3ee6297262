#include "tsc/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tsc/version.hpp"

namespace tsc::io {

namespace {

using ordered_json = nlohmann::ordered_json;

void fail(const std::string& msg) { throw std::runtime_error(msg); }

void check_schema(const std::string& got, const std::string& want) {
  if (got != want) {
    fail("unsupported schema '" + got + "' (expected '" + want + "')");
  }
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) fail("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open for reading: " + path.string());
  return in;
}

ordered_json load_json(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail("malformed file " + path.string() + ": " + e.what());
  }
  return j;
}

void store_json(const std::filesystem::path& path, const ordered_json& j) {
  std::ofstream out = open_out(path, false);
  out << j.dump(2) << "\n";
  if (!out) fail("write failed: " + path.string());
}

template <typename T>
void put_le(std::ostream& out, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  // This code targets little-endian hosts; the format is defined LE.
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!in) fail("truncated binary dataset");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

constexpr char kBinMagic[4] = {'T', 'S', 'C', 'B'};

ordered_json params_to_json(const MixtureParams& p) {
  ordered_json j;
  j["alpha"] = std::vector<double>(p.alpha.data(), p.alpha.data() + p.alpha.size());
  ordered_json comps = ordered_json::array();
  for (const auto& c : p.components) {
    ordered_json jc;
    jc["mu"] = std::vector<double>(c.mu().data(), c.mu().data() + c.mu().size());
    std::vector<double> sig;
    sig.reserve(static_cast<std::size_t>(c.dim()) * c.dim());
    for (int r = 0; r < c.dim(); ++r) {
      for (int q = 0; q < c.dim(); ++q) sig.push_back(c.sigma()(r, q));
    }
    jc["sigma"] = sig;
    jc["ar"] = std::vector<double>(c.ar().data(), c.ar().data() + c.ar().size());
    comps.push_back(jc);
  }
  j["components"] = comps;
  return j;
}

MixtureParams params_from_json(const ordered_json& j) {
  MixtureParams p;
  const auto alpha = j.at("alpha").get<std::vector<double>>();
  p.alpha = Eigen::Map<const Vector>(alpha.data(),
                                     static_cast<Eigen::Index>(alpha.size()));
  for (const auto& jc : j.at("components")) {
    const auto mu = jc.at("mu").get<std::vector<double>>();
    const auto sig = jc.at("sigma").get<std::vector<double>>();
    const auto ar = jc.at("ar").get<std::vector<double>>();
    const auto d = static_cast<Eigen::Index>(mu.size());
    if (sig.size() != mu.size() * mu.size() || ar.size() != mu.size()) {
      fail("component shape mismatch in params file");
    }
    Matrix sigma(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index q = 0; q < d; ++q) {
        sigma(r, q) = sig[static_cast<std::size_t>(r * d + q)];
      }
    }
    p.components.emplace_back(
        Eigen::Map<const Vector>(mu.data(), d), sigma,
        Eigen::Map<const Vector>(ar.data(), d));
  }
  p.validate();
  return p;
}

}  // namespace

void write_dataset(const std::filesystem::path& path,
                   const TimeSeriesDataset& data, bool binary) {
  data.validate();
  if (binary) {
    std::ofstream out = open_out(path, true);
    out.write(kBinMagic, 4);
    put_le<std::uint32_t>(out, 1);  // major
    put_le<std::uint32_t>(out, 0);  // minor
    put_le<std::int64_t>(out, data.num_entities());
    put_le<std::int64_t>(out, data.dim());
    for (const auto& e : data.entities) {
      put_le<std::int64_t>(out, e.id);
      put_le<std::int64_t>(out, e.length());
      for (Eigen::Index t = 0; t < e.observations.rows(); ++t) {
        for (Eigen::Index c = 0; c < e.observations.cols(); ++c) {
          put_le<double>(out, e.observations(t, c));
        }
      }
    }
    if (!out) fail("write failed: " + path.string());
    return;
  }
  std::ofstream out = open_out(path, false);
  out << "# schema: " << kDatasetSchema << "\n";
  out << "entity_id,t";
  for (int c = 0; c < data.dim(); ++c) out << ",f" << c;
  out << "\n";
  for (const auto& e : data.entities) {
    for (Eigen::Index t = 0; t < e.observations.rows(); ++t) {
      out << e.id << "," << (t + 1);
      for (Eigen::Index c = 0; c < e.observations.cols(); ++c) {
        out << "," << fmt_double(e.observations(t, c));
      }
      out << "\n";
    }
  }
  if (!out) fail("write failed: " + path.string());
}

TimeSeriesDataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  char magic[4] = {};
  in.read(magic, 4);
  if (in && std::memcmp(magic, kBinMagic, 4) == 0) {
    const auto major = get_le<std::uint32_t>(in);
    get_le<std::uint32_t>(in);  // minor, any value accepted
    if (major != 1) fail("unsupported binary dataset version");
    const auto n = get_le<std::int64_t>(in);
    const auto d = get_le<std::int64_t>(in);
    if (n < 1 || d < 1) fail("corrupt binary dataset header");
    TimeSeriesDataset data;
    data.entities.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
      auto& e = data.entities[static_cast<std::size_t>(i)];
      e.id = static_cast<int>(get_le<std::int64_t>(in));
      const auto len = get_le<std::int64_t>(in);
      if (len < 1) fail("corrupt binary dataset entity");
      e.observations.resize(len, d);
      for (std::int64_t t = 0; t < len; ++t) {
        for (std::int64_t c = 0; c < d; ++c) {
          e.observations(t, c) = get_le<double>(in);
        }
      }
    }
    data.validate();
    return data;
  }

  in.clear();
  in.seekg(0);
  std::string line;
  if (!std::getline(in, line)) fail("empty dataset file");
  if (line.rfind("# schema: ", 0) != 0) fail("missing dataset schema line");
  check_schema(line.substr(10), kDatasetSchema);
  if (!std::getline(in, line) || line.rfind("entity_id,t", 0) != 0) {
    fail("missing dataset column header");
  }

  std::vector<std::vector<std::vector<double>>> rows;  // entity -> t -> values
  int dim = -1;
  std::size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail("bad number at line " + std::to_string(lineno));
      }
    }
    if (vals.size() < 3) fail("short row at line " + std::to_string(lineno));
    const int id = static_cast<int>(vals[0]);
    const int t = static_cast<int>(vals[1]);
    const int d = static_cast<int>(vals.size()) - 2;
    if (dim == -1) dim = d;
    if (d != dim) fail("inconsistent dimension at line " + std::to_string(lineno));
    if (id != static_cast<int>(rows.size()) - 1) {
      if (id != static_cast<int>(rows.size())) {
        fail("entity ids out of order at line " + std::to_string(lineno));
      }
      rows.emplace_back();
    }
    auto& entity = rows.back();
    if (t != static_cast<int>(entity.size()) + 1) {
      fail("time steps out of order at line " + std::to_string(lineno));
    }
    entity.emplace_back(vals.begin() + 2, vals.end());
  }
  if (rows.empty()) fail("dataset has no rows");

  TimeSeriesDataset data;
  data.entities.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& e = data.entities[i];
    e.id = static_cast<int>(i);
    e.observations.resize(static_cast<Eigen::Index>(rows[i].size()), dim);
    for (std::size_t t = 0; t < rows[i].size(); ++t) {
      for (int c = 0; c < dim; ++c) {
        e.observations(static_cast<Eigen::Index>(t), c) = rows[i][t][static_cast<std::size_t>(c)];
      }
    }
  }
  data.validate();
  return data;
}

void write_coreset(const std::filesystem::path& path, const Coreset& coreset,
                   const CoresetMeta& meta) {
  ordered_json j;
  j["schema"] = kCoresetSchema;
  j["method"] = meta.method;
  j["seed"] = meta.seed;
  j["m_entities"] = meta.m_entities;
  j["l_times"] = meta.l_times;
  j["entity_ids"] = coreset.entity_ids;
  ordered_json ws = ordered_json::array();
  ordered_json tis = ordered_json::array();
  ordered_json tws = ordered_json::array();
  for (int id : coreset.entity_ids) {
    ws.push_back(coreset.entity_weights.at(id));
    tis.push_back(coreset.time_indices.at(id));
    ordered_json tw = ordered_json::array();
    for (int t : coreset.time_indices.at(id)) {
      tw.push_back(coreset.time_weights.at(id).at(t));
    }
    tws.push_back(tw);
  }
  j["entity_weights"] = ws;
  j["time_indices"] = tis;
  j["time_weights"] = tws;
  store_json(path, j);
}

Coreset read_coreset(const std::filesystem::path& path, CoresetMeta* meta) {
  const ordered_json j = load_json(path);
  check_schema(j.value("schema", ""), kCoresetSchema);
  if (meta != nullptr) {
    meta->method = j.value("method", "");
    meta->seed = j.value("seed", std::uint64_t{0});
    meta->m_entities = j.value("m_entities", 0);
    meta->l_times = j.value("l_times", 0);
  }
  Coreset s;
  s.entity_ids = j.at("entity_ids").get<std::vector<int>>();
  const auto& ws = j.at("entity_weights");
  const auto& tis = j.at("time_indices");
  const auto& tws = j.at("time_weights");
  if (ws.size() != s.entity_ids.size() || tis.size() != s.entity_ids.size() ||
      tws.size() != s.entity_ids.size()) {
    fail("coreset arrays must align with entity_ids");
  }
  for (std::size_t i = 0; i < s.entity_ids.size(); ++i) {
    const int id = s.entity_ids[i];
    s.entity_weights[id] = ws[i].get<double>();
    s.time_indices[id] = tis[i].get<std::vector<int>>();
    const auto& tw = tws[i];
    if (tw.size() != s.time_indices[id].size()) {
      fail("coreset time weights must align with time indices");
    }
    for (std::size_t t = 0; t < tw.size(); ++t) {
      s.time_weights[id][s.time_indices[id][t]] = tw[t].get<double>();
    }
  }
  return s;
}

void write_params(const std::filesystem::path& path, const MixtureParams& p) {
  p.validate();
  ordered_json j;
  j["schema"] = kParamsSchema;
  j.update(params_to_json(p));
  store_json(path, j);
}

MixtureParams read_params(const std::filesystem::path& path) {
  const ordered_json j = load_json(path);
  check_schema(j.value("schema", ""), kParamsSchema);
  return params_from_json(j);
}

void write_ground_truth(const std::filesystem::path& path,
                        const GroundTruth& truth) {
  ordered_json j;
  j["schema"] = kLabelsSchema;
  j["labels"] = truth.labels;
  j["params"] = params_to_json(truth.params);
  store_json(path, j);
}

GroundTruth read_ground_truth(const std::filesystem::path& path) {
  const ordered_json j = load_json(path);
  check_schema(j.value("schema", ""), kLabelsSchema);
  GroundTruth truth;
  truth.labels = j.at("labels").get<std::vector<int>>();
  truth.params = params_from_json(j.at("params"));
  return truth;
}

namespace {

ordered_json rep_to_json(const RepRecord& r, bool timings) {
  ordered_json j;
  j["method"] = r.method;
  j["epsilon"] = r.epsilon;
  j["rep"] = r.rep;
  j["size"] = r.size;
  j["v_coreset"] = r.v_coreset;
  j["gamma"] = r.gamma;
  if (timings) {
    j["build_seconds"] = r.build_seconds;
    j["fit_seconds"] = r.fit_seconds;
  }
  j["failed"] = r.failed;
  if (r.failed) j["error"] = r.error;
  return j;
}

ordered_json agg_to_json(const AggregateRecord& a, bool timings) {
  ordered_json j;
  j["method"] = a.method;
  j["epsilon"] = a.epsilon;
  j["reps_used"] = a.reps_used;
  j["size_mean"] = a.size_mean;
  j["v_mean"] = a.v_mean;
  j["gamma_mean"] = a.gamma_mean;
  j["gamma_std"] = a.gamma_std;
  if (timings) {
    j["build_seconds_mean"] = a.build_seconds_mean;
    j["fit_seconds_mean"] = a.fit_seconds_mean;
  }
  return j;
}

}  // namespace

void write_report_json(const std::filesystem::path& path,
                       const ExperimentReport& report, bool include_timings) {
  ordered_json j;
  j["schema"] = kReportSchema;
  ordered_json gen;
  gen["n_entities"] = report.gen.n_entities;
  gen["series_len"] = report.gen.series_len;
  gen["d"] = report.gen.d;
  gen["k"] = report.gen.k;
  gen["lambda"] = report.gen.lambda;
  gen["seed"] = report.gen.seed;
  gen["init"] = report.gen.init == ErrorInit::Stationary ? "stationary" : "zero";
  j["gen"] = gen;
  ordered_json fit;
  fit["k"] = report.fit.k;
  fit["max_iters"] = report.fit.max_iters;
  fit["tol"] = report.fit.tol;
  fit["n_init"] = report.fit.n_init;
  fit["seed"] = report.fit.seed;
  fit["d_ratio"] = report.fit.bounds.d_ratio;
  fit["lambda"] = report.fit.bounds.lambda;
  j["fit"] = fit;
  j["methods"] = report.methods;
  j["v_full"] = report.v_full;
  if (include_timings) j["full_fit_seconds"] = report.full_fit_seconds;
  j["failures"] = report.failures;
  ordered_json reps = ordered_json::array();
  for (const auto& r : report.reps) {
    reps.push_back(rep_to_json(r, include_timings));
  }
  j["reps"] = reps;
  ordered_json aggs = ordered_json::array();
  for (const auto& a : report.aggregates) {
    aggs.push_back(agg_to_json(a, include_timings));
  }
  j["aggregates"] = aggs;
  store_json(path, j);
}

void write_report_csv(const std::filesystem::path& path,
                      const ExperimentReport& report, bool include_timings) {
  std::ofstream out = open_out(path, false);
  out << "# schema: " << kReportSchema << "\n";
  out << "record,method,epsilon,rep,size,v,gamma,gamma_std,build_seconds,"
         "fit_seconds,failed\n";
  const auto secs = [&](double v) {
    return include_timings ? fmt_double(v) : std::string();
  };
  for (const auto& r : report.reps) {
    out << "rep," << r.method << "," << fmt_double(r.epsilon) << "," << r.rep
        << "," << r.size << "," << fmt_double(r.v_coreset) << ","
        << fmt_double(r.gamma) << ",," << secs(r.build_seconds) << ","
        << secs(r.fit_seconds) << "," << (r.failed ? 1 : 0) << "\n";
  }
  for (const auto& a : report.aggregates) {
    out << "aggregate," << a.method << "," << fmt_double(a.epsilon) << ","
        << a.reps_used << "," << fmt_double(a.size_mean) << ","
        << fmt_double(a.v_mean) << "," << fmt_double(a.gamma_mean) << ","
        << fmt_double(a.gamma_std) << "," << secs(a.build_seconds_mean) << ","
        << secs(a.fit_seconds_mean) << ",0\n";
  }
  out << "full,,,," << "," << fmt_double(report.v_full) << ",,,"
      << secs(report.full_fit_seconds) << ",,0\n";
  if (!out) fail("write failed: " + path.string());
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  ordered_json j;
  j["schema"] = kManifestSchema;
  j["command"] = m.command;
  j["seed"] = m.seed;
  j["tool_version"] = m.tool_version;
  try {
    j["config"] = ordered_json::parse(m.config_json);
  } catch (const std::exception&) {
    fail("manifest config must be valid JSON");
  }
  ordered_json arts;
  for (const auto& [k, v] : m.artifact_hashes) arts[k] = v;
  j["artifacts"] = arts;
  store_json(path, j);
}

RunManifest read_manifest(const std::filesystem::path& path) {
  const ordered_json j = load_json(path);
  check_schema(j.value("schema", ""), kManifestSchema);
  RunManifest m;
  m.command = j.value("command", "");
  m.seed = j.value("seed", std::uint64_t{0});
  m.tool_version = j.value("tool_version", "");
  m.config_json = j.at("config").dump();
  for (const auto& [k, v] : j.at("artifacts").items()) {
    m.artifact_hashes[k] = v.get<std::string>();
  }
  return m;
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::uint64_t h = 14695981039346656037ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (!in) break;
  }
  return h;
}

std::string fnv1a_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

}  // namespace tsc::io
