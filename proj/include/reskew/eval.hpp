// Copyright 2026 The reskew Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Batch evaluation: ground-truth manifests, per-file detection with optional
// degradation, error-rate and relative-computation-time (RCT) summaries,
// JSON/CSV reports, and parameter sweeps over Fc, SNR and T60.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "reskew/degrade.hpp"
#include "reskew/error.hpp"
#include "reskew/reskew.hpp"
#include "reskew/signal.hpp"
#include "reskew/wav.hpp"

namespace reskew {

using Json = nlohmann::ordered_json;

struct ManifestEntry {
  std::string path;
  Polarity truth;
};

/// Ground-truth list, stored on disk as CSV with header `path,polarity`.
/// Relative paths are resolved against the manifest's directory.
struct CorpusManifest {
  std::string corpus_name;
  std::filesystem::path base_dir;
  std::vector<ManifestEntry> entries;

  std::filesystem::path resolve(const std::string& p) const {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  }
};

namespace detail {

inline std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace detail

inline CorpusManifest parse_manifest(std::istream& in, std::string corpus_name,
                                     std::filesystem::path base_dir) {
  CorpusManifest m{std::move(corpus_name), std::move(base_dir), {}};
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kFormat,
                  "manifest line " + std::to_string(line_no) + ": expected path,polarity");
    }
    const std::string path = detail::trim(line.substr(0, comma));
    std::string label = detail::trim(line.substr(comma + 1));
    std::transform(label.begin(), label.end(), label.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!header_seen) {
      header_seen = true;
      if (path == "path" && label == "polarity") continue;
      throw Error(ErrorCode::kFormat, "manifest must start with header path,polarity");
    }
    const auto pol = parse_polarity(label);
    if (!pol) {
      throw Error(ErrorCode::kFormat, "manifest line " + std::to_string(line_no) +
                                          ": polarity must be positive|negative");
    }
    if (!seen.insert(path).second) {
      throw Error(ErrorCode::kFormat, "duplicate manifest path " + path);
    }
    m.entries.push_back({path, *pol});
  }
  return m;
}

inline CorpusManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest " + path.string());
  return parse_manifest(in, path.stem().string(), path.parent_path());
}

inline void write_manifest(const std::filesystem::path& path,
                           const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "path,polarity\n";
  for (const auto& e : entries) out << e.path << ',' << to_string(e.truth) << '\n';
}

/// One unit of work: an identifier (reported), its label, and a loader.
struct BatchItem {
  std::string path;
  Polarity truth;
  std::function<Signal()> load;
};

inline std::vector<BatchItem> items_from_manifest(const CorpusManifest& m) {
  std::vector<BatchItem> items;
  items.reserve(m.entries.size());
  for (const auto& e : m.entries) {
    items.push_back({e.path, e.truth,
                     [file = m.resolve(e.path)] { return read_wav(file); }});
  }
  return items;
}

struct NoiseSource {
  // Empty path: seeded white Gaussian noise, drawn per file.
  std::filesystem::path file;

  bool is_white() const { return file.empty(); }
  std::string describe() const { return is_white() ? "white" : file.string(); }
};

struct Degradation {
  std::optional<double> snr_db;
  NoiseSource noise;
  std::optional<double> t60_ms;
  RoomSpec room;
};

struct Condition {
  std::string kind = "clean";  // clean | snr | t60 | t60+snr
  std::optional<double> snr_db;
  std::optional<std::string> noise;
  std::optional<double> t60_ms;

  static Condition from(const std::optional<Degradation>& d) {
    Condition c;
    if (!d) return c;
    if (d->snr_db) {
      c.snr_db = d->snr_db;
      c.noise = d->noise.describe();
    }
    c.t60_ms = d->t60_ms;
    if (c.t60_ms && c.snr_db) c.kind = "t60+snr";
    else if (c.t60_ms) c.kind = "t60";
    else if (c.snr_db) c.kind = "snr";
    return c;
  }

  bool operator==(const Condition&) const = default;
};

struct FileResult {
  std::string path;
  Polarity truth = Polarity::kPositive;
  std::optional<Polarity> verdict;  // empty when the file failed
  std::optional<double> statistic;
  double elapsed_s = 0.0;
  std::optional<std::string> error;

  bool correct() const { return verdict && *verdict == truth; }
  bool operator==(const FileResult&) const = default;
};

struct MethodReport {
  Method method = Method::kReskew;
  double error_rate = 0.0;
  std::size_t n_files = 0;
  std::size_t n_errors = 0;
  double rct = 0.0;
  std::vector<FileResult> per_file;

  bool operator==(const MethodReport&) const = default;
};

struct EvalReport {
  std::string corpus;
  Condition condition;
  ReskewConfig config;
  std::uint64_t seed = 0;
  std::vector<MethodReport> methods;

  const MethodReport& method(Method m) const {
    for (const auto& r : methods) {
      if (r.method == m) return r;
    }
    throw Error(ErrorCode::kInvalidArgument,
                std::string("report has no ") + std::string(to_string(m)) + " results");
  }
};

// ---- JSON ------------------------------------------------------------------

inline Json config_to_json(const ReskewConfig& c) {
  Json j;
  j["frame_shift_ms"] = c.frame_shift_ms;
  j["frame_length_ms"] = c.frame_length_ms;
  j["lp_order"] = c.lp_order ? Json(*c.lp_order) : Json(nullptr);
  j["cutoff_hz"] = c.cutoff_hz;
  j["filter_order"] = c.filter_order;
  j["passband_ripple_db"] = c.passband_ripple_db;
  j["stopband_atten_db"] = c.stopband_atten_db;
  return j;
}

inline ReskewConfig config_from_json(const Json& j) {
  ReskewConfig c;
  c.frame_shift_ms = j.at("frame_shift_ms").get<double>();
  c.frame_length_ms = j.at("frame_length_ms").get<double>();
  if (!j.at("lp_order").is_null()) c.lp_order = j.at("lp_order").get<int>();
  c.cutoff_hz = j.at("cutoff_hz").get<double>();
  c.filter_order = j.at("filter_order").get<int>();
  c.passband_ripple_db = j.at("passband_ripple_db").get<double>();
  c.stopband_atten_db = j.at("stopband_atten_db").get<double>();
  return c;
}

inline Json to_json(const EvalReport& r) {
  Json j;
  j["corpus"] = r.corpus;
  Json cond;
  cond["kind"] = r.condition.kind;
  if (r.condition.snr_db) cond["snr_db"] = *r.condition.snr_db;
  if (r.condition.noise) cond["noise"] = *r.condition.noise;
  if (r.condition.t60_ms) cond["t60_ms"] = *r.condition.t60_ms;
  j["condition"] = std::move(cond);
  j["config"] = config_to_json(r.config);
  j["seed"] = r.seed;
  Json methods = Json::object();
  for (const auto& m : r.methods) {
    Json mj;
    mj["error_rate"] = m.error_rate;
    mj["n_files"] = m.n_files;
    mj["n_errors"] = m.n_errors;
    mj["rct"] = m.rct;
    Json files = Json::array();
    for (const auto& f : m.per_file) {
      Json fj;
      fj["path"] = f.path;
      fj["truth"] = to_string(f.truth);
      fj["verdict"] = f.verdict ? Json(to_string(*f.verdict)) : Json(nullptr);
      fj["statistic"] = f.statistic ? Json(*f.statistic) : Json(nullptr);
      fj["elapsed_s"] = f.elapsed_s;
      fj["error"] = f.error ? Json(*f.error) : Json(nullptr);
      files.push_back(std::move(fj));
    }
    mj["per_file"] = std::move(files);
    methods[std::string(to_string(m.method))] = std::move(mj);
  }
  j["methods"] = std::move(methods);
  return j;
}

inline EvalReport report_from_json(const Json& j) {
  auto polarity_of = [](const Json& v) {
    const auto p = parse_polarity(v.get<std::string>());
    if (!p) throw Error(ErrorCode::kFormat, "bad polarity in report");
    return *p;
  };
  EvalReport r;
  r.corpus = j.at("corpus").get<std::string>();
  const Json& cond = j.at("condition");
  r.condition.kind = cond.at("kind").get<std::string>();
  if (cond.contains("snr_db")) r.condition.snr_db = cond["snr_db"].get<double>();
  if (cond.contains("noise")) r.condition.noise = cond["noise"].get<std::string>();
  if (cond.contains("t60_ms")) r.condition.t60_ms = cond["t60_ms"].get<double>();
  r.config = config_from_json(j.at("config"));
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& [name, mj] : j.at("methods").items()) {
    MethodReport m;
    const auto method = parse_method(name);
    if (!method) throw Error(ErrorCode::kFormat, "unknown method " + name);
    m.method = *method;
    m.error_rate = mj.at("error_rate").get<double>();
    m.n_files = mj.at("n_files").get<std::size_t>();
    m.n_errors = mj.at("n_errors").get<std::size_t>();
    m.rct = mj.at("rct").get<double>();
    for (const auto& fj : mj.at("per_file")) {
      FileResult f;
      f.path = fj.at("path").get<std::string>();
      f.truth = polarity_of(fj.at("truth"));
      if (!fj.at("verdict").is_null()) f.verdict = polarity_of(fj["verdict"]);
      if (!fj.at("statistic").is_null()) f.statistic = fj["statistic"].get<double>();
      f.elapsed_s = fj.at("elapsed_s").get<double>();
      if (!fj.at("error").is_null()) f.error = fj["error"].get<std::string>();
      m.per_file.push_back(std::move(f));
    }
    r.methods.push_back(std::move(m));
  }
  return r;
}

inline std::string dump_report(const EvalReport& r) { return to_json(r).dump(2) + "\n"; }

inline EvalReport parse_report(const std::string& text) {
  return report_from_json(Json::parse(text));
}

/// Flat per-file table: path,method,truth,verdict,statistic,elapsed_s.
inline std::string report_csv(const EvalReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "path,method,truth,verdict,statistic,elapsed_s\n";
  for (const auto& m : r.methods) {
    for (const auto& f : m.per_file) {
      out << f.path << ',' << to_string(m.method) << ',' << to_string(f.truth) << ','
          << (f.verdict ? std::string(to_string(*f.verdict)) : "error") << ',';
      if (f.statistic) out << *f.statistic;
      out << ',' << f.elapsed_s << '\n';
    }
  }
  return out.str();
}

// ---- batch runner ----------------------------------------------------------

struct BatchOptions {
  std::vector<Method> methods{Method::kReskew, Method::kReskewRes, Method::kReskewGlot};
  std::optional<Degradation> degradation;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0: hardware concurrency
  std::string corpus_name = "corpus";
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Per-file noise seed, independent of processing order.
inline std::uint64_t file_seed(std::uint64_t seed, const std::string& path) {
  return splitmix64(seed ^ fnv1a(path));
}

// Degradation state shared by all files of one condition. RIRs are built
// lazily per sample rate; a noise file is read once.
class Degrader {
 public:
  Degrader(const Degradation& d, std::uint64_t seed) : spec_(d), seed_(seed) {}

  Signal apply(const Signal& clean, const std::string& path) {
    Signal out = clean;
    if (spec_.t60_ms) out = reverberate(out, rir_for(clean.sample_rate()));
    if (spec_.snr_db) {
      const Signal noise = spec_.noise.is_white()
                               ? white_noise(out.size(), out.sample_rate(),
                                             file_seed(seed_, path))
                               : noise_file();
      out = mix_noise(out, noise, *spec_.snr_db);
    }
    return out;
  }

 private:
  const Rir& rir_for(int sample_rate) {
    std::lock_guard lock(mu_);
    auto it = rirs_.find(sample_rate);
    if (it == rirs_.end()) {
      RoomSpec room = spec_.room;
      room.t60_s = *spec_.t60_ms / 1000.0;
      it = rirs_.emplace(sample_rate, image_method_rir(room, sample_rate)).first;
    }
    return it->second;
  }

  const Signal& noise_file() {
    std::lock_guard lock(mu_);
    if (!noise_) noise_ = read_wav(spec_.noise.file);
    return *noise_;
  }

  Degradation spec_;
  std::uint64_t seed_;
  std::mutex mu_;
  std::map<int, Rir> rirs_;
  std::optional<Signal> noise_;
};

struct FileOutcome {
  std::optional<double> skew_residual;
  std::optional<double> skew_glottal;
  double elapsed_s = 0.0;
  double duration_s = 0.0;
  std::optional<std::string> error;
};

}  // namespace detail

/// Runs every requested method on every item. Per-file failures (unreadable
/// audio, zero variance, exact ties) are recorded and counted as detection
/// errors. Only the analysis is timed, not loading or degradation. All
/// methods share one analysis pass per file, so they report the same RCT.
inline EvalReport run_batch(const std::vector<BatchItem>& items,
                            const ReskewConfig& config, const BatchOptions& options) {
  if (items.empty()) throw Error(ErrorCode::kEmptyManifest, "nothing to evaluate");
  if (options.methods.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no detection method requested");
  }

  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return items[a].path < items[b].path; });

  std::optional<detail::Degrader> degrader;
  if (options.degradation) degrader.emplace(*options.degradation, options.seed);

  std::vector<detail::FileOutcome> outcomes(items.size());
  auto process = [&](std::size_t slot) {
    const BatchItem& item = items[order[slot]];
    detail::FileOutcome& out = outcomes[slot];
    try {
      Signal speech = item.load();
      out.duration_s = speech.duration_s();
      if (degrader) speech = degrader->apply(speech, item.path);
      const auto start = std::chrono::steady_clock::now();
      try {
        const ExcitationPair ex = analyze_excitation(speech, config);
        out.skew_residual = ex.skew_residual;
        out.skew_glottal = ex.skew_glottal;
      } catch (...) {
        out.elapsed_s = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start).count();
        throw;
      }
      out.elapsed_s = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start).count();
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  };

  std::size_t threads = options.threads ? options.threads
                                        : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, items.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < items.size(); ++i) process(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < items.size(); i = next++) process(i);
      });
    }
  }

  EvalReport report;
  report.corpus = options.corpus_name;
  report.condition = Condition::from(options.degradation);
  report.config = config;
  report.seed = options.seed;
  double total_time = 0.0, total_audio = 0.0;
  for (const auto& o : outcomes) {
    total_time += o.elapsed_s;
    total_audio += o.duration_s;
  }
  for (Method m : options.methods) {
    MethodReport mr;
    mr.method = m;
    mr.n_files = items.size();
    for (std::size_t slot = 0; slot < items.size(); ++slot) {
      const BatchItem& item = items[order[slot]];
      const auto& o = outcomes[slot];
      FileResult f;
      f.path = item.path;
      f.truth = item.truth;
      f.elapsed_s = o.elapsed_s;
      if (o.error) {
        f.error = o.error;
      } else {
        const double stat = decision_statistic(m, *o.skew_residual, *o.skew_glottal);
        if (stat == 0.0) {
          f.error = "ExactTie: statistic is exactly zero";
        } else {
          f.statistic = stat;
          f.verdict = stat > 0.0 ? Polarity::kPositive : Polarity::kNegative;
        }
      }
      if (!f.correct()) ++mr.n_errors;
      mr.per_file.push_back(std::move(f));
    }
    mr.error_rate = static_cast<double>(mr.n_errors) / static_cast<double>(mr.n_files);
    mr.rct = total_audio > 0.0 ? total_time / total_audio : 0.0;
    report.methods.push_back(std::move(mr));
  }
  return report;
}

/// Total analysis time over total audio duration, for the Reskew method.
inline double measure_rct(const std::vector<BatchItem>& items, const ReskewConfig& config) {
  BatchOptions opts;
  opts.methods = {Method::kReskew};
  opts.threads = 1;
  return run_batch(items, config, opts).method(Method::kReskew).rct;
}

// ---- sweeps ----------------------------------------------------------------

inline std::vector<EvalReport> sweep_fc(const std::vector<BatchItem>& items,
                                        const std::vector<double>& fc_values,
                                        const ReskewConfig& base,
                                        const BatchOptions& options) {
  std::vector<EvalReport> out;
  for (double fc : fc_values) {
    ReskewConfig cfg = base;
    cfg.cutoff_hz = fc;
    out.push_back(run_batch(items, cfg, options));
  }
  return out;
}

inline std::vector<EvalReport> sweep_snr(const std::vector<BatchItem>& items,
                                         const std::vector<double>& snr_values_db,
                                         const NoiseSource& noise,
                                         const ReskewConfig& config,
                                         const BatchOptions& options) {
  std::vector<EvalReport> out;
  for (double snr : snr_values_db) {
    BatchOptions opts = options;
    Degradation d = opts.degradation.value_or(Degradation{});
    d.snr_db = snr;
    d.noise = noise;
    opts.degradation = d;
    out.push_back(run_batch(items, config, opts));
  }
  return out;
}

inline std::vector<EvalReport> sweep_t60(const std::vector<BatchItem>& items,
                                         const std::vector<double>& t60_values_ms,
                                         const RoomSpec& room,
                                         const ReskewConfig& config,
                                         const BatchOptions& options) {
  std::vector<EvalReport> out;
  for (double t60 : t60_values_ms) {
    BatchOptions opts = options;
    Degradation d = opts.degradation.value_or(Degradation{});
    d.t60_ms = t60;
    d.room = room;
    opts.degradation = d;
    out.push_back(run_batch(items, config, opts));
  }
  return out;
}

}  // namespace reskew
