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

// reskew: speech polarity detection and evaluation command-line tool.
//
//   reskew detect <file> [--method reskew|reskew-res|reskew-glot] [--fc 400]
//   reskew eval --manifest <csv> [--method ...] [--fc 400]
//               [--snr <dB> --noise <wav|white>] [--t60 <ms>] [--seed N]
//               [--out report.json] [--csv report.csv]
//   reskew sweep --manifest <csv> --param fc|snr|t60 --values a,b,c ...
//   reskew synth --out-dir <dir> [--grid default]
//   reskew rir --t60 300 --out rir.wav

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reskew/degrade.hpp"
#include "reskew/eval.hpp"
#include "reskew/reskew.hpp"
#include "reskew/synth.hpp"
#include "reskew/wav.hpp"

namespace {

using namespace reskew;

constexpr int kExitPositive = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RESKEW_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "ignoring malformed RESKEW_SEED=" << env << "\n";
    }
  }
  return 0;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  if (names.empty()) return {std::begin(kAllMethods), std::end(kAllMethods)};
  std::vector<Method> out;
  for (const auto& n : names) {
    const auto m = parse_method(n);
    if (!m) throw Error(ErrorCode::kInvalidArgument, "unknown method " + n);
    out.push_back(*m);
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
}

void print_summary(const EvalReport& r, std::ostream& os) {
  os << "corpus=" << r.corpus << " condition=" << r.condition.kind;
  if (r.condition.snr_db) os << " snr_db=" << *r.condition.snr_db;
  if (r.condition.t60_ms) os << " t60_ms=" << *r.condition.t60_ms;
  os << " fc=" << r.config.cutoff_hz << "\n";
  for (const auto& m : r.methods) {
    os << "  " << std::left << std::setw(12) << to_string(m.method) << std::right
       << " error_rate=" << std::fixed << std::setprecision(4) << 100.0 * m.error_rate
       << "% (" << m.n_errors << "/" << m.n_files << ") rct=" << std::setprecision(4)
       << m.rct << "\n";
    os.unsetf(std::ios::floatfield);
  }
}

struct CommonEvalArgs {
  std::string manifest;
  std::vector<std::string> methods;
  double fc = 400.0;
  std::optional<double> snr;
  std::string noise = "white";
  std::optional<double> t60;
  std::uint64_t seed = default_seed();
  std::size_t threads = 0;
  std::string out;
  std::string csv;
};

void add_common(CLI::App* cmd, CommonEvalArgs& a) {
  cmd->add_option("--manifest", a.manifest, "CSV with header path,polarity")->required();
  cmd->add_option("--method", a.methods, "reskew, reskew-res, reskew-glot (default: all)");
  cmd->add_option("--fc", a.fc, "high-pass cutoff in Hz");
  cmd->add_option("--noise", a.noise, "noise WAV path or 'white'");
  cmd->add_option("--seed", a.seed, "random seed (default $RESKEW_SEED or 0)");
  cmd->add_option("--threads", a.threads, "worker threads (0: all cores)");
  cmd->add_option("--out", a.out, "write the JSON report here");
  cmd->add_option("--csv", a.csv, "write a flat per-file CSV here");
}

NoiseSource noise_from(const std::string& arg) {
  NoiseSource n;
  if (arg != "white") n.file = arg;
  return n;
}

BatchOptions options_from(const CommonEvalArgs& a, const CorpusManifest& m) {
  BatchOptions o;
  o.methods = parse_methods(a.methods);
  o.seed = a.seed;
  o.threads = a.threads;
  o.corpus_name = m.corpus_name;
  if (a.snr || a.t60) {
    Degradation d;
    d.snr_db = a.snr;
    d.noise = noise_from(a.noise);
    if (a.t60) d.t60_ms = *a.t60;
    o.degradation = d;
  }
  return o;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw Error(ErrorCode::kInvalidArgument, "bad value " + tok);
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "--values is empty");
  return out;
}

int run_detect(const std::string& file, const std::string& method_name, double fc) {
  const auto method = parse_method(method_name);
  if (!method) throw Error(ErrorCode::kInvalidArgument, "unknown method " + method_name);
  ReskewConfig cfg;
  cfg.cutoff_hz = fc;
  const Signal speech = read_wav(file);
  const PolarityDecision d = detect_polarity(speech, cfg, *method);
  std::cout << to_string(d.polarity) << " statistic=" << std::setprecision(10)
            << d.statistic << " skew_residual=" << d.excitation.skew_residual
            << " skew_glottal=" << d.excitation.skew_glottal
            << " method=" << to_string(d.method) << "\n";
  return d.polarity == Polarity::kPositive ? kExitPositive : kExitNegative;
}

int run_eval(const CommonEvalArgs& a) {
  const CorpusManifest m = load_manifest(a.manifest);
  ReskewConfig cfg;
  cfg.cutoff_hz = a.fc;
  const EvalReport r = run_batch(items_from_manifest(m), cfg, options_from(a, m));
  print_summary(r, std::cout);
  if (!a.out.empty()) write_text(a.out, dump_report(r));
  if (!a.csv.empty()) write_text(a.csv, report_csv(r));
  return 0;
}

int run_sweep(const CommonEvalArgs& a, const std::string& param,
              const std::string& values_arg) {
  const CorpusManifest m = load_manifest(a.manifest);
  const auto items = items_from_manifest(m);
  const auto values = parse_values(values_arg);
  ReskewConfig cfg;
  cfg.cutoff_hz = a.fc;
  const BatchOptions opts = options_from(a, m);
  std::vector<EvalReport> reports;
  if (param == "fc") {
    reports = sweep_fc(items, values, cfg, opts);
  } else if (param == "snr") {
    reports = sweep_snr(items, values, noise_from(a.noise), cfg, opts);
  } else if (param == "t60") {
    reports = sweep_t60(items, values, RoomSpec{}, cfg, opts);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "--param must be fc, snr or t60");
  }
  Json all = Json::array();
  for (const auto& r : reports) {
    print_summary(r, std::cout);
    all.push_back(to_json(r));
  }
  if (!a.out.empty()) write_text(a.out, all.dump(2) + "\n");
  if (!a.csv.empty()) {
    std::string text;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      std::string part = report_csv(reports[i]);
      if (i > 0) part.erase(0, part.find('\n') + 1);  // one header only
      text += part;
    }
    write_text(a.csv, text);
  }
  return 0;
}

int run_synth(const std::string& out_dir, const std::string& grid, int sample_rate,
              double duration_s) {
  if (grid != "default") throw Error(ErrorCode::kInvalidArgument, "unknown grid " + grid);
  std::filesystem::create_directories(out_dir);
  std::vector<ManifestEntry> entries;
  for (const auto& e : standard_grid(duration_s)) {
    const std::string name = e.name + ".wav";
    write_wav(std::filesystem::path(out_dir) / name, synthesize_voice(e.spec, sample_rate));
    entries.push_back({name, e.spec.polarity});
  }
  const auto manifest = std::filesystem::path(out_dir) / "manifest.csv";
  write_manifest(manifest, entries);
  std::cout << "wrote " << entries.size() << " files and " << manifest.string() << "\n";
  return 0;
}

int run_rir(double t60_ms, const std::string& out, int sample_rate) {
  RoomSpec room;
  room.t60_s = t60_ms / 1000.0;
  const Rir rir = image_method_rir(room, sample_rate);
  write_wav(out, Signal(rir.taps, rir.sample_rate), WavEncoding::kFloat32);
  const auto t = decay_time(rir, -60.0);
  std::cout << "wrote " << rir.taps.size() << " taps to " << out;
  if (t) std::cout << " (Schroeder -60 dB at " << *t * 1000.0 << " ms)";
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speech polarity detection from excitation skewness"};
  app.require_subcommand(1);

  auto* detect = app.add_subcommand("detect", "detect the polarity of one WAV file");
  std::string detect_file, detect_method = "reskew";
  double detect_fc = 400.0;
  detect->add_option("file", detect_file, "mono WAV file")->required();
  detect->add_option("--method", detect_method, "reskew, reskew-res or reskew-glot");
  detect->add_option("--fc", detect_fc, "high-pass cutoff in Hz");

  auto* eval = app.add_subcommand("eval", "evaluate a labelled corpus");
  CommonEvalArgs eval_args;
  add_common(eval, eval_args);
  eval->add_option("--snr", eval_args.snr, "additive noise SNR in dB");
  eval->add_option("--t60", eval_args.t60, "simulated reverberation T60 in ms");

  auto* sweep = app.add_subcommand("sweep", "evaluate over a list of Fc, SNR or T60 values");
  CommonEvalArgs sweep_args;
  std::string sweep_param, sweep_values;
  add_common(sweep, sweep_args);
  sweep->add_option("--param", sweep_param, "fc, snr or t60")->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")->required();

  auto* synth = app.add_subcommand("synth", "write the synthetic known-polarity corpus");
  std::string synth_dir, synth_grid = "default";
  int synth_rate = 16000;
  double synth_duration = 1.0;
  synth->add_option("--out-dir", synth_dir, "output directory")->required();
  synth->add_option("--grid", synth_grid, "grid name (default)");
  synth->add_option("--rate", synth_rate, "sample rate in Hz");
  synth->add_option("--duration", synth_duration, "seconds per file");

  auto* rir = app.add_subcommand("rir", "export an image-method room impulse response");
  double rir_t60 = 300.0;
  std::string rir_out;
  int rir_rate = 16000;
  rir->add_option("--t60", rir_t60, "T60 in ms");
  rir->add_option("--out", rir_out, "output WAV (float32)")->required();
  rir->add_option("--rate", rir_rate, "sample rate in Hz");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*detect) return run_detect(detect_file, detect_method, detect_fc);
    if (*eval) return run_eval(eval_args);
    if (*sweep) return run_sweep(sweep_args, sweep_param, sweep_values);
    if (*synth) return run_synth(synth_dir, synth_grid, synth_rate, synth_duration);
    if (*rir) return run_rir(rir_t60, rir_out, rir_rate);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
