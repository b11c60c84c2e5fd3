// Copyright 2026 The INP-X Authors. All Rights Reserved.
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

// inpx command-line front end.
//
// Exit codes: 0 success, 1 some rows failed or a check did not pass,
// 2 configuration error (bad flags, unreadable or malformed manifest).

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "inpx/inpx.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;

struct Globals {
  std::uint64_t seed = 7;
  int jobs = inpx::default_jobs();
  std::string out = "-";

  inpx::RunConfig config(const std::string& sub, json params) const {
    inpx::RunConfig c;
    c.subcommand = sub;
    c.parameters = std::move(params);
    c.seed = seed;
    c.output = out;
    c.jobs = jobs;
    return c;
  }
};

void emit(const Globals& g, const std::string& kind, const std::string& sub, json params,
          json result) {
  inpx::emit_text(inpx::dump_report(inpx::make_report(kind, g.config(sub, std::move(params)),
                                                      std::move(result))),
                  g.out);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_number(const std::string& s, const std::string& what) {
  const auto v = inpx::parse_double(s);
  if (!v) throw inpx::ParameterError(what + ": '" + s + "' is not a number");
  return *v;
}

std::string lower_ext(const fs::path& p) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e;
}

bool is_jpeg_path(const fs::path& p) {
  const auto e = lower_ext(p);
  return e == ".jpg" || e == ".jpeg";
}

json row_error(const std::string& id, const std::string& message) {
  return {{"item_id", id}, {"status", "error"}, {"error", message}};
}

// Moments plus extrema of the mask ratios of successful rows.
json ratio_summary(const std::vector<double>& ratios) {
  if (ratios.empty()) return {{"n", 0}, {"mean", nullptr}, {"std", nullptr},
                              {"min", nullptr}, {"max", nullptr}};
  inpx::Moments m;
  for (double r : ratios) m.add(r);
  return {{"n", ratios.size()},
          {"mean", *m.mean()},
          {"std", *m.stddev()},
          {"min", *std::min_element(ratios.begin(), ratios.end())},
          {"max", *std::max_element(ratios.begin(), ratios.end())}};
}

json batch_summary(const std::vector<json>& items, const std::vector<double>& ratios) {
  std::int64_t ok = 0;
  for (const auto& it : items) ok += it["status"] == "ok";
  return {{"items", items},
          {"n_ok", ok},
          {"n_failed", static_cast<std::int64_t>(items.size()) - ok},
          {"mask_ratio", ratio_summary(ratios)}};
}

// ---------------------------------------------------------------- exchange

struct ExchangeArgs {
  std::string manifest;
  std::string mode = "hard";
  int band_width = 2;
  int kernel = 5;
  std::string out_dir;
};

int cmd_exchange(const Globals& g, const ExchangeArgs& a) {
  const auto rows = inpx::load_path_manifest(a.manifest, inpx::triplet_columns());
  fs::create_directories(a.out_dir);
  std::vector<json> items(rows.size());
  std::vector<std::optional<double>> ratios(rows.size());
  inpx::parallel_for(rows.size(), g.jobs, [&](std::size_t i) {
    const auto& r = rows[i];
    try {
      if (!inpx::safe_file_stem(r.item_id)) {
        throw inpx::ParameterError("item_id is not usable as a file name");
      }
      const auto orig = inpx::load_image(*r.path("original_path"));
      const auto gen = inpx::load_image(*r.path("generated_path"));
      const auto mask = inpx::load_mask(*r.path("mask_path"));
      const auto out = a.mode == "soft"
                           ? inpx::soft_exchange(orig, gen, mask, a.band_width, a.kernel)
                           : inpx::exchange(orig, gen, mask);
      const fs::path dest = fs::path(a.out_dir) / (r.item_id + ".png");
      inpx::save_image(out, dest);
      ratios[i] = inpx::mask_ratio(mask);
      items[i] = {{"item_id", r.item_id}, {"status", "ok"}, {"output", dest.string()},
                  {"mask_ratio", *ratios[i]}};
    } catch (const std::exception& e) {
      items[i] = row_error(r.item_id, e.what());
    }
  });
  std::vector<double> ok_ratios;
  for (const auto& r : ratios)
    if (r) ok_ratios.push_back(*r);
  const json summary = batch_summary(items, ok_ratios);
  emit(g, "exchange-batch", "exchange",
       {{"manifest", a.manifest}, {"mode", a.mode}, {"band_width", a.band_width},
        {"kernel", a.kernel}, {"out_dir", a.out_dir}},
       summary);
  for (const auto& it : items) {
    if (it["status"] != "ok") {
      std::cerr << "inpx: " << it["item_id"].get<std::string>() << ": "
                << it["error"].get<std::string>() << "\n";
    }
  }
  return summary["n_failed"].get<std::int64_t>() > 0 ? kExitPartial : kExitOk;
}

// ---------------------------------------------------------------- corrupt

struct CorruptArgs {
  std::string op;
  std::string input;
  std::string output;
  double sigma = 1.0;
  double radius = 120.0;
  double gain = 1.5;
  int quality = 80;
};

int cmd_corrupt(const Globals& g, const CorruptArgs& a) {
  const auto img = inpx::load_image(a.input);
  json params = {{"op", a.op}, {"input", a.input}, {"output", a.output}};
  json result = {{"op", a.op}, {"output", a.output}};
  if (a.op == "jpeg") {
    const auto bytes = inpx::encode_jpeg(img, a.quality);
    params["quality"] = a.quality;
    if (is_jpeg_path(a.output)) {
      inpx::write_file_atomic(a.output, bytes);
    } else {
      inpx::save_image(inpx::decode_jpeg(bytes), a.output);
    }
  } else {
    inpx::RasterImage out;
    if (a.op == "blur") {
      params["sigma"] = a.sigma;
      out = inpx::gaussian_blur(img, a.sigma);
    } else {
      params["radius"] = a.radius;
      params["gain"] = a.gain;
      auto [spot, p] = inpx::light_spot_random(img, a.radius, a.gain, inpx::RngSeed{g.seed});
      out = std::move(spot);
      result["center"] = {p.center_x, p.center_y};
    }
    if (is_jpeg_path(a.output)) {
      params["quality"] = a.quality;
      inpx::save_image(out, a.output, inpx::ImageFormat::kJpeg, a.quality);
    } else {
      inpx::save_image(out, a.output);
    }
  }
  emit(g, "corrupt", "corrupt", params, result);
  return kExitOk;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
  std::string input_manifest;
  int resize = inpx::FingerprintAccumulator::kDefaultSize;
  std::string heatmap;
  std::string a, b;
};

inpx::SpectralFingerprint load_fingerprint(const fs::path& path) {
  const auto bytes = inpx::read_file(path);
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw inpx::FormatError(path.string() + ": " + e.what());
  }
  if (j.contains("result")) {
    inpx::validate_report(j, path.string());
    if (j["kind"] != "fingerprint") {
      throw inpx::FormatError(path.string() + ": report is not a fingerprint");
    }
    return inpx::SpectralFingerprint::from_json(j["result"]["fingerprint"]);
  }
  return inpx::SpectralFingerprint::from_json(j);
}

int cmd_spectrum(const Globals& g, const SpectrumArgs& a) {
  if (a.input_manifest.empty()) {
    throw inpx::ParameterError("spectrum: --input-manifest is required");
  }
  if (a.resize != 0 && a.resize < 2) {
    throw inpx::ParameterError("spectrum: --resize must be 0 (native) or >= 2");
  }
  const auto table = inpx::read_csv(a.input_manifest);
  const auto col = table.column("path") ? table.column("path") : table.column("image_path");
  if (!col) throw inpx::FormatError(a.input_manifest + ": missing column path");
  std::vector<fs::path> paths;
  for (const auto& row : table.rows) {
    if (*col >= row.fields.size() || row.fields[*col].empty()) {
      throw inpx::FormatError(a.input_manifest + ": line " + std::to_string(row.line) +
                              ": empty path");
    }
    paths.push_back(inpx::resolve_manifest_path(a.input_manifest, row.fields[*col]));
  }
  const std::optional<int> target =
      a.resize == 0 ? std::nullopt : std::optional<int>(a.resize);

  // Residuals are computed in parallel, then summed in manifest order.
  inpx::FingerprintAccumulator acc(target);
  json failed = json::array();
  constexpr std::size_t kBatch = 64;
  for (std::size_t start = 0; start < paths.size(); start += kBatch) {
    const std::size_t count = std::min(kBatch, paths.size() - start);
    std::vector<std::optional<inpx::Plane>> residuals(count);
    std::vector<std::string> errors(count);
    inpx::parallel_for(count, g.jobs, [&](std::size_t k) {
      try {
        inpx::Plane luma = inpx::to_luma(inpx::load_image(paths[start + k]));
        if (target) luma = inpx::resize_bilinear(luma, *target, *target);
        residuals[k] = inpx::cross_difference(luma);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    });
    for (std::size_t k = 0; k < count; ++k) {
      if (residuals[k]) {
        try {
          acc.add_residual(*residuals[k]);
          continue;
        } catch (const std::exception& e) {
          errors[k] = e.what();
        }
      }
      failed.push_back({{"path", paths[start + k].string()}, {"error", errors[k]}});
      std::cerr << "inpx: " << paths[start + k].string() << ": " << errors[k] << "\n";
    }
  }
  if (acc.count() == 0) throw inpx::ParameterError("spectrum: no image could be analysed");
  const auto fp = acc.result();
  if (!a.heatmap.empty()) inpx::save_image(inpx::fingerprint_heatmap(fp), a.heatmap);
  emit(g, "fingerprint", "spectrum",
       {{"input_manifest", a.input_manifest}, {"resize", a.resize}, {"heatmap", a.heatmap}},
       {{"fingerprint", fp.to_json()}, {"failed", failed}});
  return failed.empty() ? kExitOk : kExitPartial;
}

int cmd_spectrum_diff(const Globals& g, const SpectrumArgs& a) {
  const auto fa = load_fingerprint(a.a);
  const auto fb = load_fingerprint(a.b);
  emit(g, "spectral-diff", "spectrum diff", {{"a", a.a}, {"b", a.b}},
       {{"mse_x1000", inpx::spectral_mse(fa, fb)}});
  return kExitOk;
}

// ---------------------------------------------------------------- correlate

struct CorrelateArgs {
  std::string manifest;
  std::string level = "image";
  std::string region = "full";
};

int cmd_correlate(const Globals& g, const CorrelateArgs& a) {
  const auto rows = inpx::load_path_manifest(a.manifest, inpx::signal_columns());
  const bool background = a.region == "background";
  std::vector<std::optional<inpx::SignalMaps>> maps(rows.size());
  std::vector<std::string> errors(rows.size());
  inpx::parallel_for(rows.size(), g.jobs, [&](std::size_t i) {
    const auto& r = rows[i];
    try {
      std::optional<inpx::BinaryMask> mask;
      if (const auto* p = r.path("mask_path")) mask = inpx::load_mask(*p);
      if (background && !mask) throw inpx::ParameterError("background region needs mask_path");
      maps[i] = inpx::make_signal_maps(inpx::load_image(*r.path("original_path")),
                                       inpx::load_image(*r.path("inpainted_path")),
                                       inpx::load_image(*r.path("reconstructed_path")),
                                       mask);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  std::vector<inpx::SignalMaps> ok;
  json failed = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (maps[i]) {
      ok.push_back(std::move(*maps[i]));
    } else {
      failed.push_back(row_error(rows[i].item_id, errors[i]));
      std::cerr << "inpx: " << rows[i].item_id << ": " << errors[i] << "\n";
    }
  }
  const inpx::Region region = background ? inpx::Region::kBackground : inpx::Region::kFull;
  inpx::CorrelationReport report;
  if (a.level == "pixel") {
    report = inpx::pixel_level_correlations(ok, region);
  } else {
    std::vector<inpx::SignalSample> samples;
    for (const auto& m : ok) {
      if (!background) {
        samples.push_back(m.means());
        continue;
      }
      inpx::SignalSample s;
      std::int64_t n = 0;
      for (int y = 0; y < m.vae_loss.height(); ++y) {
        for (int x = 0; x < m.vae_loss.width(); ++x) {
          if (m.edit_mask->at(x, y)) continue;
          s.vae_loss += m.vae_loss.at(x, y);
          s.inpaint_diff += m.inpaint_diff.at(x, y);
          s.high_freq += m.high_freq.at(x, y);
          ++n;
        }
      }
      if (n == 0) continue;
      s.vae_loss /= n;
      s.inpaint_diff /= n;
      s.high_freq /= n;
      samples.push_back(s);
    }
    report = inpx::image_level_correlations(samples);
    report.region = region;
  }
  json result = inpx::to_json(report);
  result["failed"] = failed;
  emit(g, "correlation", "correlate",
       {{"manifest", a.manifest}, {"level", a.level}, {"region", a.region}}, result);
  return failed.empty() ? kExitOk : kExitPartial;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string manifest;
  double threshold = 0.5;
  int grid = 224;
  std::string edges = "0,0.05,0.1,0.2,0.5,1";
};

int cmd_eval_cls(const Globals& g, const EvalArgs& a) {
  const auto entries = inpx::load_manifest(a.manifest);
  const auto records = inpx::records_of(entries);
  const auto report = inpx::classification_metrics(records, a.threshold);
  emit(g, "classification", "eval-cls", {{"manifest", a.manifest}, {"threshold", a.threshold}},
       inpx::to_json(report));
  return kExitOk;
}

int cmd_eval_loc(const Globals& g, const EvalArgs& a) {
  if (a.grid != 0 && a.grid < 1) throw inpx::ParameterError("--grid must be 0 or positive");
  const auto entries = inpx::load_manifest(a.manifest);
  std::vector<std::optional<inpx::LocalizationItem>> loaded(entries.size());
  std::vector<std::string> errors(entries.size());
  inpx::parallel_for(entries.size(), g.jobs, [&](std::size_t i) {
    const auto& e = entries[i];
    try {
      if (!e.mask_path || !e.saliency_path) {
        throw inpx::ParameterError("row needs mask_path and saliency_path");
      }
      loaded[i] = inpx::LocalizationItem{e.record.item_id, inpx::load_saliency(*e.saliency_path),
                                         inpx::load_mask(*e.mask_path)};
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  });
  std::vector<inpx::LocalizationItem> items;
  json failed = json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (loaded[i]) {
      items.push_back(std::move(*loaded[i]));
    } else {
      failed.push_back(row_error(entries[i].record.item_id, errors[i]));
      std::cerr << "inpx: " << entries[i].record.item_id << ": " << errors[i] << "\n";
    }
  }
  inpx::LocalizationOptions opt;
  opt.threshold = a.threshold;
  if (a.grid == 0) opt.grid_size.reset();
  else opt.grid_size = a.grid;
  json result = inpx::to_json(inpx::localization_metrics(items, opt));
  result["failed"] = failed;
  emit(g, "localization", "eval-loc",
       {{"manifest", a.manifest}, {"threshold", a.threshold}, {"grid", a.grid}}, result);
  return failed.empty() ? kExitOk : kExitPartial;
}

int cmd_eval_strata(const Globals& g, const EvalArgs& a) {
  std::vector<double> edges;
  for (const auto& s : split(a.edges, ',')) edges.push_back(to_number(s, "--edges"));
  const auto entries = inpx::load_manifest(a.manifest);
  std::vector<std::optional<inpx::StratifiedRecord>> recs(entries.size());
  std::vector<std::string> errors(entries.size());
  inpx::parallel_for(entries.size(), g.jobs, [&](std::size_t i) {
    const auto& e = entries[i];
    try {
      double ratio;
      if (e.mask_ratio) {
        ratio = *e.mask_ratio;
      } else if (e.mask_path) {
        ratio = inpx::mask_ratio(inpx::load_mask(*e.mask_path));
      } else {
        throw inpx::ParameterError("row needs mask_ratio or mask_path");
      }
      recs[i] = inpx::StratifiedRecord{e.record, ratio};
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  });
  std::vector<inpx::StratifiedRecord> ok;
  bool any_failed = false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (recs[i]) {
      ok.push_back(*recs[i]);
    } else {
      any_failed = true;
      std::cerr << "inpx: " << entries[i].record.item_id << ": " << errors[i] << "\n";
    }
  }
  const auto strata = inpx::stratify_by_mask_ratio(ok, edges, a.threshold);
  json result = json::array();
  for (const auto& s : strata) result.push_back(inpx::to_json(s));
  emit(g, "strata", "eval-strata",
       {{"manifest", a.manifest}, {"edges", edges}, {"threshold", a.threshold}}, result);
  return any_failed ? kExitPartial : kExitOk;
}

// ---------------------------------------------------------------- theory

struct TheoryArgs {
  std::string check;
  int r = 8;
  std::string mode = "box";
  double sigma_n = 0.05;
  double mask_ratio = 0.1;
  int n = 0;  // 0: per-check default
  int size = 128;
  std::string base = "smooth";
};

int default_n(const std::string& check) {
  if (check == "contraction") return 32;
  if (check == "wavelet") return 16;
  if (check == "gap") return 100;
  return 300;
}

int cmd_validate_theory(const Globals& g, const TheoryArgs& a) {
  inpx::NoisyImageModel model;
  model.size = a.size;
  model.sigma_n = a.sigma_n;
  model.seed = inpx::RngSeed{g.seed};
  model.base = a.base == "flat" ? inpx::SemanticBase::kFlat : inpx::SemanticBase::kSmooth;
  const inpx::BottleneckSim sim{a.r, inpx::parse_mode(a.mode)};
  const int n = a.n > 0 ? a.n : default_n(a.check);

  inpx::TheoremReport rep;
  if (a.check == "contraction") {
    inpx::ContractionOptions opt;
    opt.jobs = g.jobs;
    rep = inpx::check_variance_contraction(model, sim, n, opt);
  } else if (a.check == "wavelet") {
    inpx::WaveletOptions opt;
    opt.jobs = g.jobs;
    rep = inpx::check_wavelet_decay(model, sim, n, opt);
  } else if (a.check == "gap") {
    inpx::GapOptions opt;
    opt.jobs = g.jobs;
    rep = inpx::detectability_gap_demo(model, sim, a.mask_ratio, n, opt);
  } else {
    inpx::TrendOptions opt;
    opt.jobs = g.jobs;
    rep = inpx::mask_ratio_trend(model, sim, n, opt);
  }
  emit(g, "theorem", "validate-theory",
       {{"check", a.check}, {"r", a.r}, {"mode", a.mode}, {"sigma_n", a.sigma_n},
        {"mask_ratio", a.mask_ratio}, {"n", n}, {"size", a.size}, {"base", a.base}},
       rep.to_json());
  return rep.passed() ? kExitOk : kExitPartial;
}

// ---------------------------------------------------------------- pipeline

struct Step {
  enum Kind { kExchange, kSoftExchange, kBlur, kLight, kJpeg } kind;
  double a = 0.0, b = 0.0;
  std::string text;
};

std::vector<Step> parse_steps(const std::string& spec) {
  std::vector<Step> steps;
  if (spec.empty()) return steps;
  for (const auto& tok : split(spec, ',')) {
    const auto parts = split(tok, ':');
    const std::string& name = parts.empty() ? tok : parts[0];
    auto arg = [&](std::size_t i, double fallback) {
      return parts.size() > i ? to_number(parts[i], "step '" + tok + "'") : fallback;
    };
    auto arity = [&](std::size_t max_args) {
      if (parts.size() > max_args + 1) {
        throw inpx::ParameterError("step '" + tok + "' has too many arguments");
      }
    };
    Step s{Step::kExchange, 0.0, 0.0, tok};
    if (name == "exchange") {
      arity(0);
    } else if (name == "soft-exchange") {
      arity(2);
      s = {Step::kSoftExchange, arg(1, 2), arg(2, 5), tok};
    } else if (name == "blur") {
      arity(1);
      s = {Step::kBlur, arg(1, 1.0), 0.0, tok};
    } else if (name == "light") {
      arity(2);
      s = {Step::kLight, arg(1, 120.0), arg(2, 1.5), tok};
    } else if (name == "jpeg") {
      arity(1);
      s = {Step::kJpeg, arg(1, 80), 0.0, tok};
    } else {
      throw inpx::ParameterError("unknown pipeline step '" + tok + "'");
    }
    steps.push_back(s);
  }
  return steps;
}

struct PipelineArgs {
  std::string manifest;
  std::string steps;
  std::string out_dir;
};

int cmd_pipeline(const Globals& g, const PipelineArgs& a) {
  const auto steps = parse_steps(a.steps);
  const auto rows = inpx::load_path_manifest(a.manifest, inpx::triplet_columns());
  fs::create_directories(a.out_dir);
  std::vector<json> items(rows.size());
  std::vector<std::optional<double>> ratios(rows.size());
  inpx::parallel_for(rows.size(), g.jobs, [&](std::size_t i) {
    const auto& r = rows[i];
    try {
      if (!inpx::safe_file_stem(r.item_id)) {
        throw inpx::ParameterError("item_id is not usable as a file name");
      }
      const fs::path& gen_path = *r.path("generated_path");
      json applied = json::array();
      if (steps.empty()) {
        const fs::path dest = fs::path(a.out_dir) / (r.item_id + lower_ext(gen_path));
        inpx::write_file_atomic(dest, inpx::read_file(gen_path));
        items[i] = {{"item_id", r.item_id}, {"status", "ok"}, {"output", dest.string()},
                    {"steps", applied}};
        return;
      }
      auto img = inpx::load_image(gen_path);
      std::optional<inpx::RasterImage> orig;
      std::optional<inpx::BinaryMask> mask;
      auto need_pair = [&] {
        if (!orig) orig = inpx::load_image(*r.path("original_path"));
        if (!mask) mask = inpx::load_mask(*r.path("mask_path"));
      };
      std::optional<std::vector<std::uint8_t>> jpeg_bytes;
      for (std::size_t s = 0; s < steps.size(); ++s) {
        const Step& st = steps[s];
        json info = {{"step", st.text}};
        jpeg_bytes.reset();
        switch (st.kind) {
          case Step::kExchange:
            need_pair();
            img = inpx::exchange(*orig, img, *mask);
            break;
          case Step::kSoftExchange:
            need_pair();
            img = inpx::soft_exchange(*orig, img, *mask, static_cast<int>(st.a),
                                      static_cast<int>(st.b));
            break;
          case Step::kBlur:
            img = inpx::gaussian_blur(img, st.a);
            break;
          case Step::kLight: {
            const auto seed = inpx::derive_seed(inpx::RngSeed{g.seed},
                                                inpx::stable_hash(r.item_id), s);
            auto [spot, p] = inpx::light_spot_random(img, st.a, st.b, seed);
            img = std::move(spot);
            info["center"] = {p.center_x, p.center_y};
            break;
          }
          case Step::kJpeg:
            jpeg_bytes = inpx::encode_jpeg(img, static_cast<int>(st.a));
            img = inpx::decode_jpeg(*jpeg_bytes);
            break;
        }
        applied.push_back(info);
      }
      fs::path dest;
      if (jpeg_bytes) {
        dest = fs::path(a.out_dir) / (r.item_id + ".jpg");
        inpx::write_file_atomic(dest, *jpeg_bytes);
      } else {
        dest = fs::path(a.out_dir) / (r.item_id + ".png");
        inpx::save_image(img, dest);
      }
      json item = {{"item_id", r.item_id}, {"status", "ok"}, {"output", dest.string()},
                   {"steps", applied}};
      if (mask) {
        ratios[i] = inpx::mask_ratio(*mask);
        item["mask_ratio"] = *ratios[i];
      }
      items[i] = item;
    } catch (const std::exception& e) {
      items[i] = row_error(r.item_id, e.what());
    }
  });
  std::vector<double> ok_ratios;
  for (const auto& r : ratios)
    if (r) ok_ratios.push_back(*r);
  const json summary = batch_summary(items, ok_ratios);
  emit(g, "pipeline-batch", "pipeline",
       {{"manifest", a.manifest}, {"steps", a.steps}, {"out_dir", a.out_dir}}, summary);
  for (const auto& it : items) {
    if (it["status"] != "ok") {
      std::cerr << "inpx: " << it["item_id"].get<std::string>() << ": "
                << it["error"].get<std::string>() << "\n";
    }
  }
  return summary["n_failed"].get<std::int64_t>() > 0 ? kExitPartial : kExitOk;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string csv;
};

int cmd_report(const Globals& g, const ReportArgs& a) {
  std::vector<json> reports;
  for (const auto& p : a.inputs) reports.push_back(inpx::read_report(p));
  const auto merged =
      inpx::merge_reports(reports, g.config("report", {{"inputs", a.inputs}, {"csv", a.csv}}));
  if (!a.csv.empty()) {
    const json* strata = inpx::find_strata(merged);
    if (!strata) throw inpx::ParameterError("--csv needs strata reports");
    inpx::write_text_atomic(a.csv, inpx::strata_csv(*strata));
  }
  inpx::emit_text(inpx::dump_report(merged), g.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inpainting exchange, spectral diagnostics and detector evaluation", "inpx"};
  app.set_version_flag("--version", inpx::kToolVersion);
  app.require_subcommand(1);

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every randomized step")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", g.out, "Report destination ('-' for stdout)")->capture_default_str();

  ExchangeArgs ex;
  auto* c_ex = app.add_subcommand("exchange", "Restore original pixels outside the mask");
  c_ex->add_option("--manifest", ex.manifest, "Triplet CSV")->required();
  c_ex->add_option("--mode", ex.mode)->check(CLI::IsMember({"hard", "soft"}))->capture_default_str();
  c_ex->add_option("--band-width", ex.band_width)->check(CLI::NonNegativeNumber)->capture_default_str();
  c_ex->add_option("--kernel", ex.kernel)->capture_default_str();
  c_ex->add_option("--out-dir", ex.out_dir)->required();

  CorruptArgs co;
  auto* c_co = app.add_subcommand("corrupt", "Apply blur, light spot or JPEG round trip");
  c_co->add_option("--op", co.op)->required()->check(CLI::IsMember({"blur", "light", "jpeg"}));
  c_co->add_option("--input", co.input)->required();
  c_co->add_option("--output", co.output)->required();
  c_co->add_option("--sigma", co.sigma)->capture_default_str();
  c_co->add_option("--radius", co.radius)->capture_default_str();
  c_co->add_option("--gain", co.gain)->capture_default_str();
  c_co->add_option("--quality", co.quality)->check(CLI::Range(1, 100))->capture_default_str();

  SpectrumArgs sp;
  auto* c_sp = app.add_subcommand("spectrum", "Averaged spectral fingerprint");
  c_sp->add_option("--input-manifest", sp.input_manifest, "CSV with a path column");
  c_sp->add_option("--resize", sp.resize, "Analysis size, 0 for native")->capture_default_str();
  c_sp->add_option("--heatmap", sp.heatmap, "Optional log-scaled PNG");
  c_sp->require_subcommand(0, 1);
  auto* c_sd = c_sp->add_subcommand("diff", "Spectral MSE between two fingerprints");
  c_sd->add_option("--a", sp.a)->required();
  c_sd->add_option("--b", sp.b)->required();

  CorrelateArgs cr;
  auto* c_cr = app.add_subcommand("correlate", "Signal correlations over image triples");
  c_cr->add_option("--manifest", cr.manifest)->required();
  c_cr->add_option("--level", cr.level)->check(CLI::IsMember({"image", "pixel"}))->capture_default_str();
  c_cr->add_option("--region", cr.region)->check(CLI::IsMember({"full", "background"}))->capture_default_str();

  EvalArgs ev;
  auto* c_cls = app.add_subcommand("eval-cls", "Classification metrics from a score manifest");
  c_cls->add_option("--manifest", ev.manifest)->required();
  c_cls->add_option("--threshold", ev.threshold)->capture_default_str();
  auto* c_loc = app.add_subcommand("eval-loc", "Localization metrics from saliency maps");
  c_loc->add_option("--manifest", ev.manifest)->required();
  c_loc->add_option("--threshold", ev.threshold)->capture_default_str();
  c_loc->add_option("--grid", ev.grid, "Comparison grid side, 0 for native")->capture_default_str();
  auto* c_str = app.add_subcommand("eval-strata", "Metrics stratified by mask ratio");
  c_str->add_option("--manifest", ev.manifest)->required();
  c_str->add_option("--edges", ev.edges)->capture_default_str();
  c_str->add_option("--threshold", ev.threshold)->capture_default_str();

  TheoryArgs th;
  auto* c_th = app.add_subcommand("validate-theory", "Checks against the simulated bottleneck");
  c_th->add_option("--check", th.check)
      ->required()
      ->check(CLI::IsMember({"contraction", "wavelet", "gap", "trend"}));
  c_th->add_option("--r", th.r)->check(CLI::IsMember({2, 4, 8, 16}))->capture_default_str();
  c_th->add_option("--mode", th.mode)->check(CLI::IsMember({"box", "ideal-lowpass"}))->capture_default_str();
  c_th->add_option("--sigma-n", th.sigma_n)->check(CLI::NonNegativeNumber)->capture_default_str();
  c_th->add_option("--mask-ratio", th.mask_ratio)->capture_default_str();
  c_th->add_option("--n", th.n, "Sample count (default depends on the check)");
  c_th->add_option("--size", th.size)->capture_default_str();
  c_th->add_option("--base", th.base)->check(CLI::IsMember({"smooth", "flat"}))->capture_default_str();

  PipelineArgs pl;
  auto* c_pl = app.add_subcommand("pipeline", "Ordered exchange/corruption steps per item");
  c_pl->add_option("--manifest", pl.manifest)->required();
  c_pl->add_option("--steps", pl.steps,
                   "Comma list: exchange, soft-exchange[:bw[:k]], blur:s, light[:r[:A]], jpeg[:q]");
  c_pl->add_option("--out-dir", pl.out_dir)->required();

  ReportArgs rp;
  auto* c_rp = app.add_subcommand("report", "Merge reports and export plot data");
  c_rp->add_option("inputs", rp.inputs)->required();
  c_rp->add_option("--csv", rp.csv, "Accuracy vs mask ratio table");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  c_sd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (c_ex->parsed()) return cmd_exchange(g, ex);
    if (c_co->parsed()) return cmd_corrupt(g, co);
    if (c_sd->parsed()) return cmd_spectrum_diff(g, sp);
    if (c_sp->parsed()) return cmd_spectrum(g, sp);
    if (c_cr->parsed()) return cmd_correlate(g, cr);
    if (c_cls->parsed()) return cmd_eval_cls(g, ev);
    if (c_loc->parsed()) return cmd_eval_loc(g, ev);
    if (c_str->parsed()) return cmd_eval_strata(g, ev);
    if (c_th->parsed()) return cmd_validate_theory(g, th);
    if (c_pl->parsed()) return cmd_pipeline(g, pl);
    if (c_rp->parsed()) return cmd_report(g, rp);
  } catch (const inpx::Error& e) {
    std::cerr << "inpx: error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "inpx: error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "inpx: error: " << e.what() << "\n";
    return kExitPartial;
  }
  return kExitConfig;
}
