// tools/casr_main.cc

// Copyright 2026  CASR Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Single entry point for the pipeline: featurize / lm / decode / tune-alpha /
// train / cascade / stats / bench-sched / synth. Exit codes: 0 success, 1
// domain error, 2 usage error. All randomness flows from --seed; --jobs
// governs per-sample and per-utterance parallelism (1 is the deterministic
// default, though any fixed value reproduces).

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "casr/audio/frontend.h"
#include "casr/audio/wav.h"
#include "casr/cascade/cascade.h"
#include "casr/cascade/stats.h"
#include "casr/ctc/alphabet.h"
#include "casr/decoder/beam_search.h"
#include "casr/decoder/metrics.h"
#include "casr/decoder/rescore.h"
#include "casr/lm/arpa.h"
#include "casr/nnet/checkpoint.h"
#include "casr/nnet/model.h"
#include "casr/nnet/train.h"
#include "casr/sched/batch_plan.h"
#include "casr/sched/manifest.h"
#include "casr/synth/toy_corpus.h"
#include "casr/util/error.h"
#include "casr/util/io.h"

namespace casr {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

uint64_t g_seed = 0;
int g_jobs = 1;

// Every run logs the resolved settings so an experiment can be replayed from
// its stderr alone.
void log_resolved(const std::string& subcommand, json cfg) {
  cfg["subcommand"] = subcommand;
  cfg["seed"] = g_seed;
  cfg["jobs"] = g_jobs;
  std::cerr << "config: " << cfg.dump() << "\n";
}

json load_json_file(const std::string& path) {
  json j = json::parse(slurp_file(path), nullptr, false);
  if (j.is_discarded()) throw ParseError("not valid JSON: " + path);
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  spit_file(path, j.dump(2) + "\n");
}

Alphabet resolve_alphabet(const std::string& chars) {
  if (chars.empty()) return Alphabet::default_english();
  return Alphabet::from_chars(chars);
}

LabelSequence encode_text(const Alphabet& alphabet, const std::string& text,
                          const std::string& id) {
  LabelSequence labels;
  for (char raw : text) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
    int idx = alphabet.index_of(c);
    if (idx < 0)
      throw ConfigError("transcript of '" + id + "' uses '" + std::string(1, raw) +
                        "', which is outside the alphabet");
    labels.push_back(idx);
  }
  return labels;
}

// Features come from the wav files the manifest points at; labels from its
// transcripts. Sample order follows the manifest, which batch plans index.
std::vector<TrainSample> load_samples(const Manifest& manifest, const Alphabet& alphabet) {
  std::vector<TrainSample> samples;
  samples.reserve(manifest.size());
  for (const auto& e : manifest.entries) {
    TrainSample s;
    s.id = e.id;
    s.features = compute_spectrogram(read_wav(e.audio)).frames;
    s.labels = encode_text(alphabet, e.text, e.id);
    samples.push_back(std::move(s));
  }
  return samples;
}

// Batch planning keys off durations; encode each sample's real frame count
// as a duration that maps back to exactly that count.
Manifest manifest_from_frames(const std::vector<TrainSample>& samples) {
  Manifest m;
  for (const auto& s : samples) {
    ManifestEntry e;
    e.id = s.id;
    e.duration_s = (10.0 * static_cast<double>(s.features.rows()) + 25.0) / 1000.0;
    m.entries.push_back(std::move(e));
  }
  return m;
}

json epoch_json(const EpochMetrics& e) {
  json j;
  j["epoch"] = e.epoch;
  j["lr"] = e.lr;
  j["mean_loss"] = std::isfinite(e.mean_loss) ? json(e.mean_loss) : json(nullptr);
  if (std::isfinite(e.dev_loss)) j["dev_loss"] = e.dev_loss;
  j["skipped"] = e.skipped;
  return j;
}

json epochs_json(const std::vector<EpochMetrics>& epochs) {
  json arr = json::array();
  for (const auto& e : epochs) arr.push_back(epoch_json(e));
  return arr;
}

void log_epochs(const std::string& tag, const std::vector<EpochMetrics>& epochs,
                bool early_stopped) {
  for (const auto& e : epochs) {
    std::fprintf(stderr, "%s epoch %d lr %g loss %g", tag.c_str(), e.epoch, e.lr, e.mean_loss);
    if (std::isfinite(e.dev_loss)) std::fprintf(stderr, " dev %g", e.dev_loss);
    if (e.skipped > 0) std::fprintf(stderr, " skipped %lld", static_cast<long long>(e.skipped));
    std::fprintf(stderr, "\n");
  }
  if (early_stopped) std::fprintf(stderr, "%s stopped early on stalled loss\n", tag.c_str());
}

std::string hash_hex(uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// featurize

struct FeaturizeOpts {
  std::string in;
  std::string out;
  bool no_normalize = false;
};

void run_featurize(const FeaturizeOpts& o) {
  log_resolved("featurize", {{"in", o.in}, {"out", o.out}, {"normalize", !o.no_normalize}});
  FrontendConfig cfg;
  cfg.normalize = !o.no_normalize;
  Spectrogram spec = compute_spectrogram(read_wav(o.in), cfg);
  write_spectrogram(o.out, spec);
  std::fprintf(stderr, "wrote %lld x %lld spectrogram to %s\n",
               static_cast<long long>(spec.frame_count()),
               static_cast<long long>(spec.feature_dim()), o.out.c_str());
}

// ---------------------------------------------------------------------------
// lm score

struct LmScoreOpts {
  std::string arpa;
  std::string text;
};

void run_lm_score(const LmScoreOpts& o) {
  log_resolved("lm score", {{"arpa", o.arpa}, {"text", o.text}});
  ArpaModel model = load_arpa(o.arpa);
  std::istringstream in(slurp_file(o.text));
  std::string line;
  while (std::getline(in, line)) {
    auto words = tokenize(line);
    if (words.empty()) continue;
    SentenceScore score = score_sentence(model, words);
    std::printf("%.10g\n", score.log10_total);
  }
}

// ---------------------------------------------------------------------------
// decode

struct DecodeOpts {
  std::string spec_dir;
  std::string checkpoint;
  std::string arpa;
  std::string alphabet;
  std::string out;
  double alpha = 2.0;
  int beam = 300;
  int top_n = 10;
  double threshold = 0.5;
};

json decode_one(const Checkpoint& ckpt, const Matrix& features, const Alphabet& alphabet,
                const DecodeConfig& dc, const ArpaModel* lm, double alpha, double threshold,
                const std::string& id) {
  auto hyps = decode_utterance(ckpt, features, alphabet, dc);
  const BeamHypothesis& top = hyps.front();
  RouteDecision rd = route(top.log_p_total(), top.labels.size(), threshold);

  json rec;
  rec["id"] = id;
  if (lm != nullptr) {
    std::vector<Candidate> cands;
    cands.reserve(hyps.size());
    for (const auto& h : hyps) cands.push_back({alphabet.decode(h.labels), h.log_p_total()});
    ScoredCandidate best = rescore_best(cands, *lm, alpha);
    rec["transcript"] = best.transcript;
    rec["log_p_am"] = best.log_p_am;
    rec["log_p_lm"] = best.log10_p_lm;
  } else {
    rec["transcript"] = alphabet.decode(top.labels);
    rec["log_p_am"] = top.log_p_total();
    rec["log_p_lm"] = 0.0;
  }
  rec["normalized_score"] = rd.per_char_prob;
  rec["route"] = route_decision_name(rd.decision);
  return rec;
}

void run_decode(const DecodeOpts& o) {
  log_resolved("decode", {{"spec_dir", o.spec_dir},
                          {"checkpoint", o.checkpoint},
                          {"arpa", o.arpa},
                          {"alpha", o.alpha},
                          {"beam", o.beam},
                          {"top_n", o.top_n},
                          {"threshold", o.threshold},
                          {"out", o.out}});
  Checkpoint ckpt = load_checkpoint(o.checkpoint);
  Alphabet alphabet = resolve_alphabet(o.alphabet);
  ArpaModel lm;
  const bool have_lm = !o.arpa.empty();
  if (have_lm) lm = load_arpa(o.arpa);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.spec_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".spec")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("no .spec files under " + o.spec_dir);

  DecodeConfig dc;
  dc.beam_width = o.beam;
  dc.top_n = o.top_n;

  std::vector<json> records(files.size());
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&](size_t start) {
    for (size_t i = start; i < files.size(); i += static_cast<size_t>(g_jobs)) {
      try {
        Spectrogram spec = read_spectrogram(files[i].string());
        records[i] = decode_one(ckpt, spec.frames, alphabet, dc, have_lm ? &lm : nullptr,
                                o.alpha, o.threshold, files[i].stem().string());
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (g_jobs <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < g_jobs; ++t) threads.emplace_back(worker, static_cast<size_t>(t));
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::ostringstream out;
  for (const auto& rec : records) out << rec.dump() << "\n";
  spit_file(o.out, out.str());
  std::fprintf(stderr, "decoded %zu utterances to %s\n", files.size(), o.out.c_str());
}

// ---------------------------------------------------------------------------
// tune-alpha

struct TuneAlphaOpts {
  std::string arpa;
  std::string nbest;
  std::string out;
  int trials = 50;
  std::vector<double> range = {0.0, 5.0};
};

void run_tune_alpha(const TuneAlphaOpts& o) {
  log_resolved("tune-alpha", {{"arpa", o.arpa},
                              {"nbest", o.nbest},
                              {"trials", o.trials},
                              {"range", o.range},
                              {"out", o.out}});
  ArpaModel model = load_arpa(o.arpa);

  std::vector<TuneExample> examples;
  std::istringstream in(slurp_file(o.nbest));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("reference") ||
        !j.contains("candidates"))
      throw ParseError("expected {\"reference\", \"candidates\"}", lineno);
    TuneExample ex;
    ex.reference = j["reference"].get<std::string>();
    for (const auto& c : j["candidates"]) {
      ex.candidates.push_back(
          {c.at("transcript").get<std::string>(), c.at("log_p_am").get<double>()});
    }
    examples.push_back(std::move(ex));
  }

  AlphaTuneResult r =
      tune_alpha(examples, model, o.range[0], o.range[1], o.trials, g_seed);
  json out;
  out["best_alpha"] = r.best_alpha;
  out["best_wer"] = r.best_wer;
  out["curve"] = json::array();
  for (const auto& p : r.curve) out["curve"].push_back({{"alpha", p.alpha}, {"wer", p.wer}});
  write_json_file(o.out, out);
  std::fprintf(stderr, "best alpha %g (wer %g) over %d trials\n", r.best_alpha, r.best_wer,
               o.trials);
}

// ---------------------------------------------------------------------------
// train

struct TrainOpts {
  std::string manifest;
  std::string config;
  std::string out;
  std::string dev_manifest;
  std::string alphabet;
  std::string init_cnn;
  bool stage2 = false;
  int epochs = 0;
  int base_k = 4;
  int cap = 5;
};

TrainResult train_from_manifest(const ModelConfig& cfg, const Checkpoint& init,
                                const std::vector<TrainSample>& samples,
                                const std::vector<TrainSample>* dev, int base_k, int cap,
                                int max_epochs, uint64_t seed) {
  (void)cfg;
  BatchPlan plan = plan_varied(manifest_from_frames(samples), base_k, cap);
  TrainOptions opts;
  opts.seed = seed;
  opts.jobs = g_jobs;
  opts.max_epochs = max_epochs;
  opts.dev = dev;
  return train_model(init, samples, plan, TrainSchedule::standard(), opts);
}

void run_train(const TrainOpts& o) {
  log_resolved("train", {{"manifest", o.manifest},
                         {"config", o.config},
                         {"out", o.out},
                         {"dev_manifest", o.dev_manifest},
                         {"stage2", o.stage2},
                         {"init_cnn", o.init_cnn},
                         {"epochs", o.epochs},
                         {"base_k", o.base_k},
                         {"cap", o.cap}});
  ModelConfig cfg = ModelConfig::from_json(load_json_file(o.config));
  Alphabet alphabet = resolve_alphabet(o.alphabet);
  if (alphabet.size() != cfg.alphabet_size)
    throw ConfigError("alphabet has " + std::to_string(alphabet.size()) +
                      " symbols with blank but the model expects " +
                      std::to_string(cfg.alphabet_size));

  auto samples = load_samples(load_manifest(o.manifest), alphabet);
  std::vector<TrainSample> dev;
  if (!o.dev_manifest.empty()) dev = load_samples(load_manifest(o.dev_manifest), alphabet);

  Checkpoint init = build_model(cfg, g_seed);
  if (o.stage2) init = transfer_cnn_weights(load_checkpoint(o.init_cnn), init);

  TrainResult r = train_from_manifest(cfg, init, samples, dev.empty() ? nullptr : &dev,
                                      o.base_k, o.cap, o.epochs, g_seed);
  log_epochs("train", r.epochs, r.early_stopped);
  save_checkpoint(r.checkpoint, o.out);
  std::fprintf(stderr, "wrote checkpoint to %s\n", o.out.c_str());
}

// ---------------------------------------------------------------------------
// cascade train

struct CascadeTrainOpts {
  std::string manifest;
  std::string stage1_config;
  std::string stage2_config;
  std::string dev_manifest;
  std::string alphabet;
  std::string out_dir;
  double threshold = 0.5;
  int epochs = 0;
  int base_k = 4;
  int cap = 5;
  int beam = 300;
  int top_n = 10;
};

void write_selection_log(const std::string& path, const std::vector<SelectionEntry>& log) {
  std::ostringstream out;
  for (const auto& e : log) {
    json rec;
    rec["id"] = e.id;
    rec["normalized_score"] = e.normalized_score;
    rec["route"] = route_decision_name(e.routed_to);
    out << rec.dump() << "\n";
  }
  spit_file(path, out.str());
}

// Mirrors run_cascade step for step, but keeps stage one and the selection
// log on disk when the selection comes up empty instead of losing them to
// the exception.
void run_cascade_train(const CascadeTrainOpts& o) {
  log_resolved("cascade train", {{"manifest", o.manifest},
                                 {"stage1_config", o.stage1_config},
                                 {"stage2_config", o.stage2_config},
                                 {"dev_manifest", o.dev_manifest},
                                 {"threshold", o.threshold},
                                 {"out_dir", o.out_dir},
                                 {"epochs", o.epochs},
                                 {"base_k", o.base_k},
                                 {"cap", o.cap},
                                 {"beam", o.beam},
                                 {"top_n", o.top_n}});
  ModelConfig cfg1 = ModelConfig::from_json(load_json_file(o.stage1_config));
  ModelConfig cfg2 = ModelConfig::from_json(load_json_file(o.stage2_config));
  cfg1.validate();
  cfg2.validate();
  Alphabet alphabet = resolve_alphabet(o.alphabet);
  if (alphabet.size() != cfg1.alphabet_size || alphabet.size() != cfg2.alphabet_size)
    throw ConfigError("model alphabet sizes must match the decoding alphabet");

  auto samples = load_samples(load_manifest(o.manifest), alphabet);
  if (samples.empty()) throw ConfigError("cascade needs training samples");
  std::vector<TrainSample> dev;
  if (!o.dev_manifest.empty()) dev = load_samples(load_manifest(o.dev_manifest), alphabet);
  const std::vector<TrainSample>* dev_ptr = dev.empty() ? nullptr : &dev;

  fs::create_directories(o.out_dir);
  auto path_in_dir = [&](const char* name) { return (fs::path(o.out_dir) / name).string(); };

  TrainResult r1 = train_from_manifest(cfg1, build_model(cfg1, g_seed), samples, dev_ptr,
                                       o.base_k, o.cap, o.epochs, g_seed);
  log_epochs("stage1", r1.epochs, r1.early_stopped);
  save_checkpoint(r1.checkpoint, path_in_dir("stage1.ckpt"));

  DecodeConfig dc;
  dc.beam_width = o.beam;
  dc.top_n = o.top_n;
  std::vector<DecodeRecord> decodes;
  decodes.reserve(samples.size());
  for (const auto& s : samples) {
    auto hyps = decode_utterance(r1.checkpoint, s.features, alphabet, dc);
    decodes.push_back({s.id, hyps.front()});
  }
  std::vector<SelectionEntry> selection;
  for (const auto& d : decodes) {
    RouteDecision rd = route(d.top.log_p_total(), d.top.labels.size(), o.threshold);
    selection.push_back({d.id, rd.per_char_prob, rd.decision});
  }
  write_selection_log(path_in_dir("selection.jsonl"), selection);

  auto hard_ids = select_hard_samples(decodes, o.threshold, false);
  std::unordered_set<std::string> hard_set(hard_ids.begin(), hard_ids.end());
  std::vector<TrainSample> hard;
  for (const auto& s : samples)
    if (hard_set.count(s.id) != 0) hard.push_back(s);

  json summary;
  summary["threshold"] = o.threshold;
  summary["sample_count"] = static_cast<int64_t>(samples.size());
  summary["routed_count"] = static_cast<int64_t>(hard.size());
  summary["stage1_epochs"] = epochs_json(r1.epochs);

  if (hard.empty()) {
    summary["degenerate"] = true;
    write_json_file(path_in_dir("cascade.json"), summary);
    std::fprintf(stderr,
                 "no sample routed to the second stage at threshold %g; "
                 "stage two skipped, stage one kept\n",
                 o.threshold);
    return;
  }

  Checkpoint init2 = transfer_cnn_weights(r1.checkpoint, build_model(cfg2, g_seed + 1));
  uint64_t hash = cnn_param_hash(init2);
  TrainResult r2 = train_from_manifest(cfg2, init2, hard, dev_ptr, o.base_k, o.cap, o.epochs,
                                       g_seed + 1);
  log_epochs("stage2", r2.epochs, r2.early_stopped);
  save_checkpoint(r2.checkpoint, path_in_dir("stage2.ckpt"));

  summary["degenerate"] = false;
  summary["cnn_transfer_hash"] = hash_hex(hash);
  summary["stage2_epochs"] = epochs_json(r2.epochs);
  write_json_file(path_in_dir("cascade.json"), summary);
  std::fprintf(stderr, "cascade trained: %zu of %zu samples routed to stage two\n",
               hard.size(), samples.size());
}

// ---------------------------------------------------------------------------
// cascade infer

struct CascadeInferOpts {
  std::string dir;
  std::string arpa;
  std::string in;
  std::string report;
  std::string alphabet;
  double alpha = 2.0;
  int beam = 300;
  int top_n = 10;
  double threshold = std::numeric_limits<double>::quiet_NaN();  // stored value wins
};

void run_cascade_infer(const CascadeInferOpts& o) {
  log_resolved("cascade infer", {{"dir", o.dir},
                                 {"arpa", o.arpa},
                                 {"in", o.in},
                                 {"alpha", o.alpha},
                                 {"beam", o.beam},
                                 {"top_n", o.top_n},
                                 {"report", o.report}});
  json summary = load_json_file((fs::path(o.dir) / "cascade.json").string());
  if (summary.value("degenerate", false))
    throw ConfigError("cascade directory is degenerate: no stage two was trained");

  CascadeArtifacts art;
  art.stage1 = load_checkpoint((fs::path(o.dir) / "stage1.ckpt").string());
  art.stage2 = load_checkpoint((fs::path(o.dir) / "stage2.ckpt").string());
  art.route_threshold =
      std::isnan(o.threshold) ? summary.at("threshold").get<double>() : o.threshold;

  Alphabet alphabet = resolve_alphabet(o.alphabet);
  ArpaModel lm = load_arpa(o.arpa);
  Matrix features = fs::path(o.in).extension() == ".wav"
                        ? compute_spectrogram(read_wav(o.in)).frames
                        : read_spectrogram(o.in).frames;

  DecodeConfig dc;
  dc.beam_width = o.beam;
  dc.top_n = o.top_n;
  TwoStageResult res = two_stage_infer(features, art, alphabet, lm, dc, o.alpha);

  json rec;
  rec["id"] = fs::path(o.in).stem().string();
  rec["transcript"] = res.transcript;
  rec["route"] = route_decision_name(res.route);
  rec["stage"] = route_stage_name(res.route);
  rec["normalized_score"] = res.normalized_score;
  rec["stage2_evaluated"] = res.stage2_evaluated;
  rec["log_p_am"] = res.log_p_am;
  rec["log_p_lm"] = res.log10_p_lm;
  rec["combined"] = res.combined;
  write_json_file(o.report, rec);
  std::fprintf(stderr, "%s -> %s (%s)\n", o.in.c_str(), res.transcript.c_str(),
               route_stage_name(res.route));
}

// ---------------------------------------------------------------------------
// stats

struct StatsOpts {
  std::string manifest;
  std::string baseline;
  std::string out;
};

json rates_json(const std::map<char, double>& rates) {
  json j = json::object();
  for (const auto& [c, r] : rates) j[std::string(1, c)] = r;
  return j;
}

json stats_json(const SampleStats& s) {
  json j;
  j["sample_count"] = s.sample_count;
  j["word_count"] = s.word_count;
  j["char_count"] = s.char_count;
  j["total_duration_s"] = s.total_duration_s;
  j["avg_words_per_sentence"] = s.avg_words_per_sentence;
  j["avg_chars_per_second"] = s.avg_chars_per_second;
  j["per_character_rate"] = rates_json(s.per_character_rate);
  return j;
}

SampleStats stats_of_manifest(const std::string& path) {
  Manifest m = load_manifest(path);
  std::vector<StatsSample> samples;
  samples.reserve(m.size());
  for (const auto& e : m.entries) samples.push_back({e.text, e.duration_s});
  return compute_sample_stats(samples);
}

void run_stats(const StatsOpts& o) {
  log_resolved("stats", {{"manifest", o.manifest}, {"baseline", o.baseline}, {"out", o.out}});
  SampleStats subset = stats_of_manifest(o.manifest);
  json out = stats_json(subset);
  if (!o.baseline.empty()) {
    SampleStats full = stats_of_manifest(o.baseline);
    StatsComparison cmp = compare_stats(subset, full);
    out["baseline"] = stats_json(full);
    out["comparison"] = {{"words_per_sentence_rel", cmp.words_per_sentence_rel},
                         {"chars_per_second_rel", cmp.chars_per_second_rel},
                         {"rate_difference", rates_json(cmp.rate_difference)}};
  }
  write_json_file(o.out, out);
}

// ---------------------------------------------------------------------------
// bench-sched

struct BenchSchedOpts {
  std::string manifest;
  std::string policy = "fixed";
  std::string report;
  int base_k = 4;
  int cap = 5;
  int64_t budget = 0;
};

void run_bench_sched(const BenchSchedOpts& o) {
  log_resolved("bench-sched", {{"manifest", o.manifest},
                               {"policy", o.policy},
                               {"base_k", o.base_k},
                               {"cap", o.cap},
                               {"budget", o.budget},
                               {"report", o.report}});
  Manifest m = load_manifest(o.manifest);
  BatchPlan plan = o.policy == "fixed" ? plan_sorted_fixed(m, o.base_k)
                                       : plan_varied(m, o.base_k, o.cap, o.budget);
  PaddingReport report = padding_report(plan);

  json out;
  out["policy"] = o.policy;
  out["base_k"] = plan.base_batch;
  out["cap_ratio"] = plan.cap_ratio;
  out["batch_count"] = static_cast<int64_t>(plan.batches.size());
  out["batch_sizes"] = json::array();
  for (const auto& st : plan.stats) out["batch_sizes"].push_back(st.size);
  out["total_cells"] = report.total_cells;
  out["useful_cells"] = report.useful_cells;
  out["padded_cells"] = report.padded_cells;
  out["waste_fraction"] = report.waste_fraction;
  out["estimated_epoch_cost"] = report.estimated_epoch_cost;
  write_json_file(o.report, out);
  std::fprintf(stderr, "%s plan: %zu batches, epoch cost %lld, waste %.4f\n",
               o.policy.c_str(), plan.batches.size(),
               static_cast<long long>(report.estimated_epoch_cost), report.waste_fraction);
}

// ---------------------------------------------------------------------------
// synth

struct SynthOpts {
  std::string out_dir;
  int letters = 5;
  int train_n = 200;
  int test_n = 50;
  int min_len = 2;
  int max_len = 8;
};

void run_synth(const SynthOpts& o) {
  log_resolved("synth", {{"out_dir", o.out_dir},
                         {"letters", o.letters},
                         {"train_n", o.train_n},
                         {"test_n", o.test_n},
                         {"min_len", o.min_len},
                         {"max_len", o.max_len}});
  ToyCorpusConfig cfg;
  cfg.letters = o.letters;
  cfg.train_utterances = o.train_n;
  cfg.test_utterances = o.test_n;
  cfg.min_len = o.min_len;
  cfg.max_len = o.max_len;
  cfg.seed = g_seed;
  ToyCorpus corpus = generate_toy_corpus(cfg);
  write_toy_corpus(corpus, o.out_dir);
  std::fprintf(stderr, "wrote %d train / %d test utterances under %s\n", o.train_n, o.test_n,
               o.out_dir.c_str());
}

// ---------------------------------------------------------------------------

int run_cli(int argc, char** argv) {
  CLI::App app{"Cascaded CNN-LSTM-CTC speech recognition pipeline"};
  app.require_subcommand(1);
  app.set_config("--config-file", "",
                 "Options file overlaying the defaults; command line flags win");
  app.add_option("--seed", g_seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--jobs", g_jobs, "Worker threads for decode and per-sample gradients")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  FeaturizeOpts feat;
  auto* feat_cmd = app.add_subcommand("featurize", "Wav file to spectrogram file");
  feat_cmd->fallthrough();
  feat_cmd->add_option("--in", feat.in, "Input 16-bit mono PCM wav")->required();
  feat_cmd->add_option("--out", feat.out, "Output spectrogram file")->required();
  feat_cmd->add_flag("--no-normalize", feat.no_normalize,
                     "Skip per-utterance feature normalization");
  feat_cmd->callback([&feat] { run_featurize(feat); });

  auto* lm_cmd = app.add_subcommand("lm", "Language model operations");
  lm_cmd->require_subcommand(1);
  LmScoreOpts lms;
  auto* lms_cmd = lm_cmd->add_subcommand("score", "Per-sentence log10 scores");
  lms_cmd->fallthrough();
  lms_cmd->add_option("--arpa", lms.arpa, "ARPA model file")->required();
  lms_cmd->add_option("--text", lms.text, "Text file, one sentence per line")->required();
  lms_cmd->callback([&lms] { run_lm_score(lms); });

  DecodeOpts dec;
  auto* dec_cmd = app.add_subcommand("decode", "Beam-decode a directory of spectrograms");
  dec_cmd->fallthrough();
  dec_cmd->add_option("--spec-dir", dec.spec_dir, "Directory of .spec files")->required();
  dec_cmd->add_option("--checkpoint", dec.checkpoint, "Acoustic model checkpoint")->required();
  dec_cmd->add_option("--arpa", dec.arpa, "Optional ARPA model for n-best rescoring");
  dec_cmd->add_option("--alpha", dec.alpha, "Language model weight")->capture_default_str();
  dec_cmd->add_option("--beam", dec.beam, "Beam width")->capture_default_str();
  dec_cmd->add_option("--top-n", dec.top_n, "Hypotheses kept per utterance")
      ->capture_default_str();
  dec_cmd->add_option("--threshold", dec.threshold, "Routing threshold recorded per record")
      ->capture_default_str();
  dec_cmd->add_option("--alphabet", dec.alphabet,
                      "Non-blank symbols in index order; default English letters, space, "
                      "apostrophe");
  dec_cmd->add_option("--out", dec.out, "Output JSONL path")->required();
  dec_cmd->callback([&dec] { run_decode(dec); });

  TuneAlphaOpts tune;
  auto* tune_cmd = app.add_subcommand("tune-alpha", "Pick the LM weight by random search");
  tune_cmd->fallthrough();
  tune_cmd->add_option("--arpa", tune.arpa, "ARPA model file")->required();
  tune_cmd->add_option("--nbest", tune.nbest,
                       "JSONL of {reference, candidates: [{transcript, log_p_am}]}")
      ->required();
  tune_cmd->add_option("--trials", tune.trials, "Random draws")->capture_default_str();
  tune_cmd->add_option("--range", tune.range, "Weight range low high")
      ->expected(2)
      ->capture_default_str();
  tune_cmd->add_option("--out", tune.out, "Output JSON path")->required();
  tune_cmd->callback([&tune] { run_tune_alpha(tune); });

  TrainOpts tr;
  auto* tr_cmd = app.add_subcommand("train", "Train an acoustic model from a manifest");
  tr_cmd->fallthrough();
  tr_cmd->add_option("--manifest", tr.manifest, "Training manifest JSONL")->required();
  tr_cmd->add_option("--config", tr.config, "Model architecture JSON")->required();
  tr_cmd->add_option("--out", tr.out, "Output checkpoint path")->required();
  tr_cmd->add_option("--dev-manifest", tr.dev_manifest, "Held-out manifest for early stop");
  tr_cmd->add_option("--alphabet", tr.alphabet, "Non-blank symbols in index order");
  auto* stage2_flag =
      tr_cmd->add_flag("--stage2", tr.stage2, "Initialize the CNN stack from --init-cnn");
  auto* init_opt = tr_cmd->add_option("--init-cnn", tr.init_cnn,
                                      "Checkpoint whose CNN parameters seed this model");
  stage2_flag->needs(init_opt);
  init_opt->needs(stage2_flag);
  tr_cmd->add_option("--epochs", tr.epochs, "Cap on epochs; 0 runs the full schedule")
      ->capture_default_str();
  tr_cmd->add_option("--base-k", tr.base_k, "Base batch size")->capture_default_str();
  tr_cmd->add_option("--cap", tr.cap, "Varied-batch cap ratio")->capture_default_str();
  tr_cmd->callback([&tr] { run_train(tr); });

  auto* casc_cmd = app.add_subcommand("cascade", "Two-stage cascade operations");
  casc_cmd->require_subcommand(1);

  CascadeTrainOpts ct;
  auto* ct_cmd = casc_cmd->add_subcommand("train", "Train both cascade stages");
  ct_cmd->fallthrough();
  ct_cmd->add_option("--manifest", ct.manifest, "Training manifest JSONL")->required();
  ct_cmd->add_option("--stage1-config", ct.stage1_config, "Stage-one model JSON")->required();
  ct_cmd->add_option("--stage2-config", ct.stage2_config, "Stage-two model JSON")->required();
  ct_cmd->add_option("--dev-manifest", ct.dev_manifest, "Held-out manifest for early stop");
  ct_cmd->add_option("--alphabet", ct.alphabet, "Non-blank symbols in index order");
  ct_cmd->add_option("--threshold", ct.threshold, "Per-character probability routing gate")
      ->capture_default_str();
  ct_cmd->add_option("--out-dir", ct.out_dir, "Directory for checkpoints and logs")
      ->required();
  ct_cmd->add_option("--epochs", ct.epochs, "Cap on epochs per stage; 0 runs the schedule")
      ->capture_default_str();
  ct_cmd->add_option("--base-k", ct.base_k, "Base batch size")->capture_default_str();
  ct_cmd->add_option("--cap", ct.cap, "Varied-batch cap ratio")->capture_default_str();
  ct_cmd->add_option("--beam", ct.beam, "Selection decode beam width")->capture_default_str();
  ct_cmd->add_option("--top-n", ct.top_n, "Selection decode hypothesis count")
      ->capture_default_str();
  ct_cmd->callback([&ct] { run_cascade_train(ct); });

  CascadeInferOpts ci;
  auto* ci_cmd = casc_cmd->add_subcommand("infer", "Route one utterance through the cascade");
  ci_cmd->fallthrough();
  ci_cmd->add_option("--dir", ci.dir, "Directory written by cascade train")->required();
  ci_cmd->add_option("--arpa", ci.arpa, "ARPA model for rescoring")->required();
  ci_cmd->add_option("--alpha", ci.alpha, "Language model weight")->capture_default_str();
  ci_cmd->add_option("--in", ci.in, "Input .spec or .wav file")->required();
  ci_cmd->add_option("--beam", ci.beam, "Beam width")->capture_default_str();
  ci_cmd->add_option("--top-n", ci.top_n, "Hypotheses kept")->capture_default_str();
  ci_cmd->add_option("--threshold", ci.threshold,
                     "Routing threshold; defaults to the trained value");
  ci_cmd->add_option("--alphabet", ci.alphabet, "Non-blank symbols in index order");
  ci_cmd->add_option("--report", ci.report, "Output JSON path")->required();
  ci_cmd->callback([&ci] { run_cascade_infer(ci); });

  StatsOpts st;
  auto* st_cmd = app.add_subcommand("stats", "Corpus transcript statistics");
  st_cmd->fallthrough();
  st_cmd->add_option("--manifest", st.manifest, "Manifest to analyze")->required();
  st_cmd->add_option("--baseline", st.baseline,
                     "Full-corpus manifest for a relative-difference report");
  st_cmd->add_option("--out", st.out, "Output JSON path")->required();
  st_cmd->callback([&st] { run_stats(st); });

  BenchSchedOpts bs;
  auto* bs_cmd = app.add_subcommand("bench-sched", "Batch plan padding report");
  bs_cmd->fallthrough();
  bs_cmd->add_option("--manifest", bs.manifest, "Manifest to plan over")->required();
  bs_cmd->add_option("--base-k", bs.base_k, "Base batch size")->capture_default_str();
  bs_cmd->add_option("--cap", bs.cap, "Varied-batch cap ratio")->capture_default_str();
  bs_cmd->add_option("--policy", bs.policy, "Batching policy")
      ->check(CLI::IsMember({"fixed", "varied"}))
      ->capture_default_str();
  bs_cmd->add_option("--budget", bs.budget, "Memory budget in cells; 0 uses the default")
      ->capture_default_str();
  bs_cmd->add_option("--report", bs.report, "Output JSON path")->required();
  bs_cmd->callback([&bs] { run_bench_sched(bs); });

  SynthOpts sy;
  auto* sy_cmd = app.add_subcommand("synth", "Generate the synthetic tone corpus");
  sy_cmd->fallthrough();
  sy_cmd->add_option("--out-dir", sy.out_dir, "Corpus directory")->required();
  sy_cmd->add_option("--letters", sy.letters, "Alphabet size")->capture_default_str();
  sy_cmd->add_option("--train-n", sy.train_n, "Training utterances")->capture_default_str();
  sy_cmd->add_option("--test-n", sy.test_n, "Test utterances")->capture_default_str();
  sy_cmd->add_option("--min-len", sy.min_len, "Shortest letter string")->capture_default_str();
  sy_cmd->add_option("--max-len", sy.max_len, "Longest letter string")->capture_default_str();
  sy_cmd->callback([&sy] { run_synth(sy); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    std::cerr << "usage: casr <subcommand> [options]; see casr --help\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace casr

int main(int argc, char** argv) { return casr::run_cli(argc, argv); }
