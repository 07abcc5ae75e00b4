// kner -- morpheme-level Korean NER corpus toolkit
//
// Batch front end. All corpus work goes through the C API in kner.h; this
// file only parses arguments, moves sentences around and writes manifests.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kner.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitFormat = 3;
constexpr int kExitMismatch = 4;

int exit_code_for(kner_status st) {
  switch (st) {
    case KNER_OK: return kExitOk;
    case KNER_ERR_IO: return kExitIo;
    case KNER_ERR_MISMATCH: return kExitMismatch;
    default: return kExitFormat;
  }
}

bool soft_skip(kner_status st) {
  return st == KNER_ERR_ALIGN || st == KNER_ERR_GRANULARITY;
}

/* RAII over the C handles so error paths cannot leak. */
struct SentenceDel { void operator()(kner_sentence* s) const { kner_sentence_free(s); } };
struct ReaderDel { void operator()(kner_reader* r) const { kner_reader_free(r); } };
struct LabelsDel { void operator()(kner_labelset* l) const { kner_labelset_free(l); } };
struct EvalDel { void operator()(kner_eval* e) const { kner_eval_free(e); } };
struct StatsDel { void operator()(kner_stats* s) const { kner_stats_free(s); } };
struct CrfDel { void operator()(kner_crf* m) const { kner_crf_free(m); } };

using Sentence = std::unique_ptr<kner_sentence, SentenceDel>;
using Reader = std::unique_ptr<kner_reader, ReaderDel>;
using Labels = std::unique_ptr<kner_labelset, LabelsDel>;

std::string take_string(char* s) {
  std::string out = s ? s : "";
  kner_str_free(s);
  return out;
}

struct RunManifest {
  std::string command;
  json inputs = json::object();
  json outputs = json::object();
  json config = json::object();
  std::size_t read = 0;
  std::size_t converted = 0;
  std::size_t skipped = 0;
  std::vector<std::string> errors;
  std::optional<std::uint64_t> seed;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void write(const std::string& path) const {
    auto elapsed = std::chrono::steady_clock::now() - started;
    json j{{"command", command},
           {"inputs", inputs},
           {"outputs", outputs},
           {"config", config},
           {"counts",
            {{"read", read}, {"converted", converted}, {"skipped", skipped}}},
           {"errors", errors},
           {"wall_time_ms",
            std::chrono::duration<double, std::milli>(elapsed).count()}};
    if (seed) j["seed"] = *seed;
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << '\n';
    if (!out) std::cerr << "warning: could not write manifest " << path << '\n';
  }
};

int fail(RunManifest& m, const std::string& manifest_path, const std::string& msg,
         int code) {
  m.errors.push_back(msg);
  m.write(manifest_path);
  std::cerr << "error: " << msg << '\n';
  return code;
}

int fail_status(RunManifest& m, const std::string& manifest_path) {
  return fail(m, manifest_path, kner_last_error(), kExitFormat);
}

/* Common per-command file options. */
struct IoOpts {
  std::string mode = "canonical";
  std::string labels_path;
  std::string manifest_path;
  unsigned jobs = 1;
};

void add_mode_option(CLI::App* cmd, IoOpts& io) {
  cmd->add_option("--mode", io.mode, "CoNLL-U mode: canonical or figure2-compat")
      ->check(CLI::IsMember({"canonical", "figure2-compat", "compat"}));
}

void add_labels_option(CLI::App* cmd, IoOpts& io) {
  cmd->add_option("--labels", io.labels_path,
                  "label inventory file, one label per line");
}

void add_manifest_option(CLI::App* cmd, IoOpts& io) {
  cmd->add_option("--manifest", io.manifest_path,
                  "run manifest path (default: <output>.manifest.json)");
}

std::string manifest_path_for(const IoOpts& io, const std::string& anchor) {
  return io.manifest_path.empty() ? anchor + ".manifest.json" : io.manifest_path;
}

/* nullptr means default label set; a load failure is reported by the caller. */
bool load_labels(const IoOpts& io, Labels& out) {
  if (io.labels_path.empty()) return true;
  out.reset(kner_labelset_load(io.labels_path.c_str()));
  return out != nullptr;
}

int read_next(kner_reader* r, Sentence& out) {
  kner_sentence* raw = nullptr;
  int rc = kner_reader_next(r, &raw);
  if (rc == 1) out.reset(raw);
  return rc;
}

/* Order-preserving batched map: read up to jobs*8 items, convert them on a
 * thread pool, emit in input order.  Each Task owns its inputs; results carry
 * either serialized output or a skip message. */
struct ConvertResult {
  bool ok = false;
  bool skip = false;
  std::string payload;  // serialized sentence, or error message
  kner_status status = KNER_OK;
};

template <typename Fn>
std::vector<ConvertResult> run_batch(const std::vector<std::size_t>& ids, Fn&& fn,
                                     unsigned jobs) {
  std::vector<ConvertResult> out(ids.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < ids.size(); ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::future<void>> workers;
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < jobs; ++w) {
    workers.push_back(std::async(std::launch::async, [&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= ids.size()) return;
        out[i] = fn(i);
      }
    }));
  }
  for (auto& f : workers) f.get();
  return out;
}

/* ---------------------------------------------------------------- convert */

struct ConvertArgs {
  std::string from, to;
  std::string ner_path, in_path, morph_path, out_path;
  std::string out_mode;  // defaults to --mode
  std::string skipped_path;
  IoOpts io;
};

int run_convert(const ConvertArgs& a) {
  RunManifest m;
  m.command = "convert";
  const std::string out_mode = a.out_mode.empty() ? a.io.mode : a.out_mode;
  const bool forward = a.from != "morpheme" && a.to == "morpheme";
  const bool backward = a.from == "morpheme" && a.to != "morpheme";
  const bool transcode = a.from == "morpheme" && a.to == "morpheme";
  const std::string primary_in = forward ? a.ner_path : a.in_path;
  const std::string manifest_path = manifest_path_for(a.io, a.out_path);
  const std::string skipped_path =
      a.skipped_path.empty() ? a.out_path + ".skipped.log" : a.skipped_path;

  m.inputs["from"] = a.from;
  m.inputs["to"] = a.to;
  if (forward) {
    m.inputs["ner"] = a.ner_path;
    m.inputs["morph"] = a.morph_path;
  } else {
    m.inputs["in"] = a.in_path;
  }
  m.outputs["out"] = a.out_path;
  m.outputs["skipped_log"] = skipped_path;
  m.config = {{"mode", a.io.mode},
              {"out_mode", out_mode},
              {"labels", a.io.labels_path},
              {"jobs", a.io.jobs}};

  if (!forward && !backward && !transcode) {
    return fail(m, manifest_path,
                "unsupported direction " + a.from + " -> " + a.to +
                    " (one side must be morpheme)",
                kExitFormat);
  }
  Labels labels;
  if (!load_labels(a.io, labels)) {
    return fail(m, manifest_path, kner_last_error(), kExitIo);
  }

  Reader primary(kner_reader_open(primary_in.c_str(), a.from.c_str(),
                                  a.io.mode.c_str(), labels.get()));
  if (!primary) return fail(m, manifest_path, kner_last_error(), kExitIo);
  Reader paired;
  if (forward) {
    paired.reset(kner_reader_open(a.morph_path.c_str(), "morpheme",
                                  a.io.mode.c_str(), labels.get()));
    if (!paired) return fail(m, manifest_path, kner_last_error(), kExitIo);
  }

  std::ofstream out(a.out_path, std::ios::binary);
  if (!out) {
    return fail(m, manifest_path, "cannot write '" + a.out_path + "'", kExitIo);
  }
  std::ofstream skipped_log(skipped_path, std::ios::binary);

  const std::size_t batch_cap = std::max<unsigned>(1, a.io.jobs) * 8;
  std::vector<Sentence> ner_batch, morph_batch;
  bool done = false;
  while (!done) {
    ner_batch.clear();
    morph_batch.clear();
    while (ner_batch.size() < batch_cap) {
      Sentence s;
      int rc = read_next(primary.get(), s);
      if (rc < 0) return fail(m, manifest_path, kner_last_error(), exit_code_for(static_cast<kner_status>(-rc)));
      if (rc == 0) {
        done = true;
        if (forward) {
          Sentence extra;
          int mrc = read_next(paired.get(), extra);
          if (mrc < 0) return fail(m, manifest_path, kner_last_error(), exit_code_for(static_cast<kner_status>(-mrc)));
          if (mrc == 1) {
            return fail(m, manifest_path,
                        "morph file has more sentences than ner file",
                        kExitMismatch);
          }
        }
        break;
      }
      if (forward) {
        Sentence morph;
        int mrc = read_next(paired.get(), morph);
        if (mrc < 0) return fail(m, manifest_path, kner_last_error(), exit_code_for(static_cast<kner_status>(-mrc)));
        if (mrc == 0) {
          return fail(m, manifest_path,
                      "ner file has more sentences than morph file",
                      kExitMismatch);
        }
        morph_batch.push_back(std::move(morph));
      }
      ner_batch.push_back(std::move(s));
      ++m.read;
    }
    if (ner_batch.empty()) break;

    std::vector<std::size_t> ids(ner_batch.size());
    auto convert_one = [&](std::size_t i) {
      ConvertResult r;
      kner_sentence* produced = nullptr;
      kner_status st = KNER_OK;
      if (forward) {
        st = kner_convert_forward(ner_batch[i].get(), morph_batch[i].get(),
                                  &produced);
      } else if (backward) {
        st = kner_convert_back(ner_batch[i].get(), a.to.c_str(), &produced);
      } else {
        produced = kner_sentence_clone(ner_batch[i].get());
      }
      if (st != KNER_OK) {
        r.status = st;
        r.skip = soft_skip(st);
        r.payload = kner_last_error();
        return r;
      }
      Sentence owned(produced);
      char* text = kner_sentence_to_string(owned.get(), out_mode.c_str());
      if (!text) {
        r.status = KNER_ERR_INTERNAL;
        r.payload = kner_last_error();
        return r;
      }
      r.ok = true;
      r.payload = take_string(text);
      return r;
    };
    auto results = run_batch(ids, convert_one, a.io.jobs);

    for (std::size_t i = 0; i < results.size(); ++i) {
      const std::size_t sent_no = m.converted + m.skipped + 1;
      ConvertResult& r = results[i];
      if (r.ok) {
        out << r.payload;
        ++m.converted;
      } else if (r.skip) {
        skipped_log << "sentence " << sent_no << ": " << r.payload << '\n';
        ++m.skipped;
      } else {
        return fail(m, manifest_path, r.payload, exit_code_for(r.status));
      }
    }
  }

  out.flush();
  if (!out) return fail(m, manifest_path, "failed writing '" + a.out_path + "'", kExitIo);
  m.write(manifest_path);
  std::cerr << "convert: read " << m.read << ", wrote " << m.converted
            << ", skipped " << m.skipped << '\n';
  return kExitOk;
}

/* ------------------------------------------------------------------- eval */

struct EvalArgs {
  std::string gold_path, pred_path;
  std::string format = "morpheme";
  std::string back_convert;  // eojeol | syllable
  std::string report_path;
  IoOpts io;
};

int run_eval(const EvalArgs& a) {
  RunManifest m;
  m.command = "eval";
  const std::string manifest_path = manifest_path_for(a.io, a.pred_path);
  const std::string report_path =
      a.report_path.empty() ? a.pred_path + ".eval.json" : a.report_path;
  m.inputs = {{"gold", a.gold_path}, {"pred", a.pred_path}};
  m.outputs = {{"report", report_path}};
  m.config = {{"format", a.format},
              {"mode", a.io.mode},
              {"labels", a.io.labels_path},
              {"back_convert", a.back_convert}};

  Labels labels;
  if (!load_labels(a.io, labels)) {
    return fail(m, manifest_path, kner_last_error(), kExitIo);
  }
  const bool cross = !a.back_convert.empty();
  const char* gold_format = cross ? a.back_convert.c_str() : a.format.c_str();
  const char* pred_format = cross ? "morpheme" : a.format.c_str();

  Reader gold(kner_reader_open(a.gold_path.c_str(), gold_format,
                               a.io.mode.c_str(), labels.get()));
  if (!gold) return fail(m, manifest_path, kner_last_error(), kExitIo);
  Reader pred(kner_reader_open(a.pred_path.c_str(), pred_format,
                               a.io.mode.c_str(), labels.get()));
  if (!pred) return fail(m, manifest_path, kner_last_error(), kExitIo);

  std::unique_ptr<kner_eval, EvalDel> ev(kner_eval_new());
  while (true) {
    Sentence g, p;
    int grc = read_next(gold.get(), g);
    if (grc < 0) return fail(m, manifest_path, kner_last_error(), exit_code_for(static_cast<kner_status>(-grc)));
    int prc = read_next(pred.get(), p);
    if (prc < 0) return fail(m, manifest_path, kner_last_error(), exit_code_for(static_cast<kner_status>(-prc)));
    if (grc == 0 && prc == 0) break;
    if (grc != prc) {
      return fail(m, manifest_path, "sentence count mismatch between gold and pred",
                  kExitMismatch);
    }
    ++m.read;
    Sentence scored = std::move(p);
    if (cross) {
      kner_sentence* back = nullptr;
      kner_status st =
          kner_convert_back(scored.get(), a.back_convert.c_str(), &back);
      if (st != KNER_OK) {
        if (soft_skip(st)) {
          kner_eval_add_excluded(ev.get(), 1);
          ++m.skipped;
          continue;
        }
        return fail(m, manifest_path, kner_last_error(), exit_code_for(st));
      }
      scored.reset(back);
    }
    kner_status st = kner_eval_add(ev.get(), g.get(), scored.get());
    if (st != KNER_OK) {
      return fail(m, manifest_path, kner_last_error(), exit_code_for(st));
    }
    ++m.converted;
  }

  std::string text = take_string(kner_eval_report_text(ev.get()));
  std::string report = take_string(kner_eval_report_json(ev.get()));
  std::cout << text;
  std::ofstream rep(report_path, std::ios::binary);
  rep << report << '\n';
  if (!rep) return fail(m, manifest_path, "cannot write '" + report_path + "'", kExitIo);
  m.write(manifest_path);
  return kExitOk;
}

/* ------------------------------------------------------------------ stats */

struct StatsArgs {
  std::string in_path;
  std::string json_path, tsv_path, inventory_path;
  IoOpts io;
};

int run_stats(const StatsArgs& a) {
  RunManifest m;
  m.command = "stats";
  const std::string manifest_path = manifest_path_for(a.io, a.in_path);
  m.inputs = {{"in", a.in_path}};
  m.config = {{"mode", a.io.mode}, {"labels", a.io.labels_path}};

  Labels labels;
  if (!load_labels(a.io, labels)) {
    return fail(m, manifest_path, kner_last_error(), kExitIo);
  }
  Reader in(kner_reader_open(a.in_path.c_str(), "morpheme", a.io.mode.c_str(),
                             labels.get()));
  if (!in) return fail(m, manifest_path, kner_last_error(), kExitIo);

  std::unique_ptr<kner_stats, StatsDel> acc(kner_stats_new());
  while (true) {
    Sentence s;
    int rc = read_next(in.get(), s);
    if (rc < 0) return fail(m, manifest_path, kner_last_error(), exit_code_for(static_cast<kner_status>(-rc)));
    if (rc == 0) break;
    ++m.read;
    kner_status st = kner_stats_add(acc.get(), s.get());
    if (st != KNER_OK) return fail(m, manifest_path, kner_last_error(), exit_code_for(st));
    ++m.converted;
  }

  std::cout << take_string(kner_stats_postpos_text(acc.get()));
  auto dump = [&](const std::string& path, char* (*fn)(const kner_stats*),
                  const char* what) {
    if (path.empty()) return true;
    std::string body = take_string(fn(acc.get()));
    std::ofstream f(path, std::ios::binary);
    f << body;
    if (!f) {
      m.errors.push_back(std::string("cannot write ") + what + " '" + path + "'");
      return false;
    }
    m.outputs[what] = path;
    return true;
  };
  if (!dump(a.json_path, kner_stats_postpos_json, "json") ||
      !dump(a.tsv_path, kner_stats_postpos_tsv, "tsv") ||
      !dump(a.inventory_path, kner_stats_inventory_json, "inventory")) {
    m.write(manifest_path);
    return kExitIo;
  }
  m.write(manifest_path);
  return kExitOk;
}

/* ------------------------------------------------------------------ train */

struct TrainArgs {
  std::string in_path;
  std::string format = "morpheme";
  std::string template_path;
  std::string features = "word";
  std::string model_path;
  double l2 = 1e-4;
  unsigned epochs = 50;
  double lr = 0.5;
  unsigned batch = 8;
  std::uint64_t seed = 1;
  IoOpts io;
};

int run_train(const TrainArgs& a) {
  RunManifest m;
  m.command = "train";
  m.seed = a.seed;
  const std::string manifest_path = manifest_path_for(a.io, a.model_path);
  m.inputs = {{"in", a.in_path}, {"template", a.template_path}};
  m.outputs = {{"model", a.model_path}};
  m.config = {{"format", a.format},       {"mode", a.io.mode},
              {"labels", a.io.labels_path}, {"features", a.features},
              {"l2_strength", a.l2},      {"epochs", a.epochs},
              {"learning_rate", a.lr},    {"batch_size", a.batch},
              {"shuffle_seed", a.seed}};
  std::cout << "seed: " << a.seed << '\n';

  json config{{"l2_strength", a.l2},   {"epochs", a.epochs},
              {"learning_rate", a.lr}, {"batch_size", a.batch},
              {"shuffle_seed", a.seed}, {"features", a.features},
              {"mode", a.io.mode}};
  if (!a.io.labels_path.empty()) config["labels_path"] = a.io.labels_path;
  std::string config_str = config.dump();

  std::unique_ptr<kner_crf, CrfDel> model(kner_crf_train(
      a.in_path.c_str(), a.format.c_str(),
      a.template_path.empty() ? nullptr : a.template_path.c_str(),
      config_str.c_str()));
  if (!model) return fail_status(m, manifest_path);

  kner_status st = kner_crf_save(model.get(), a.model_path.c_str());
  if (st != KNER_OK) return fail(m, manifest_path, kner_last_error(), exit_code_for(st));

  json meta = json::parse(take_string(kner_crf_metadata_json(model.get())));
  m.read = m.converted = meta["stats"]["sentences"].get<std::size_t>();
  std::cout << "sentences: " << m.read << '\n'
            << "features: " << meta["features"].get<std::size_t>() << '\n'
            << "final epoch loss: " << meta["stats"]["epoch_loss"].back().get<double>()
            << '\n';
  m.write(manifest_path);
  return kExitOk;
}

/* -------------------------------------------------------------------- tag */

struct TagArgs {
  std::string model_path, in_path, out_path;
  std::string format = "morpheme";
  bool constrain = false;
  IoOpts io;
};

int run_tag(const TagArgs& a) {
  RunManifest m;
  m.command = "tag";
  const std::string manifest_path = manifest_path_for(a.io, a.out_path);
  m.inputs = {{"model", a.model_path}, {"in", a.in_path}};
  m.outputs = {{"out", a.out_path}};
  m.config = {{"format", a.format},
              {"mode", a.io.mode},
              {"labels", a.io.labels_path},
              {"constrain", a.constrain}};

  std::unique_ptr<kner_crf, CrfDel> model(kner_crf_load(a.model_path.c_str()));
  if (!model) return fail(m, manifest_path, kner_last_error(), kExitIo);
  Labels labels;
  if (!load_labels(a.io, labels)) {
    return fail(m, manifest_path, kner_last_error(), kExitIo);
  }
  Reader in(kner_reader_open(a.in_path.c_str(), a.format.c_str(),
                             a.io.mode.c_str(), labels.get()));
  if (!in) return fail(m, manifest_path, kner_last_error(), kExitIo);
  std::ofstream out(a.out_path, std::ios::binary);
  if (!out) return fail(m, manifest_path, "cannot write '" + a.out_path + "'", kExitIo);

  while (true) {
    Sentence s;
    int rc = read_next(in.get(), s);
    if (rc < 0) return fail(m, manifest_path, kner_last_error(), exit_code_for(static_cast<kner_status>(-rc)));
    if (rc == 0) break;
    ++m.read;
    kner_status st = kner_crf_tag(model.get(), s.get(), a.constrain ? 1 : 0);
    if (st != KNER_OK) return fail(m, manifest_path, kner_last_error(), exit_code_for(st));
    char* text = kner_sentence_to_string(s.get(), a.io.mode.c_str());
    if (!text) return fail_status(m, manifest_path);
    out << take_string(text);
    ++m.converted;
  }
  out.flush();
  if (!out) return fail(m, manifest_path, "failed writing '" + a.out_path + "'", kExitIo);
  m.write(manifest_path);
  return kExitOk;
}

/* ----------------------------------------------------------------- scheme */

struct SchemeArgs {
  std::string to;
  std::string in_path, out_path;
  std::string format = "morpheme";
  IoOpts io;
};

int run_scheme(const SchemeArgs& a) {
  RunManifest m;
  m.command = "scheme";
  const std::string manifest_path = manifest_path_for(a.io, a.out_path);
  m.inputs = {{"in", a.in_path}};
  m.outputs = {{"out", a.out_path}};
  m.config = {{"to", a.to},
              {"format", a.format},
              {"mode", a.io.mode},
              {"labels", a.io.labels_path}};

  Labels labels;
  if (!load_labels(a.io, labels)) {
    return fail(m, manifest_path, kner_last_error(), kExitIo);
  }
  Reader in(kner_reader_open(a.in_path.c_str(), a.format.c_str(),
                             a.io.mode.c_str(), labels.get()));
  if (!in) return fail(m, manifest_path, kner_last_error(), kExitIo);
  std::ofstream out(a.out_path, std::ios::binary);
  if (!out) return fail(m, manifest_path, "cannot write '" + a.out_path + "'", kExitIo);

  while (true) {
    Sentence s;
    int rc = read_next(in.get(), s);
    if (rc < 0) return fail(m, manifest_path, kner_last_error(), exit_code_for(static_cast<kner_status>(-rc)));
    if (rc == 0) break;
    ++m.read;
    kner_sentence* converted = nullptr;
    kner_status st = kner_scheme_convert(s.get(), a.to.c_str(), &converted);
    if (st != KNER_OK) return fail(m, manifest_path, kner_last_error(), exit_code_for(st));
    Sentence owned(converted);
    char* text = kner_sentence_to_string(owned.get(), a.io.mode.c_str());
    if (!text) return fail_status(m, manifest_path);
    out << take_string(text);
    ++m.converted;
  }
  out.flush();
  if (!out) return fail(m, manifest_path, "failed writing '" + a.out_path + "'", kExitIo);
  m.write(manifest_path);
  return kExitOk;
}

/* --------------------------------------------------------------- validate */

struct ValidateArgs {
  std::string in_path;
  std::string format = "morpheme";
  std::string scheme = "bio";
  IoOpts io;
};

int run_validate(const ValidateArgs& a) {
  RunManifest m;
  m.command = "validate";
  const std::string manifest_path = manifest_path_for(a.io, a.in_path);
  m.inputs = {{"in", a.in_path}};
  m.config = {{"format", a.format},
              {"mode", a.io.mode},
              {"labels", a.io.labels_path},
              {"scheme", a.scheme}};

  Labels labels;
  if (!load_labels(a.io, labels)) {
    return fail(m, manifest_path, kner_last_error(), kExitIo);
  }
  Reader in(kner_reader_open(a.in_path.c_str(), a.format.c_str(),
                             a.io.mode.c_str(), labels.get()));
  if (!in) return fail(m, manifest_path, kner_last_error(), kExitIo);

  std::size_t violation_count = 0;
  while (true) {
    Sentence s;
    int rc = read_next(in.get(), s);
    if (rc < 0) return fail(m, manifest_path, kner_last_error(), exit_code_for(static_cast<kner_status>(-rc)));
    if (rc == 0) break;
    ++m.read;
    char* raw = nullptr;
    kner_status st = kner_validate_tags(s.get(), a.scheme.c_str(), &raw);
    if (st != KNER_OK) return fail(m, manifest_path, kner_last_error(), exit_code_for(st));
    json violations = json::parse(take_string(raw));
    if (violations.empty()) {
      ++m.converted;
      continue;
    }
    ++m.skipped;
    for (const auto& v : violations) {
      ++violation_count;
      std::string line = "sentence " + std::to_string(m.read) + " token " +
                         std::to_string(v["index"].get<std::size_t>() + 1) +
                         ": " + v["message"].get<std::string>();
      std::cout << line << '\n';
      m.errors.push_back(line);
    }
  }

  std::cout << "checked " << m.read << " sentences, " << violation_count
            << " violations\n";
  m.write(manifest_path);
  return violation_count == 0 ? kExitOk : kExitFormat;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"morpheme-level Korean NER corpus toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kner_version()));

  ConvertArgs conv;
  CLI::App* c = app.add_subcommand("convert", "convert annotations between granularities");
  c->add_option("--from", conv.from, "source format")
      ->required()
      ->check(CLI::IsMember({"eojeol", "syllable", "morpheme"}));
  c->add_option("--to", conv.to, "target format")
      ->required()
      ->check(CLI::IsMember({"eojeol", "syllable", "morpheme"}));
  c->add_option("--ner", conv.ner_path, "NER-annotated source file (forward)");
  c->add_option("--in", conv.in_path, "morpheme CoNLL-U input (backward)");
  c->add_option("--morph", conv.morph_path, "paired morpheme CoNLL-U file (forward)");
  c->add_option("-o,--out", conv.out_path, "output file")->required();
  c->add_option("--out-mode", conv.out_mode, "CoNLL-U mode for output (default: --mode)");
  c->add_option("--skipped", conv.skipped_path, "skipped-sentence log path");
  c->add_option("--jobs", conv.io.jobs, "worker threads for conversion")
      ->check(CLI::Range(1u, 256u));
  add_mode_option(c, conv.io);
  add_labels_option(c, conv.io);
  add_manifest_option(c, conv.io);

  EvalArgs ev;
  CLI::App* e = app.add_subcommand("eval", "entity-level precision/recall/F1");
  e->add_option("--gold", ev.gold_path, "gold annotations")->required();
  e->add_option("--pred", ev.pred_path, "predicted annotations")->required();
  e->add_option("--format", ev.format, "annotation format of both files")
      ->check(CLI::IsMember({"eojeol", "syllable", "morpheme"}));
  e->add_option("--back-convert", ev.back_convert,
                "treat pred as morpheme CoNLL-U, score after converting back")
      ->check(CLI::IsMember({"eojeol", "syllable"}));
  e->add_option("--report", ev.report_path, "JSON report path");
  add_mode_option(e, ev.io);
  add_labels_option(e, ev.io);
  add_manifest_option(e, ev.io);

  StatsArgs st;
  CLI::App* s = app.add_subcommand("stats", "corpus statistics (postposition table)");
  s->add_option("--in", st.in_path, "morpheme CoNLL-U corpus")->required();
  s->add_option("--json", st.json_path, "write distribution as JSON");
  s->add_option("--tsv", st.tsv_path, "write distribution as plot-ready TSV");
  s->add_option("--inventory", st.inventory_path, "write label inventory JSON");
  add_mode_option(s, st.io);
  add_labels_option(s, st.io);
  add_manifest_option(s, st.io);

  TrainArgs tr;
  CLI::App* t = app.add_subcommand("train", "train the baseline CRF tagger");
  t->add_option("--in", tr.in_path, "training corpus")->required();
  t->add_option("--format", tr.format, "corpus format")
      ->check(CLI::IsMember({"morpheme", "eojeol"}));
  t->add_option("--template", tr.template_path, "feature template file");
  t->add_option("--features", tr.features, "built-in feature set")
      ->check(CLI::IsMember({"word", "word+upos", "word+upos+xpos"}));
  t->add_option("-o,--out", tr.model_path, "model output path")->required();
  t->add_option("--l2", tr.l2, "L2 regularization strength");
  t->add_option("--epochs", tr.epochs, "training epochs");
  t->add_option("--lr", tr.lr, "learning rate");
  t->add_option("--batch", tr.batch, "minibatch size");
  t->add_option("--seed", tr.seed, "shuffle seed (printed for reproducibility)");
  add_mode_option(t, tr.io);
  add_labels_option(t, tr.io);
  add_manifest_option(t, tr.io);

  TagArgs tg;
  CLI::App* g = app.add_subcommand("tag", "tag a corpus with a trained model");
  g->add_option("--model", tg.model_path, "trained model file")->required();
  g->add_option("--in", tg.in_path, "input corpus")->required();
  g->add_option("--format", tg.format, "corpus format")
      ->check(CLI::IsMember({"morpheme", "eojeol"}));
  g->add_option("-o,--out", tg.out_path, "output file")->required();
  g->add_flag("--constrain", tg.constrain, "forbid invalid tag transitions at decode");
  add_mode_option(g, tg.io);
  add_labels_option(g, tg.io);
  add_manifest_option(g, tg.io);

  SchemeArgs sc;
  CLI::App* h = app.add_subcommand("scheme", "convert between BIO and BIOES");
  h->add_option("--to", sc.to, "target scheme")
      ->required()
      ->check(CLI::IsMember({"bio", "bioes"}));
  h->add_option("--in", sc.in_path, "input file")->required();
  h->add_option("--format", sc.format, "annotation format")
      ->check(CLI::IsMember({"eojeol", "syllable", "morpheme"}));
  h->add_option("-o,--out", sc.out_path, "output file")->required();
  add_mode_option(h, sc.io);
  add_labels_option(h, sc.io);
  add_manifest_option(h, sc.io);

  ValidateArgs va;
  CLI::App* v = app.add_subcommand("validate", "check structure and tag sequences");
  v->add_option("--in", va.in_path, "input file")->required();
  v->add_option("--format", va.format, "annotation format")
      ->check(CLI::IsMember({"eojeol", "syllable", "morpheme"}));
  v->add_option("--scheme", va.scheme, "tag scheme to validate against")
      ->check(CLI::IsMember({"bio", "bioes"}));
  add_mode_option(v, va.io);
  add_labels_option(v, va.io);
  add_manifest_option(v, va.io);

  CLI11_PARSE(app, argc, argv);

  if (c->parsed()) {
    const bool forward = conv.from != "morpheme" && conv.to == "morpheme";
    if (forward && (conv.ner_path.empty() || conv.morph_path.empty())) {
      std::cerr << "error: forward conversion needs --ner and --morph\n";
      return 1;
    }
    if (!forward && conv.in_path.empty()) {
      std::cerr << "error: conversion from morpheme needs --in\n";
      return 1;
    }
    return run_convert(conv);
  }
  if (e->parsed()) return run_eval(ev);
  if (s->parsed()) return run_stats(st);
  if (t->parsed()) return run_train(tr);
  if (g->parsed()) return run_tag(tg);
  if (h->parsed()) return run_scheme(sc);
  if (v->parsed()) return run_validate(va);
  return 1;
}
