// kner -- morpheme-level Korean NER corpus toolkit
//
// C binding. Exceptions stop here: every entry point catches, stashes the
// message in a thread-local slot and returns a status (or NULL).
#include "kner.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "kner/conllu.hpp"
#include "kner/convert.hpp"
#include "kner/crf.hpp"
#include "kner/evaluate.hpp"
#include "kner/formats.hpp"
#include "kner/stats.hpp"
#include "kner/tagset.hpp"

namespace {

thread_local std::string g_last_error;

kner_status map_kind(kner::ErrorKind kind) {
  using EK = kner::ErrorKind;
  switch (kind) {
    case EK::Io: return KNER_ERR_IO;
    case EK::Parse: return KNER_ERR_PARSE;
    case EK::Structure: return KNER_ERR_STRUCTURE;
    case EK::Vocab: return KNER_ERR_VOCAB;
    case EK::Align: return KNER_ERR_ALIGN;
    case EK::Granularity: return KNER_ERR_GRANULARITY;
    case EK::Mismatch: return KNER_ERR_MISMATCH;
    case EK::Validation: return KNER_ERR_VALIDATION;
    case EK::InvalidArg: return KNER_ERR_INVALID_ARG;
    case EK::Internal: return KNER_ERR_INTERNAL;
  }
  return KNER_ERR_INTERNAL;
}

kner_status record(const std::exception& e) {
  if (const auto* err = dynamic_cast<const kner::Error*>(&e)) {
    g_last_error = err->what();
    return map_kind(err->kind());
  }
  g_last_error = e.what();
  return KNER_ERR_INTERNAL;
}

kner_status invalid(const std::string& msg) {
  g_last_error = msg;
  return KNER_ERR_INVALID_ARG;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

enum class Format { Morpheme, Eojeol, Syllable };

bool parse_format(const char* s, Format* out) {
  if (!s) return false;
  std::string_view v(s);
  if (v == "morpheme") *out = Format::Morpheme;
  else if (v == "eojeol") *out = Format::Eojeol;
  else if (v == "syllable") *out = Format::Syllable;
  else return false;
  return true;
}

bool parse_mode(const char* s, kner::ConlluMode* out) {
  if (!s) {
    *out = kner::ConlluMode::Canonical;
    return true;
  }
  auto m = kner::conllu_mode_from_string(s);
  if (!m) return false;
  *out = *m;
  return true;
}

}  // namespace

struct kner_labelset {
  kner::LabelSet set;
};

struct kner_sentence {
  std::variant<kner::MorphSentence, kner::EojeolSentence, kner::SyllableSentence>
      data;

  Format format() const { return static_cast<Format>(data.index()); }
  const kner::MorphSentence& morph() const {
    return std::get<kner::MorphSentence>(data);
  }
};

struct kner_reader {
  std::ifstream file;
  Format format = Format::Morpheme;
  std::unique_ptr<kner::ConlluReader> conllu;
  std::unique_ptr<kner::EojeolReader> eojeol;
  std::unique_ptr<kner::SyllableReader> syllable;
};

struct kner_writer {
  std::ofstream file;
  std::string path;
  Format format = Format::Morpheme;
  kner::ConlluMode mode = kner::ConlluMode::Canonical;
};

struct kner_eval {
  kner::Evaluator ev;
};

struct kner_stats {
  kner::StatsAccumulator acc;
};

struct kner_crf {
  kner::CrfModel model;
};

extern "C" {

const char* kner_version(void) { return "0.1.0"; }

const char* kner_last_error(void) { return g_last_error.c_str(); }

void kner_str_free(char* s) { std::free(s); }

/* ------------------------------------------------------------------ labels */

kner_labelset* kner_labelset_default(void) {
  return new kner_labelset{kner::LabelSet::default_set()};
}

kner_labelset* kner_labelset_load(const char* path) {
  try {
    if (!path) {
      invalid("null path");
      return nullptr;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw kner::io_error(std::string("cannot read '") + path + "'");
    auto set = kner::LabelSet::load(in);
    if (set.size() == 0) {
      throw kner::parse_error(std::string("label file '") + path +
                              "' has no labels");
    }
    return new kner_labelset{std::move(set)};
  } catch (const std::exception& e) {
    record(e);
    return nullptr;
  }
}

int kner_labelset_size(const kner_labelset* ls) {
  return ls ? static_cast<int>(ls->set.size()) : 0;
}

void kner_labelset_free(kner_labelset* ls) { delete ls; }

/* ---------------------------------------------------------------- corpora */

kner_reader* kner_reader_open(const char* path, const char* format,
                              const char* mode, const kner_labelset* labels) {
  try {
    Format fmt;
    if (!path || !parse_format(format, &fmt)) {
      invalid("bad path or format");
      return nullptr;
    }
    kner::ConlluMode cmode;
    if (!parse_mode(mode, &cmode)) {
      invalid(std::string("unknown mode '") + mode + "'");
      return nullptr;
    }
    auto r = std::make_unique<kner_reader>();
    r->file.open(path, std::ios::binary);
    if (!r->file) {
      throw kner::io_error(std::string("cannot read '") + path + "'");
    }
    r->format = fmt;
    kner::LabelSet ls =
        labels ? labels->set : kner::LabelSet::default_set();
    switch (fmt) {
      case Format::Morpheme: {
        kner::ConlluOptions opt;
        opt.mode = cmode;
        opt.labels = std::move(ls);
        r->conllu = std::make_unique<kner::ConlluReader>(r->file, std::move(opt));
        break;
      }
      case Format::Eojeol:
        r->eojeol = std::make_unique<kner::EojeolReader>(
            r->file, kner::TsvOptions{std::move(ls)});
        break;
      case Format::Syllable:
        r->syllable = std::make_unique<kner::SyllableReader>(
            r->file, kner::TsvOptions{std::move(ls)});
        break;
    }
    return r.release();
  } catch (const std::exception& e) {
    record(e);
    return nullptr;
  }
}

int kner_reader_next(kner_reader* r, kner_sentence** out) {
  if (!r || !out) return -invalid("null argument");
  try {
    switch (r->format) {
      case Format::Morpheme: {
        auto s = r->conllu->next();
        if (!s) return 0;
        *out = new kner_sentence{std::move(*s)};
        return 1;
      }
      case Format::Eojeol: {
        auto s = r->eojeol->next();
        if (!s) return 0;
        *out = new kner_sentence{std::move(*s)};
        return 1;
      }
      case Format::Syllable: {
        auto s = r->syllable->next();
        if (!s) return 0;
        *out = new kner_sentence{std::move(*s)};
        return 1;
      }
    }
    return -KNER_ERR_INTERNAL;
  } catch (const std::exception& e) {
    return -record(e);
  }
}

void kner_reader_free(kner_reader* r) { delete r; }

kner_writer* kner_writer_open(const char* path, const char* format,
                              const char* mode) {
  try {
    Format fmt;
    if (!path || !parse_format(format, &fmt)) {
      invalid("bad path or format");
      return nullptr;
    }
    kner::ConlluMode cmode;
    if (!parse_mode(mode, &cmode)) {
      invalid(std::string("unknown mode '") + mode + "'");
      return nullptr;
    }
    auto w = std::make_unique<kner_writer>();
    w->file.open(path, std::ios::binary);
    if (!w->file) {
      throw kner::io_error(std::string("cannot write '") + path + "'");
    }
    w->path = path;
    w->format = fmt;
    w->mode = cmode;
    return w.release();
  } catch (const std::exception& e) {
    record(e);
    return nullptr;
  }
}

kner_status kner_writer_write(kner_writer* w, const kner_sentence* s) {
  if (!w || !s) return invalid("null argument");
  try {
    if (s->format() != w->format) {
      return invalid("sentence format does not match writer");
    }
    switch (w->format) {
      case Format::Morpheme:
        kner::write_conllu(w->file, s->morph(), w->mode);
        break;
      case Format::Eojeol:
        kner::write_eojeol(w->file, std::get<kner::EojeolSentence>(s->data));
        break;
      case Format::Syllable:
        kner::write_syllable(w->file,
                             std::get<kner::SyllableSentence>(s->data));
        break;
    }
    if (!w->file) {
      throw kner::io_error("failed writing '" + w->path + "'");
    }
    return KNER_OK;
  } catch (const std::exception& e) {
    return record(e);
  }
}

kner_status kner_writer_close(kner_writer* w) {
  if (!w) return invalid("null argument");
  kner_status st = KNER_OK;
  w->file.flush();
  if (!w->file) {
    g_last_error = "failed writing '" + w->path + "'";
    st = KNER_ERR_IO;
  }
  delete w;
  return st;
}

/* -------------------------------------------------------------- sentences */

const char* kner_sentence_format(const kner_sentence* s) {
  if (!s) return "";
  switch (s->format()) {
    case Format::Morpheme: return "morpheme";
    case Format::Eojeol: return "eojeol";
    case Format::Syllable: return "syllable";
  }
  return "";
}

int kner_sentence_length(const kner_sentence* s) {
  if (!s) return 0;
  switch (s->format()) {
    case Format::Morpheme:
      return static_cast<int>(s->morph().token_count());
    case Format::Eojeol:
      return static_cast<int>(std::get<kner::EojeolSentence>(s->data).rows.size());
    case Format::Syllable:
      return static_cast<int>(
          std::get<kner::SyllableSentence>(s->data).content_tags().size());
  }
  return 0;
}

char* kner_sentence_to_string(const kner_sentence* s, const char* mode) {
  if (!s) {
    invalid("null sentence");
    return nullptr;
  }
  try {
    kner::ConlluMode cmode;
    if (!parse_mode(mode, &cmode)) {
      invalid(std::string("unknown mode '") + mode + "'");
      return nullptr;
    }
    std::ostringstream out;
    switch (s->format()) {
      case Format::Morpheme:
        kner::write_conllu(out, s->morph(), cmode);
        break;
      case Format::Eojeol:
        kner::write_eojeol(out, std::get<kner::EojeolSentence>(s->data));
        break;
      case Format::Syllable:
        kner::write_syllable(out, std::get<kner::SyllableSentence>(s->data));
        break;
    }
    return dup_string(out.str());
  } catch (const std::exception& e) {
    record(e);
    return nullptr;
  }
}

kner_sentence* kner_sentence_from_string(const char* text, const char* format,
                                         const char* mode,
                                         const kner_labelset* labels) {
  try {
    Format fmt;
    if (!text || !parse_format(format, &fmt)) {
      invalid("bad text or format");
      return nullptr;
    }
    kner::ConlluMode cmode;
    if (!parse_mode(mode, &cmode)) {
      invalid(std::string("unknown mode '") + mode + "'");
      return nullptr;
    }
    kner::LabelSet ls = labels ? labels->set : kner::LabelSet::default_set();
    std::istringstream in{std::string(text)};
    switch (fmt) {
      case Format::Morpheme: {
        kner::ConlluOptions opt;
        opt.mode = cmode;
        opt.labels = std::move(ls);
        kner::ConlluReader reader(in, std::move(opt));
        auto s = reader.next();
        if (!s) throw kner::parse_error("no sentence in input");
        return new kner_sentence{std::move(*s)};
      }
      case Format::Eojeol: {
        kner::EojeolReader reader(in, kner::TsvOptions{std::move(ls)});
        auto s = reader.next();
        if (!s) throw kner::parse_error("no sentence in input");
        return new kner_sentence{std::move(*s)};
      }
      case Format::Syllable: {
        kner::SyllableReader reader(in, kner::TsvOptions{std::move(ls)});
        auto s = reader.next();
        if (!s) throw kner::parse_error("no sentence in input");
        return new kner_sentence{std::move(*s)};
      }
    }
    return nullptr;
  } catch (const std::exception& e) {
    record(e);
    return nullptr;
  }
}

kner_sentence* kner_sentence_clone(const kner_sentence* s) {
  return s ? new kner_sentence{*s} : nullptr;
}

void kner_sentence_free(kner_sentence* s) { delete s; }

/* ------------------------------------------------------------- conversion */

kner_status kner_convert_forward(const kner_sentence* ner,
                                 const kner_sentence* morph,
                                 kner_sentence** out) {
  if (!ner || !morph || !out) return invalid("null argument");
  try {
    if (morph->format() != Format::Morpheme) {
      return invalid("second argument must be a morpheme sentence");
    }
    switch (ner->format()) {
      case Format::Eojeol:
        *out = new kner_sentence{kner::eoj2morph(
            std::get<kner::EojeolSentence>(ner->data), morph->morph())};
        return KNER_OK;
      case Format::Syllable:
        *out = new kner_sentence{kner::syl2morph(
            std::get<kner::SyllableSentence>(ner->data), morph->morph())};
        return KNER_OK;
      case Format::Morpheme:
        return invalid("ner sentence must be eojeol or syllable");
    }
    return KNER_ERR_INTERNAL;
  } catch (const std::exception& e) {
    return record(e);
  }
}

kner_status kner_convert_back(const kner_sentence* morph, const char* target,
                              kner_sentence** out) {
  if (!morph || !out) return invalid("null argument");
  try {
    if (morph->format() != Format::Morpheme) {
      return invalid("input must be a morpheme sentence");
    }
    Format fmt;
    if (!parse_format(target, &fmt) || fmt == Format::Morpheme) {
      return invalid("target must be 'eojeol' or 'syllable'");
    }
    if (fmt == Format::Eojeol) {
      *out = new kner_sentence{kner::morph2eoj(morph->morph())};
    } else {
      *out = new kner_sentence{kner::morph2syl(morph->morph())};
    }
    return KNER_OK;
  } catch (const std::exception& e) {
    return record(e);
  }
}

/* ------------------------------------------------------------ tag algebra */

namespace {

std::vector<kner::NeTag> sentence_tags(const kner_sentence& s) {
  switch (s.format()) {
    case Format::Morpheme: return s.morph().ne_tags();
    case Format::Eojeol: return std::get<kner::EojeolSentence>(s.data).tags();
    case Format::Syllable:
      return std::get<kner::SyllableSentence>(s.data).content_tags();
  }
  return {};
}

void replace_tags(kner_sentence& s, const std::vector<kner::NeTag>& tags) {
  switch (s.format()) {
    case Format::Morpheme:
      std::get<kner::MorphSentence>(s.data).set_ne_tags(tags);
      return;
    case Format::Eojeol: {
      auto& rows = std::get<kner::EojeolSentence>(s.data).rows;
      if (rows.size() != tags.size()) {
        throw kner::Error(kner::ErrorKind::InvalidArg, "tag count mismatch");
      }
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i].tag = tags[i];
      return;
    }
    case Format::Syllable: {
      auto& rows = std::get<kner::SyllableSentence>(s.data).rows;
      std::size_t k = 0;
      for (auto& row : rows) {
        if (row.is_space()) continue;
        if (k >= tags.size()) {
          throw kner::Error(kner::ErrorKind::InvalidArg, "tag count mismatch");
        }
        row.tag = tags[k++];
      }
      if (k != tags.size()) {
        throw kner::Error(kner::ErrorKind::InvalidArg, "tag count mismatch");
      }
      return;
    }
  }
}

}  // namespace

kner_status kner_scheme_convert(const kner_sentence* s, const char* to,
                                kner_sentence** out) {
  if (!s || !out) return invalid("null argument");
  try {
    auto scheme = to ? kner::scheme_from_string(to) : std::nullopt;
    if (!scheme) return invalid("target scheme must be 'bio' or 'bioes'");
    std::vector<kner::NeTag> tags = sentence_tags(*s);
    std::vector<kner::NeTag> converted = *scheme == kner::Scheme::BIOES
                                             ? kner::bio_to_bioes(tags)
                                             : kner::bioes_to_bio(tags);
    auto result = std::make_unique<kner_sentence>(*s);
    replace_tags(*result, converted);
    *out = result.release();
    return KNER_OK;
  } catch (const std::exception& e) {
    return record(e);
  }
}

kner_status kner_validate_tags(const kner_sentence* s, const char* scheme,
                               char** violations_json) {
  if (!s || !violations_json) return invalid("null argument");
  try {
    auto sch = scheme ? kner::scheme_from_string(scheme)
                      : std::optional(kner::Scheme::BIO);
    if (!sch) return invalid("scheme must be 'bio' or 'bioes'");
    std::vector<kner::NeTag> tags = sentence_tags(*s);
    nlohmann::json arr = nlohmann::json::array();
    for (const kner::TagViolation& v : kner::validate_sequence(tags, *sch)) {
      arr.push_back({{"index", v.index}, {"message", v.message}});
    }
    *violations_json = dup_string(arr.dump());
    return KNER_OK;
  } catch (const std::exception& e) {
    return record(e);
  }
}

/* ------------------------------------------------------------- evaluation */

kner_eval* kner_eval_new(void) { return new kner_eval; }

kner_status kner_eval_add(kner_eval* ev, const kner_sentence* gold,
                          const kner_sentence* pred) {
  if (!ev || !gold || !pred) return invalid("null argument");
  try {
    if (gold->format() != pred->format()) {
      return invalid("gold and pred sentences have different formats");
    }
    ev->ev.add(sentence_tags(*gold), sentence_tags(*pred));
    return KNER_OK;
  } catch (const std::exception& e) {
    return record(e);
  }
}

void kner_eval_add_excluded(kner_eval* ev, int count) {
  if (ev && count > 0) ev->ev.add_excluded(static_cast<std::size_t>(count));
}

char* kner_eval_report_text(const kner_eval* ev) {
  return ev ? dup_string(ev->ev.report().to_text()) : nullptr;
}

char* kner_eval_report_json(const kner_eval* ev) {
  return ev ? dup_string(ev->ev.report().to_json()) : nullptr;
}

void kner_eval_free(kner_eval* ev) { delete ev; }

/* -------------------------------------------------------------- statistics */

kner_stats* kner_stats_new(void) { return new kner_stats; }

kner_status kner_stats_add(kner_stats* st, const kner_sentence* s) {
  if (!st || !s) return invalid("null argument");
  try {
    if (s->format() != Format::Morpheme) {
      return invalid("statistics need morpheme sentences");
    }
    st->acc.add(s->morph());
    return KNER_OK;
  } catch (const std::exception& e) {
    return record(e);
  }
}

char* kner_stats_postpos_text(const kner_stats* st) {
  if (!st) return nullptr;
  try {
    return dup_string(st->acc.postpos().to_text());
  } catch (const std::exception& e) {
    record(e);
    return nullptr;
  }
}

char* kner_stats_postpos_json(const kner_stats* st) {
  if (!st) return nullptr;
  try {
    return dup_string(st->acc.postpos().to_json());
  } catch (const std::exception& e) {
    record(e);
    return nullptr;
  }
}

char* kner_stats_postpos_tsv(const kner_stats* st) {
  if (!st) return nullptr;
  try {
    return dup_string(st->acc.postpos().to_plot_tsv());
  } catch (const std::exception& e) {
    record(e);
    return nullptr;
  }
}

char* kner_stats_inventory_json(const kner_stats* st) {
  if (!st) return nullptr;
  try {
    return dup_string(kner::label_inventory_json(st->acc.label_inventory()));
  } catch (const std::exception& e) {
    record(e);
    return nullptr;
  }
}

void kner_stats_free(kner_stats* st) { delete st; }

/* ------------------------------------------------------------------- CRF */

kner_crf* kner_crf_train(const char* corpus_path, const char* format,
                         const char* template_path, const char* config_json) {
  try {
    Format fmt;
    if (!corpus_path || !parse_format(format, &fmt) ||
        fmt == Format::Syllable) {
      invalid("training needs a 'morpheme' or 'eojeol' corpus");
      return nullptr;
    }

    kner::TrainConfig config;
    std::string features = "word";
    const char* mode = nullptr;
    std::string mode_store, labels_path;
    if (config_json) {
      nlohmann::json j = nlohmann::json::parse(config_json, nullptr, false);
      if (j.is_discarded() || !j.is_object()) {
        invalid("config must be a JSON object");
        return nullptr;
      }
      config.l2_strength = j.value("l2_strength", config.l2_strength);
      config.epochs = j.value("epochs", config.epochs);
      config.learning_rate = j.value("learning_rate", config.learning_rate);
      config.shuffle_seed = j.value("shuffle_seed", config.shuffle_seed);
      config.batch_size = j.value("batch_size", config.batch_size);
      features = j.value("features", features);
      mode_store = j.value("mode", std::string());
      if (!mode_store.empty()) mode = mode_store.c_str();
      labels_path = j.value("labels_path", std::string());
    }

    kner::FeatureTemplate tmpl;
    if (template_path) {
      std::ifstream in(template_path, std::ios::binary);
      if (!in) {
        throw kner::io_error(std::string("cannot read template '") +
                             template_path + "'");
      }
      std::ostringstream text;
      text << in.rdbuf();
      tmpl = kner::FeatureTemplate::parse(text.str());
    } else if (features == "word") {
      tmpl = kner::FeatureTemplate::word_context();
    } else if (features == "word+upos") {
      tmpl = kner::FeatureTemplate::word_pos_context(true, false);
    } else if (features == "word+upos+xpos") {
      tmpl = kner::FeatureTemplate::word_pos_context(true, true);
    } else {
      invalid("unknown feature set '" + features + "'");
      return nullptr;
    }

    std::unique_ptr<kner_labelset> labels;
    if (!labels_path.empty()) {
      labels.reset(kner_labelset_load(labels_path.c_str()));
      if (!labels) return nullptr;
    }

    std::unique_ptr<kner_reader, decltype(&kner_reader_free)> reader(
        kner_reader_open(corpus_path, format, mode, labels.get()),
        kner_reader_free);
    if (!reader) return nullptr;

    std::vector<kner::CrfInstance> corpus;
    while (true) {
      kner_sentence* raw = nullptr;
      int rc = kner_reader_next(reader.get(), &raw);
      if (rc == 0) break;
      if (rc < 0) return nullptr;
      std::unique_ptr<kner_sentence> s(raw);
      if (fmt == Format::Morpheme) {
        corpus.push_back(kner::to_instance(s->morph()));
      } else {
        corpus.push_back(
            kner::to_instance(std::get<kner::EojeolSentence>(s->data)));
      }
    }

    return new kner_crf{kner::train(corpus, tmpl, config)};
  } catch (const std::exception& e) {
    record(e);
    return nullptr;
  }
}

kner_crf* kner_crf_load(const char* path) {
  try {
    if (!path) {
      invalid("null path");
      return nullptr;
    }
    return new kner_crf{kner::load_model(path)};
  } catch (const std::exception& e) {
    record(e);
    return nullptr;
  }
}

kner_status kner_crf_save(const kner_crf* model, const char* path) {
  if (!model || !path) return invalid("null argument");
  try {
    kner::save_model(model->model, path);
    return KNER_OK;
  } catch (const std::exception& e) {
    return record(e);
  }
}

char* kner_crf_metadata_json(const kner_crf* model) {
  if (!model) return nullptr;
  try {
    const kner::CrfModel& m = model->model;
    nlohmann::json j{
        {"labels", m.labels()},
        {"features", m.feature_count()},
        {"dimensions", m.weights().size()},
        {"config",
         {{"l2_strength", m.config().l2_strength},
          {"epochs", m.config().epochs},
          {"learning_rate", m.config().learning_rate},
          {"shuffle_seed", m.config().shuffle_seed},
          {"batch_size", m.config().batch_size}}},
        {"stats",
         {{"sentences", m.summary().sentences},
          {"epoch_loss", m.summary().epoch_loss},
          {"loss_nonincreasing", m.summary().loss_nonincreasing}}}};
    return dup_string(j.dump(2));
  } catch (const std::exception& e) {
    record(e);
    return nullptr;
  }
}

kner_status kner_crf_tag(const kner_crf* model, kner_sentence* s,
                         int constrain) {
  if (!model || !s) return invalid("null argument");
  try {
    kner::CrfInstance inst;
    switch (s->format()) {
      case Format::Morpheme:
        inst = kner::to_instance(s->morph());
        break;
      case Format::Eojeol:
        inst = kner::to_instance(std::get<kner::EojeolSentence>(s->data));
        break;
      case Format::Syllable:
        return invalid("tagging syllable sentences is not supported");
    }
    kner::DecodeOptions opt;
    opt.constrain = constrain != 0;
    std::vector<std::string> labels = kner::decode(model->model, inst, opt);
    std::vector<kner::NeTag> tags;
    tags.reserve(labels.size());
    for (const std::string& label : labels) {
      auto t = kner::NeTag::parse(label);
      if (!t) {
        throw kner::Error(kner::ErrorKind::Internal,
                          "model produced non-NE label '" + label + "'");
      }
      tags.push_back(std::move(*t));
    }
    replace_tags(*s, tags);
    return KNER_OK;
  } catch (const std::exception& e) {
    return record(e);
  }
}

void kner_crf_free(kner_crf* model) { delete model; }

}  // extern "C"
