/* kner -- morpheme-level Korean NER corpus toolkit
 *
 * C interface to the kner shared library. All state lives behind opaque
 * handles; every fallible call reports a kner_status and leaves a
 * human-readable message in kner_last_error() (thread-local). Strings
 * returned as char* are owned by the caller and released with
 * kner_str_free().
 *
 * Formats are named by string throughout: "eojeol", "syllable", "morpheme".
 * CoNLL-U modes: "canonical" (10 columns, NE in MISC) and "figure2-compat"
 * (7 columns, NE as its own column).
 */
#ifndef KNER_H_
#define KNER_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kner_status {
  KNER_OK = 0,
  KNER_ERR_IO = 1,          /* file unreadable/unwritable */
  KNER_ERR_PARSE = 2,       /* malformed input line */
  KNER_ERR_STRUCTURE = 3,   /* ids/spans/text broken */
  KNER_ERR_VOCAB = 4,       /* tag outside the configured inventory */
  KNER_ERR_ALIGN = 5,       /* streams disagree or contraction unalignable */
  KNER_ERR_GRANULARITY = 6, /* annotation not expressible in target format */
  KNER_ERR_MISMATCH = 7,    /* gold/pred counts differ */
  KNER_ERR_VALIDATION = 8,  /* tag sequence violates its scheme */
  KNER_ERR_INVALID_ARG = 9,
  KNER_ERR_INTERNAL = 10
} kner_status;

typedef struct kner_labelset kner_labelset;
typedef struct kner_sentence kner_sentence;
typedef struct kner_reader kner_reader;
typedef struct kner_writer kner_writer;
typedef struct kner_eval kner_eval;
typedef struct kner_stats kner_stats;
typedef struct kner_crf kner_crf;

const char* kner_version(void);

/* Message of the most recent failure on this thread; empty string if none. */
const char* kner_last_error(void);

void kner_str_free(char* s);

/* ------------------------------------------------------------------ labels */

kner_labelset* kner_labelset_default(void);
/* One label per line; '#' comments and blank lines ignored. NULL on error. */
kner_labelset* kner_labelset_load(const char* path);
int kner_labelset_size(const kner_labelset* ls);
void kner_labelset_free(kner_labelset* ls);

/* ---------------------------------------------------------------- corpora */

/* format: "eojeol" | "syllable" | "morpheme".
 * mode: CoNLL-U mode for "morpheme", ignored otherwise; NULL = canonical.
 * labels: NULL = default 14-label set. NULL return on error. */
kner_reader* kner_reader_open(const char* path, const char* format,
                              const char* mode, const kner_labelset* labels);
/* 1 = sentence produced, 0 = end of input, negative kner_status on error. */
int kner_reader_next(kner_reader* r, kner_sentence** out);
void kner_reader_free(kner_reader* r);

kner_writer* kner_writer_open(const char* path, const char* format,
                              const char* mode);
kner_status kner_writer_write(kner_writer* w, const kner_sentence* s);
/* Flushes, closes and frees the writer (also on failure). */
kner_status kner_writer_close(kner_writer* w);

/* -------------------------------------------------------------- sentences */

const char* kner_sentence_format(const kner_sentence* s);
/* Token count: morpheme rows, eojeol rows, or non-space syllable rows. */
int kner_sentence_length(const kner_sentence* s);
/* Serialized sentence, including the trailing blank line. mode as above. */
char* kner_sentence_to_string(const kner_sentence* s, const char* mode);
/* Parses the first sentence of text. NULL on error. */
kner_sentence* kner_sentence_from_string(const char* text, const char* format,
                                         const char* mode,
                                         const kner_labelset* labels);
kner_sentence* kner_sentence_clone(const kner_sentence* s);
void kner_sentence_free(kner_sentence* s);

/* ------------------------------------------------------------- conversion */

/* Projects eojeol- or syllable-level tags (ner) onto the matching morpheme
 * sentence (morph). */
kner_status kner_convert_forward(const kner_sentence* ner,
                                 const kner_sentence* morph,
                                 kner_sentence** out);
/* Maps a tagged morpheme sentence back to "eojeol" or "syllable". */
kner_status kner_convert_back(const kner_sentence* morph, const char* target,
                              kner_sentence** out);

/* ------------------------------------------------------------ tag algebra */

/* to: "bio" | "bioes". Tags must be valid under the source scheme. */
kner_status kner_scheme_convert(const kner_sentence* s, const char* to,
                                kner_sentence** out);
/* JSON array of {index, message}; empty array when valid. */
kner_status kner_validate_tags(const kner_sentence* s, const char* scheme,
                               char** violations_json);

/* ------------------------------------------------------------- evaluation */

kner_eval* kner_eval_new(void);
/* Both sentences must be the same format and length. */
kner_status kner_eval_add(kner_eval* ev, const kner_sentence* gold,
                          const kner_sentence* pred);
void kner_eval_add_excluded(kner_eval* ev, int count);
char* kner_eval_report_text(const kner_eval* ev);
char* kner_eval_report_json(const kner_eval* ev);
void kner_eval_free(kner_eval* ev);

/* -------------------------------------------------------------- statistics */

kner_stats* kner_stats_new(void);
/* Morpheme sentences only; every token needs XPOS. */
kner_status kner_stats_add(kner_stats* st, const kner_sentence* s);
char* kner_stats_postpos_text(const kner_stats* st);
char* kner_stats_postpos_json(const kner_stats* st);
char* kner_stats_postpos_tsv(const kner_stats* st);
char* kner_stats_inventory_json(const kner_stats* st);
void kner_stats_free(kner_stats* st);

/* ------------------------------------------------------------------- CRF */

/* corpus_path/format as for kner_reader_open ("morpheme" or "eojeol").
 * template_path: NULL = built-in word window template.
 * config_json: NULL or a JSON object; recognized keys: "l2_strength",
 * "epochs", "learning_rate", "shuffle_seed", "batch_size", "features"
 * ("word" | "word+upos" | "word+upos+xpos"), "mode", "labels_path".
 * NULL on error. */
kner_crf* kner_crf_train(const char* corpus_path, const char* format,
                         const char* template_path, const char* config_json);
kner_crf* kner_crf_load(const char* path);
kner_status kner_crf_save(const kner_crf* model, const char* path);
/* Config snapshot, label alphabet, feature counts, loss curve. */
char* kner_crf_metadata_json(const kner_crf* model);
/* Replaces the sentence's tags with the decoded ones.
 * constrain: 0 = free decoding, 1 = forbid invalid BIO transitions. */
kner_status kner_crf_tag(const kner_crf* model, kner_sentence* s,
                         int constrain);
void kner_crf_free(kner_crf* model);

#ifdef __cplusplus
}
#endif

#endif /* KNER_H_ */
