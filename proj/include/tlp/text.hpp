// Copyright 2026 The tlp Authors
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

// Language-processing kernel behind the requirement-quality, sentiment and
// ticket-to-ticket similarity features.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tlp/common.hpp"

namespace tlp::text {

/// Coarse part of speech produced by a Tagger.
enum class Pos : std::uint8_t { Other, Noun, Verb };

struct TokenStream {
  std::vector<std::string> tokens;   // lower-case
  std::vector<std::string> surface;  // as written
  std::vector<std::size_t> sentence; // sentence index of each token
  std::size_t sentence_count = 0;
  std::string lowered;               // whole text, ASCII lower-cased
  // Filled by Tagger::annotate.
  std::vector<Pos> pos;
  std::vector<bool> entity;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

/// Words are maximal runs of ASCII letters/digits/underscore or non-ASCII
/// (UTF-8) bytes; sentences end at '.', '!' or '?' followed by whitespace
/// or end of text. Only sentences holding at least one word are counted.
TokenStream tokenize(std::string_view text);

struct SentimentWeight {
  double polarity = 0;      // [-1, 1]
  double subjectivity = 0;  // [0, 1]
};

/// Named phrase lists plus the sentiment table. Phrases are stored lower
/// case; list names: conditionals, continuances, imperatives, incompletes,
/// options, sources, weak_phrases, ambiguity, directives, determiners, verbs,
/// modals.
class LexiconSet {
 public:
  /// Bundled defaults.
  static const LexiconSet& defaults();
  /// Defaults extended with the lists of a JSON lexicon file (map name ->
  /// list of phrases; "sentiment" maps term -> [polarity, subjectivity]).
  static LexiconSet load(const std::filesystem::path& path);
  static LexiconSet from_json(std::string_view json_text, const LexiconSet& base);

  bool has(std::string_view name) const { return lists_.count(std::string(name)) != 0; }
  /// Throws InvalidArgument for an unknown list.
  const std::vector<std::string>& list(std::string_view name) const;
  const std::unordered_map<std::string, SentimentWeight>& sentiment() const { return sentiment_; }

  void add(std::string_view name, std::string_view phrase);
  void set_sentiment(std::string_view term, SentimentWeight weight);

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> lists_;
  std::unordered_map<std::string, SentimentWeight> sentiment_;
};

/// Counts non-overlapping phrase matches (longest match wins at a
/// position). Phrase edges made of word characters must sit on word
/// boundaries; other edges ("http://", ".xml") match anywhere.
std::size_t lexicon_count(std::string_view text, const LexiconSet& lexicons, std::string_view list_name);
std::size_t lexicon_count(const TokenStream& stream, const LexiconSet& lexicons, std::string_view list_name);

/// Lexicon-backed description attributes; together with the action count
/// they feed the risk level.
inline constexpr std::string_view kAttributeLists[] = {"conditionals", "continuances", "imperatives",
                                                       "incompletes",  "options",      "sources",
                                                       "weak_phrases"};

/// Sum of the individual counters.
std::size_t risk_level(std::span<const std::size_t> counters);

class UndefinedScore : public Error {
 public:
  using Error::Error;
};

/// Vowel-group heuristic with silent trailing 'e'; at least one syllable.
std::size_t count_syllables(std::string_view word);

/// 206.835 - 1.015 words/sentences - 84.6 syllables/words. Throws
/// UndefinedScore when the text holds no word.
double flesch_reading_ease(std::string_view text);
double flesch_reading_ease(const TokenStream& stream);

struct Sentiment {
  double polarity = 0;
  double subjectivity = 0;
};

/// Mean lexicon weights of the sentiment terms found; a preceding negator
/// flips and halves polarity. No hits gives (0, 0).
Sentiment sentiment(std::string_view text, const LexiconSet& lexicons = LexiconSet::defaults());

/// Pluggable coarse tagger: fills stream.pos and stream.entity.
class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual void annotate(TokenStream& stream) const = 0;
};

/// Baseline rule/lexicon tagger: determiner (+ optional modifier) followed
/// by a word marks a noun, known verb forms mark verbs, capitalized
/// non-initial, CamelCase or all-caps words are entities (and nouns).
class RuleTagger : public Tagger {
 public:
  explicit RuleTagger(const LexiconSet& lexicons = LexiconSet::defaults());
  void annotate(TokenStream& stream) const override;

  bool is_verb_form(std::string_view token) const { return verbs_.count(std::string(token)) != 0; }
  bool is_modal(std::string_view token) const { return modals_.count(std::string(token)) != 0; }

 private:
  std::unordered_set<std::string> determiners_;
  std::unordered_set<std::string> verbs_;
  std::unordered_set<std::string> modals_;
  std::unordered_set<std::string> function_words_;
};

struct GrammarCounts {
  std::size_t words = 0;
  std::size_t subjects = 0;  // nouns
  std::size_t verbs = 0;
  std::size_t entities = 0;
  std::size_t actions = 0;
  double action_density = 0;              // actions / words
  double complete_sentence_fraction = 0;  // sentences with noun-verb-noun
};

/// Needs an annotated stream (tags are computed with `tagger` when
/// stream.pos is empty). Actions are verbs governed by a modal/obligation
/// word, sentence-initial imperatives, and the second verb of a
/// coordinated verb phrase.
GrammarCounts grammar_counts(TokenStream stream, const Tagger& tagger);
GrammarCounts grammar_counts(const TokenStream& annotated);

// ---------------------------------------------------------------------------
// Similarity

enum class SimilarityMetric { TfIdfCosine, Jaccard, EuclideanTf };

struct Document {
  std::string text;
  Timestamp timestamp;
};

/// Term dictionary over a document history with, per term, the sorted
/// timestamps of the documents containing it. Immutable once built.
class DocumentIndex {
 public:
  explicit DocumentIndex(std::span<const Document> history);

  std::size_t document_count(Timestamp cutoff) const;
  std::size_t document_frequency(std::uint32_t term, Timestamp cutoff) const;
  std::optional<std::uint32_t> term_id(std::string_view term) const;
  const std::string& term(std::uint32_t id) const { return terms_[id]; }
  std::size_t vocabulary_size() const { return terms_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> terms_;
  std::vector<std::vector<Timestamp>> postings_;
  std::vector<Timestamp> doc_times_;
};

/// IDF view of a DocumentIndex at a cutoff: only documents dated <= cutoff
/// contribute. idf(t) = ln((1 + N) / (1 + df(t))) + 1.
class TfIdfModel {
 public:
  TfIdfModel() = default;
  TfIdfModel(std::shared_ptr<const DocumentIndex> index, Timestamp cutoff);

  bool empty() const { return documents_ == 0; }
  std::size_t document_count() const { return documents_; }
  Timestamp cutoff() const { return cutoff_; }
  std::size_t document_frequency(std::string_view term) const;
  double idf(std::string_view term) const;
  double idf_of_df(std::size_t df) const;
  /// term -> df for every term seen at or before the cutoff.
  std::map<std::string, std::size_t> vocabulary() const;
  const DocumentIndex* index() const { return index_.get(); }

 private:
  std::shared_ptr<const DocumentIndex> index_;
  Timestamp cutoff_{};
  std::size_t documents_ = 0;
};

/// Empty history (after cutoff filtering) yields an empty model, for which
/// tf-idf similarities are 0.
TfIdfModel build_tfidf_model(std::span<const Document> history, Timestamp cutoff);

class MissingModel : public Error {
 public:
  using Error::Error;
};

/// tfidf_cosine needs a model (MissingModel otherwise); euclidean_tf is the
/// similarity 1/(1+d) of the term-count distance d. Jaccard of two empty
/// token sets is 1, of one empty set 0.
double similarity(std::string_view a, std::string_view b, SimilarityMetric metric, const TfIdfModel* model = nullptr);

/// Raw Euclidean distance between term-count vectors (debug output).
double euclidean_tf_distance(std::string_view a, std::string_view b);

/// Sparse term counts keyed by term id; sorted by id.
using TermCounts = std::vector<std::pair<std::uint32_t, double>>;

/// Maps the tokens of `text` onto `index` ids. Tokens unknown to the index
/// get a hashed id with the top bit set (df = 0 under any cutoff), so two
/// texts mapped separately still agree on them.
TermCounts term_counts(std::string_view text, const DocumentIndex& index);

double jaccard(const TermCounts& a, const TermCounts& b);
double euclidean_tf(const TermCounts& a, const TermCounts& b);

/// Caches idf per term id for one cutoff so that many cosines against the
/// same model stay cheap.
class IdfCache {
 public:
  explicit IdfCache(const TfIdfModel& model);
  double idf(std::uint32_t term);

 private:
  const TfIdfModel& model_;
  std::unordered_map<std::uint32_t, double> cache_;
};

double tfidf_cosine(const TermCounts& a, const TermCounts& b, IdfCache& idf);

}  // namespace tlp::text
