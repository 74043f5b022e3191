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

#include "tlp/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace tlp::text {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c >= 0x80;
}

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = lower(c);
  return out;
}

bool has_upper(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

bool has_letter(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); });
}

}  // namespace

TokenStream tokenize(std::string_view text) {
  TokenStream out;
  out.lowered = to_lower(text);
  std::size_t sentence = 0;
  bool sentence_has_words = false;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_word_byte(c)) {
      std::size_t j = i;
      while (j < text.size() && is_word_byte(static_cast<unsigned char>(text[j]))) ++j;
      out.surface.emplace_back(text.substr(i, j - i));
      out.tokens.push_back(to_lower(out.surface.back()));
      out.sentence.push_back(sentence);
      sentence_has_words = true;
      i = j;
      continue;
    }
    if ((c == '.' || c == '!' || c == '?') && (i + 1 == text.size() || is_space(text[i + 1]))) {
      if (sentence_has_words) {
        ++sentence;
        sentence_has_words = false;
      }
    }
    ++i;
  }
  out.sentence_count = sentence + (sentence_has_words ? 1 : 0);
  return out;
}

// ---------------------------------------------------------------------------
// Lexicons

namespace {

LexiconSet make_defaults() {
  LexiconSet set;
  auto fill = [&](std::string_view name, std::initializer_list<const char*> phrases) {
    for (const char* p : phrases) set.add(name, p);
  };
  fill("conditionals", {"if", "when", "unless", "depends on", "depending on", "in case", "whether", "provided that",
                        "as long as", "otherwise"});
  fill("continuances", {"see below", "as follows", "listed", "in particular", "the following", "following:", "below:",
                        "in addition", "furthermore"});
  fill("imperatives", {"shall", "must", "is required to", "are required to", "should", "has to", "have to", "needs to",
                       "need to", "will"});
  fill("incompletes", {"tbd", "tbr", "tbc", "todo", "tba", "to be determined", "to be defined", "not defined yet"});
  fill("options", {"can", "could", "may", "optionally", "optional", "possibly", "might", "either", "if desired"});
  fill("sources", {"http://", "https://", "www.", ".java", ".xml", ".json", ".txt", ".properties", ".patch", ".log",
                   "attached file", "attachment", "github.com", "wiki"});
  fill("weak_phrases", {"adequate", "as a minimum", "be capable of", "be able to", "as appropriate", "as applicable",
                        "if possible", "if practical", "easy", "effective", "timely", "normal", "but not limited to",
                        "appropriate", "sufficient", "reasonable"});
  fill("ambiguity", {"some", "many", "few", "often", "several", "various", "usually", "probably", "maybe", "sometimes",
                     "approximately", "etc", "somehow", "mostly", "fairly", "quite", "rather"});
  fill("directives", {"e.g.", "i.e.", "figure", "table", "for example", "note", "for instance"});
  fill("determiners", {"the", "a", "an", "this", "that", "these", "those", "each", "every", "its", "their", "our",
                       "my", "your", "his", "her", "any", "another", "no"});
  fill("modals", {"shall", "must", "should", "will", "would", "can", "could", "may", "might", "please", "to"});
  fill("verbs", {"add",      "allow",   "apply",   "break",    "build",    "call",     "cause",     "change",
                 "check",    "clean",   "close",   "commit",   "compact",  "compile",  "compute",   "configure",
                 "contain",  "crash",   "create",  "delete",   "deploy",   "detect",   "disable",   "drop",
                 "enable",   "ensure",  "execute", "expose",   "fail",     "fetch",    "find",      "fix",
                 "flush",    "generate", "get",    "handle",   "hang",     "implement", "improve",  "include",
                 "increase", "insert",  "keep",    "leak",     "load",     "lock",     "log",       "make",
                 "merge",    "migrate", "move",    "need",     "open",     "parse",    "pass",      "print",
                 "process",  "provide", "query",   "read",     "receive",  "reduce",   "refactor",  "register",
                 "release",  "remove",  "rename",  "replace",  "require",  "resolve",  "restart",   "retry",
                 "return",   "reuse",   "rewrite", "run",      "scan",     "select",   "send",      "set",
                 "show",     "skip",    "sort",    "split",    "start",    "stop",     "store",     "support",
                 "sync",     "throw",   "update",  "upgrade",  "use",      "validate", "verify",    "wait",
                 "write",    "avoid",   "allocate", "convert", "copy",     "cleanup",  "document",  "export",
                 "import",   "invoke",  "report",  "reject",   "accept",   "work",     "try",       "see",
                 "seem",     "take",    "give",    "look",     "want",     "happen",   "appear",    "become"});

  auto senti = [&](std::initializer_list<std::pair<const char*, SentimentWeight>> items) {
    for (const auto& [term, w] : items) set.set_sentiment(term, w);
  };
  senti({{"good", {0.7, 0.6}},       {"great", {0.8, 0.75}},     {"excellent", {1.0, 1.0}},   {"nice", {0.6, 1.0}},
         {"correct", {0.4, 0.4}},    {"correctly", {0.4, 0.4}},  {"better", {0.5, 0.5}},      {"best", {1.0, 0.3}},
         {"clean", {0.37, 0.69}},    {"happy", {0.8, 1.0}},      {"thanks", {0.2, 0.2}},      {"thank", {0.2, 0.2}},
         {"fine", {0.42, 0.5}},      {"helpful", {0.5, 0.5}},    {"perfect", {1.0, 1.0}},     {"improved", {0.4, 0.4}},
         {"fast", {0.2, 0.6}},       {"elegant", {0.6, 0.8}},    {"useful", {0.3, 0.1}},      {"simple", {0.1, 0.4}},
         {"awesome", {1.0, 1.0}},    {"glad", {0.5, 1.0}},       {"stable", {0.3, 0.4}},      {"robust", {0.4, 0.5}},
         {"bad", {-0.7, 0.67}},      {"wrong", {-0.5, 0.9}},     {"broken", {-0.4, 0.4}},     {"fail", {-0.5, 0.3}},
         {"fails", {-0.5, 0.3}},     {"failed", {-0.5, 0.3}},    {"failure", {-0.4, 0.3}},    {"failing", {-0.5, 0.3}},
         {"crash", {-0.5, 0.5}},     {"crashes", {-0.5, 0.5}},   {"problem", {-0.3, 0.3}},    {"problems", {-0.3, 0.3}},
         {"ugly", {-0.7, 1.0}},      {"slow", {-0.3, 0.4}},      {"confusing", {-0.4, 0.6}},  {"annoying", {-0.8, 0.9}},
         {"terrible", {-1.0, 1.0}},  {"worse", {-0.4, 0.6}},     {"worst", {-1.0, 1.0}},      {"unfortunately", {-0.5, 1.0}},
         {"incorrect", {-0.5, 0.5}}, {"hang", {-0.3, 0.3}},      {"leak", {-0.3, 0.3}},       {"painful", {-0.7, 0.9}},
         {"horrible", {-1.0, 1.0}},  {"flaky", {-0.5, 0.6}},     {"stupid", {-0.8, 1.0}},     {"awful", {-1.0, 1.0}},
         {"hard", {-0.3, 0.5}},      {"difficult", {-0.5, 1.0}}, {"unstable", {-0.4, 0.5}},   {"risky", {-0.5, 0.6}}});
  return set;
}

}  // namespace

const LexiconSet& LexiconSet::defaults() {
  static const LexiconSet set = make_defaults();
  return set;
}

LexiconSet LexiconSet::from_json(std::string_view json_text, const LexiconSet& base) {
  LexiconSet set = base;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("invalid lexicon file: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("lexicon file must hold a JSON object");
  for (const auto& [name, value] : doc.items()) {
    if (name == "sentiment") {
      if (!value.is_object()) throw DataError("lexicon 'sentiment' must map term -> [polarity, subjectivity]");
      for (const auto& [term, w] : value.items()) {
        if (!w.is_array() || w.size() != 2) throw DataError("sentiment weight for '" + term + "' must be a pair");
        set.set_sentiment(term, {w[0].get<double>(), w[1].get<double>()});
      }
      continue;
    }
    if (!value.is_array()) throw DataError("lexicon '" + name + "' must be a list of phrases");
    for (const auto& p : value) set.add(name, p.get<std::string>());
  }
  return set;
}

LexiconSet LexiconSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read lexicon file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str(), defaults());
}

const std::vector<std::string>& LexiconSet::list(std::string_view name) const {
  const auto it = lists_.find(name);
  if (it == lists_.end()) throw InvalidArgument("unknown lexicon '" + std::string(name) + "'");
  return it->second;
}

void LexiconSet::add(std::string_view name, std::string_view phrase) {
  auto& list = lists_[std::string(name)];
  auto p = to_lower(phrase);
  if (p.empty()) return;
  if (std::find(list.begin(), list.end(), p) == list.end()) list.push_back(std::move(p));
}

void LexiconSet::set_sentiment(std::string_view term, SentimentWeight weight) {
  weight.polarity = std::clamp(weight.polarity, -1.0, 1.0);
  weight.subjectivity = std::clamp(weight.subjectivity, 0.0, 1.0);
  sentiment_[to_lower(term)] = weight;
}

std::size_t lexicon_count(std::string_view text, const LexiconSet& lexicons, std::string_view list_name) {
  const auto& phrases = lexicons.list(list_name);
  const std::string lowered = to_lower(text);
  struct Match {
    std::size_t begin, end;
  };
  std::vector<Match> matches;
  for (const auto& phrase : phrases) {
    const bool word_start = is_word_byte(static_cast<unsigned char>(phrase.front()));
    const bool word_end = is_word_byte(static_cast<unsigned char>(phrase.back()));
    std::size_t pos = lowered.find(phrase);
    while (pos != std::string::npos) {
      const std::size_t end = pos + phrase.size();
      const bool left_ok = !word_start || pos == 0 || !is_word_byte(static_cast<unsigned char>(lowered[pos - 1]));
      const bool right_ok = !word_end || end == lowered.size() || !is_word_byte(static_cast<unsigned char>(lowered[end]));
      if (left_ok && right_ok) matches.push_back({pos, end});
      pos = lowered.find(phrase, pos + 1);
    }
  }
  std::sort(matches.begin(), matches.end(), [](const Match& a, const Match& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    return a.end > b.end;
  });
  std::size_t count = 0;
  std::size_t covered = 0;
  for (const auto& m : matches) {
    if (m.begin < covered) continue;
    ++count;
    covered = m.end;
  }
  return count;
}

std::size_t lexicon_count(const TokenStream& stream, const LexiconSet& lexicons, std::string_view list_name) {
  return lexicon_count(stream.lowered, lexicons, list_name);
}

std::size_t risk_level(std::span<const std::size_t> counters) {
  return std::accumulate(counters.begin(), counters.end(), std::size_t{0});
}

// ---------------------------------------------------------------------------
// Readability

std::size_t count_syllables(std::string_view word) {
  auto vowel = [](char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; };
  const std::string w = to_lower(word);
  std::size_t groups = 0;
  bool prev = false;
  for (const char c : w) {
    const bool v = vowel(c);
    if (v && !prev) ++groups;
    prev = v;
  }
  if (w.size() > 2 && w.back() == 'e' && !vowel(w[w.size() - 2]) && !(w[w.size() - 2] == 'l' && !vowel(w[w.size() - 3])))
    --groups;  // silent trailing e, but not the syllabic "-ble"/"-tle"
  return std::max<std::size_t>(groups, 1);
}

double flesch_reading_ease(const TokenStream& stream) {
  if (stream.empty()) throw UndefinedScore("reading ease is undefined for text without words");
  std::size_t syllables = 0;
  for (const auto& t : stream.tokens) syllables += count_syllables(t);
  const double words = static_cast<double>(stream.size());
  const double sentences = static_cast<double>(std::max<std::size_t>(stream.sentence_count, 1));
  return 206.835 - 1.015 * (words / sentences) - 84.6 * (static_cast<double>(syllables) / words);
}

double flesch_reading_ease(std::string_view text) { return flesch_reading_ease(tokenize(text)); }

// ---------------------------------------------------------------------------
// Sentiment

Sentiment sentiment(std::string_view text, const LexiconSet& lexicons) {
  static const std::unordered_set<std::string> negators = {"not", "no", "never", "cannot", "without", "nothing", "t"};
  const auto stream = tokenize(text);
  const auto& table = lexicons.sentiment();
  double polarity = 0, subjectivity = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto it = table.find(stream.tokens[i]);
    if (it == table.end()) continue;
    double p = it->second.polarity;
    for (std::size_t back = 1; back <= 2 && back <= i; ++back) {
      if (stream.sentence[i - back] != stream.sentence[i]) break;
      if (negators.count(stream.tokens[i - back])) {
        p *= -0.5;
        break;
      }
    }
    polarity += p;
    subjectivity += it->second.subjectivity;
    ++hits;
  }
  if (hits == 0) return {};
  return {std::clamp(polarity / static_cast<double>(hits), -1.0, 1.0),
          std::clamp(subjectivity / static_cast<double>(hits), 0.0, 1.0)};
}

// ---------------------------------------------------------------------------
// Tagging

namespace {

void add_inflections(std::unordered_set<std::string>& forms, const std::string& base) {
  forms.insert(base);
  const char last = base.back();
  auto vowel = [](char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; };
  if (last == 's' || last == 'x' || last == 'z' || base.ends_with("ch") || base.ends_with("sh")) {
    forms.insert(base + "es");
  } else if (last == 'y' && base.size() > 1 && !vowel(base[base.size() - 2])) {
    forms.insert(base.substr(0, base.size() - 1) + "ies");
    forms.insert(base.substr(0, base.size() - 1) + "ied");
  } else {
    forms.insert(base + "s");
  }
  if (last == 'e') {
    forms.insert(base + "d");
    forms.insert(base.substr(0, base.size() - 1) + "ing");
  } else {
    forms.insert(base + "ed");
    forms.insert(base + "ing");
    // Short consonant-vowel-consonant stems double the final consonant.
    if (base.size() >= 3 && !vowel(last) && last != 'w' && last != 'x' && last != 'y' && vowel(base[base.size() - 2]) &&
        !vowel(base[base.size() - 3])) {
      forms.insert(base + last + "ed");
      forms.insert(base + last + "ing");
    }
  }
}

}  // namespace

RuleTagger::RuleTagger(const LexiconSet& lexicons) {
  for (const auto& d : lexicons.list("determiners")) determiners_.insert(d);
  for (const auto& m : lexicons.list("modals")) modals_.insert(m);
  for (const auto& v : lexicons.list("verbs")) add_inflections(verbs_, v);
  for (const char* irregular : {"broke", "built", "got", "made", "ran", "sent", "threw", "thrown", "wrote", "written",
                                "took", "taken", "gave", "given", "saw", "seen", "found", "kept", "began", "begun",
                                "held", "brought", "thought", "told", "left", "meant", "became"})
    verbs_.insert(irregular);
  for (const char* w : {"in",  "on",   "at",   "for",  "with", "from", "of",    "into", "by",    "about", "to",
                        "and", "or",   "but",  "if",   "when", "then", "than",  "as",   "so",    "it",    "we",
                        "i",   "you",  "he",   "she",  "they", "is",   "are",   "was",  "were",  "be",    "been",
                        "has", "have", "had",  "do",   "does", "did",  "not",   "also", "there", "here",  "which",
                        "who", "what", "where", "why", "how",  "all",  "some",  "very", "just",  "only",  "over",
                        "under", "after", "before", "while", "because", "e", "g"})
    function_words_.insert(w);
  for (const auto& d : determiners_) function_words_.insert(d);
  for (const auto& m : modals_) function_words_.insert(m);
}

void RuleTagger::annotate(TokenStream& s) const {
  const std::size_t n = s.size();
  s.pos.assign(n, Pos::Other);
  s.entity.assign(n, false);
  static const std::unordered_set<std::string> prepositions = {"in", "on", "at", "for", "with", "from",
                                                               "of", "into", "by", "about", "under", "over"};
  auto same_sentence = [&](std::size_t a, std::size_t b) { return s.sentence[a] == s.sentence[b]; };
  auto content = [&](std::size_t i) { return function_words_.count(s.tokens[i]) == 0 && has_letter(s.tokens[i]); };

  for (std::size_t i = 0; i < n; ++i) {
    const bool initial = i == 0 || !same_sentence(i - 1, i);
    const auto& surf = s.surface[i];
    if (has_letter(surf) && surf.size() >= 2) {
      const bool inner_caps = has_upper(std::string_view(surf).substr(1));
      const bool capitalized = surf[0] >= 'A' && surf[0] <= 'Z';
      if (inner_caps || (capitalized && !initial)) s.entity[i] = true;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const bool initial = i == 0 || !same_sentence(i - 1, i);
    if (verbs_.count(s.tokens[i]) && (initial || !s.entity[i])) s.pos[i] = Pos::Verb;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto& tok = s.tokens[i];
    if (determiners_.count(tok) || prepositions.count(tok)) {
      const std::size_t a = i + 1;
      if (a >= n || !same_sentence(i, a) || !content(a)) continue;
      const std::size_t b = i + 2;
      const bool modifier = b < n && same_sentence(i, b) && content(b) && s.pos[b] != Pos::Verb && s.pos[a] != Pos::Verb;
      if (modifier) {
        s.pos[a] = Pos::Other;
        s.pos[b] = Pos::Noun;
      } else if (determiners_.count(tok) || s.pos[a] != Pos::Verb) {
        s.pos[a] = Pos::Noun;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (s.pos[i] != Pos::Other) continue;
    const auto& tok = s.tokens[i];
    if (s.entity[i]) {
      s.pos[i] = Pos::Noun;
      continue;
    }
    for (const char* suffix : {"tion", "sion", "ment", "ness", "ity", "ance", "ence", "ship"}) {
      if (tok.size() > std::char_traits<char>::length(suffix) + 2 && tok.ends_with(suffix)) {
        s.pos[i] = Pos::Noun;
        break;
      }
    }
  }
}

GrammarCounts grammar_counts(const TokenStream& s) {
  GrammarCounts g;
  g.words = s.size();
  if (s.empty()) return g;
  if (s.pos.size() != s.size()) throw InvalidArgument("grammar_counts needs a tagged stream");
  static const std::unordered_set<std::string> pronouns = {"it", "we", "i", "you", "he", "she", "they", "this", "that"};
  static const std::unordered_set<std::string> obligation = {"shall", "must", "should", "will", "can", "could",
                                                             "may", "might", "would", "please", "to"};
  std::vector<bool> sentence_complete(s.sentence_count, false);
  std::vector<int> stage(s.sentence_count, 0);  // 0: need subject, 1: need verb, 2: need object
  std::vector<bool> sentence_has_verb(s.sentence_count, false);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto sent = s.sentence[i];
    const bool initial = i == 0 || s.sentence[i - 1] != sent;
    const bool noun = s.pos[i] == Pos::Noun;
    const bool verb = s.pos[i] == Pos::Verb;
    g.subjects += noun;
    g.verbs += verb;
    g.entities += s.entity[i];
    if (verb) {
      bool action = initial;
      for (std::size_t back = 1; !action && back <= 2 && back <= i && s.sentence[i - back] == sent; ++back)
        if (obligation.count(s.tokens[i - back])) action = true;
      if (!action && i > 0 && s.sentence[i - 1] == sent && (s.tokens[i - 1] == "and" || s.tokens[i - 1] == "or") &&
          sentence_has_verb[sent])
        action = true;
      g.actions += action;
      sentence_has_verb[sent] = true;
    }
    auto& st = stage[sent];
    if (st == 0 && (noun || pronouns.count(s.tokens[i]))) st = 1;
    else if (st == 1 && verb) st = 2;
    else if (st == 2 && noun) sentence_complete[sent] = true;
  }
  const auto complete = std::count(sentence_complete.begin(), sentence_complete.end(), true);
  g.complete_sentence_fraction =
      s.sentence_count ? static_cast<double>(complete) / static_cast<double>(s.sentence_count) : 0.0;
  g.action_density = static_cast<double>(g.actions) / static_cast<double>(g.words);
  return g;
}

GrammarCounts grammar_counts(TokenStream stream, const Tagger& tagger) {
  if (stream.pos.size() != stream.size()) tagger.annotate(stream);
  return grammar_counts(stream);
}

// ---------------------------------------------------------------------------
// TF-IDF and similarity

DocumentIndex::DocumentIndex(std::span<const Document> history) {
  for (const auto& doc : history) {
    doc_times_.push_back(doc.timestamp);
    const auto stream = tokenize(doc.text);
    std::vector<std::uint32_t> seen;
    for (const auto& tok : stream.tokens) {
      auto [it, inserted] = ids_.emplace(tok, static_cast<std::uint32_t>(terms_.size()));
      if (inserted) {
        terms_.push_back(tok);
        postings_.emplace_back();
      }
      seen.push_back(it->second);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (const auto id : seen) postings_[id].push_back(doc.timestamp);
  }
  std::sort(doc_times_.begin(), doc_times_.end());
  for (auto& p : postings_) std::sort(p.begin(), p.end());
}

std::size_t DocumentIndex::document_count(Timestamp cutoff) const {
  return static_cast<std::size_t>(std::upper_bound(doc_times_.begin(), doc_times_.end(), cutoff) - doc_times_.begin());
}

std::size_t DocumentIndex::document_frequency(std::uint32_t term, Timestamp cutoff) const {
  if (term >= postings_.size()) return 0;
  const auto& p = postings_[term];
  return static_cast<std::size_t>(std::upper_bound(p.begin(), p.end(), cutoff) - p.begin());
}

std::optional<std::uint32_t> DocumentIndex::term_id(std::string_view term) const {
  const auto it = ids_.find(std::string(term));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

TfIdfModel::TfIdfModel(std::shared_ptr<const DocumentIndex> index, Timestamp cutoff)
    : index_(std::move(index)), cutoff_(cutoff), documents_(index_ ? index_->document_count(cutoff) : 0) {}

std::size_t TfIdfModel::document_frequency(std::string_view term) const {
  if (!index_) return 0;
  const auto id = index_->term_id(term);
  return id ? index_->document_frequency(*id, cutoff_) : 0;
}

double TfIdfModel::idf_of_df(std::size_t df) const {
  return std::log((1.0 + static_cast<double>(documents_)) / (1.0 + static_cast<double>(df))) + 1.0;
}

double TfIdfModel::idf(std::string_view term) const { return idf_of_df(document_frequency(term)); }

std::map<std::string, std::size_t> TfIdfModel::vocabulary() const {
  std::map<std::string, std::size_t> vocab;
  if (!index_) return vocab;
  for (std::uint32_t id = 0; id < index_->vocabulary_size(); ++id)
    if (const auto df = index_->document_frequency(id, cutoff_)) vocab.emplace(index_->term(id), df);
  return vocab;
}

TfIdfModel build_tfidf_model(std::span<const Document> history, Timestamp cutoff) {
  std::vector<Document> kept;
  for (const auto& d : history)
    if (d.timestamp <= cutoff) kept.push_back(d);
  return TfIdfModel(std::make_shared<const DocumentIndex>(kept), cutoff);
}

TermCounts term_counts(std::string_view text, const DocumentIndex& index) {
  std::map<std::uint32_t, double> counts;
  for (const auto& tok : tokenize(text).tokens) {
    std::uint32_t id;
    if (const auto known = index.term_id(tok)) {
      id = *known;
    } else {
      id = 0x80000000u | static_cast<std::uint32_t>(fnv1a(tok) & 0x7fffffffu);
    }
    counts[id] += 1.0;
  }
  return {counts.begin(), counts.end()};
}

double jaccard(const TermCounts& a, const TermCounts& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  std::size_t inter = 0, i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      ++inter;
      ++i;
      ++j;
    } else if (a[i].first < b[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

double euclidean_distance(const TermCounts& a, const TermCounts& b) {
  double sum = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
      sum += a[i].second * a[i].second;
      ++i;
    } else if (i >= a.size() || b[j].first < a[i].first) {
      sum += b[j].second * b[j].second;
      ++j;
    } else {
      const double d = a[i].second - b[j].second;
      sum += d * d;
      ++i;
      ++j;
    }
  }
  return std::sqrt(sum);
}

}  // namespace

double euclidean_tf(const TermCounts& a, const TermCounts& b) { return 1.0 / (1.0 + euclidean_distance(a, b)); }

IdfCache::IdfCache(const TfIdfModel& model) : model_(model) {}

double IdfCache::idf(std::uint32_t term) {
  const auto it = cache_.find(term);
  if (it != cache_.end()) return it->second;
  const std::size_t df = model_.index() ? model_.index()->document_frequency(term, model_.cutoff()) : 0;
  const double value = model_.idf_of_df(df);
  cache_.emplace(term, value);
  return value;
}

double tfidf_cosine(const TermCounts& a, const TermCounts& b, IdfCache& idf) {
  double dot = 0, na = 0, nb = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
      const double w = a[i].second * idf.idf(a[i].first);
      na += w * w;
      ++i;
    } else if (i >= a.size() || b[j].first < a[i].first) {
      const double w = b[j].second * idf.idf(b[j].first);
      nb += w * w;
      ++j;
    } else {
      const double f = idf.idf(a[i].first);
      const double wa = a[i].second * f, wb = b[j].second * f;
      dot += wa * wb;
      na += wa * wa;
      nb += wb * wb;
      ++i;
      ++j;
    }
  }
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

double euclidean_tf_distance(std::string_view a, std::string_view b) {
  const DocumentIndex local(std::vector<Document>{{std::string(a), Timestamp{}}, {std::string(b), Timestamp{}}});
  return euclidean_distance(term_counts(a, local), term_counts(b, local));
}

double similarity(std::string_view a, std::string_view b, SimilarityMetric metric, const TfIdfModel* model) {
  switch (metric) {
    case SimilarityMetric::TfIdfCosine: {
      if (!model) throw MissingModel("tfidf_cosine similarity needs a fitted model");
      if (model->empty()) return 0.0;
      IdfCache cache(*model);
      return tfidf_cosine(term_counts(a, *model->index()), term_counts(b, *model->index()), cache);
    }
    case SimilarityMetric::Jaccard:
    case SimilarityMetric::EuclideanTf: {
      const DocumentIndex local(std::vector<Document>{{std::string(a), Timestamp{}}, {std::string(b), Timestamp{}}});
      const auto ta = term_counts(a, local), tb = term_counts(b, local);
      return metric == SimilarityMetric::Jaccard ? jaccard(ta, tb) : euclidean_tf(ta, tb);
    }
  }
  return 0.0;
}

}  // namespace tlp::text
