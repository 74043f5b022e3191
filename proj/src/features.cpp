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

#include "tlp/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

#include "tlp/csv.hpp"
#include "tlp/parallel.hpp"

namespace tlp {

std::string to_cell(const FeatureValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return "";
}

// ---------------------------------------------------------------------------
// Repository metrics timeline

RepoMetricsTimeline::RepoMetricsTimeline(std::vector<RepoMetrics> records) : records_(std::move(records)) {
  for (std::size_t i = 1; i < records_.size(); ++i)
    if (!(records_[i - 1].at < records_[i].at))
      throw DataError("repo metrics timeline must have strictly increasing timestamps (record " +
                      std::to_string(i + 1) + ")");
}

RepoMetricsTimeline RepoMetricsTimeline::read(std::istream& in) {
  csv::Reader reader(in);
  const auto header = reader.next();
  const std::vector<std::string> expected = {"timestamp", "total_LOCs", "number_of_files", "number_of_languages",
                                             "smells_count"};
  if (!header || *header != expected) throw DataError("repo metrics timeline: unexpected header");
  std::vector<RepoMetrics> records;
  while (auto row = reader.next()) {
    if (row->size() != expected.size())
      throw DataError("repo metrics timeline: wrong field count on line " + std::to_string(reader.line()));
    try {
      records.push_back({parse_timestamp((*row)[0]), parse_double((*row)[1]), parse_double((*row)[2]),
                         parse_double((*row)[3]), parse_double((*row)[4])});
    } catch (const InvalidArgument& e) {
      throw DataError("repo metrics timeline line " + std::to_string(reader.line()) + ": " + e.what());
    }
  }
  return RepoMetricsTimeline(std::move(records));
}

RepoMetricsTimeline RepoMetricsTimeline::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read repo metrics timeline " + path.string());
  return read(in);
}

void RepoMetricsTimeline::write(std::ostream& out) const {
  csv::write_row(out, {"timestamp", "total_LOCs", "number_of_files", "number_of_languages", "smells_count"});
  for (const auto& r : records_)
    csv::write_row(out, {format_timestamp(r.at), format_double(r.total_locs), format_double(r.number_of_files),
                         format_double(r.number_of_languages), format_double(r.smells_count)});
}

std::optional<RepoMetrics> RepoMetricsTimeline::lookup(Timestamp t) const {
  const auto it = std::upper_bound(records_.begin(), records_.end(), t,
                                   [](Timestamp v, const RepoMetrics& r) { return v < r.at; });
  if (it == records_.begin()) return std::nullopt;
  return *std::prev(it);
}

// ---------------------------------------------------------------------------
// Kernels

namespace {

Timestamp closed_instant(const LinkedTicket& t) { return t.commits.back().authored_at + Seconds{1}; }

double ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

}  // namespace

double compute_anfic(std::string_view developer, std::span<const LinkedTicket> history) {
  double assigned = 0, buggy = 0;
  for (const auto& t : history) {
    if (t.ticket.assignee != developer || developer.empty()) continue;
    assigned += 1;
    buggy += t.label;
  }
  return ratio(buggy, assigned);
}

double compute_temporal_locality(std::span<const LinkedTicket> history, Timestamp t, int window_days, bool weighted) {
  if (window_days <= 0) throw InvalidArgument("temporal window must be positive");
  const double window = static_cast<double>(window_days) * 86400.0;
  double total = 0, buggy = 0;
  for (const auto& h : history) {
    if (h.commits.empty()) continue;
    const double age = static_cast<double>((t - closed_instant(h)).count());
    if (age < 0 || age >= window) continue;
    const double w = weighted ? 1.0 - age / window : 1.0;
    total += w;
    if (h.label) buggy += w;
  }
  return ratio(buggy, total);
}

double components_max_bugginess(const RawTicket& ticket, std::span<const LinkedTicket> history) {
  double best = 0;
  for (const auto& c : ticket.components) {
    double total = 0, buggy = 0;
    for (const auto& h : history) {
      if (std::find(h.ticket.components.begin(), h.ticket.components.end(), c) == h.ticket.components.end()) continue;
      total += 1;
      buggy += h.label;
    }
    best = std::max(best, ratio(buggy, total));
  }
  return best;
}

JitAggregate aggregate_jit(std::span<const RawCommit> commits) {
  if (commits.empty()) throw InvalidArgument("JIT aggregation needs at least one commit");
  JitAggregate a{};
  const auto& f = commits.front().jit;
  a.ndev_max = f.ndev;
  a.arexp_min = f.arexp;
  a.aexp_min = f.aexp;
  a.asexp_min = f.asexp;
  a.ns_max = f.ns;
  a.age_min = f.age;
  a.nd_max = f.nd;
  a.nuc_max = f.nuc;
  a.ent_max = f.entropy;
  a.nf_max = f.nf;
  Timestamp first = commits.front().authored_at, last = first;
  for (const auto& c : commits) {
    const auto& j = c.jit;
    a.ndev_max = std::max(a.ndev_max, j.ndev);
    a.arexp_min = std::min(a.arexp_min, j.arexp);
    a.aexp_min = std::min(a.aexp_min, j.aexp);
    a.asexp_min = std::min(a.asexp_min, j.asexp);
    a.ns_max = std::max(a.ns_max, j.ns);
    a.age_min = std::min(a.age_min, j.age);
    a.nd_max = std::max(a.nd_max, j.nd);
    a.nuc_max = std::max(a.nuc_max, j.nuc);
    a.ent_max = std::max(a.ent_max, j.entropy);
    a.nf_max = std::max(a.nf_max, j.nf);
    a.la_sum += j.la;
    a.ld_sum += j.ld;
    a.fix_count += j.fix;
    first = std::min(first, c.authored_at);
    last = std::max(last, c.authored_at);
  }
  a.author_date_duration = static_cast<double>((last - first).count());
  a.num_commits = static_cast<double>(commits.size());
  return a;
}

// ---------------------------------------------------------------------------
// Context

namespace {

// Closed instants and labels of one group of tickets, sorted by instant.
struct Timeline {
  std::vector<Timestamp> at;
  std::vector<double> buggy_prefix{0.0};

  void add(Timestamp t) { at.push_back(t); }
  // Number of entries strictly before t and the buggy count among them.
  std::pair<double, double> before(Timestamp t) const {
    const auto n = static_cast<std::size_t>(std::lower_bound(at.begin(), at.end(), t) - at.begin());
    return {static_cast<double>(n), buggy_prefix[n]};
  }
};

struct TextFeatures {
  std::size_t da[8] = {};  // ACT, CND, CNT, IMP, INC, OPT, SRC, WKP
  double subjects = 0, words = 0, verbs = 0, ambiguity = 0, directives = 0, completeness = 0, action_density = 0,
         entities = 0;
  double readability = 0;  // wordless descriptions score 0, like the other empty-input features
  text::Sentiment sentiment;
};

}  // namespace

struct ExtractionContext::Impl {
  std::vector<RawCommit> commits;  // all commits by authored_at
  std::vector<double> churn_prefix{0.0};
  RepoMetricsTimeline timeline;
  text::LexiconSet lexicons;
  std::unique_ptr<text::RuleTagger> tagger;

  std::vector<Timestamp> closed;                        // per population ticket
  std::unordered_map<std::string, Timeline> by_assignee;
  std::unordered_map<std::string, Timeline> by_component;
  std::vector<std::size_t> by_closed;                   // population indices sorted by closed instant
  std::vector<std::size_t> buggy_by_closed;
  std::unordered_map<std::string, std::vector<Timestamp>> created_by_project;
  std::unordered_map<std::string, std::vector<Timestamp>> assigned_by_developer;

  std::shared_ptr<const text::DocumentIndex> title_index, text_index;
  std::vector<text::TermCounts> title_counts, text_counts;
  std::vector<TextFeatures> text_features;
  std::unordered_map<std::string, std::size_t> position;  // ticket id -> population index
};

namespace {

TextFeatures analyze_description(const std::string& description, const text::LexiconSet& lex,
                                 const text::Tagger& tagger) {
  TextFeatures f;
  auto stream = text::tokenize(description);
  tagger.annotate(stream);
  const auto g = text::grammar_counts(stream);
  f.da[0] = g.actions;
  const char* lists[] = {"conditionals", "continuances", "imperatives", "incompletes", "options", "sources",
                         "weak_phrases"};
  for (int i = 0; i < 7; ++i) f.da[i + 1] = text::lexicon_count(stream, lex, lists[i]);
  f.subjects = static_cast<double>(g.subjects);
  f.words = static_cast<double>(g.words);
  f.verbs = static_cast<double>(g.verbs);
  f.entities = static_cast<double>(g.entities);
  f.completeness = g.complete_sentence_fraction;
  f.action_density = g.action_density;
  f.ambiguity = static_cast<double>(text::lexicon_count(stream, lex, "ambiguity"));
  f.directives = static_cast<double>(text::lexicon_count(stream, lex, "directives"));
  if (!stream.empty()) f.readability = text::flesch_reading_ease(stream);
  f.sentiment = text::sentiment(description, lex);
  return f;
}

// Known code-names; a registry containing anything else does not match
// this extractor.
const std::set<std::string, std::less<>>& known_names() {
  static const std::set<std::string, std::less<>> names = [] {
    std::set<std::string, std::less<>> s;
    for (const auto& e : default_registry().entries()) s.insert(e.code_name);
    return s;
  }();
  return names;
}

}  // namespace

ExtractionContext::ExtractionContext(std::vector<LinkedTicket> population, std::vector<RawCommit> all_commits,
                                     RepoMetricsTimeline timeline, const FeatureRegistry& registry,
                                     text::LexiconSet lexicons, ExtractionConfig config)
    : registry_(registry), population_(std::move(population)), config_(config), impl_(std::make_unique<Impl>()) {
  if (config_.temporal_window_days <= 0) throw InvalidArgument("temporal window must be positive");
  for (const auto& e : registry_.entries())
    if (!known_names().count(e.code_name))
      throw InvalidArgument("registry entry '" + e.code_name + "' has no extractor");
  auto& im = *impl_;
  im.timeline = std::move(timeline);
  im.lexicons = std::move(lexicons);
  im.tagger = std::make_unique<text::RuleTagger>(im.lexicons);

  im.commits = std::move(all_commits);
  std::sort(im.commits.begin(), im.commits.end(), [](const RawCommit& a, const RawCommit& b) {
    if (a.authored_at != b.authored_at) return a.authored_at < b.authored_at;
    return a.hash < b.hash;
  });
  for (const auto& c : im.commits) im.churn_prefix.push_back(im.churn_prefix.back() + c.churn());

  const std::size_t n = population_.size();
  im.closed.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = population_[i];
    if (t.commits.empty()) throw InvalidArgument("ticket " + t.id() + " has no linked commits");
    im.closed[i] = closed_instant(t);
    if (!im.position.emplace(t.id(), i).second) throw DataError("duplicate ticket id " + t.id());
  }
  im.by_closed.resize(n);
  std::iota(im.by_closed.begin(), im.by_closed.end(), std::size_t{0});
  std::sort(im.by_closed.begin(), im.by_closed.end(), [&](std::size_t a, std::size_t b) {
    if (im.closed[a] != im.closed[b]) return im.closed[a] < im.closed[b];
    return population_[a].id() < population_[b].id();
  });
  for (const auto i : im.by_closed) {
    const auto& t = population_[i];
    if (t.label) im.buggy_by_closed.push_back(i);
    auto push = [&](Timeline& tl) {
      tl.add(im.closed[i]);
      tl.buggy_prefix.push_back(tl.buggy_prefix.back() + (t.label ? 1.0 : 0.0));
    };
    if (!t.ticket.assignee.empty()) push(im.by_assignee[t.ticket.assignee]);
    std::set<std::string> comps(t.ticket.components.begin(), t.ticket.components.end());
    for (const auto& c : comps) push(im.by_component[c]);
  }
  for (const auto& t : population_) {
    im.created_by_project[t.ticket.project].push_back(t.ticket.created_at);
    if (!t.ticket.assignee.empty() && t.ticket.assigned_at)
      im.assigned_by_developer[t.ticket.assignee].push_back(*t.ticket.assigned_at);
  }
  for (auto& [k, v] : im.created_by_project) std::sort(v.begin(), v.end());
  for (auto& [k, v] : im.assigned_by_developer) std::sort(v.begin(), v.end());

  std::vector<text::Document> titles, texts;
  for (const auto& t : population_) {
    titles.push_back({t.ticket.title, t.ticket.created_at});
    texts.push_back({t.ticket.description, t.ticket.created_at});
  }
  im.title_index = std::make_shared<const text::DocumentIndex>(titles);
  im.text_index = std::make_shared<const text::DocumentIndex>(texts);
  im.title_counts.resize(n);
  im.text_counts.resize(n);
  im.text_features.resize(n);
  parallel_for(n, 0, [&](std::size_t i) {
    im.title_counts[i] = text::term_counts(population_[i].ticket.title, *im.title_index);
    im.text_counts[i] = text::term_counts(population_[i].ticket.description, *im.text_index);
    im.text_features[i] = analyze_description(population_[i].ticket.description, im.lexicons, *im.tagger);
  });
}

ExtractionContext::~ExtractionContext() = default;

// ---------------------------------------------------------------------------
// Extraction

namespace {

class Row {
 public:
  Row(const FeatureRegistry& registry, std::vector<FeatureValue>& values) : registry_(registry), values_(values) {}
  void set(std::string_view name, FeatureValue v) {
    if (const auto i = registry_.find(name)) values_[*i] = std::move(v);
  }
  void set(std::string_view name, double v) { set(name, FeatureValue(v)); }
  void set(std::string_view name, std::optional<double> v) {
    set(name, v ? FeatureValue(*v) : FeatureValue(Missing{}));
  }

 private:
  const FeatureRegistry& registry_;
  std::vector<FeatureValue>& values_;
};

bool owns_commit(const LinkedTicket& t, const RawCommit& c) {
  return std::any_of(t.commits.begin(), t.commits.end(), [&](const RawCommit& o) { return o.hash == c.hash; });
}

void code_features(Row& row, const ExtractionContext::Impl& im, Timestamp t) {
  const auto m = im.timeline.lookup(t);
  row.set(feature::kSmells, m ? std::optional(m->smells_count) : std::nullopt);
  row.set(feature::kLanguages, m ? std::optional(m->number_of_languages) : std::nullopt);
  row.set(feature::kFiles, m ? std::optional(m->number_of_files) : std::nullopt);
  row.set(feature::kLocs, m ? std::optional(m->total_locs) : std::nullopt);
}

void developer_features(Row& row, const ExtractionContext::Impl& im, const LinkedTicket& lt, Timestamp t) {
  const auto& tk = lt.ticket;
  double anfic = 0;
  if (const auto it = im.by_assignee.find(tk.assignee); !tk.assignee.empty() && it != im.by_assignee.end()) {
    const auto [assigned, buggy] = it->second.before(t);
    anfic = ratio(buggy, assigned);
  }
  row.set(feature::kAnfic, anfic);

  double familiarity = 0;
  if (!tk.assignee.empty()) {
    double mine = 0;
    if (const auto it = im.assigned_by_developer.find(tk.assignee); it != im.assigned_by_developer.end()) {
      mine = static_cast<double>(std::lower_bound(it->second.begin(), it->second.end(), t) - it->second.begin());
      if (tk.assigned_at && *tk.assigned_at < t) mine -= 1;  // self
    }
    const auto& created = im.created_by_project.at(tk.project);
    double total = static_cast<double>(std::lower_bound(created.begin(), created.end(), t) - created.begin());
    if (tk.created_at < t) total -= 1;
    familiarity = ratio(mine, total);
  }
  row.set(feature::kFamiliarity, familiarity);
}

void external_features(Row& row, const ExtractionContext& ctx, const LinkedTicket& lt, Timestamp t) {
  const auto& im = ctx.impl();
  const double window = static_cast<double>(ctx.config().temporal_window_days) * 86400.0;
  // Tickets closed in (t - window, t], excluding the ticket itself.
  double total = 0, buggy = 0, wtotal = 0, wbuggy = 0;
  const auto lo = std::upper_bound(im.by_closed.begin(), im.by_closed.end(), t - Seconds{static_cast<long>(window)},
                                   [&](Timestamp v, std::size_t i) { return v < im.closed[i]; });
  const auto hi = std::upper_bound(im.by_closed.begin(), im.by_closed.end(), t,
                                   [&](Timestamp v, std::size_t i) { return v < im.closed[i]; });
  for (auto it = lo; it != hi; ++it) {
    const auto& other = ctx.population()[*it];
    if (other.id() == lt.id()) continue;
    const double age = static_cast<double>((t - im.closed[*it]).count());
    const double w = 1.0 - age / window;
    total += 1;
    wtotal += w;
    if (other.label) {
      buggy += 1;
      wbuggy += w;
    }
  }
  row.set(feature::kTemporalLocality, ratio(buggy, total));
  row.set(feature::kTemporalLocalityWeighted, ratio(wbuggy, wtotal));

  // Other tickets' commits between the assignment and the measurement instant.
  const Timestamp start = lt.ticket.assigned_at.value_or(lt.ticket.created_at);
  auto time_lower = [&](Timestamp v) {
    return static_cast<std::size_t>(
        std::lower_bound(im.commits.begin(), im.commits.end(), v,
                         [](const RawCommit& c, Timestamp x) { return c.authored_at < x; }) -
        im.commits.begin());
  };
  auto time_upper = [&](Timestamp v) {
    return static_cast<std::size_t>(
        std::upper_bound(im.commits.begin(), im.commits.end(), v,
                         [](Timestamp x, const RawCommit& c) { return x < c.authored_at; }) -
        im.commits.begin());
  };
  double count = 0, churn = 0;
  if (start <= t) {
    const auto a = time_lower(start), b = time_upper(t);
    count = static_cast<double>(b - a);
    churn = im.churn_prefix[b] - im.churn_prefix[a];
    for (const auto& own : lt.commits) {
      if (own.authored_at < start || own.authored_at > t) continue;
      count -= 1;
      churn -= own.churn();
    }
  }
  row.set(feature::kWipCount, std::max(count, 0.0));
  row.set(feature::kWipChurn, std::max(churn, 0.0));

  // Latest commit of another ticket preceding the assignment.
  std::optional<double> latest_churn, latest_files;
  for (auto i = time_lower(std::min(start, t)); i > 0; --i) {
    const auto& c = im.commits[i - 1];
    if (owns_commit(lt, c)) continue;
    latest_churn = c.churn();
    latest_files = c.jit.nf;
    break;
  }
  row.set(feature::kLatestChurn, latest_churn);
  row.set(feature::kLatestFiles, latest_files);
}

void internal_features(Row& row, const ExtractionContext::Impl& im, const LinkedTicket& lt, Timestamp t) {
  const auto& tk = lt.ticket;
  std::set<std::string> participants;
  for (const auto* who : {&tk.reporter, &tk.creator})
    if (!who->empty()) participants.insert(*who);
  if (!tk.assignee.empty() && tk.assigned_at && *tk.assigned_at <= t) participants.insert(tk.assignee);
  double comments = 0, histories = 0, work_items = 0, negative = 0;
  for (const auto& c : tk.comments) {
    if (c.at > t) continue;
    comments += 1;
    if (!c.author.empty()) participants.insert(c.author);
    if (text::sentiment(c.text, im.lexicons).polarity < 0) negative += 1;
  }
  for (const auto& h : tk.histories) {
    if (h.at > t) continue;
    histories += 1;
    if (!h.author.empty()) participants.insert(h.author);
  }
  for (const auto& w : tk.work_items) {
    if (w.at > t) continue;
    work_items += 1;
    if (!w.author.empty()) participants.insert(w.author);
  }
  row.set(feature::kParticipants, static_cast<double>(participants.size()));
  row.set(feature::kActivities, comments + histories + work_items);
  row.set(feature::kComments, comments);
  row.set(feature::kWorkItems, work_items);
  row.set(feature::kHistories, histories);
  const auto& tf = im.text_features[im.position.at(lt.id())];
  row.set(feature::kPolarity, tf.sentiment.polarity);
  row.set(feature::kSubjectivity, tf.sentiment.subjectivity);
  row.set(feature::kNegCount, negative);
  row.set(feature::kNegShare, ratio(negative, comments));
  row.set(feature::kNegPresent, negative > 0 ? 1.0 : 0.0);
}

void intrinsic_features(Row& row, const ExtractionContext& ctx, const LinkedTicket& lt, Timestamp t) {
  const auto& im = ctx.impl();
  const auto& tk = lt.ticket;
  row.set(feature::kPriority, tk.priority.empty() ? FeatureValue(Missing{}) : FeatureValue(tk.priority));
  row.set(feature::kType, tk.type.empty() ? FeatureValue(Missing{}) : FeatureValue(tk.type));
  const std::set<std::string> comps(tk.components.begin(), tk.components.end());
  row.set(feature::kComponentsCount, static_cast<double>(comps.size()));
  double bugginess = 0;
  for (const auto& c : comps) {
    const auto it = im.by_component.find(c);
    if (it == im.by_component.end()) continue;
    const auto [total, buggy] = it->second.before(t);
    bugginess = std::max(bugginess, ratio(buggy, total));
  }
  row.set(feature::kComponentsBugginess, bugginess);

  const auto& tf = im.text_features[im.position.at(lt.id())];
  static const char* da_codes[] = {"DA_ACT", "DA_CND", "DA_CNT", "DA_IMP", "DA_INC", "DA_OPT", "DA_SRC", "DA_WKP"};
  std::size_t risk = 0;
  for (int i = 0; i < 8; ++i) {
    row.set(std::string("nlp4re_description-") + da_codes[i], static_cast<double>(tf.da[i]));
    risk += tf.da[i];
  }
  row.set("nlp4re_description-DA_RKL", static_cast<double>(risk));
  row.set("nlp4re_description-EX_SBJ", tf.subjects);
  row.set("nlp4re_description-EX_CNS", tf.words);
  row.set("nlp4re_description-EX_VRB", tf.verbs);
  row.set("nlp4re_description-EX_AMG", tf.ambiguity);
  row.set("nlp4re_description-EX_DIR", tf.directives);
  row.set("nlp4re_description-EX_RDS", tf.readability);
  row.set("nlp4re_description-EX_ICP", tf.completeness);
  row.set("nlp4re_description-EX_ACD", tf.action_density);
  row.set("nlp4re_description-EX_ENT", tf.entities);
}

void t2t_features(Row& row, const ExtractionContext& ctx, const LinkedTicket& lt, Timestamp t) {
  const auto& im = ctx.impl();
  const auto self = im.position.at(lt.id());
  const text::TfIdfModel title_model(im.title_index, t), text_model(im.text_index, t);
  text::IdfCache title_idf(title_model), text_idf(text_model);
  // [field][metric] with metrics jaccard, tfidf_cosine, euclidean.
  double max_v[2][3] = {}, sum_v[2][3] = {};
  std::size_t n = 0;
  for (const auto i : im.buggy_by_closed) {
    if (!(im.closed[i] < t)) break;
    if (i == self) continue;
    ++n;
    const text::TermCounts* a[2] = {&im.title_counts[self], &im.text_counts[self]};
    const text::TermCounts* b[2] = {&im.title_counts[i], &im.text_counts[i]};
    text::IdfCache* idf[2] = {&title_idf, &text_idf};
    for (int f = 0; f < 2; ++f) {
      const double v[3] = {text::jaccard(*a[f], *b[f]),
                           (f == 0 ? title_model : text_model).empty() ? 0.0 : text::tfidf_cosine(*a[f], *b[f], *idf[f]),
                           text::euclidean_tf(*a[f], *b[f])};
      for (int m = 0; m < 3; ++m) {
        max_v[f][m] = std::max(max_v[f][m], v[m]);
        sum_v[f][m] += v[m];
      }
    }
  }
  static const char* metrics[] = {"jaccard", "tfidf_cosine", "euclidean_distance"};
  static const char* fields[] = {"title", "text"};
  for (int f = 0; f < 2; ++f)
    for (int m = 0; m < 3; ++m) {
      const std::string suffix = std::string("_similarity_") + metrics[m] + "_" + fields[f];
      row.set("buggy_similarity-max" + suffix, max_v[f][m]);
      row.set("buggy_similarity-avg" + suffix, n ? sum_v[f][m] / static_cast<double>(n) : 0.0);
    }
}

void jit_features(Row& row, const LinkedTicket& lt, Timestamp t) {
  std::vector<RawCommit> visible;
  for (const auto& c : lt.commits)
    if (c.authored_at <= t) visible.push_back(c);
  if (visible.empty()) return;
  const auto a = aggregate_jit(visible);
  row.set("jit-ndev-MAX", a.ndev_max);
  row.set("jit-arexp-MIN", a.arexp_min);
  row.set("jit-aexp-MIN", a.aexp_min);
  row.set("jit-asexp-MIN", a.asexp_min);
  row.set("jit-ns-MAX", a.ns_max);
  row.set("jit-age-MIN", a.age_min);
  row.set("jit-author_date-DURATION", a.author_date_duration);
  row.set("jit-la-SUM", a.la_sum);
  row.set("jit-ld-SUM", a.ld_sum);
  row.set("jit-fix-COUNT_TRUE", a.fix_count);
  row.set("jit-nd-MAX", a.nd_max);
  row.set("jit-nuc-MAX", a.nuc_max);
  row.set("jit-ent-MAX", a.ent_max);
  row.set("jit-nf-MAX", a.nf_max);
  row.set("num_commits", a.num_commits);
}

}  // namespace

FeatureVector extract_features(const LinkedTicket& ticket, ProximityPoint point, const ExtractionContext& context) {
  const auto snap = snapshot_instant(ticket, point);
  if (!snap.defined)
    throw InvalidArgument("snapshot of " + ticket.id() + " at " + std::string(to_string(point)) + " is undefined");
  if (!context.impl().position.count(ticket.id()))
    throw InvalidArgument("ticket " + ticket.id() + " is not part of the extraction context");
  const auto& registry = context.registry();
  FeatureVector fv;
  fv.ticket_id = ticket.id();
  fv.point = point;
  fv.instant = snap.instant;
  fv.label = ticket.label;
  fv.values.assign(registry.size(), Missing{});

  auto available = [&](Family f) {
    for (const auto& e : registry.entries())
      if (e.family == f && is_available(e.availability, point)) return true;
    return false;
  };
  const Timestamp t = snap.instant;
  Row row(registry, fv.values);
  const auto& im = context.impl();
  if (available(Family::Code)) code_features(row, im, t);
  if (available(Family::Developer)) developer_features(row, im, ticket, t);
  if (available(Family::ExternalTemperature)) external_features(row, context, ticket, t);
  if (available(Family::InternalTemperature)) internal_features(row, im, ticket, t);
  if (available(Family::Intrinsic)) intrinsic_features(row, context, ticket, t);
  if (available(Family::TicketToTickets)) t2t_features(row, context, ticket, t);
  if (available(Family::Jit)) jit_features(row, ticket, t);

  for (std::size_t i = 0; i < registry.size(); ++i)
    if (!is_available(registry[i].availability, point)) fv.values[i] = Missing{};
  return fv;
}

FeatureMatrix build_feature_matrix(const ExtractionContext& context, ProximityPoint point, unsigned threads) {
  auto ordered = order_by_proximity(context.population(), point);
  FeatureMatrix m;
  m.point = point;
  for (const auto& e : context.registry().entries()) m.columns.push_back(e.code_name);
  m.excluded = std::move(ordered.excluded);
  m.rows.resize(ordered.tickets.size());
  parallel_for(ordered.tickets.size(), threads,
               [&](std::size_t i) { m.rows[i] = extract_features(ordered.tickets[i], point, context); });
  return m;
}

void write_feature_matrix(std::ostream& out, const FeatureMatrix& matrix) {
  csv::Row header = {"ticket_id", "proximity", "label"};
  header.insert(header.end(), matrix.columns.begin(), matrix.columns.end());
  csv::write_row(out, header);
  const std::string point(to_string(matrix.point));
  for (const auto& r : matrix.rows) {
    csv::Row row = {r.ticket_id, point, r.label ? "1" : "0"};
    for (const auto& v : r.values) row.push_back(to_cell(v));
    csv::write_row(out, row);
  }
}

FeatureMatrix read_feature_matrix(const std::filesystem::path& path, const FeatureRegistry& registry) {
  const auto table = csv::read_file(path);
  if (table.header.size() < 3 || table.header[0] != "ticket_id" || table.header[1] != "proximity" ||
      table.header[2] != "label")
    throw DataError(path.string() + ": feature matrix must start with ticket_id,proximity,label");
  FeatureMatrix m;
  m.columns.assign(table.header.begin() + 3, table.header.end());
  std::vector<ValueKind> kinds;
  for (const auto& c : m.columns) {
    const auto i = registry.find(c);
    if (!i) throw DataError(path.string() + ": unknown feature column '" + c + "'");
    kinds.push_back(registry[*i].kind);
  }
  bool first = true;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.header.size())
      throw DataError(path.string() + ": wrong field count in data row " + std::to_string(r + 1));
    FeatureVector fv;
    fv.ticket_id = row[0];
    try {
      fv.point = parse_point(row[1]);
    } catch (const InvalidArgument& e) {
      throw DataError(path.string() + ": " + e.what());
    }
    if (first) m.point = fv.point;
    if (fv.point != m.point) throw DataError(path.string() + ": rows mix proximity points");
    first = false;
    if (row[2] != "0" && row[2] != "1") throw DataError(path.string() + ": label must be 0 or 1");
    fv.label = row[2] == "1";
    for (std::size_t c = 0; c < m.columns.size(); ++c) {
      const auto& cell = row[c + 3];
      if (cell.empty()) {
        fv.values.emplace_back(Missing{});
      } else if (kinds[c] == ValueKind::Categorical) {
        fv.values.emplace_back(cell);
      } else {
        try {
          fv.values.emplace_back(parse_double(cell));
        } catch (const InvalidArgument& e) {
          throw DataError(path.string() + ": column " + m.columns[c] + ": " + e.what());
        }
      }
    }
    m.rows.push_back(std::move(fv));
  }
  return m;
}

}  // namespace tlp
