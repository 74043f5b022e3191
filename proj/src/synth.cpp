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

#include "tlp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace tlp {
namespace {

using nlohmann::json;

constexpr const char* kPriorities[] = {"Trivial", "Minor", "Major", "Critical", "Blocker"};
constexpr double kPriorityCuts[] = {-1.5, -0.5, 0.7, 1.5};

struct TypeInfo {
  const char* name;
  double share;
  double effect;
};
constexpr TypeInfo kTypes[] = {
    {"Bug", 0.40, 0.4}, {"Improvement", 0.25, 0.0}, {"New Feature", 0.15, -0.2}, {"Sub-task", 0.12, -0.3}, {"Test", 0.08, -0.5}};

// Word pools for the free text. Chosen to touch the bundled lexicons
// (modals, determiners, sentiment words) without carrying label signal.
constexpr const char* kNouns[] = {"query",  "planner", "table",   "partition", "schema",   "client", "server",
                                  "region", "cache",   "scanner", "metastore", "operator", "join",   "file",
                                  "index",  "column",  "session", "config",    "test",     "log"};
constexpr const char* kVerbs[] = {"add",    "fix",  "remove", "update", "support", "refactor",
                                  "handle", "move", "check",  "return", "use",     "allow"};
constexpr const char* kAdjectives[] = {"wrong", "slow", "new", "missing", "large", "empty", "stale", "default"};
constexpr const char* kCommentOpeners[] = {"Thanks for the patch.", "Looks good to me.", "This is a bad idea.",
                                           "Great work, committed.", "I am not sure this is right.",
                                           "The tests fail with this change.", "Please rebase.",
                                           "Nice catch, this was broken."};

template <class T, std::size_t N>
const T& pick(Rng& rng, const T (&pool)[N]) {
  return pool[rng.below(N)];
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::string make_title(Rng& rng, const std::string& component) {
  std::string s = pick(rng, kVerbs);
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  s += std::string(" ") + pick(rng, kAdjectives) + " " + pick(rng, kNouns) + " in " + component;
  if (rng.uniform() < 0.4) s += std::string(" ") + pick(rng, kNouns);
  return s;
}

std::string make_sentence(Rng& rng) {
  std::string s;
  switch (rng.below(5)) {
    case 0:
      s = std::string("The ") + pick(rng, kNouns) + " should " + pick(rng, kVerbs) + " the " + pick(rng, kNouns);
      break;
    case 1:
      s = std::string("We must ") + pick(rng, kVerbs) + " a " + pick(rng, kAdjectives) + " " + pick(rng, kNouns);
      break;
    case 2:
      s = std::string("When the ") + pick(rng, kNouns) + " is " + pick(rng, kAdjectives) + ", the " +
          pick(rng, kNouns) + " returns an error";
      break;
    case 3:
      s = std::string("Please ") + pick(rng, kVerbs) + " the " + pick(rng, kNouns) + " and " + pick(rng, kVerbs) +
          " the " + pick(rng, kNouns);
      break;
    default:
      s = std::string("This ") + pick(rng, kNouns) + " can be " + pick(rng, kAdjectives);
      break;
  }
  return s + ".";
}

std::string make_description(Rng& rng) {
  std::string s;
  const std::size_t n = 1 + rng.below(5);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += make_sentence(rng);
  }
  return s;
}

std::string make_comment(Rng& rng) {
  std::string s = pick(rng, kCommentOpeners);
  if (rng.uniform() < 0.5) s += " " + make_sentence(rng);
  return s;
}

std::string hex_hash(Rng& rng) {
  char buf[41];
  for (int i = 0; i < 5; ++i) std::snprintf(buf + 8 * i, 9, "%08x", static_cast<unsigned>(rng.next_u64() >> 32));
  return std::string(buf, 40);
}

Timestamp at_offset(Timestamp base, double seconds) {
  return base + Seconds(static_cast<std::int64_t>(std::llround(seconds)));
}

// Uniform instant in [lo, hi].
Timestamp between(Rng& rng, Timestamp lo, Timestamp hi) {
  const double span = static_cast<double>((hi - lo).count());
  return at_offset(lo, std::floor(rng.uniform() * (span + 1)));
}

struct Latent {
  double z_open, z_ip, z_churn;
  std::size_t type;
};

void validate(const GeneratorSpec& spec) {
  if (spec.tickets < 10) throw InvalidArgument("generator needs at least 10 tickets");
  if (!(spec.prevalence > 0 && spec.prevalence < 1)) throw InvalidArgument("prevalence must lie in (0, 1)");
  if (!(spec.signals.open >= 0 && spec.signals.in_progress >= 0 && spec.signals.closed >= 0))
    throw InvalidArgument("signal strengths must be >= 0");
  if (spec.span_days <= 0) throw InvalidArgument("span_days must be positive");
  if (!(spec.unassigned_fraction >= 0 && spec.unassigned_fraction < 1))
    throw InvalidArgument("unassigned_fraction must lie in [0, 1)");
  if (spec.developers < 2 || spec.components < 1) throw InvalidArgument("need >= 2 developers and >= 1 component");
  if (spec.project.empty()) throw InvalidArgument("project must be non-empty");
}

}  // namespace

GeneratedCorpus generate(const GeneratorSpec& spec) {
  validate(spec);
  const Timestamp start = parse_timestamp(spec.start);
  Rng rng(spec.seed);
  GeneratedCorpus out;
  out.spec = spec;
  for (const auto& t : kTypes) out.type_effects[t.name] = t.effect;

  std::vector<std::string> devs, comps;
  for (std::size_t i = 0; i < spec.developers; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "dev%02zu", i + 1);
    devs.emplace_back(buf);
  }
  for (std::size_t i = 0; i < spec.components; ++i) comps.push_back("component-" + std::to_string(i + 1));

  // Latents first, then the intercept that hits the target prevalence.
  const std::size_t n = spec.tickets;
  std::vector<Latent> lat(n);
  for (auto& l : lat) {
    l.z_open = rng.normal();
    l.z_ip = rng.normal();
    l.z_churn = rng.normal();
    double u = rng.uniform(), acc = 0;
    l.type = std::size(kTypes) - 1;
    for (std::size_t k = 0; k < std::size(kTypes); ++k) {
      acc += kTypes[k].share;
      if (u < acc) {
        l.type = k;
        break;
      }
    }
  }
  const auto& sg = spec.signals;
  auto logit_wo_b0 = [&](const Latent& l) {
    return sg.open * l.z_open + kTypes[l.type].effect + sg.in_progress * l.z_ip + sg.closed * l.z_churn;
  };
  double lo = -30, hi = 30;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double mean = 0;
    for (const auto& l : lat) mean += sigmoid(mid + logit_wo_b0(l));
    mean /= static_cast<double>(n);
    (mean < spec.prevalence ? lo : hi) = mid;
  }
  out.intercept = 0.5 * (lo + hi);

  std::vector<double> created_offsets(n);
  for (auto& c : created_offsets) c = rng.uniform() * spec.span_days * 86400.0;
  std::sort(created_offsets.begin(), created_offsets.end());

  const double hour = 3600, day = 86400;
  for (std::size_t i = 0; i < n; ++i) {
    const Latent& l = lat[i];
    const bool label = rng.uniform() < sigmoid(out.intercept + logit_wo_b0(l));

    RawTicket t;
    t.id = spec.project + "-" + std::to_string(i + 1);
    t.project = spec.project;
    t.type = kTypes[l.type].name;
    const double pz = l.z_open + 0.3 * rng.normal();
    std::size_t level = 0;
    while (level < std::size(kPriorityCuts) && pz >= kPriorityCuts[level]) ++level;
    t.priority = kPriorities[level];
    t.components.push_back(comps[rng.below(comps.size())]);
    if (rng.uniform() < 0.15) {
      const auto& extra = comps[rng.below(comps.size())];
      if (extra != t.components.front()) t.components.push_back(extra);
    }
    t.created_at = at_offset(start, created_offsets[i]);
    t.reporter = devs[rng.below(devs.size())];
    t.creator = rng.uniform() < 0.8 ? t.reporter : devs[rng.below(devs.size())];
    const bool assigned = rng.uniform() >= spec.unassigned_fraction;
    const Timestamp assigned_at = at_offset(t.created_at, rng.exponential(2 * day) + hour);
    if (assigned) {
      t.assigned_at = assigned_at;
      t.assignee = devs[rng.below(devs.size())];
    }
    t.title = make_title(rng, t.components.front());
    t.description = rng.uniform() < 0.03 ? std::string() : make_description(rng);

    const Timestamp mid_begin = assigned ? assigned_at : t.created_at;
    const Timestamp first_commit = at_offset(mid_begin, rng.exponential(6 * day) + hour);

    // Activity: pre-assignment and post-first-commit noise; the in-progress
    // signal lives in between.
    auto add_activity = [&](Timestamp a, Timestamp b, std::uint64_t comments, std::uint64_t histories) {
      if (b < a) return;
      for (std::uint64_t k = 0; k < comments; ++k)
        t.comments.push_back({devs[rng.below(devs.size())], between(rng, a, b), make_comment(rng)});
      for (std::uint64_t k = 0; k < histories; ++k)
        t.histories.push_back({devs[rng.below(devs.size())], between(rng, a, b)});
    };
    if (assigned) add_activity(t.created_at, assigned_at - Seconds(2), rng.poisson(0.8), rng.poisson(0.8));
    const double ip = sg.in_progress > 0 ? 0.8 * l.z_ip : 0.0;
    add_activity(mid_begin, first_commit - Seconds(2), rng.poisson(std::exp(1.0 + ip)), rng.poisson(std::exp(0.8 + ip)));
    const std::uint64_t work = rng.poisson(0.3);
    for (std::uint64_t k = 0; k < work; ++k)
      t.work_items.push_back({t.assignee.empty() ? t.reporter : t.assignee, between(rng, mid_begin, first_commit),
                              static_cast<std::int64_t>(600 + rng.below(4 * 3600))});

    // Commits: total lines added carry the closed-stage signal.
    const std::size_t ncommits = 1 + rng.poisson(0.8);
    const double churn_z = sg.closed > 0 ? l.z_churn : 0.0;
    // Lines added track the latent exactly; lines deleted only loosely.
    const double total_la = std::round(std::exp(4.0 + 0.6 * churn_z));
    const double total_ld = std::round(std::exp(3.5 + 0.4 * churn_z + 0.5 * rng.normal()));
    std::vector<double> w(ncommits);
    for (auto& x : w) x = 0.1 + rng.uniform();
    const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
    double assigned_la = 0, assigned_ld = 0;
    Timestamp when = first_commit;
    const std::size_t buggy_idx = label ? rng.below(ncommits) : ncommits;
    const std::string author = t.assignee.empty() ? devs[rng.below(devs.size())] : t.assignee;
    for (std::size_t k = 0; k < ncommits; ++k) {
      if (k) when = at_offset(when, rng.exponential(day) + 60);
      RawCommit c;
      c.hash = hex_hash(rng);
      c.author = rng.uniform() < 0.9 ? author : devs[rng.below(devs.size())];
      c.authored_at = when;
      c.ticket_ids = {t.id};
      c.buggy = (k == buggy_idx);
      auto& j = c.jit;
      j.la = k + 1 == ncommits ? total_la - assigned_la : std::floor(total_la * w[k] / wsum);
      assigned_la += j.la;
      j.ld = k + 1 == ncommits ? total_ld - assigned_ld : std::floor(total_ld * w[k] / wsum);
      assigned_ld += j.ld;
      j.ns = 1 + static_cast<double>(rng.poisson(0.5));
      j.nd = j.ns + static_cast<double>(rng.poisson(1.0));
      j.nf = j.nd + static_cast<double>(rng.poisson(2.0));
      j.entropy = j.nf > 1 ? rng.uniform() * std::log2(j.nf) : 0.0;
      j.ndev = 1 + static_cast<double>(rng.poisson(3.0));
      j.age = std::round(rng.exponential(30.0) * 100) / 100;
      j.nuc = 1 + static_cast<double>(rng.poisson(2.0));
      j.aexp = static_cast<double>(rng.poisson(150.0));
      j.arexp = std::round(j.aexp * rng.uniform() * 100) / 100;
      j.asexp = static_cast<double>(rng.poisson(40.0));
      j.fix = rng.uniform() < (l.type == 0 ? 0.7 : 0.1);
      for (double f = 0; f < j.nf && f < 5; ++f) c.files.push_back(pick(rng, kNouns) + std::string(".java"));
      out.commits.push_back(std::move(c));
    }
    add_activity(first_commit, when + Seconds(static_cast<std::int64_t>(2 * day)), rng.poisson(1.5),
                 rng.poisson(1.5));
    auto by_time = [](const auto& a, const auto& b) { return a.at < b.at; };
    std::stable_sort(t.comments.begin(), t.comments.end(), by_time);
    std::stable_sort(t.histories.begin(), t.histories.end(), by_time);
    std::stable_sort(t.work_items.begin(), t.work_items.end(), by_time);
    out.tickets.push_back(std::move(t));
  }

  // A few commits that name no ticket.
  const Timestamp end = at_offset(start, spec.span_days * day);
  for (int k = 0; k < 5; ++k) {
    RawCommit c;
    c.hash = hex_hash(rng);
    c.author = devs[rng.below(devs.size())];
    c.authored_at = between(rng, start, end);
    c.jit.la = 5;
    c.jit.ld = 1;
    c.jit.ns = c.jit.nd = c.jit.nf = c.jit.ndev = c.jit.nuc = 1;
    out.commits.push_back(std::move(c));
  }

  out.clear_repository[spec.project] = true;
  if (spec.plant_filter_cases) {
    auto commits_of = [&](const std::string& id) {
      std::vector<std::size_t> idx;
      for (std::size_t k = 0; k < out.commits.size(); ++k)
        if (std::find(out.commits[k].ticket_ids.begin(), out.commits[k].ticket_ids.end(), id) !=
            out.commits[k].ticket_ids.end())
          idx.push_back(k);
      return idx;
    };
    auto is_buggy = [&](const std::string& id) {
      for (auto k : commits_of(id))
        if (out.commits[k].buggy) return true;
      return false;
    };
    // Shared buggy commit: pick A in the first half of the timeline and an
    // earlier buggy B that is already open (and assigned) by then.
    std::string planted_a, planted_b;
    for (std::size_t a = n / 4; a < n / 2 && planted_a.empty(); ++a) {
      const auto& ta = out.tickets[a];
      if (!is_buggy(ta.id)) continue;
      std::size_t bug_commit = 0;
      for (auto k : commits_of(ta.id))
        if (out.commits[k].buggy) bug_commit = k;
      const Timestamp at = out.commits[bug_commit].authored_at;
      for (std::size_t b = a; b-- > 0;) {
        const auto& tb = out.tickets[b];
        if (!is_buggy(tb.id)) continue;
        if (tb.assigned_at.value_or(tb.created_at) > at) continue;
        out.commits[bug_commit].ticket_ids.push_back(tb.id);
        planted_a = ta.id;
        planted_b = tb.id;
        break;
      }
    }
    if (!planted_a.empty()) out.planted["ExclusiveBuggyCommitsOnly"] = {planted_a};

    // First commit predating creation.
    for (std::size_t c = n / 3; c < n; ++c) {
      const auto& tc = out.tickets[c];
      if (tc.id == planted_a || tc.id == planted_b) continue;
      auto idx = commits_of(tc.id);
      if (idx.empty()) continue;
      out.commits[idx.front()].authored_at = tc.created_at - Seconds(static_cast<std::int64_t>(2 * hour));
      out.planted["FirstCommitAfterOpeningDate"] = {tc.id};
      out.planted["CommitAfterOpeningDate"] = {tc.id};
      break;
    }

    // A mirror project whose main repository is not clear.
    for (std::size_t m = n / 3 + 7; m < n; ++m) {
      auto& tm = out.tickets[m];
      if (tm.id == planted_a || tm.id == planted_b) continue;
      if (out.planted["FirstCommitAfterOpeningDate"].front() == tm.id) continue;
      tm.project = spec.project + "-MIRROR";
      out.clear_repository[tm.project] = false;
      out.planted["ClearRepository"] = {tm.id};
      break;
    }
    // The snoring cut is data-driven: the most recently closed 20%.
    out.planted["NoSnoring"] = {};
  }

  std::stable_sort(out.commits.begin(), out.commits.end(), [](const RawCommit& a, const RawCommit& b) {
    return a.authored_at != b.authored_at ? a.authored_at < b.authored_at : a.hash < b.hash;
  });

  // Daily repository metrics covering every ticket and commit instant.
  Timestamp last = end;
  for (const auto& c : out.commits) last = std::max(last, c.authored_at);
  for (const auto& t : out.tickets)
    for (const auto& cm : t.comments) last = std::max(last, cm.at);
  std::vector<RepoMetrics> records;
  double locs = 200000, files = 1500, smells = 900;
  for (Timestamp d = start - Seconds(static_cast<std::int64_t>(day)); d <= last + Seconds(static_cast<std::int64_t>(day));
       d += Seconds(static_cast<std::int64_t>(day))) {
    locs += std::round(rng.normal() * 300 + 150);
    files += static_cast<double>(rng.poisson(1.0));
    smells = std::max(0.0, smells + std::round(rng.normal() * 3 + 0.5));
    records.push_back({d, locs, files, 3 + static_cast<double>(locs > 260000), smells});
  }
  out.timeline = RepoMetricsTimeline(std::move(records));
  return out;
}

std::string manifest_json(const GeneratedCorpus& corpus) {
  const auto& s = corpus.spec;
  json spec = {{"tickets", s.tickets},
               {"prevalence", s.prevalence},
               {"seed", s.seed},
               {"signals", {{"open", s.signals.open}, {"in_progress", s.signals.in_progress}, {"closed", s.signals.closed}}},
               {"span_days", s.span_days},
               {"project", s.project},
               {"start", s.start},
               {"unassigned_fraction", s.unassigned_fraction},
               {"developers", s.developers},
               {"components", s.components},
               {"plant_filter_cases", s.plant_filter_cases}};
  json planted = json::object();
  for (const auto& [k, v] : corpus.planted) planted[k] = v;
  json clarity = json::object();
  for (const auto& [k, v] : corpus.clear_repository) clarity[k] = v;
  std::size_t positives = 0;
  for (const auto& c : corpus.commits)
    if (c.buggy) ++positives;
  json m = {{"generator", spec},
            {"label_model",
             {{"intercept", corpus.intercept},
              {"priority_latent", s.signals.open},
              {"in_progress_activity_latent", s.signals.in_progress},
              {"churn_latent", s.signals.closed},
              {"type_effects", corpus.type_effects},
              {"priority_cut_points", kPriorityCuts},
              {"churn_feature", "jit-la-SUM"},
              {"open_feature", "priority"}}},
            {"planted_filter_cases", planted},
            {"clear_repository", clarity},
            {"counts", {{"tickets", corpus.tickets.size()}, {"commits", corpus.commits.size()}, {"buggy_commits", positives}}},
            {"files", {"tickets.jsonl", "commits.csv", "repo_metrics.csv", "manifest.json"}}};
  return m.dump(2) + "\n";
}

void write_generated(const GeneratedCorpus& corpus, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw DataError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("tickets.jsonl");
    write_tickets_jsonl(f, corpus.tickets);
  }
  {
    auto f = open("commits.csv");
    write_commits_csv(f, corpus.commits);
  }
  {
    auto f = open("repo_metrics.csv");
    corpus.timeline.write(f);
  }
  {
    auto f = open("manifest.json");
    f << manifest_json(corpus);
  }
}

std::map<std::string, bool> read_manifest_clarity(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot read " + manifest_path.string());
  std::map<std::string, bool> out;
  try {
    const json m = json::parse(in);
    for (const auto& [k, v] : m.at("clear_repository").items()) out[k] = v.get<bool>();
  } catch (const json::exception& e) {
    throw DataError(manifest_path.string() + ": " + e.what());
  }
  return out;
}

}  // namespace tlp
