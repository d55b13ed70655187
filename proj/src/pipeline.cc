// Copyright 2026 The CHOKE Engine Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "choke/pipeline.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <spdlog/spdlog.h>

#include "choke/consistency.h"
#include "choke/csv.h"
#include "choke/curation.h"
#include "choke/knowledge.h"
#include "choke/mitigation.h"

namespace choke {

namespace fs = std::filesystem;
using nlohmann::json;

const char* command_name(Command c) {
  switch (c) {
    case Command::kValidate: return "validate";
    case Command::kLabel: return "label";
    case Command::kScore: return "score";
    case Command::kThreshold: return "threshold";
    case Command::kDetect: return "detect";
    case Command::kConsistency: return "consistency";
    case Command::kMitigate: return "mitigate";
    case Command::kReport: return "report";
  }
  return "report";
}

std::optional<Command> command_from_string(std::string_view name) {
  for (Command c : {Command::kValidate, Command::kLabel, Command::kScore,
                    Command::kThreshold, Command::kDetect, Command::kConsistency,
                    Command::kMitigate, Command::kReport}) {
    if (name == command_name(c)) return c;
  }
  return std::nullopt;
}

int exit_status_for(const Error& e) {
  return e.code() == ErrorCode::kInvalidArgument ? 2 : 1;
}

namespace {

// (model, dataset, setting): the unit thresholds are fitted on.
struct GroupKey {
  std::string model;
  std::string dataset;
  std::string setting;

  auto operator<=>(const GroupKey&) const = default;
};

json group_json(const GroupKey& g) {
  return {{"model_id", g.model}, {"dataset_id", g.dataset}, {"setting_id", g.setting}};
}

GroupKey group_from_json(const json& j) {
  return {j.at("model_id").get<std::string>(), j.at("dataset_id").get<std::string>(),
          j.at("setting_id").get<std::string>()};
}

class Stage {
 public:
  explicit Stage(const PipelineOptions& opts)
      : opts_(opts), hash_(config_hash(opts.config)), out_(opts.out_dir) {}

  int run() {
    switch (opts_.command) {
      case Command::kValidate: return validate();
      case Command::kLabel: return label();
      case Command::kScore: return score();
      case Command::kThreshold: return threshold();
      case Command::kDetect: return detect();
      case Command::kConsistency: return consistency();
      case Command::kMitigate: return mitigate();
      case Command::kReport: return report();
    }
    return 2;
  }

 private:
  const EngineConfig& cfg() const { return opts_.config; }

  // -- io -------------------------------------------------------------------

  void ensure_out_dir() const {
    std::error_code ec;
    fs::create_directories(out_, ec);
    if (ec || !fs::is_directory(out_)) {
      throw Error(ErrorCode::kUnwritableOutput,
                  "cannot create output directory " + out_.string());
    }
  }

  void write_file(const fs::path& path, const std::string& content) const {
    ensure_out_dir();
    if (path.has_parent_path()) {
      std::error_code ec;
      fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os || !(os << content) || !os.flush()) {
      throw Error(ErrorCode::kUnwritableOutput, "cannot write " + path.string());
    }
    spdlog::info("wrote {}", path.string());
  }

  std::string provenance_comment() const {
    return "# config_hash=" + hash_ + ",seed=" + std::to_string(cfg().seed) + "\n";
  }

  json stamp(json j) const {
    j["config_hash"] = hash_;
    j["seed"] = cfg().seed;
    return j;
  }

  fs::path upstream(const char* name) const {
    const fs::path p = out_ / name;
    if (!fs::exists(p)) {
      throw Error(ErrorCode::kUpstreamArtifactMissing,
                  std::string(name) + " not found in " + out_.string() +
                      "; run the stage that produces it first");
    }
    return p;
  }

  std::string read_file(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::kMissingInput, "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void check_hash(const json& j, const fs::path& p) const {
    if (j.contains("config_hash") && j["config_hash"] != hash_) {
      spdlog::warn("{} was produced with config {}, current config is {}",
                   p.filename().string(), j["config_hash"].get<std::string>(), hash_);
    }
  }

  json read_json(const char* name) const {
    const fs::path p = upstream(name);
    json j;
    try {
      j = json::parse(read_file(p));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kMalformedJson, p.string() + ": " + e.what());
    }
    check_hash(j, p);
    return j;
  }

  std::vector<json> read_jsonl(const char* name) const {
    const fs::path p = upstream(name);
    std::istringstream in(read_file(p));
    std::vector<json> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (line.empty()) continue;
      try {
        out.push_back(json::parse(line));
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kMalformedJson,
                    p.string() + ":" + std::to_string(n) + ": " + e.what(), n);
      }
    }
    if (!out.empty()) check_hash(out.front(), p);
    return out;
  }

  std::vector<QARecord> read_inputs() const {
    if (opts_.inputs.empty()) {
      throw Error(ErrorCode::kMissingInput,
                  std::string(command_name(opts_.command)) + " needs --input");
    }
    std::vector<QARecord> all;
    for (const auto& path : opts_.inputs) {
      std::ifstream in(path);
      if (!in) throw Error(ErrorCode::kMissingInput, "cannot open input " + path);
      ParseResult parsed = parse_records(in, cfg().parse_mode);
      for (const auto& issue : parsed.skipped) {
        spdlog::warn("{}:{}: skipped: {}", path, issue.line, issue.message);
      }
      spdlog::info("{}: {} records", path, parsed.records.size());
      for (auto& r : parsed.records) {
        if (r.model_id.empty()) r.model_id = cfg().model_id;
        all.push_back(std::move(r));
      }
    }
    return all;
  }

  static GroupKey group_of(const QARecord& r) {
    return {r.model_id, r.dataset_id, r.setting_id.str()};
  }

  // -- labels + scores join ---------------------------------------------------

  using Corpus = std::map<GroupKey, std::vector<ScoredRecord>>;

  Corpus load_scored() const {
    const auto labels = read_jsonl(artifact::kLabels);
    const auto scores = read_jsonl(artifact::kScores);
    std::map<std::tuple<GroupKey, std::string>, const json*> by_id;
    for (const auto& s : scores) {
      by_id[{group_from_json(s), s.at("question_id").get<std::string>()}] = &s;
    }
    Corpus corpus;
    for (const auto& l : labels) {
      const GroupKey g = group_from_json(l);
      ScoredRecord r;
      r.question_id = l.at("question_id").get<std::string>();
      const std::string kind = l.at("outcome").get<std::string>();
      if (kind == "factual") {
        r.label = OutcomeLabel::factual();
      } else if (kind == "hallucination") {
        r.label = OutcomeLabel::hallucination();
      } else {
        r.label = OutcomeLabel::excluded(
            exclusion_reason_from_string(l.at("reason").get<std::string>()));
      }
      if (auto it = by_id.find({g, r.question_id}); it != by_id.end()) {
        const json& s = *it->second;
        for (const auto& [name, v] : s.at("scores").items()) {
          r.certainty[metric_from_string(name)] = v.at("certainty").get<double>();
        }
        r.first_token_text = s.value("first_token_text", "");
      } else if (!r.label.is_excluded()) {
        spdlog::warn("no scores for {} ({})", r.question_id, g.setting);
      }
      corpus[g].push_back(std::move(r));
    }
    return corpus;
  }

  // Records of `records` that carry `metric`; counts the dropped labeled ones.
  static std::vector<ScoredRecord> with_metric(const std::vector<ScoredRecord>& records,
                                               MetricId metric) {
    std::vector<ScoredRecord> out;
    std::size_t dropped = 0;
    for (const auto& r : records) {
      if (r.certainty.contains(metric)) {
        out.push_back(r);
      } else if (!r.label.is_excluded()) {
        ++dropped;
      }
    }
    if (dropped) {
      spdlog::warn("{} labeled records lack a {} score and are left out", dropped,
                   metric_name(metric));
    }
    return out;
  }

  // -- stages -------------------------------------------------------------------

  int validate() {
    if (opts_.inputs.empty()) {
      throw Error(ErrorCode::kMissingInput, "validate needs --input");
    }
    json files = json::array();
    std::size_t total = 0;
    for (const auto& path : opts_.inputs) {
      std::ifstream in(path);
      if (!in) throw Error(ErrorCode::kMissingInput, "cannot open input " + path);
      // Unparseable lines are reported rather than fatal here.
      const auto parsed = parse_records(in, ParseMode::kLenient);
      const auto violations = validate_corpus(parsed.records);
      json v = json::array();
      for (const auto& x : violations) v.push_back({{"path", x.path}, {"message", x.message}});
      json skipped = json::array();
      for (const auto& s : parsed.skipped) {
        skipped.push_back({{"line", s.line}, {"field", s.field}, {"message", s.message}});
      }
      total += violations.size() + parsed.skipped.size();
      files.push_back({{"input", fs::path(path).filename().string()},
                       {"records", parsed.records.size()},
                       {"violations", std::move(v)},
                       {"unparsed_lines", std::move(skipped)}});
    }
    write_file(out_ / artifact::kValidation,
               stamp({{"files", std::move(files)}, {"total_issues", total}}).dump(2) + "\n");
    if (total > 0) spdlog::error("validation found {} issues", total);
    return total == 0 ? 0 : 1;
  }

  int label() {
    const auto records = read_inputs();
    std::string out;
    std::map<std::string, std::size_t> counts;
    for (const auto& r : records) {
      ModelFlags flags;
      flags.star_formatting =
          std::find(cfg().star_formatting_models.begin(),
                    cfg().star_formatting_models.end(),
                    r.model_id) != cfg().star_formatting_models.end();
      const KnowledgeLabel k = label_knowledge(r);
      const OutcomeLabel o = label_outcome(r, k, cfg().curation, flags);
      json line = group_json(group_of(r));
      line["question_id"] = r.question_id;
      line["knows"] = k.knows;
      line["probe_matches"] = k.probe_matches;
      line["outcome"] = outcome_kind_name(o.kind());
      line["reason"] = o.reason() ? json(exclusion_reason_name(*o.reason())) : json(nullptr);
      out += stamp(std::move(line)).dump() + "\n";
      ++counts[o.reason() ? exclusion_reason_name(*o.reason()) : outcome_kind_name(o.kind())];
    }
    for (const auto& [k, n] : counts) spdlog::info("label {}: {}", k, n);
    const std::size_t halluc = counts["hallucination"];
    std::size_t heuristic = 0;
    for (const auto& [k, n] : counts) {
      if (k != "factual" && k != "hallucination" && k != "no_knowledge") heuristic += n;
    }
    if (halluc + heuristic > 0) {
      spdlog::info("refinement removed {:.1f}% of candidate hallucinations",
                   100.0 * static_cast<double>(heuristic) /
                       static_cast<double>(halluc + heuristic));
    }
    write_file(out_ / artifact::kLabels, out);
    return 0;
  }

  int score() {
    const auto records = read_inputs();
    std::string out;
    for (const auto& r : records) {
      const RecordScores s = score_record(r, cfg().skip_tokens, cfg().metrics);
      json line = group_json(group_of(r));
      line["question_id"] = r.question_id;
      json scores = json::object();
      for (const auto& [id, sc] : s.scores) {
        scores[metric_name(id)] = {{"raw_value", sc.raw_value}, {"certainty", sc.certainty}};
      }
      json errors = json::object();
      for (const auto& [id, msg] : s.errors) errors[metric_name(id)] = msg;
      line["scores"] = std::move(scores);
      line["errors"] = std::move(errors);
      line["first_token_text"] = s.first_token_text;
      line["first_token_all_skipped"] = s.first_token_all_skipped;
      if (s.first_token_all_skipped) {
        spdlog::warn("{}: every greedy token is skippable; using token 0", r.question_id);
      }
      out += stamp(std::move(line)).dump() + "\n";
    }
    write_file(out_ / artifact::kScores, out);
    return 0;
  }

  static json threshold_json(const ThresholdResult& t) {
    return {{"metric", metric_name(t.metric_id)},
            {"t_star", t.t_star},
            {"misclassifications", t.misclassifications},
            {"balancing", balancing_name(t.balancing)},
            {"sample_seed", t.sample_seed},
            {"candidates_evaluated", t.candidates_evaluated},
            {"n_hallucination", t.n_hallucination},
            {"n_factual", t.n_factual}};
  }

  int threshold() {
    const Corpus corpus = load_scored();
    json groups = json::array();
    for (const auto& [g, records] : corpus) {
      json thresholds = json::object();
      json skipped = json::object();
      for (MetricId m : cfg().metrics) {
        const auto h = certainties_of(records, OutcomeLabel::Kind::kHallucination, m);
        const auto f = certainties_of(records, OutcomeLabel::Kind::kFactual, m);
        if (h.empty() || f.empty()) {
          skipped[metric_name(m)] = "empty-set: needs hallucination and factual scores";
          spdlog::warn("{}/{}/{}: no threshold for {}", g.model, g.dataset, g.setting,
                       metric_name(m));
          continue;
        }
        const auto t = optimal_threshold(h, f, cfg().balancing, cfg().seed, m);
        thresholds[metric_name(m)] = threshold_json(t);
      }
      json entry = group_json(g);
      entry["thresholds"] = std::move(thresholds);
      entry["skipped"] = std::move(skipped);
      groups.push_back(std::move(entry));
    }
    write_file(out_ / artifact::kThresholds, stamp({{"groups", std::move(groups)}}).dump(2) + "\n");
    return 0;
  }

  using ThresholdTable = std::map<GroupKey, std::map<MetricId, ThresholdResult>>;

  ThresholdTable load_thresholds() const {
    const json j = read_json(artifact::kThresholds);
    ThresholdTable table;
    for (const auto& entry : j.at("groups")) {
      auto& per_metric = table[group_from_json(entry)];
      for (const auto& [name, t] : entry.at("thresholds").items()) {
        ThresholdResult r;
        r.metric_id = metric_from_string(name);
        r.t_star = t.at("t_star").get<double>();
        r.misclassifications = t.at("misclassifications").get<std::int64_t>();
        r.balancing = balancing_from_string(t.at("balancing").get<std::string>());
        r.sample_seed = t.at("sample_seed").get<std::uint64_t>();
        r.candidates_evaluated = t.at("candidates_evaluated").get<std::size_t>();
        r.n_hallucination = t.at("n_hallucination").get<std::size_t>();
        r.n_factual = t.at("n_factual").get<std::size_t>();
        per_metric[r.metric_id] = r;
      }
    }
    return table;
  }

  int detect() {
    const ThresholdTable table = load_thresholds();
    const Corpus corpus = load_scored();
    std::string out;
    for (const auto& [g, records] : corpus) {
      auto it = table.find(g);
      if (it == table.end()) continue;
      for (const auto& [metric, t] : it->second) {
        const auto scored = with_metric(records, metric);
        for (const auto& v : classify_choke(scored, t)) {
          json line = group_json(g);
          line["metric"] = metric_name(metric);
          line["question_id"] = v.question_id;
          line["certainty"] = v.certainty;
          line["t_star"] = t.t_star;
          line["is_choke"] = v.is_choke;
          out += stamp(std::move(line)).dump() + "\n";
        }
      }
    }
    write_file(out_ / artifact::kVerdicts, out);
    return 0;
  }

  // (model, dataset, metric) -> setting -> (hallucinations, CHOKE).
  using VerdictSets =
      std::map<std::tuple<std::string, std::string, std::string>,
               std::map<std::string, std::pair<IdSet, IdSet>>>;

  VerdictSets load_verdict_sets() const {
    VerdictSets sets;
    for (const auto& v : read_jsonl(artifact::kVerdicts)) {
      const GroupKey g = group_from_json(v);
      auto& [hall, choke] =
          sets[{g.model, g.dataset, v.at("metric").get<std::string>()}][g.setting];
      const std::string id = v.at("question_id").get<std::string>();
      hall.insert(id);
      if (v.at("is_choke").get<bool>()) choke.insert(id);
    }
    return sets;
  }

  int consistency() {
    const VerdictSets sets = load_verdict_sets();
    json comparisons = json::array();
    std::vector<JaccardTableRow> rows;
    for (const auto& [key, by_setting] : sets) {
      const auto& [model, dataset, metric] = key;
      for (auto a = by_setting.begin(); a != by_setting.end(); ++a) {
        for (auto b = std::next(a); b != by_setting.end(); ++b) {
          const auto& [hall_a, choke_a] = a->second;
          const auto& [hall_b, choke_b] = b->second;
          const ConsistencyReport r =
              opts_.shared_only
                  ? shared_permutation_test(hall_a, hall_b, choke_a, choke_b,
                                            cfg().n_permutations, cfg().seed,
                                            cfg().threads)
                  : permutation_test(hall_a, hall_b, choke_a, choke_b,
                                     cfg().n_permutations, cfg().seed, cfg().threads);
          if (r.empty_intersection) {
            spdlog::warn("{}/{}/{}: settings {} and {} share no hallucinations", model,
                         dataset, metric, a->first, b->first);
          }
          json c = to_json(r);
          c["model_id"] = model;
          c["dataset_id"] = dataset;
          c["metric"] = metric;
          c["setting_a"] = a->first;
          c["setting_b"] = b->first;
          comparisons.push_back(std::move(c));
          rows.push_back({model, dataset, metric, r.permutation_mean_percent,
                          r.jaccard_percent, r.p_value});
        }
      }
    }
    if (comparisons.empty()) {
      spdlog::warn("consistency needs verdicts from at least two settings");
    }
    write_file(out_ / artifact::kConsistency,
               stamp({{"shared_only", opts_.shared_only},
                      {"comparisons", std::move(comparisons)}})
                       .dump(2) +
                   "\n");
    write_file(out_ / artifact::kConsistencyTable,
               provenance_comment() + jaccard_table_to_csv(rows));
    return 0;
  }

  int mitigate() {
    for (MitigationMethod m : kAllMitigationMethods) {
      const MetricId id = metric_for(m);
      if (std::find(cfg().metrics.begin(), cfg().metrics.end(), id) ==
          cfg().metrics.end()) {
        throw Error(ErrorCode::kMissingMetric,
                    std::string("mitigate needs metric ") + metric_name(id));
      }
    }
    const Corpus corpus = load_scored();
    std::string out = provenance_comment() +
                      csv_row({"model", "method", "t_star", "unmitigated_percent",
                               "dataset_id", "setting_id"});
    for (const auto& [g, records] : corpus) {
      std::vector<ScoredRecord> usable;
      for (const auto& r : records) {
        const bool complete = std::all_of(
            std::begin(kAllMitigationMethods), std::end(kAllMitigationMethods),
            [&](MitigationMethod m) { return r.certainty.contains(metric_for(m)); });
        if (complete && !r.label.is_excluded()) usable.push_back(r);
      }
      const bool has_h = std::any_of(usable.begin(), usable.end(),
                                     [](const auto& r) { return r.label.is_hallucination(); });
      const bool has_f = std::any_of(usable.begin(), usable.end(),
                                     [](const auto& r) { return r.label.is_factual(); });
      if (!has_h || !has_f) {
        spdlog::warn("{}/{}/{}: mitigation needs scored hallucinations and factual answers",
                     g.model, g.dataset, g.setting);
        continue;
      }
      for (const auto& m : compare_methods(usable, cfg().balancing, cfg().seed)) {
        out += csv_row({g.model, mitigation_method_name(m.method), format_double(m.t_star),
                        format_double(m.unmitigated_percent), g.dataset, g.setting});
      }
    }
    write_file(out_ / artifact::kMitigation, out);
    return 0;
  }

  static std::string file_safe(const std::string& s) {
    std::string out;
    for (char c : s) {
      const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
      out += ok ? c : '_';
    }
    return out.empty() ? "_" : out;
  }

  static bool curve_is_monotone(const std::vector<CdfPoint>& curve) {
    if (curve.empty() || curve.front().cum_frac_hallucination != 1.0 ||
        curve.front().cum_frac_factual != 1.0) {
      return false;
    }
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (curve[i].cum_frac_hallucination > curve[i - 1].cum_frac_hallucination ||
          curve[i].cum_frac_factual > curve[i - 1].cum_frac_factual) {
        return false;
      }
    }
    return true;
  }

  int report() {
    const Corpus corpus = load_scored();
    const ThresholdTable table = load_thresholds();
    std::map<std::tuple<GroupKey, MetricId>, std::vector<ChokeVerdict>> verdicts;
    for (const auto& v : read_jsonl(artifact::kVerdicts)) {
      verdicts[{group_from_json(v), metric_from_string(v.at("metric").get<std::string>())}]
          .push_back({v.at("question_id").get<std::string>(),
                      v.at("certainty").get<double>(), v.at("is_choke").get<bool>()});
    }

    std::map<std::string, std::size_t> outcome_counts;
    std::size_t n_records = 0;
    json groups = json::array();
    for (const auto& [g, records] : corpus) {
      std::map<std::string, std::size_t> counts;
      for (const auto& r : records) {
        ++n_records;
        const std::string k = r.label.reason() ? exclusion_reason_name(*r.label.reason())
                                               : outcome_kind_name(r.label.kind());
        ++counts[k];
        ++outcome_counts[k];
      }
      std::map<std::string, std::string> first_token;
      for (const auto& r : records) first_token[r.question_id] = r.first_token_text;

      json metrics = json::array();
      auto it = table.find(g);
      for (MetricId m : cfg().metrics) {
        json entry = {{"metric", metric_name(m)}};
        const auto vit = verdicts.find({g, m});
        if (it == table.end() || !it->second.contains(m) || vit == verdicts.end()) {
          entry["status"] = "no threshold";
          metrics.push_back(std::move(entry));
          continue;
        }
        const ThresholdResult& t = it->second.at(m);
        const auto& vs = vit->second;
        entry["status"] = "ok";
        entry["t_star"] = t.t_star;
        entry["misclassifications"] = t.misclassifications;
        entry["n_verdicts"] = vs.size();
        entry["n_choke"] = std::count_if(vs.begin(), vs.end(),
                                         [](const ChokeVerdict& v) { return v.is_choke; });
        entry["choke_fraction"] = choke_fraction(vs);

        const auto scored = with_metric(records, m);
        const auto curve = cdf_curves(scored, m, cfg().grid_size);
        const std::string cdf_name = std::string(artifact::kCdfDir) + "/" +
                                     file_safe(g.model) + "__" + file_safe(g.dataset) +
                                     "__" + file_safe(g.setting) + "__" + metric_name(m) +
                                     ".csv";
        write_file(out_ / cdf_name, provenance_comment() + cdf_to_csv(curve));
        entry["cdf_file"] = cdf_name;
        entry["cdf_points"] = curve.size();
        entry["cdf_monotone"] = curve_is_monotone(curve);

        std::vector<int> choke_len, low_len;
        for (const auto& v : vs) {
          (v.is_choke ? choke_len : low_len)
              .push_back(static_cast<int>(first_token[v.question_id].size()));
        }
        try {
          const TTestResult tt = first_token_length_ttest(choke_len, low_len);
          entry["first_token_length_ttest"] = {{"t_statistic", tt.t_statistic},
                                               {"p_value", tt.p_value},
                                               {"degrees_of_freedom", tt.degrees_of_freedom},
                                               {"n_choke", choke_len.size()},
                                               {"n_low_certainty", low_len.size()}};
        } catch (const Error& e) {
          entry["first_token_length_ttest"] = {{"error", error_code_name(e.code())}};
        }
        metrics.push_back(std::move(entry));
      }
      json entry = group_json(g);
      entry["outcomes"] = counts;
      entry["metrics"] = std::move(metrics);
      groups.push_back(std::move(entry));
    }

    std::size_t heuristic = 0;
    for (const auto& [k, n] : outcome_counts) {
      if (k != "factual" && k != "hallucination" && k != "no_knowledge") heuristic += n;
    }
    const std::size_t halluc = outcome_counts["hallucination"];
    json summary = {{"records", n_records},
                    {"factual", outcome_counts["factual"]},
                    {"hallucination", halluc},
                    {"excluded_by_refinement", heuristic},
                    {"excluded_no_knowledge", outcome_counts["no_knowledge"]}};
    summary["refinement_removal_percent"] =
        halluc + heuristic == 0
            ? json(nullptr)
            : json(100.0 * static_cast<double>(heuristic) /
                   static_cast<double>(halluc + heuristic));

    json report = {{"summary", std::move(summary)},
                   {"groups", std::move(groups)},
                   {"unmitigated_rule", "unmitigated iff certainty > t_star"}};
    if (fs::exists(out_ / artifact::kConsistency)) {
      report["consistency"] = read_json(artifact::kConsistency).at("comparisons");
    }
    if (fs::exists(out_ / artifact::kMitigation)) {
      json rows = json::array();
      const auto csv = parse_csv(read_file(out_ / artifact::kMitigation));
      for (std::size_t i = 1; i < csv.size(); ++i) {
        const auto& f = csv[i];
        if (f.size() < 6) continue;
        rows.push_back({{"model_id", f[0]}, {"method", f[1]},
                        {"t_star", std::stod(f[2])}, {"unmitigated_percent", std::stod(f[3])},
                        {"dataset_id", f[4]}, {"setting_id", f[5]}});
      }
      report["mitigation"] = std::move(rows);
    }
    write_file(out_ / artifact::kReport, stamp(std::move(report)).dump(2) + "\n");
    return 0;
  }

  const PipelineOptions& opts_;
  std::string hash_;
  fs::path out_;
};

}  // namespace

int run_command(const PipelineOptions& options) {
  check_config(options.config);
  return Stage(options).run();
}

}  // namespace choke
