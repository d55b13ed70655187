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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <spdlog/spdlog.h>

#include "choke/certainty.h"
#include "choke/config.h"
#include "choke/consistency.h"
#include "choke/curation.h"
#include "choke/error.h"
#include "choke/knowledge.h"
#include "choke/mitigation.h"
#include "choke/pipeline.h"
#include "choke/record.h"
#include "choke/text.h"
#include "choke/threshold.h"

namespace py = pybind11;
using nlohmann::json;

namespace {

PyObject* g_error_type = nullptr;

choke::QARecord record_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw choke::Error(choke::ErrorCode::kMalformedJson, e.what());
  }
  return choke::record_from_json(j);
}

std::vector<choke::MetricId> metric_list(const std::vector<std::string>& names) {
  std::vector<choke::MetricId> out;
  for (const auto& n : names) out.push_back(choke::metric_from_string(n));
  return out;
}

py::dict threshold_dict(const choke::ThresholdResult& r) {
  py::dict d;
  d["metric"] = choke::metric_name(r.metric_id);
  d["t_star"] = r.t_star;
  d["misclassifications"] = r.misclassifications;
  d["balancing"] = choke::balancing_name(r.balancing);
  d["candidates_evaluated"] = r.candidates_evaluated;
  d["n_hallucination"] = r.n_hallucination;
  d["n_factual"] = r.n_factual;
  return d;
}

py::dict consistency_dict(const choke::ConsistencyReport& r) {
  py::dict d;
  d["jaccard_percent"] = r.jaccard_percent;
  d["permutation_mean_percent"] = r.permutation_mean_percent;
  d["p_value"] = r.p_value;
  d["n_permutations"] = r.n_permutations;
  d["n_at_least_observed"] = r.n_at_least_observed;
  d["seed"] = r.seed;
  d["shared_only"] = r.shared_only;
  d["empty_intersection"] = r.empty_intersection;
  return d;
}

py::dict ttest_dict(const choke::TTestResult& r) {
  py::dict d;
  d["t_statistic"] = r.t_statistic;
  d["p_value"] = r.p_value;
  d["degrees_of_freedom"] = r.degrees_of_freedom;
  return d;
}

}  // namespace

PYBIND11_MODULE(_choke, m) {
  m.doc() = "Native core of the CHOKE detection engine.";
  spdlog::set_level(spdlog::level::warn);

  g_error_type = PyErr_NewException("choke._choke.ChokeError", PyExc_ValueError, nullptr);
  m.add_object("ChokeError", py::handle(g_error_type));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const choke::Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(g_error_type)(e.what());
      err.attr("code") = choke::error_code_name(e.code());
      err.attr("line") = e.line();
      err.attr("field") = e.field();
      PyErr_SetObject(g_error_type, err.ptr());
    }
  });

  m.def("normalize_text", &choke::normalize_text, py::arg("text"));
  m.def("porter_stem", &choke::porter_stem, py::arg("word"));
  m.def("edit_distance", &choke::edit_distance, py::arg("a"), py::arg("b"));
  m.def(
      "stem_overlap",
      [](const std::string& a, const std::string& b) {
        const auto f = choke::stem_overlap(a, b);
        return py::make_tuple(f.num, f.den);
      },
      py::arg("a"), py::arg("b"), "Shared stems over the stem union, as (num, den).");
  m.def("is_numeric_answer", &choke::is_numeric_answer, py::arg("gold"));
  m.def(
      "contains_gold",
      [](const std::string& text, const std::vector<std::string>& golds) {
        return choke::contains_gold(text, golds);
      },
      py::arg("text"), py::arg("golds"));
  m.def(
      "refine",
      [](const std::string& text, const std::vector<std::string>& golds, bool star_formatting,
         const std::map<std::string, std::vector<std::string>>& synonyms) -> py::object {
        choke::CurationConfig cfg;
        if (!synonyms.empty()) {
          choke::SynonymLexicon lex;
          for (const auto& [word, alts] : synonyms) {
            for (const auto& alt : alts) lex.add(word, alt);
          }
          cfg.synonym_provider = lex.provider();
        }
        const auto d = choke::refine_against_all(text, golds, cfg, {star_formatting});
        if (d.keep()) return py::none();
        return py::str(choke::exclusion_reason_name(*d.excluded));
      },
      py::arg("text"), py::arg("golds"), py::arg("star_formatting") = false,
      py::arg("synonyms") = std::map<std::string, std::vector<std::string>>{},
      "Name of the first exclusion heuristic that fires, or None to keep.");

  m.def(
      "validate_record",
      [](const std::string& record_json) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& v : choke::validate_record(record_from_string(record_json))) {
          out.emplace_back(v.path, v.message);
        }
        return out;
      },
      py::arg("record_json"));
  m.def(
      "knows",
      [](const std::string& record_json) {
        return choke::label_knowledge(record_from_string(record_json)).knows;
      },
      py::arg("record_json"));
  m.def(
      "label",
      [](const std::string& record_json, bool star_formatting) {
        const auto r = record_from_string(record_json);
        const auto label =
            choke::label_outcome(r, choke::label_knowledge(r), {}, {star_formatting});
        py::dict d;
        d["outcome"] = choke::outcome_kind_name(label.kind());
        d["reason"] = label.reason() ? py::object(py::str(
                                           choke::exclusion_reason_name(*label.reason())))
                                     : py::object(py::none());
        return d;
      },
      py::arg("record_json"), py::arg("star_formatting") = false);
  m.def(
      "score_record",
      [](const std::string& record_json, const std::vector<std::string>& metrics) {
        const auto ids = metrics.empty() ? std::vector<choke::MetricId>(std::begin(choke::kAllMetrics),
                                                                    std::end(choke::kAllMetrics))
                                         : metric_list(metrics);
        const auto s =
            choke::score_record(record_from_string(record_json), choke::default_skip_tokens(), ids);
        py::dict scores, errors;
        for (const auto& [id, score] : s.scores) {
          scores[choke::metric_name(id)] = py::make_tuple(score.raw_value, score.certainty);
        }
        for (const auto& [id, msg] : s.errors) errors[choke::metric_name(id)] = msg;
        py::dict d;
        d["scores"] = scores;
        d["errors"] = errors;
        d["first_token_text"] = s.first_token_text;
        return d;
      },
      py::arg("record_json"), py::arg("metrics") = std::vector<std::string>{},
      "Per-metric (raw_value, certainty) pairs and per-metric errors.");

  m.def(
      "optimal_threshold",
      [](const std::vector<double>& hallucination, const std::vector<double>& factual,
         const std::string& balancing, std::uint64_t seed) {
        return threshold_dict(choke::optimal_threshold(
            hallucination, factual, choke::balancing_from_string(balancing), seed));
      },
      py::arg("hallucination"), py::arg("factual"), py::arg("balancing") = "equal_size",
      py::arg("seed") = 0);
  m.def("unmitigated_rate",
        [](const std::vector<double>& scores, double t_star) {
          return choke::unmitigated_rate(scores, t_star);
        },
        py::arg("hallucination_scores"), py::arg("t_star"));

  m.def("jaccard", &choke::jaccard, py::arg("a"), py::arg("b"));
  m.def(
      "permutation_test",
      [](const choke::IdSet& hall_a, const choke::IdSet& hall_b, const choke::IdSet& choke_a,
         const choke::IdSet& choke_b, std::int64_t n_permutations, std::uint64_t seed,
         unsigned threads, bool shared_only) {
        py::gil_scoped_release release;
        const auto r = shared_only ? choke::shared_permutation_test(hall_a, hall_b, choke_a,
                                                                    choke_b, n_permutations,
                                                                    seed, threads)
                                   : choke::permutation_test(hall_a, hall_b, choke_a, choke_b,
                                                             n_permutations, seed, threads);
        py::gil_scoped_acquire acquire;
        return consistency_dict(r);
      },
      py::arg("hall_a"), py::arg("hall_b"), py::arg("choke_a"), py::arg("choke_b"),
      py::arg("n_permutations") = 10000, py::arg("seed") = 0, py::arg("threads") = 1,
      py::arg("shared_only") = false);
  m.def(
      "welch_t_test",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return ttest_dict(choke::welch_t_test(a, b));
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "run",
      [](const std::string& command, const std::vector<std::string>& inputs,
         const std::string& out_dir, const std::string& config_json, bool shared_only) {
        const auto c = choke::command_from_string(command);
        if (!c) throw choke::Error(choke::ErrorCode::kInvalidArgument, "unknown command: " + command);
        choke::PipelineOptions o;
        o.command = *c;
        o.config = choke::config_from_json(json::parse(config_json));
        o.inputs = inputs;
        o.out_dir = out_dir;
        o.shared_only = shared_only;
        py::gil_scoped_release release;
        return choke::run_command(o);
      },
      py::arg("command"), py::arg("inputs") = std::vector<std::string>{},
      py::arg("out_dir") = ".", py::arg("config_json") = "{}", py::arg("shared_only") = false,
      "Run one pipeline stage; returns the process-style exit status.");
  m.def("default_skip_tokens", [] {
    const auto& s = choke::default_skip_tokens();
    return std::vector<std::string>(s.begin(), s.end());
  });
}
