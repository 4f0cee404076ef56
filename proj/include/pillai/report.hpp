#pragma once

// Report documents produced by the command-line tool, and their two
// renderings: an indented key/value tree for people and canonical JSON for
// pipelines. Every number keeps at least 17 significant digits in the tree
// form and its shortest round-trip form in JSON.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pillai/inference.hpp"
#include "pillai/montecarlo.hpp"

namespace pillai {

inline constexpr const char* kSchemaVersion = "1";

using json = nlohmann::ordered_json;

struct DatasetSummary {
  std::string name;
  std::size_t n;
  std::size_t k;
  std::string x_column;
  std::vector<std::string> y_columns;
};

struct Equivalence {
  double pillai_trace;
  double beta_effect;
  double r_squared;
  /// |V - beta|
  double abs_residual;
  /// Squared Pearson correlation of x with the single Y column (k = 1 only).
  std::optional<double> pearson_r_squared;
};

struct ReportDocument {
  std::string schema_version = kSchemaVersion;
  DatasetSummary dataset;
  InferenceReport inference;
  Equivalence equivalence;
  std::vector<std::string> warnings;
};

namespace detail {

/// JSON has no infinity; +inf travels as null.
inline json number_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

inline double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace detail

inline json to_json(const ReportDocument& doc) {
  const InferenceReport& inf = doc.inference;
  json eq = {
      {"pillai_trace", doc.equivalence.pillai_trace},
      {"beta_effect", doc.equivalence.beta_effect},
      {"r_squared", doc.equivalence.r_squared},
      {"abs_residual", doc.equivalence.abs_residual},
  };
  if (doc.equivalence.pearson_r_squared) {
    eq["pearson_r_squared"] = *doc.equivalence.pearson_r_squared;
  }
  return json{
      {"schema_version", doc.schema_version},
      {"dataset",
       {{"name", doc.dataset.name},
        {"n", doc.dataset.n},
        {"k", doc.dataset.k},
        {"x_column", doc.dataset.x_column},
        {"y_columns", doc.dataset.y_columns}}},
      {"inference",
       {{"effect", inf.effect},
        {"f_stat", detail::number_or_null(inf.f_stat)},
        {"df1", inf.df1},
        {"df2", inf.df2},
        {"beta_alpha", inf.beta_params.alpha()},
        {"beta_beta", inf.beta_params.beta()},
        {"p_exact", inf.p_exact},
        {"wald_z", inf.wald_z},
        {"p_wald", inf.p_wald}}},
      {"equivalence", std::move(eq)},
      {"warnings", doc.warnings},
  };
}

inline ReportDocument report_from_json(const json& j) {
  const json& d = j.at("dataset");
  const json& inf = j.at("inference");
  const json& eq = j.at("equivalence");
  const auto n = d.at("n").get<std::size_t>();
  const auto k = d.at("k").get<std::size_t>();
  ReportDocument doc{
      .schema_version = j.at("schema_version").get<std::string>(),
      .dataset = {d.at("name").get<std::string>(), n, k,
                  d.at("x_column").get<std::string>(),
                  d.at("y_columns").get<std::vector<std::string>>()},
      .inference =
          {.n = n,
           .k = k,
           .effect = inf.at("effect").get<double>(),
           .f_stat = detail::number_or_inf(inf.at("f_stat")),
           .df1 = inf.at("df1").get<std::size_t>(),
           .df2 = inf.at("df2").get<std::size_t>(),
           .beta_params = BetaParams(inf.at("beta_alpha").get<double>(),
                                     inf.at("beta_beta").get<double>()),
           .p_exact = inf.at("p_exact").get<double>(),
           .wald_z = inf.at("wald_z").get<double>(),
           .p_wald = inf.at("p_wald").get<double>()},
      .equivalence = {eq.at("pillai_trace").get<double>(),
                      eq.at("beta_effect").get<double>(),
                      eq.at("r_squared").get<double>(),
                      eq.at("abs_residual").get<double>(), std::nullopt},
      .warnings = j.at("warnings").get<std::vector<std::string>>(),
  };
  if (eq.contains("pearson_r_squared")) {
    doc.equivalence.pearson_r_squared = eq.at("pearson_r_squared").get<double>();
  }
  return doc;
}

inline json to_json(const CalibrationReport& r) {
  return json{
      {"schema_version", kSchemaVersion},
      {"config",
       {{"n", r.n},
        {"k", r.k},
        {"replicates", r.replicates},
        {"seed", r.seed},
        {"effect_strength", r.effect_strength}}},
      {"degenerate_draws", r.degenerate_draws},
      {"calibration",
       {{"empirical_mean", r.empirical_mean},
        {"empirical_var", r.empirical_var},
        {"ks_distance", r.ks_distance},
        {"p_uniformity_ks", r.p_uniformity_ks},
        {"rejection_rate_at_05_exact", r.rejection_rate_at_05_exact},
        {"rejection_rate_at_05_wald", r.rejection_rate_at_05_wald}}},
  };
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void render_tree(const json& node, int depth, std::ostringstream& out) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  auto scalar = [](const json& v) -> std::string {
    if (v.is_null()) return "inf";
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  for (auto it = node.begin(); it != node.end(); ++it) {
    const json& v = it.value();
    if (v.is_object()) {
      out << indent << it.key() << ":\n";
      render_tree(v, depth + 1, out);
    } else if (v.is_array()) {
      out << indent << it.key() << ":";
      if (v.empty()) out << " []";
      out << "\n";
      for (const json& e : v) out << indent << "  - " << scalar(e) << "\n";
    } else {
      out << indent << it.key() << ": " << scalar(v) << "\n";
    }
  }
}

}  // namespace detail

/// Indented `key: value` tree.
inline std::string render_human(const json& doc) {
  std::ostringstream out;
  detail::render_tree(doc, 0, out);
  return out.str();
}

inline std::string render_machine(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace pillai
