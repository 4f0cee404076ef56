#pragma once

// The fit, verify and simulate commands, independent of argument parsing
// and I/O so they can be driven from tests.

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pillai/dataset.hpp"
#include "pillai/error.hpp"
#include "pillai/inference.hpp"
#include "pillai/manova.hpp"
#include "pillai/montecarlo.hpp"
#include "pillai/regression.hpp"
#include "pillai/report.hpp"

namespace pillai {

/// Process exit codes shared by every subcommand.
enum class ExitCode : int {
  kSuccess = 0,
  kDataError = 1,
  kNumericalFailure = 2,
  kUsageError = 3,
};

class UsageError : public Error {
 public:
  using Error::Error;
};

inline ExitCode exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) return ExitCode::kUsageError;
  if (dynamic_cast<const NumericalError*>(&e)) return ExitCode::kNumericalFailure;
  return ExitCode::kDataError;
}

namespace detail {

/// Runs `f`, rewording rank and degeneracy failures with the dataset's
/// column names.
template <typename F>
auto with_column_names(const Dataset& data, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const RankDeficient& e) {
    if (e.column() && *e.column() < data.y_names.size()) {
      const std::string& col = data.y_names[*e.column()];
      throw RankDeficient(
          e.column(), "Y column '" + col +
                          "' is constant or a linear combination of the "
                          "columns before it; drop it or pick a different "
                          "set of Y columns");
    }
    throw;
  } catch (const DegenerateX& e) {
    throw DegenerateX("x column '" + data.x_name +
                      "' is constant; the effect is undefined");
  }
}

inline double pearson_r_squared(const Vector& a, const Vector& b) {
  const Vector ac = center(a);
  const Vector bc = center(b);
  const double sab = dot(ac, bc);
  return sab * sab / (dot(ac, ac) * dot(bc, bc));
}

}  // namespace detail

/// The effect with its MANOVA cross-check and full inference.
inline ReportDocument cmd_fit(const Dataset& data) {
  return detail::with_column_names(data, [&] {
    const MultiRegressionFit fit = fit_multiple(data.x, data.y);
    const double beta = beta_effect(fit, data.x);
    const PillaiResult manova = pillai_trace(data.x, data.y);

    ReportDocument doc{
        .dataset = {data.name, data.n(), data.k(), data.x_name, data.y_names},
        .inference = infer(beta, data.n(), data.k()),
        .equivalence = {manova.trace, beta, fit.r_squared,
                        std::abs(manova.trace - beta), std::nullopt},
        .warnings = {},
    };
    if (data.k() == 1) {
      doc.equivalence.pearson_r_squared =
          detail::pearson_r_squared(data.x, data.y.column(0));
    }
    if (is_perfect_fit(beta)) {
      doc.warnings.push_back(
          "perfect fit: x lies in the span of (1, Y); F is infinite and the "
          "exact p-value is 0");
    }
    if (doc.equivalence.abs_residual > 1e-10 * (1.0 + manova.trace)) {
      doc.warnings.push_back(
          "Pillai's trace and the regression effect differ by " +
          format_number(doc.equivalence.abs_residual) +
          "; Y may be ill-conditioned");
    }
    return doc;
  });
}

struct VerifyReport {
  std::vector<std::pair<std::string, double>> values;
  double max_discrepancy;
  double tolerance;
  bool passed;
};

/// Evaluates every member of V = beta = R^2 = kF/((n-k-1)+kF) and the R^2 of
/// both regressions. Passes when the largest pairwise gap is strictly below
/// `tolerance`.
inline VerifyReport cmd_verify(const Dataset& data, double tolerance = 1e-10) {
  return detail::with_column_names(data, [&] {
    const std::size_t n = data.n();
    const std::size_t k = data.k();
    const MultiRegressionFit fit = fit_multiple(data.x, data.y);
    const double beta = beta_effect(fit, data.x);
    const double r2_simple = fit_simple(fit.score, data.x).r_squared;
    const double v = pillai_trace(data.x, data.y).trace;
    const double chain = fit.r_squared < 1.0
                             ? r2_from_f(f_from_r2(fit.r_squared, n, k), n, k)
                             : 1.0;

    VerifyReport r{{{"pillai_trace", v},
                    {"beta_effect", beta},
                    {"r_squared_multiple", fit.r_squared},
                    {"r_squared_simple", r2_simple},
                    {"r_squared_from_f", chain}},
                   0.0,
                   tolerance,
                   false};
    for (std::size_t a = 0; a < r.values.size(); ++a)
      for (std::size_t b = a + 1; b < r.values.size(); ++b)
        r.max_discrepancy = std::max(
            r.max_discrepancy, std::abs(r.values[a].second - r.values[b].second));
    r.passed = r.max_discrepancy < tolerance;
    return r;
  });
}

inline std::string render_verify(const VerifyReport& r) {
  std::ostringstream out;
  for (const auto& [name, value] : r.values) {
    out << name << ": " << format_number(value) << "\n";
  }
  out << "max_discrepancy: " << format_number(r.max_discrepancy) << "\n"
      << "tolerance: " << format_number(r.tolerance) << "\n"
      << "status: " << (r.passed ? "ok" : "FAILED") << "\n";
  return out.str();
}

/// Validates the configuration, then runs the calibration study.
inline CalibrationReport cmd_simulate(const SimConfig& config) {
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return calibrate(config);
}

}  // namespace pillai
