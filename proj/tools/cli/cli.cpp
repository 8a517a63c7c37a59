#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cwphase/cwphase.hpp"
#include "output.hpp"
#include "parallel.hpp"

namespace cwphase::cli {
namespace {

/// Bad flag values caught after parsing (ranges CLI11 cannot express).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_params:
      return kInvalidArguments;
    case ErrorCode::cap_exceeded:
    case ErrorCode::no_convergence:
    case ErrorCode::missing_branch:
    case ErrorCode::quadrature_no_convergence:
    case ErrorCode::cap_escalation_failed:
      return kNoConvergence;
    case ErrorCode::outside_window:
    case ErrorCode::no_spinodal:
    case ErrorCode::no_bracket:
    case ErrorCode::branch_required:
      return kPrecondition;
  }
  return kNoConvergence;
}

int report(std::ostream& err, std::string_view code, const std::string& message, int exit_code) {
  nlohmann::ordered_json j;
  j["error"] = code;
  j["message"] = message;
  j["exit_code"] = exit_code;
  err << j.dump() << '\n';
  return exit_code;
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 2) throw UsageError("--steps must be at least 2");
  if (!(hi > lo)) throw UsageError("grid needs max > min");
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) out[i] = i + 1 == steps ? hi : lo + (hi - lo) * i / (steps - 1);
  return out;
}

Record critical_record(const ModelParams& params, const SeriesAccuracy& acc) {
  const CriticalPoint cp = critical_point(params, acc);
  return {{"a", params.a},         {"upsilon", params.upsilon}, {"p_c", cp.p_c},
          {"x_c", cp.x_c},         {"y_c", cp.y_c},             {"n_c", cp.n_c},
          {"multi_crossing", cp.multi_crossing}};
}

Record coexist_record(double p, const ModelParams& params, const SeriesAccuracy& acc) {
  const CoexistenceResult c = coexistence_mu(p, params, acc);
  return {{"p", p},
          {"mu_c", c.mu_c},
          {"y_low", c.y_low},
          {"y_high", c.y_high},
          {"pressure", c.pressure},
          {"mu_window", std::vector<double>{c.window.mu_bottom, c.window.mu_top}},
          {"d_residual", c.d_residual}};
}

Record classify_record(const ThermoPoint& pt, double tie_tol, const ModelParams& params, const SeriesAccuracy& acc) {
  const PhaseClassification c = classify(pt, params, acc, ClassifyOptions{tie_tol});
  std::vector<double> ys;
  std::vector<double> es;
  std::vector<std::string> kinds;
  for (const StationaryPoint& sp : c.all_points) {
    ys.push_back(sp.y);
    es.push_back(sp.e_value);
    kinds.emplace_back(to_string(sp.kind));
  }
  return {{"p", pt.p},
          {"mu", pt.mu},
          {"status", std::string(to_string(c.status))},
          {"gap", c.gap},
          {"n_points", static_cast<long long>(c.all_points.size())},
          {"global_max_x", c.global_max.x},
          {"global_max_y", c.global_max.y},
          {"global_max_e", c.global_max.e_value},
          {"global_max_curvature", c.global_max.curvature},
          {"global_max_kind", std::string(to_string(c.global_max.kind))},
          {"points_y", ys},
          {"points_e", es},
          {"points_kind", kinds}};
}

/// One row per grid point, filled concurrently and emitted in grid order.
template <class Row>
Table grid_table(std::vector<std::string> columns, std::size_t count, Row&& row) {
  Table t;
  t.columns = std::move(columns);
  t.rows.resize(count);
  parallel_for(count, [&](std::size_t i) { t.rows[i] = row(i); });
  return t;
}

Table isotherm_table(double p, const std::vector<double>& grid, bool maxwell, const ModelParams& params,
                     const SeriesAccuracy& acc) {
  // contiguous chunks, one isotherm call each
  const std::size_t chunks = std::min<std::size_t>(worker_count(), std::max<std::size_t>(1, grid.size() / 16));
  std::vector<std::vector<IsothermPoint>> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t lo = grid.size() * c / chunks;
    const std::size_t hi = grid.size() * (c + 1) / chunks;
    parts[c] = isotherm(p, params, std::span<const double>(grid).subspan(lo, hi - lo), maxwell, acc);
  });
  Table t;
  t.columns = {"y", "n", "mu", "pressure", "branch"};
  for (const auto& part : parts) {
    for (const IsothermPoint& ip : part) t.rows.push_back({ip.y, ip.n, ip.mu, ip.pressure, std::string(to_string(ip.branch))});
  }
  return t;
}

Table distribution_table(const ThermoPoint& pt, std::optional<Branch> branch, int n_max, const ModelParams& params,
                         const SeriesAccuracy& acc) {
  if (n_max < 0) throw UsageError("--n-max must be non-negative");
  const OccupationDistribution q = occupation_distribution(pt, params, acc, branch);
  // beyond the truncation index the weights are below rel_tol of the peak
  const double log_norm = moment_sums(q.y_bar + pt.mu, params, pt.p, acc).phi;
  Table t;
  t.columns = {"n", "Q"};
  for (int n = 0; n <= n_max; ++n) {
    const double v = static_cast<std::size_t>(n) < q.probs.size()
                         ? q.probs[n]
                         : std::exp(log_weight(n, q.y_bar + pt.mu, pt.p, params) - log_norm);
    t.rows.push_back({static_cast<long long>(n), v});
  }
  return t;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mean-field phase behaviour of the cell particle model", "cwphase"};
  app.require_subcommand(1);
  app.fallthrough();

  ModelParams params;
  SeriesAccuracy acc;
  std::string format = "auto";
  std::string output;
  int precision = 12;
  app.add_option("--a", params.a, "repulsion/attraction ratio (> 1)")->capture_default_str();
  app.add_option("--upsilon", params.upsilon, "cell volume (>= 0)")->capture_default_str();
  app.add_option("--rel-tol", acc.rel_tol, "series truncation tolerance")->capture_default_str();
  app.add_option("--format", format, "csv, json or auto")->check(CLI::IsMember({"auto", "csv", "json"}))->capture_default_str();
  app.add_option("--output", output, "write to this file instead of stdout");
  app.add_option("--precision", precision, "significant digits")->check(CLI::Range(6, 17))->capture_default_str();

  double p = 0.0;
  double mu = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  double mu_min = 0.0;
  double mu_max = 0.0;
  double tie_tol = 0.0;
  int steps = 0;
  int n_max = 0;
  bool maxwell = false;
  std::string branch_name;
  std::vector<int> n_list;

  auto* critical = app.add_subcommand("critical", "critical point (p_c, x_c, y_c, n_c)");
  auto* coexist = app.add_subcommand("coexist", "coexistence chemical potential on line p");
  coexist->add_option("--p", p)->required();
  auto* classify_cmd = app.add_subcommand("classify", "stationary points and phase status at (p, mu)");
  classify_cmd->add_option("--p", p)->required();
  classify_cmd->add_option("--mu", mu)->required();
  classify_cmd->add_option("--tie-tol", tie_tol, "absolute tie tolerance on E (0 = automatic)");
  auto* mu_curve = app.add_subcommand("mu-curve", "mu_bar(y) on a y-grid");
  mu_curve->add_option("--p", p)->required();
  mu_curve->add_option("--y-min", y_min)->required();
  mu_curve->add_option("--y-max", y_max)->required();
  mu_curve->add_option("--steps", steps)->required();
  auto* energy = app.add_subcommand("energy", "effective potential E(y) at (p, mu)");
  energy->add_option("--p", p)->required();
  energy->add_option("--mu", mu)->required();
  energy->add_option("--y-min", y_min)->required();
  energy->add_option("--y-max", y_max)->required();
  energy->add_option("--steps", steps)->required();
  auto* branches = app.add_subcommand("branch-energies", "E at the low and high branch maxima across mu");
  branches->add_option("--p", p)->required();
  branches->add_option("--mu-min", mu_min)->required();
  branches->add_option("--mu-max", mu_max)->required();
  branches->add_option("--steps", steps)->required();
  auto* iso = app.add_subcommand("isotherm", "equation of state P(y) along line p");
  iso->add_option("--p", p)->required();
  iso->add_option("--y-min", y_min)->required();
  iso->add_option("--y-max", y_max)->required();
  iso->add_option("--steps", steps)->required();
  iso->add_flag("--maxwell", maxwell, "replace the loop by the coexistence tie line");
  auto* dist = app.add_subcommand("distribution", "per-cell occupation law Q(n)");
  dist->add_option("--p", p)->required();
  dist->add_option("--mu", mu)->required();
  dist->add_option("--branch", branch_name, "low or high, required at coexistence")
      ->check(CLI::IsMember({"low", "high"}));
  dist->add_option("--n-max", n_max)->required();
  auto* validate = app.add_subcommand("validate", "finite-N pressure against the limit");
  validate->add_option("--p", p)->required();
  validate->add_option("--mu", mu)->required();
  validate->add_option("--n-list", n_list, "comma-separated cell counts")->required()->delimiter(',');

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    return report(err, "invalid-arguments", e.what(), kInvalidArguments);
  }

  const bool table_command = !(critical->parsed() || coexist->parsed() || classify_cmd->parsed());
  OutputSpec spec;
  spec.precision = precision;
  spec.format = format == "json" || (format == "auto" && !table_command) ? Format::json : Format::csv;

  std::ostringstream buffer;
  try {
    params.validate();
    acc.validate();
    if (critical->parsed()) {
      write(buffer, critical_record(params, acc), spec);
    } else if (coexist->parsed()) {
      write(buffer, coexist_record(p, params, acc), spec);
    } else if (classify_cmd->parsed()) {
      write(buffer, classify_record(ThermoPoint{p, mu}, tie_tol, params, acc), spec);
    } else if (mu_curve->parsed()) {
      const auto ys = linspace(y_min, y_max, steps);
      write(buffer, grid_table({"y", "mu_bar"}, ys.size(),
                               [&](std::size_t i) -> std::vector<std::variant<double, long long, std::string>> {
                                 return {ys[i], mu_bar(ys[i], p, params, acc)};
                               }),
            spec);
    } else if (energy->parsed()) {
      const auto ys = linspace(y_min, y_max, steps);
      const ThermoPoint pt{p, mu};
      pt.validate();
      write(buffer, grid_table({"y", "E"}, ys.size(),
                               [&](std::size_t i) -> std::vector<std::variant<double, long long, std::string>> {
                                 return {ys[i], big_e(ys[i], pt, params, acc)};
                               }),
            spec);
    } else if (branches->parsed()) {
      const auto mus = linspace(mu_min, mu_max, steps);
      const auto window = spinodal(p, params, acc);
      if (!window) throw Error(ErrorCode::no_spinodal, "no metastable window at p = " + format_number(p, 12));
      write(buffer, grid_table({"mu", "E_low", "E_high"}, mus.size(),
                               [&](std::size_t i) -> std::vector<std::variant<double, long long, std::string>> {
                                 const BranchMaxima b = branch_maxima(p, mus[i], *window, params, acc);
                                 return {mus[i], b.low.e_value, b.high.e_value};
                               }),
            spec);
    } else if (iso->parsed()) {
      write(buffer, isotherm_table(p, linspace(y_min, y_max, steps), maxwell, params, acc), spec);
    } else if (dist->parsed()) {
      std::optional<Branch> branch;
      if (branch_name == "low") branch = Branch::low;
      if (branch_name == "high") branch = Branch::high;
      write(buffer, distribution_table(ThermoPoint{p, mu}, branch, n_max, params, acc), spec);
    } else if (validate->parsed()) {
      const ThermoPoint pt{p, mu};
      write(buffer, grid_table({"N", "P_N", "P_limit", "gap"}, n_list.size(),
                               [&](std::size_t i) -> std::vector<std::variant<double, long long, std::string>> {
                                 const int one[] = {n_list[i]};
                                 const ConvergenceRow r = convergence_report(pt, params, one, acc)[0];
                                 return {static_cast<long long>(r.n_cells), r.p_n, r.p_limit, r.gap};
                               }),
            spec);
    }
  } catch (const UsageError& e) {
    return report(err, "invalid-arguments", e.what(), kInvalidArguments);
  } catch (const Error& e) {
    return report(err, to_string(e.code()), e.what(), exit_code_for(e.code()));
  } catch (const std::exception& e) {
    return report(err, "internal", e.what(), kNoConvergence);
  }

  if (output.empty()) {
    out << buffer.str();
    out.flush();
    return kOk;
  }
  std::ofstream file(output, std::ios::binary | std::ios::trunc);
  if (!file || !(file << buffer.str()) || !file.flush()) {
    return report(err, "invalid-arguments", "cannot write " + output, kInvalidArguments);
  }
  return kOk;
}

}  // namespace cwphase::cli
