#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "expmoment/altmin.hpp"
#include "expmoment/cost_table.hpp"
#include "expmoment/curie_weiss.hpp"
#include "expmoment/estimators.hpp"
#include "expmoment/exponents.hpp"
#include "expmoment/io.hpp"
#include "expmoment/probability.hpp"
#include "expmoment/strategy.hpp"

namespace expmoment::cli {

namespace {

constexpr double kLn2 = 0.693147180559945309;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) {
    if (row.size() != columns.size())
      throw std::logic_error("output row width mismatch");
    rows.push_back(std::move(row));
  }

  std::string to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ",";
      out += columns[c];
    }
    out += "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ",";
        out += row[c];
      }
      out += "\n";
    }
    return out;
  }

  std::string to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t c = 0; c < row.size(); ++c) {
        const std::string& cell = row[c];
        if (cell.empty()) {
          obj[columns[c]] = nullptr;
        } else if (cell == "true" || cell == "false") {
          obj[columns[c]] = cell == "true";
        } else {
          try {
            obj[columns[c]] = parse_double(cell);
          } catch (const std::invalid_argument&) {
            obj[columns[c]] = cell;
          }
        }
      }
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }
};

struct CommonOpts {
  std::string format = "csv";
  std::string output;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool execute = true;
  int exit_code = kExitOk;
};

void add_common(CLI::App* cmd, CommonOpts& common) {
  cmd->add_option("--format", common.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output", common.output, "Write output to this file instead of stdout");
}

void emit(Context& ctx, const CommonOpts& common, const Table& table) {
  const std::string text =
      common.format == "json" ? table.to_json() : table.to_csv();
  if (!common.output.empty() && common.output != "-") {
    std::ofstream f(common.output);
    if (!f) throw std::runtime_error("cannot open output: " + common.output);
    f << text;
  } else {
    ctx.out << text;
  }
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }
std::string fmt(std::size_t v) { return std::to_string(v); }

// Inline values contain separators; anything else is a path ("-" = stdin).
FiniteDistribution resolve_distribution(const std::string& arg) {
  if (arg != "-" &&
      (arg.find(',') != std::string::npos || arg.find(' ') != std::string::npos))
    return parse_distribution(arg);
  return load_distribution(arg);
}

FiniteCostTable resolve_table(const std::string& arg) {
  if (arg.find(';') != std::string::npos) {
    std::string text = arg;
    std::replace(text.begin(), text.end(), ';', '\n');
    return parse_cost_table_csv(text);
  }
  return load_cost_table(arg);
}

FiniteSupportPrior resolve_prior(const std::string& arg) {
  if (arg.find(';') != std::string::npos) {
    std::string text = arg;
    std::replace(text.begin(), text.end(), ';', '\n');
    return parse_prior_csv(text);
  }
  return load_prior(arg);
}

std::vector<double> parse_number_list(const std::string& text) {
  std::string spaced = text;
  for (char& c : spaced)
    if (c == ',' || c == '\t' || c == '\r' || c == '\n') c = ' ';
  std::istringstream in(spaced);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok));
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

std::vector<double> resolve_vector(const std::string& arg) {
  if (arg != "-" &&
      (arg.find(',') != std::string::npos || arg.find(' ') != std::string::npos))
    return parse_number_list(arg);
  return parse_number_list(read_text_input(arg));
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;
};

Range parse_range(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = text.rfind(':');
  if (c1 == std::string::npos || c2 == c1)
    throw std::invalid_argument("range must be lo:hi:steps, got \"" + text + "\"");
  Range r;
  r.lo = parse_double(text.substr(0, c1));
  r.hi = parse_double(text.substr(c1 + 1, c2 - c1 - 1));
  const double steps = parse_double(text.substr(c2 + 1));
  r.steps = static_cast<int>(steps);
  if (r.steps < 1 || static_cast<double>(r.steps) != steps)
    throw std::invalid_argument("range steps must be a positive integer");
  if (r.steps == 1 && r.lo != r.hi)
    throw std::invalid_argument("range with one step needs lo == hi");
  return r;
}

std::vector<double> linspace(const Range& r) {
  std::vector<double> v(static_cast<std::size_t>(r.steps));
  if (r.steps == 1) {
    v[0] = r.lo;
    return v;
  }
  for (int i = 0; i < r.steps; ++i)
    v[static_cast<std::size_t>(i)] = r.lo + (r.hi - r.lo) * i / (r.steps - 1);
  return v;
}

void append_distribution_columns(Table& table, const std::string& prefix,
                                 std::size_t m) {
  for (std::size_t i = 0; i < m; ++i)
    table.columns.push_back(prefix + std::to_string(i));
}

// ---------------------------------------------------------------------------
// Subcommand registration. Each lambda owns its option struct via shared_ptr
// and runs only when ctx.execute is set (config validation parses without
// executing).

void register_tilt(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string p, cost, table;
    std::size_t s = 0;
    double alpha = 0.0;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("tilt", "Tilted measure and log partition function");
  cmd->add_option("--p", o->p, "Source distribution (inline or path)")->required();
  auto* cost = cmd->add_option("--cost", o->cost, "Cost vector over symbols");
  auto* table = cmd->add_option("--table", o->table, "Cost table; use with --s");
  cmd->add_option("--s", o->s, "Strategy column of --table");
  cmd->add_option("--alpha", o->alpha, "Tilt parameter")->required();
  cost->excludes(table);
  add_common(cmd, o->common);
  cmd->callback([o, &ctx] {
    if (!ctx.execute) return;
    const FiniteDistribution p = resolve_distribution(o->p);
    std::vector<double> cost_vec;
    if (!o->cost.empty())
      cost_vec = resolve_vector(o->cost);
    else if (!o->table.empty())
      cost_vec = resolve_table(o->table).column(o->s);
    else
      throw std::invalid_argument("tilt: need --cost or --table");
    const TiltResult r = tilted_measure(p, cost_vec, o->alpha);
    Table t;
    append_distribution_columns(t, "q", p.alphabet_size());
    t.columns.push_back("log_z");
    std::vector<std::string> row;
    for (std::size_t i = 0; i < r.q.alphabet_size(); ++i) row.push_back(fmt(r.q[i]));
    row.push_back(fmt(r.log_z));
    t.add_row(std::move(row));
    emit(ctx, o->common, t);
  });
}

void register_moment(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string p, table;
    std::size_t s = 0;
    double alpha = 0.0;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("moment", "Exponential moment of a strategy");
  cmd->add_option("--p", o->p, "Source distribution")->required();
  cmd->add_option("--table", o->table, "Cost table")->required();
  cmd->add_option("--s", o->s, "Strategy index")->required();
  cmd->add_option("--alpha", o->alpha, "Tilt parameter")->required();
  add_common(cmd, o->common);
  cmd->callback([o, &ctx] {
    if (!ctx.execute) return;
    const double lm = log_exp_moment(resolve_distribution(o->p),
                                     resolve_table(o->table), o->s, o->alpha);
    Table t;
    t.columns = {"log_moment", "moment"};
    t.add_row({fmt(lm), fmt(std::exp(lm))});
    emit(ctx, o->common, t);
  });
}

void register_certify(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string p, table;
    std::size_t s = 0;
    double alpha = 0.0;
    double tol = 1e-9;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("certify", "Sufficient optimality certificate");
  cmd->add_option("--p", o->p, "Source distribution")->required();
  cmd->add_option("--table", o->table, "Cost table")->required();
  cmd->add_option("--s", o->s, "Strategy index")->required();
  cmd->add_option("--alpha", o->alpha, "Tilt parameter (>= 0)")->required();
  cmd->add_option("--tol", o->tol, "Certification gap tolerance")->capture_default_str();
  add_common(cmd, o->common);
  cmd->callback([o, &ctx] {
    if (!ctx.execute) return;
    const FiniteDistribution p = resolve_distribution(o->p);
    const CertificateReport r =
        theorem1_certify(p, resolve_table(o->table), o->s, o->alpha, o->tol);
    Table t;
    t.columns = {"certified", "strategy_index", "q_objective_gap", "log_z"};
    append_distribution_columns(t, "q", p.alphabet_size());
    std::vector<std::string> row{fmt(r.certified), fmt(r.strategy_index),
                                 fmt(r.q_objective_gap), fmt(r.log_z)};
    for (std::size_t i = 0; i < r.tilted_q.alphabet_size(); ++i)
      row.push_back(fmt(r.tilted_q[i]));
    t.add_row(std::move(row));
    emit(ctx, o->common, t);
  });
}

void register_saddle(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string p, table;
    double alpha = 0.0;
    int resolution = 200;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("saddle", "Min-max vs max-min Gibbs objective gap");
  cmd->add_option("--p", o->p, "Source distribution")->required();
  cmd->add_option("--table", o->table, "Cost table")->required();
  cmd->add_option("--alpha", o->alpha, "Tilt parameter")->required();
  cmd->add_option("--resolution", o->resolution, "Simplex grid resolution")
      ->capture_default_str();
  add_common(cmd, o->common);
  cmd->callback([o, &ctx] {
    if (!ctx.execute) return;
    const SaddleGapResult r = saddle_gap(resolve_distribution(o->p),
                                         resolve_table(o->table), o->alpha,
                                         o->resolution);
    Table t;
    t.columns = {"minmax", "maxmin", "gap"};
    t.add_row({fmt(r.minmax), fmt(r.maxmin), fmt(r.minmax - r.maxmin)});
    emit(ctx, o->common, t);
  });
}

void register_altmin(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string p, table;
    double alpha = 0.0;
    std::size_t start = 0;
    bool multi_start = false;
    std::size_t max_iter = 1000;
    double tol = 1e-10;
    bool trajectory = false;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "altmin", "Alternating maximization of the negative-tilt moment");
  cmd->add_option("--p", o->p, "Source distribution")->required();
  cmd->add_option("--table", o->table, "Cost table")->required();
  cmd->add_option("--alpha", o->alpha, "Tilt magnitude (> 0)")->required();
  cmd->add_option("--start", o->start, "Starting strategy index")->capture_default_str();
  cmd->add_flag("--multi-start", o->multi_start, "Try every starting strategy");
  cmd->add_option("--max-iter", o->max_iter, "Iteration cap")->capture_default_str();
  cmd->add_option("--tol", o->tol, "Improvement stopping threshold")
      ->capture_default_str();
  cmd->add_flag("--trajectory", o->trajectory, "Emit per-iteration rows");
  add_common(cmd, o->common);
  cmd->callback([o, &ctx] {
    if (!ctx.execute) return;
    const FiniteDistribution p = resolve_distribution(o->p);
    const FiniteCostTable table = resolve_table(o->table);
    AltMinTrajectory traj;
    std::size_t start = o->start;
    if (o->multi_start) {
      MultiStartResult ms =
          alt_minimize_multi_start(p, table, o->alpha, o->max_iter, o->tol);
      traj = std::move(ms.best);
      start = ms.best_start;
    } else {
      traj = alt_minimize_neg_moment(p, table, o->alpha, o->start, o->max_iter, o->tol);
    }
    // Exhaustive reference for the reported optimality gap.
    double brute = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < table.n_strategies(); ++s)
      brute = std::max(brute, log_exp_moment(p, table, s, -o->alpha));

    Table t;
    if (o->trajectory) {
      t.columns = {"iteration", "strategy", "objective"};
      for (std::size_t k = 0; k < traj.strategy_sequence.size(); ++k)
        t.add_row({fmt(k), fmt(traj.strategy_sequence[k]),
                   fmt(traj.objective_sequence[k])});
    } else {
      t.columns = {"converged", "iterations", "start", "final_strategy",
                   "final_objective", "brute_force_objective", "gap"};
      t.add_row({fmt(traj.converged), fmt(traj.iterations), fmt(start),
                 fmt(traj.strategy_sequence.back()),
                 fmt(traj.objective_sequence.back()), fmt(brute),
                 fmt(brute - traj.objective_sequence.back())});
    }
    emit(ctx, o->common, t);
    if (!traj.converged) ctx.exit_code = kExitNoConvergence;
  });
}

void register_code_dist(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string p;
    double alpha = 0.0;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("code-dist", "Optimal code distribution");
  cmd->add_option("--p", o->p, "Source distribution")->required();
  cmd->add_option("--alpha", o->alpha, "Moment order (> 0)")->required();
  add_common(cmd, o->common);
  cmd->callback([o, &ctx] {
    if (!ctx.execute) return;
    const FiniteDistribution p = resolve_distribution(o->p);
    const CodeDistributionResult r = optimal_code_distribution(p, o->alpha);
    Table t;
    append_distribution_columns(t, "q", p.alphabet_size());
    t.columns.push_back("log_moment");
    std::vector<std::string> row;
    for (std::size_t i = 0; i < r.s_q.alphabet_size(); ++i) row.push_back(fmt(r.s_q[i]));
    row.push_back(fmt(r.log_moment));
    t.add_row(std::move(row));
    emit(ctx, o->common, t);
  });
}

void register_bayes_fixpoint(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string prior;
    double phi_plus = 0.0, phi_minus = 0.0;
    bool have_two_point = false;
    double alpha = 0.0;
    double s0 = 0.0;
    std::string starts;
    std::size_t max_iter = 10000;
    double tol = 1e-12;
    double damping = 0.5;
    bool all_roots = false;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "bayes-fixpoint", "Best linear coefficient for the squared-error moment");
  auto* prior = cmd->add_option("--prior", o->prior, "Prior CSV rows (y, weight, phi)");
  auto* pp = cmd->add_option("--phi-plus", o->phi_plus, "Two-point prior: phi(+1)");
  auto* pm = cmd->add_option("--phi-minus", o->phi_minus, "Two-point prior: phi(-1)");
  pp->needs(pm);
  pm->needs(pp);
  prior->excludes(pp)->excludes(pm);
  cmd->add_option("--alpha", o->alpha, "Moment order, in (0, 1/2)")->required();
  cmd->add_option("--s0", o->s0, "Starting point")->capture_default_str();
  cmd->add_option("--starts", o->starts, "Comma list of starting points (multi-start)");
  cmd->add_option("--max-iter", o->max_iter, "Iteration cap")->capture_default_str();
  cmd->add_option("--tol", o->tol, "Residual tolerance")->capture_default_str();
  cmd->add_option("--damping", o->damping, "Damping factor in (0, 1]")
      ->capture_default_str();
  cmd->add_flag("--all-roots", o->all_roots, "List every distinct root found");
  add_common(cmd, o->common);
  cmd->callback([o, pp, &ctx] {
    if (!ctx.execute) return;
    o->have_two_point = pp->count() > 0;
    FiniteSupportPrior prior_value =
        o->have_two_point
            ? make_prior({1.0, -1.0}, {0.5, 0.5}, {o->phi_plus, o->phi_minus})
            : (!o->prior.empty()
                   ? resolve_prior(o->prior)
                   : throw std::invalid_argument(
                         "bayes-fixpoint: need --prior or --phi-plus/--phi-minus"));
    std::vector<double> starts =
        o->starts.empty() ? std::vector<double>{o->s0} : parse_number_list(o->starts);

    struct Root {
      FixpointResult res;
      double moment;
    };
    std::vector<Root> roots;
    for (double s0 : starts) {
      FixpointResult r;
      try {
        r = bayes_linear_fixpoint(prior_value, o->alpha, s0, o->max_iter, o->tol,
                                  o->damping);
      } catch (const std::domain_error&) {
        continue;  // this start diverged; others may land
      }
      bool dup = false;
      for (const Root& existing : roots)
        if (std::abs(existing.res.s - r.s) <= 1e-8) {
          dup = true;
          break;
        }
      if (!dup)
        roots.push_back({r, squared_error_exp_moment(prior_value, o->alpha, r.s)});
    }
    if (roots.empty())
      throw std::domain_error("bayes-fixpoint: every start diverged");
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
      if (a.moment != b.moment) return a.moment < b.moment;
      return a.res.s < b.res.s;
    });

    Table t;
    t.columns = {"s", "iterations", "residual", "converged", "exp_moment"};
    const std::size_t n_rows = o->all_roots ? roots.size() : 1;
    for (std::size_t i = 0; i < n_rows; ++i)
      t.add_row({fmt(roots[i].res.s), fmt(roots[i].res.iterations),
                 fmt(roots[i].res.residual), fmt(roots[i].res.converged),
                 fmt(roots[i].moment)});
    emit(ctx, o->common, t);
    if (!roots.front().res.converged) ctx.exit_code = kExitNoConvergence;
  });
}

void register_gaussian_moment(CLI::App& app, Context& ctx) {
  struct Opts {
    int n = 1;
    double sigma2 = 1.0;
    double theta = 0.0;
    double alpha = 0.0;
    std::size_t mc_samples = 0;
    std::uint64_t seed = 1;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "gaussian-moment", "Exponential moment of the Gaussian sample-mean error");
  cmd->add_option("--n", o->n, "Sample size")->required();
  cmd->add_option("--sigma2", o->sigma2, "Noise variance")->capture_default_str();
  cmd->add_option("--theta", o->theta, "Location parameter")->capture_default_str();
  cmd->add_option("--alpha", o->alpha, "Moment order (< n / (2 sigma2))")->required();
  cmd->add_option("--mc-samples", o->mc_samples,
                  "Also run a Monte Carlo check with this many samples");
  cmd->add_option("--seed", o->seed, "Monte Carlo seed")->capture_default_str();
  add_common(cmd, o->common);
  cmd->callback([o, &ctx] {
    if (!ctx.execute) return;
    const GaussianLocationFamily fam{o->n, o->sigma2, o->theta};
    const double value = gaussian_sample_mean_moment(fam, o->alpha);
    Table t;
    t.columns = {"value", "log_value"};
    std::vector<std::string> row{fmt(value), fmt(std::log(value))};
    if (o->mc_samples > 0) {
      const MCEstimate mc =
          mc_gaussian_sample_mean_moment(fam, o->alpha, o->mc_samples, o->seed);
      t.columns.insert(t.columns.end(),
                       {"mc_mean", "mc_std_error", "mc_samples", "seed"});
      row.push_back(fmt(mc.mean));
      row.push_back(fmt(mc.std_error));
      row.push_back(fmt(mc.n_samples));
      row.push_back(fmt(static_cast<std::size_t>(mc.seed)));
    }
    t.add_row(std::move(row));
    emit(ctx, o->common, t);
  });
}

void register_crb_bound(CLI::App& app, Context& ctx) {
  struct Opts {
    int n = 1;
    double sigma2 = 1.0;
    double theta = 0.0;
    double alpha = 0.0;
    double lo = std::numeric_limits<double>::quiet_NaN();
    double hi = std::numeric_limits<double>::quiet_NaN();
    int grid = 1001;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "crb-bound", "Information-inequality lower bound on the estimation moment");
  cmd->add_option("--n", o->n, "Sample size")->required();
  cmd->add_option("--sigma2", o->sigma2, "Noise variance")->capture_default_str();
  cmd->add_option("--theta", o->theta, "True parameter")->capture_default_str();
  cmd->add_option("--alpha", o->alpha, "Moment order")->required();
  cmd->add_option("--lo", o->lo, "Search interval start (default theta - 10 sigma)");
  cmd->add_option("--hi", o->hi, "Search interval end (default theta + 10 sigma)");
  cmd->add_option("--grid", o->grid, "Grid points")->capture_default_str();
  add_common(cmd, o->common);
  cmd->callback([o, &ctx] {
    if (!ctx.execute) return;
    const GaussianLocationFamily fam{o->n, o->sigma2, o->theta};
    const double spread = 10.0 * std::sqrt(o->sigma2);
    const double lo = std::isnan(o->lo) ? o->theta - spread : o->lo;
    const double hi = std::isnan(o->hi) ? o->theta + spread : o->hi;
    const CRBSpec spec = gaussian_location_crb_spec(fam, lo, hi);
    const CRBBoundResult r = crb_lower_bound(spec, o->theta, o->alpha, o->grid);
    Table t;
    t.columns = {"bound_log", "argmax_theta_prime", "unbounded"};
    t.add_row({fmt(r.bound_log), fmt(r.argmax_theta_prime), fmt(r.unbounded)});
    emit(ctx, o->common, t);
  });
}

void register_exponent(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string p;
    double alpha = 0.0;
    std::string lambda = "shannon";
    double R = 0.0;
    double D = 0.0;
    std::string d_matrix;
    bool hamming = false;
    double tol = 1e-10;
    bool bits = false;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "exponent", "Universal exponent max_Q [alpha lambda(Q) - D(Q||P)]");
  cmd->add_option("--p", o->p, "Source distribution")->required();
  cmd->add_option("--alpha", o->alpha, "Moment order (>= 0)")->required();
  cmd->add_option("--lambda", o->lambda, "shannon, guessing, rd, or dr")
      ->check(CLI::IsMember({"shannon", "guessing", "rd", "dr"}))
      ->capture_default_str();
  cmd->add_option("--R", o->R, "Rate parameter for guessing/dr (nats)");
  cmd->add_option("--D", o->D, "Distortion parameter for rd");
  cmd->add_option("--d-matrix", o->d_matrix, "Distortion matrix (inline ; rows or path)");
  cmd->add_flag("--hamming", o->hamming, "Use the Hamming distortion matrix");
  cmd->add_option("--tol", o->tol, "Ascent stopping threshold")->capture_default_str();
  cmd->add_flag("--bits", o->bits, "Report rates in bits");
  add_common(cmd, o->common);
  cmd->callback([o, &ctx] {
    if (!ctx.execute) return;
    const FiniteDistribution p = resolve_distribution(o->p);
    auto matrix = [&]() -> FiniteCostTable {
      if (o->hamming) return hamming_table(p.alphabet_size());
      if (o->d_matrix.empty())
        throw std::invalid_argument("exponent: rd/dr need --d-matrix or --hamming");
      return resolve_table(o->d_matrix);
    };
    std::optional<LambdaFunctional> lam;
    if (o->lambda == "shannon")
      lam = LambdaFunctional::shannon();
    else if (o->lambda == "guessing")
      lam = LambdaFunctional::guessing(o->R);
    else if (o->lambda == "rd")
      lam = LambdaFunctional::rate_distortion(matrix(), o->D);
    else
      lam = LambdaFunctional::distortion_rate(matrix(), o->R);
    const ExponentResult r = generic_exponent(p, *lam, o->alpha, o->tol);
    const double scale = o->bits ? kLn2 : 1.0;
    Table t;
    t.columns = {"value", "converged", "iterations", "oracle_gap"};
    append_distribution_columns(t, "q", p.alphabet_size());
    std::vector<std::string> row{fmt(r.value / scale), fmt(r.converged),
                                 fmt(r.solver_iterations),
                                 r.oracle_gap ? fmt(*r.oracle_gap / scale)
                                              : std::string()};
    for (std::size_t i = 0; i < r.argmax_q.alphabet_size(); ++i)
      row.push_back(fmt(r.argmax_q[i]));
    t.add_row(std::move(row));
    emit(ctx, o->common, t);
    if (!r.converged) ctx.exit_code = kExitNoConvergence;
  });
}

void register_guessing(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string p;
    double R = 0.0;
    double alpha = 0.0;
    std::string r_range, alpha_range;
    bool oracle = false;
    bool bits = false;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd =
      app.add_subcommand("guessing", "Three-phase guessing exponent (closed form)");
  cmd->add_option("--p", o->p, "Source distribution (full support)")->required();
  auto* rval = cmd->add_option("--R", o->R, "Key rate (nats)");
  auto* aval = cmd->add_option("--alpha", o->alpha, "Guessing-moment order (> 0)");
  auto* rrange = cmd->add_option("--R-range", o->r_range, "Sweep lo:hi:steps over R");
  auto* arange =
      cmd->add_option("--alpha-range", o->alpha_range, "Sweep lo:hi:steps over alpha");
  rrange->excludes(rval);
  arange->excludes(aval);
  cmd->add_flag("--oracle", o->oracle,
                "Also run the variational solver and report the gap (sweep mode)");
  cmd->add_flag("--bits", o->bits, "Report rates in bits");
  add_common(cmd, o->common);
  cmd->callback([o, rval, aval, &ctx] {
    if (!ctx.execute) return;
    const FiniteDistribution p = resolve_distribution(o->p);
    const double scale = o->bits ? kLn2 : 1.0;
    const bool sweep = !o->r_range.empty() || !o->alpha_range.empty();
    if (!sweep) {
      if (rval->count() == 0 || aval->count() == 0)
        throw std::invalid_argument("guessing: need --R and --alpha (or ranges)");
      const GuessingExponentBreakdown r = guessing_exponent_closed(p, o->R, o->alpha);
      Table t;
      t.columns = {"value", "phase", "theta_r", "H_p", "H_p_alpha"};
      t.add_row({fmt(r.value / scale),
                 r.phase == GuessingPhase::low_R
                     ? "low_R"
                     : (r.phase == GuessingPhase::middle ? "middle" : "high_R"),
                 r.theta_r ? fmt(*r.theta_r) : std::string(),
                 fmt(r.entropy_p / scale), fmt(r.entropy_p_alpha / scale)});
      emit(ctx, o->common, t);
      return;
    }
    const std::vector<double> alphas = !o->alpha_range.empty()
                                           ? linspace(parse_range(o->alpha_range))
                                           : std::vector<double>{o->alpha};
    const std::vector<double> rates = !o->r_range.empty()
                                          ? linspace(parse_range(o->r_range))
                                          : std::vector<double>{o->R};
    if (o->alpha_range.empty() && aval->count() == 0)
      throw std::invalid_argument("guessing: sweep over R still needs --alpha");
    if (o->r_range.empty() && rval->count() == 0)
      throw std::invalid_argument("guessing: sweep over alpha still needs --R");
    Table t;
    t.columns = {"alpha", "R", "value", "phase", "theta_r", "oracle_gap"};
    for (double a : alphas) {
      for (double R : rates) {
        const GuessingExponentBreakdown r = guessing_exponent_closed(p, R, a);
        std::string gap;
        if (o->oracle) {
          const ExponentResult g =
              generic_exponent(p, LambdaFunctional::guessing(R), a);
          gap = fmt((r.value - g.value) / scale);
        }
        t.add_row({fmt(a), fmt(R), fmt(r.value / scale),
                   r.phase == GuessingPhase::low_R
                       ? "low_R"
                       : (r.phase == GuessingPhase::middle ? "middle" : "high_R"),
                   r.theta_r ? fmt(*r.theta_r) : std::string(), gap});
      }
    }
    emit(ctx, o->common, t);
  });
}

void register_rd(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string q, d_matrix;
    bool hamming = false;
    double slope = std::numeric_limits<double>::quiet_NaN();
    double D = std::numeric_limits<double>::quiet_NaN();
    double R = std::numeric_limits<double>::quiet_NaN();
    bool bits = false;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("rd", "Rate-distortion point of a finite source");
  cmd->add_option("--q", o->q, "Source distribution")->required();
  cmd->add_option("--d-matrix", o->d_matrix, "Distortion matrix (inline ; rows or path)");
  cmd->add_flag("--hamming", o->hamming, "Use the Hamming distortion matrix");
  cmd->add_option("--slope", o->slope, "Evaluate at this Lagrangian slope (> 0)");
  cmd->add_option("--D", o->D, "Solve R(D) for this distortion");
  cmd->add_option("--R", o->R, "Solve D(R) for this rate (nats)");
  cmd->add_flag("--bits", o->bits, "Report the rate in bits");
  add_common(cmd, o->common);
  cmd->callback([o, &ctx] {
    if (!ctx.execute) return;
    const FiniteDistribution q = resolve_distribution(o->q);
    const FiniteCostTable d = o->hamming
                                  ? hamming_table(q.alphabet_size())
                                  : (o->d_matrix.empty()
                                         ? throw std::invalid_argument(
                                               "rd: need --d-matrix or --hamming")
                                         : resolve_table(o->d_matrix));
    const int given = (!std::isnan(o->slope) ? 1 : 0) + (!std::isnan(o->D) ? 1 : 0) +
                      (!std::isnan(o->R) ? 1 : 0);
    if (given != 1)
      throw std::invalid_argument("rd: give exactly one of --slope, --D, --R");
    RDPoint pt;
    if (!std::isnan(o->slope))
      pt = blahut_arimoto_rd(q, d, o->slope);
    else if (!std::isnan(o->D))
      pt = rate_at_distortion(q, d, o->D);
    else
      pt = distortion_at_rate(q, d, o->R);
    const double scale = o->bits ? kLn2 : 1.0;
    Table t;
    t.columns = {"R", "D", "converged", "iterations"};
    t.add_row({fmt(pt.R / scale), fmt(pt.D), fmt(pt.converged), fmt(pt.iterations)});
    emit(ctx, o->common, t);
    if (!pt.converged) ctx.exit_code = kExitNoConvergence;
  });
}

void register_two_part(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string p;
    double alpha = 0.0;
    std::string n_list = "60";
    bool bits = false;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "two-part", "Exact finite-n moment of the two-part universal code");
  cmd->add_option("--p", o->p, "Source distribution")->required();
  cmd->add_option("--alpha", o->alpha, "Moment order (>= 0)")->required();
  cmd->add_option("--n", o->n_list, "Comma list of block lengths (each <= 60)")
      ->capture_default_str();
  cmd->add_flag("--bits", o->bits, "Report rates in bits");
  add_common(cmd, o->common);
  cmd->callback([o, &ctx] {
    if (!ctx.execute) return;
    const FiniteDistribution p = resolve_distribution(o->p);
    const double limit = lossless_exponent(p, o->alpha);
    const double scale = o->bits ? kLn2 : 1.0;
    Table t;
    t.columns = {"n", "value", "limit"};
    for (double n_real : parse_number_list(o->n_list)) {
      const int n = static_cast<int>(n_real);
      if (static_cast<double>(n) != n_real)
        throw std::invalid_argument("two-part: n must be an integer");
      t.add_row({fmt(static_cast<std::size_t>(n)),
                 fmt(two_part_code_exact_moment(p, o->alpha, n) / scale),
                 fmt(limit / scale)});
    }
    emit(ctx, o->common, t);
  });
}

void register_rem(CLI::App& app, Context& ctx) {
  struct Opts {
    double R = 0.0;
    double alpha = 0.0;
    bool bits = false;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "rem", "Random-code lossy compression exponent with its phase transition");
  cmd->add_option("--R", o->R, "Coding rate in nats, in (0, ln 2)")->required();
  cmd->add_option("--alpha", o->alpha, "Moment order (>= 0)")->required();
  cmd->add_flag("--bits", o->bits, "Report the exponent in bits");
  add_common(cmd, o->common);
  cmd->callback([o, &ctx] {
    if (!ctx.execute) return;
    const RemExponentResult r = rem_lossy_exponent(o->R, o->alpha);
    const double scale = o->bits ? kLn2 : 1.0;
    Table t;
    t.columns = {"value", "critical_alpha"};
    t.add_row({fmt(r.value / scale), fmt(r.critical_alpha)});
    emit(ctx, o->common, t);
  });
}

void register_cw_exponent(CLI::App& app, Context& ctx) {
  struct Opts {
    double mu = 0.0;
    double alpha = 0.0;
    int finite_n = 0;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand(
      "cw-exponent", "Curie-Weiss exponent of the tilted binary estimation error");
  cmd->add_option("--mu", o->mu, "Source bias, in (-1, 1)")->required();
  cmd->add_option("--alpha", o->alpha, "Tilt parameter (>= 0)")->required();
  cmd->add_option("--finite-n", o->finite_n, "Also evaluate the exact finite-n sum");
  add_common(cmd, o->common);
  cmd->callback([o, &ctx] {
    if (!ctx.execute) return;
    const CWParams params{o->mu, o->alpha};
    const std::vector<double> roots = magnetization_fixed_points(params);
    const CWExponentResult r = cw_exponent(params);
    std::string joined;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (i) joined += ";";
      joined += fmt(roots[i]);
    }
    Table t;
    t.columns = {"mu", "alpha", "exponent", "dominant_m",
                 "tie", "n_fixed_points", "fixed_points"};
    std::vector<std::string> row{fmt(o->mu), fmt(o->alpha), fmt(r.exponent),
                                 fmt(r.dominant_m), fmt(r.tie),
                                 fmt(roots.size()), joined};
    if (o->finite_n > 0) {
      t.columns.push_back("finite_n");
      t.columns.push_back("finite_n_value");
      row.push_back(fmt(static_cast<std::size_t>(o->finite_n)));
      row.push_back(fmt(cw_exact_finite_n(params, o->finite_n)));
    }
    t.add_row(std::move(row));
    emit(ctx, o->common, t);
  });
}

void register_cw_phase_diagram(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string mu_range, alpha_range;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd =
      app.add_subcommand("cw-phase-diagram", "Phase classification over a (mu, alpha) grid");
  cmd->add_option("--mu-range", o->mu_range, "lo:hi:steps with |mu| < 1")->required();
  cmd->add_option("--alpha-range", o->alpha_range, "lo:hi:steps with alpha >= 0")
      ->required();
  add_common(cmd, o->common);
  cmd->callback([o, &ctx] {
    if (!ctx.execute) return;
    const Range mu = parse_range(o->mu_range);
    const Range alpha = parse_range(o->alpha_range);
    const std::vector<PhasePoint> points = phase_diagram_grid(
        mu.lo, mu.hi, mu.steps, alpha.lo, alpha.hi, alpha.steps);
    Table t;
    t.columns = {"mu", "alpha", "n_fixed_points", "dominant_m", "exponent", "phase"};
    for (const PhasePoint& pt : points)
      t.add_row({fmt(pt.params.mu), fmt(pt.params.alpha), fmt(pt.fixed_points.size()),
                 fmt(pt.dominant_m), fmt(pt.exponent), to_string(pt.phase)});
    emit(ctx, o->common, t);
  });
}

void register_mc(CLI::App& app, Context& ctx) {
  struct Opts {
    std::string p, table;
    std::size_t s = 0;
    double alpha = 0.0;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    CommonOpts common;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("mc", "Monte Carlo estimate of the exponential moment");
  cmd->add_option("--p", o->p, "Source distribution")->required();
  cmd->add_option("--table", o->table, "Cost table")->required();
  cmd->add_option("--s", o->s, "Strategy index")->required();
  cmd->add_option("--alpha", o->alpha, "Tilt parameter")->required();
  cmd->add_option("--samples", o->samples, "Sample count (>= 100)")->capture_default_str();
  cmd->add_option("--seed", o->seed, "Generator seed")->capture_default_str();
  add_common(cmd, o->common);
  cmd->callback([o, &ctx] {
    if (!ctx.execute) return;
    const MCEstimate r = mc_exp_moment(resolve_distribution(o->p),
                                       resolve_table(o->table), o->s, o->alpha,
                                       o->samples, o->seed);
    Table t;
    t.columns = {"mean", "std_error", "n_samples", "seed"};
    t.add_row({fmt(r.mean), fmt(r.std_error), fmt(r.n_samples),
               fmt(static_cast<std::size_t>(r.seed))});
    emit(ctx, o->common, t);
  });
}

int run_impl(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err, bool execute) {
  Context ctx{out, err, execute, kExitOk};
  CLI::App app{"Exponential-moment strategy toolkit"};
  app.name("expmoment");
  app.require_subcommand(1);
  app.footer("Run a batch of experiments from a config file:\n"
             "  expmoment run-config <path>");

  register_tilt(app, ctx);
  register_moment(app, ctx);
  register_certify(app, ctx);
  register_saddle(app, ctx);
  register_altmin(app, ctx);
  register_code_dist(app, ctx);
  register_bayes_fixpoint(app, ctx);
  register_gaussian_moment(app, ctx);
  register_crb_bound(app, ctx);
  register_exponent(app, ctx);
  register_guessing(app, ctx);
  register_rd(app, ctx);
  register_two_part(app, ctx);
  register_rem(app, ctx);
  register_cw_exponent(app, ctx);
  register_cw_phase_diagram(app, ctx);
  register_mc(app, ctx);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("expmoment");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return ctx.exit_code;
}

struct Experiment {
  std::string command;
  std::vector<std::pair<std::string, std::string>> kv;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<Experiment> parse_config(const std::string& text) {
  std::vector<Experiment> experiments;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      Experiment ex;
      ex.command = trim(t.substr(1, t.size() - 2));
      if (ex.command.empty())
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": empty section name");
      experiments.push_back(std::move(ex));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    if (experiments.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": key outside any [command] section");
    experiments.back().kv.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return experiments;
}

// Config keys use underscores; flags use dashes. output_path/output_format
// are accepted as spellings of --output/--format.
std::string key_to_flag(const std::string& key) {
  if (key == "output_path") return "output";
  if (key == "output_format") return "format";
  std::string flag = key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  return flag;
}

std::vector<std::string> experiment_args(const Experiment& ex) {
  std::vector<std::string> args{ex.command};
  for (const auto& [key, value] : ex.kv) {
    const std::string flag = key_to_flag(key);
    if (value == "true")
      args.push_back("--" + flag);
    else if (value == "false")
      continue;
    else
      args.push_back("--" + flag + "=" + value);
  }
  return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return run_impl(args, out, err, true);
}

int run_config(const std::string& path, std::ostream& out, std::ostream& err) {
  std::vector<Experiment> experiments;
  try {
    experiments = parse_config(read_text_input(path));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  // Validate every section before executing anything: unknown commands or
  // keys abort the whole run with no partial output.
  std::ostringstream discard;
  for (const Experiment& ex : experiments) {
    const int rc = run_impl(experiment_args(ex), discard, err, false);
    if (rc != kExitOk) return rc;
  }

  bool first = true;
  for (const Experiment& ex : experiments) {
    if (!first) out << "\n";
    first = false;
    const int rc = run_impl(experiment_args(ex), out, err, true);
    if (rc != kExitOk) return rc;
  }
  return kExitOk;
}

}  // namespace expmoment::cli
