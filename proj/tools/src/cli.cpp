#include "tsruin_cli/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "tsruin/diagnostics.hpp"
#include "tsruin/errors.hpp"
#include "tsruin/ruin.hpp"

namespace tsruin::cli {
namespace {

struct PaperRef {
  static constexpr double c = 0.01;
  static constexpr double alpha = 1.0;
  static constexpr double rho = 0.99;
  static constexpr double xi = 0.2;
};

// Routes library warnings to the command's log stream for its lifetime.
class SinkGuard {
 public:
  explicit SinkGuard(std::ostream& log) {
    diag::set_sink([&log](const std::string& msg) { log << "warning: " << msg << '\n'; });
  }
  ~SinkGuard() { diag::reset_sink(); }
  SinkGuard(const SinkGuard&) = delete;
  SinkGuard& operator=(const SinkGuard&) = delete;
};

void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.out) {
    write_atomic(*cfg.out, content);
  } else {
    out << content;
  }
}

std::string regime_note(const ClaimsModel& m) {
  const Regime r = classify_regime(m);
  std::ostringstream os;
  os << "regime: " << to_string(r.tag) << " (psi_X(alpha)=" << format_number(r.psi_alpha)
     << ", subcritical needs loading > " << format_number(r.loading_threshold) << ")";
  return os.str();
}

void cmd_b(const RunConfig& cfg, const ClaimsModel& m, std::ostringstream& data,
           std::ostream& log) {
  const auto ts = make_grid(cfg.t);
  log << regime_note(m) << '\n';
  if (classify_regime(m).tag == RegimeTag::Subcritical) {
    log << "B(inf): " << format_number(b_infinity(m)) << '\n';
  } else {
    log << "warning: regime is " << to_string(classify_regime(m).tag)
        << "; B(inf) is undefined and B grows without bound\n";
  }
  const BFunction bf(m, cfg.inversion);
  Table table({"t", "B"});
  for (double t : ts) table.add({t, bf(t)});
  table.write(data);
}

sim::BatchResult simulate(const RunConfig& cfg, const ClaimsModel& m, double u, double t) {
  if (cfg.approach == "mc") return sim::simulate_ruin_mc(m, u, t, cfg.plan);
  if (cfg.approach == "naive") return sim::simulate_ruin_naive(m, u, t, cfg.plan);
  throw DomainError("unknown approach '" + cfg.approach + "' (expected naive or mc)");
}

void cmd_surface(const RunConfig& cfg, const ClaimsModel& m, std::ostringstream& data,
                 std::ostream& log) {
  const auto us = make_grid(cfg.u);
  const auto ts = make_grid(cfg.t);
  const std::string& method = cfg.method;
  if (method != "rft" && method != "tulta" && method != "infinite" && method != "mc") {
    throw DomainError("unknown method '" + method + "' (expected rft, tulta, infinite or mc)");
  }
  if (method == "tulta" && classify_regime(m).tag != RegimeTag::Subcritical) {
    throw RegimeError("tulta requires the subcritical regime; " + regime_note(m));
  }
  const BFunction bf(m, cfg.inversion);
  Table table = method == "mc" ? Table({"u", "t", "value", "stderr"}) : Table({"u", "t", "value"});
  for (double u : us) {
    std::optional<double> eventual;
    if (method == "infinite") eventual = prob_eventual_ruin(m, u, cfg.inversion);
    for (double t : ts) {
      if (method == "rft") {
        table.add({u, t, estimate_rft(bf, u, t).value});
      } else if (method == "tulta") {
        table.add({u, t, estimate_tulta(bf, u, t).value});
      } else if (method == "infinite") {
        table.add({u, t, *eventual});
      } else {
        const auto r = sim::simulate_ruin_mc(m, u, t, cfg.plan);
        log << "u=" << format_number(u) << " t=" << format_number(t)
            << " elapsed=" << format_number(r.elapsed_seconds) << "s\n";
        table.add({u, t, r.mean, r.std_error});
      }
    }
  }
  table.write(data);
}

void cmd_simulate(const RunConfig& cfg, const ClaimsModel& m, std::ostringstream& data,
                  std::ostream& log) {
  const auto us = make_grid(cfg.u);
  const auto ts = make_grid(cfg.t);
  for (double t : ts) cfg.plan.validate(t);
  Table table({"u", "t", "mean", "stderr", "n", "N", "h", "seed"});
  for (double u : us) {
    for (double t : ts) {
      const auto r = simulate(cfg, m, u, t);
      log << cfg.approach << " u=" << format_number(u) << " t=" << format_number(t)
          << " mean=" << format_number(r.mean) << " stderr=" << format_number(r.std_error)
          << " elapsed=" << format_number(r.elapsed_seconds) << "s\n";
      table.add_cells({format_number(u), format_number(t), format_number(r.mean),
                       format_number(r.std_error), std::to_string(r.paths_per_batch),
                       std::to_string(r.batches), format_number(cfg.plan.h),
                       std::to_string(cfg.plan.seed)});
    }
  }
  table.write(data);
}

void cmd_benchmark(const RunConfig& cfg, const ClaimsModel& m, std::ostringstream& data,
                   std::ostream& log) {
  if (classify_regime(m).tag != RegimeTag::Subcritical) {
    throw RegimeError("benchmark requires the subcritical regime; " + regime_note(m));
  }
  const auto us = make_grid(cfg.u);
  const auto ts = make_grid(cfg.t);
  for (double t : ts) cfg.plan.validate(t);
  const BFunction bf(m, cfg.inversion);
  Table table({"u", "t", "a", "s", "i", "a/s", "i/s", "|a-s|/s", "|i-s|/s"});
  for (double u : us) {
    const double i = prob_eventual_ruin(m, u, cfg.inversion);
    for (double t : ts) {
      const double a = estimate_tulta(bf, u, t).value;
      const auto sim = sim::simulate_ruin_mc(m, u, t, cfg.plan);
      const double s = sim.mean;
      log << "u=" << format_number(u) << " t=" << format_number(t)
          << " s stderr=" << format_number(sim.std_error)
          << " elapsed=" << format_number(sim.elapsed_seconds) << "s\n";
      table.add({u, t, a, s, i, a / s, i / s, std::abs(a - s) / s, std::abs(i - s) / s});
    }
  }
  table.write(data);
}

void cmd_scale(const RunConfig& cfg, const ClaimsModel& m, std::ostringstream& data,
               std::ostream& log) {
  const auto us = make_grid(cfg.u);
  log << "1/|E X_1|: " << format_number(1.0 / std::abs(mean_x(m))) << '\n';
  Table w({"u", "W"});
  Table p({"u", "P(tau<inf)"});
  for (double u : us) {
    w.add({u, scale_function(m, u, cfg.inversion)});
    p.add({u, prob_eventual_ruin(m, u, cfg.inversion)});
  }
  w.write(data);
  data << '\n';
  p.write(data);
}

laplace::Engine parse_engine(const std::string& name) {
  if (name == "talbot") return laplace::Engine::Talbot;
  if (name == "levin") return laplace::Engine::Levin;
  throw DomainError("unknown engine '" + name + "' (expected talbot or levin)");
}

}  // namespace

ClaimsModel RunConfig::model() const {
  if (!c || !alpha || !rho) {
    throw DomainError("model parameters --c, --alpha and --rho are required (or --preset paper-ref)");
  }
  if (premium.has_value() == xi.has_value()) {
    throw DomainError("exactly one of --p and --xi must be given");
  }
  if (premium) return ClaimsModel::with_premium(*c, *alpha, *rho, *premium);
  return ClaimsModel::with_loading(*c, *alpha, *rho, *xi);
}

std::vector<double> make_grid(const GridSpec& g) {
  if (g.steps < 1) throw DomainError("grid needs at least one step");
  if (!(g.min >= 0.0) || !(g.max >= g.min) || !std::isfinite(g.max)) {
    throw DomainError("grid bounds must satisfy 0 <= min <= max");
  }
  std::vector<double> out;
  out.reserve(g.steps);
  if (g.min == 0.0) {
    if (!(g.max > 0.0)) throw DomainError("left-open grid from 0 needs max > 0");
    for (int i = 1; i <= g.steps; ++i) out.push_back(g.max * i / g.steps);
  } else if (g.steps == 1) {
    out.push_back(g.min);
  } else {
    for (int i = 0; i < g.steps; ++i) out.push_back(g.min + (g.max - g.min) * i / (g.steps - 1));
  }
  return out;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add(const std::vector<double>& row) {
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (double x : row) cells.push_back(format_number(x));
  add_cells(std::move(cells));
}

void Table::add_cells(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) throw std::logic_error("table row width mismatch");
  rows_.push_back(std::move(cells));
}

void Table::write(std::ostream& os) const {
  auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "\t" : "") << cells[i];
    os << '\n';
  };
  os << '#';
  line(columns_);
  for (const auto& row : rows_) line(row);
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DomainError("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) {
      std::filesystem::remove(tmp);
      throw DomainError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw DomainError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

RunConfig parse(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Finite-time and eventual ruin probabilities for tempered stable risk processes",
               "tsruin"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");

  double c = 0, alpha = 0, rho = 0, premium = 0, xi = 0, eps = 0;
  std::string engine = "talbot";
  std::string preset;
  std::string out;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  cfg.plan.threads = hw;

  auto* opt_c = app.add_option("--c", c, "Levy measure intensity c > 0");
  auto* opt_alpha = app.add_option("--alpha", alpha, "Tempering rate alpha > 0");
  auto* opt_rho = app.add_option("--rho", rho, "Stability index rho in (0,1)");
  auto* opt_p = app.add_option("--p", premium, "Premium rate p");
  auto* opt_xi = app.add_option("--xi", xi, "Safety loading xi, p = (1 + xi) E Y_1");
  opt_p->excludes(opt_xi);
  app.add_option("--preset", preset, "Named parameter set")->check(CLI::IsMember({"paper-ref"}));

  app.add_option("--u-min", cfg.u.min, "Smallest initial reserve (0 gives a left-open grid)");
  app.add_option("--u-max", cfg.u.max, "Largest initial reserve");
  app.add_option("--u-steps", cfg.u.steps, "Number of u grid points");
  app.add_option("--t-min", cfg.t.min, "Smallest horizon (0 gives a left-open grid)");
  app.add_option("--t-max", cfg.t.max, "Largest horizon");
  app.add_option("--t-steps", cfg.t.steps, "Number of t grid points");

  app.add_option("--engine", engine, "Laplace inversion engine")
      ->check(CLI::IsMember({"talbot", "levin"}));
  app.add_option("--digits", cfg.inversion.digits, "Talbot terms and working digits M");
  app.add_option("--nodes", cfg.inversion.nodes, "Levin collocation nodes n (cutoff U = n)");
  auto* opt_eps = app.add_option("--eps", eps, "Levin Bromwich abscissa");

  app.add_option("--h", cfg.plan.h, "Simulation time step; must divide every t");
  app.add_option("--paths", cfg.plan.paths, "Paths per batch n");
  app.add_option("--batches", cfg.plan.batches, "Number of batches N");
  app.add_option("--seed", cfg.plan.seed, "Base RNG seed");
  app.add_option("--threads", cfg.plan.threads, "Worker threads for simulation");
  app.add_option("--method", cfg.method, "Surface estimator")
      ->check(CLI::IsMember({"rft", "tulta", "infinite", "mc"}));
  app.add_option("--approach", cfg.approach, "Simulation approach")
      ->check(CLI::IsMember({"naive", "mc"}));
  auto* opt_out = app.add_option("--out", out, "Output file (stdout when absent)");

  app.require_subcommand(1);
  auto sub = [&](const char* name, const char* help, Command cmd) {
    app.add_subcommand(name, help)->fallthrough()->callback([&cfg, cmd] { cfg.command = cmd; });
  };
  sub("b", "Tabulate B(t) over the t grid", Command::B);
  sub("surface", "Ruin probability estimates over the (u, t) grid", Command::Surface);
  sub("simulate", "Monte Carlo ruin probabilities over the (u, t) grid", Command::Simulate);
  sub("benchmark", "Asymptotic vs simulated vs eventual ruin over the grid", Command::Benchmark);
  sub("scale", "Scale function and eventual ruin probability over the u grid", Command::Scale);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  }

  if (preset == "paper-ref") {
    cfg.c = PaperRef::c;
    cfg.alpha = PaperRef::alpha;
    cfg.rho = PaperRef::rho;
    if (!opt_p->count()) cfg.xi = PaperRef::xi;
  }
  if (opt_c->count()) cfg.c = c;
  if (opt_alpha->count()) cfg.alpha = alpha;
  if (opt_rho->count()) cfg.rho = rho;
  if (opt_p->count()) {
    cfg.premium = premium;
    cfg.xi.reset();
  }
  if (opt_xi->count()) cfg.xi = xi;
  if (opt_eps->count()) cfg.inversion.eps = eps;
  if (opt_out->count()) cfg.out = out;
  cfg.inversion.engine = parse_engine(engine);
  return cfg;
}

void execute(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const SinkGuard guard(log);
  cfg.inversion.validate();
  const ClaimsModel m = cfg.model();
  std::ostringstream data;
  switch (cfg.command) {
    case Command::B: cmd_b(cfg, m, data, log); break;
    case Command::Surface: cmd_surface(cfg, m, data, log); break;
    case Command::Simulate: cmd_simulate(cfg, m, data, log); break;
    case Command::Benchmark: cmd_benchmark(cfg, m, data, log); break;
    case Command::Scale: cmd_scale(cfg, m, data, log); break;
  }
  emit(cfg, data.str(), out);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse(argc, argv);
  } catch (const HelpRequested& help) {
    out << help.what();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "tsruin: error: " << e.what() << '\n';
    return kUsage;
  }
  try {
    execute(cfg, out, err);
  } catch (const DomainError& e) {
    err << "tsruin: error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    err << "tsruin: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const RegimeError& e) {
    err << "tsruin: regime error: " << e.what() << '\n';
    return kRegime;
  } catch (const std::exception& e) {
    err << "tsruin: error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}

}  // namespace tsruin::cli
