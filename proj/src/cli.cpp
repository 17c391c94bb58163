#include "dtcopula/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtcopula/bootstrap.hpp"
#include "dtcopula/error.hpp"
#include "dtcopula/simulation.hpp"

namespace dtcopula::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* flag(bool b) { return b ? "true" : "false"; }

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<ThetaInterval> search_domain(const RunConfig& c, Family family) {
  auto domain = default_theta_domain(family);
  if (!c.theta_lo && !c.theta_hi) return domain;
  const double lo = c.theta_lo.value_or(domain.front().lo);
  const double hi = c.theta_hi.value_or(domain.back().hi);
  std::vector<ThetaInterval> out;
  for (const auto& iv : domain) {
    const ThetaInterval clipped{std::max(iv.lo, lo), std::min(iv.hi, hi)};
    if (clipped.lo <= clipped.hi) out.push_back(clipped);
  }
  if (out.empty()) {
    std::ostringstream os;
    os << "theta bounds [" << lo << ", " << hi << "] miss the admissible range of "
       << to_string(family);
    throw ValidationError(os.str());
  }
  return out;
}

FitOptions fit_options(const RunConfig& c, Family family) {
  FitOptions o;
  o.tol = c.tol;
  o.max_outer = c.max_outer;
  if (family != Family::Independence) o.theta_domain = search_domain(c, family);
  o.theta_init = c.theta_init;
  return o;
}

Family single_family(const RunConfig& c) {
  if (c.families.size() != 1)
    throw ValidationError("this command takes exactly one --copula family");
  return c.families.front();
}

Algorithm single_algorithm(const RunConfig& c) {
  if (c.algorithms.size() != 1)
    throw ValidationError("this command takes exactly one --algo");
  return c.algorithms.front();
}

ObservedSample load_input(const RunConfig& c) {
  if (c.input.empty()) throw ValidationError("--input is required");
  if (!c.phi) throw ValidationError("--phi is required");
  return read_sample_csv(c.input, *c.phi);
}

void write_csv_rows(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << '\n';
  }
}

double tau_of(const FitResult& r) {
  return r.family == Family::Independence ? 0.0 : r.copula().kendall_tau();
}

}  // namespace

ObservedSample read_sample_csv(std::istream& in, double phi) {
  std::string line;
  std::size_t lineno = 0;
  int iu = -1, ix = -1, iv = -1;
  std::size_t ncol = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::string header = trim(line);
    if (lineno == 1 && header.rfind("\xEF\xBB\xBF", 0) == 0) header.erase(0, 3);
    const auto cols = split(header, ',');
    ncol = cols.size();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      std::string name = cols[i];
      std::transform(name.begin(), name.end(), name.begin(),
                     [](unsigned char ch) { return std::tolower(ch); });
      int* slot = name == "u" ? &iu : name == "x" ? &ix : name == "v" ? &iv : nullptr;
      if (!slot) {
        throw ValidationError("line " + std::to_string(lineno) + ": unknown column '" +
                              cols[i] + "' (header must be u,x or u,x,v)");
      }
      if (*slot >= 0)
        throw ValidationError("line " + std::to_string(lineno) + ": duplicate column '" +
                              cols[i] + "'");
      *slot = static_cast<int>(i);
    }
    break;
  }
  if (iu < 0 || ix < 0)
    throw ValidationError("missing header: the first line must name the columns u,x");

  std::vector<double> u, x;
  std::vector<std::size_t> row_line;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (cells.size() != ncol)
      throw ValidationError(where + "expected " + std::to_string(ncol) + " fields, got " +
                            std::to_string(cells.size()));
    double vu = 0.0, vx = 0.0, vv = 0.0;
    if (!parse_double(cells[iu], vu) || !parse_double(cells[ix], vx) ||
        (iv >= 0 && !parse_double(cells[iv], vv)))
      throw ValidationError(where + "malformed row '" + trim(line) + "'");
    if (iv >= 0 && std::abs(vv - vu - phi) > 1e-9)
      throw ValidationError(where + "v - u = " + num(vv - vu) + " differs from phi = " +
                            num(phi));
    u.push_back(vu);
    x.push_back(vx);
    row_line.push_back(lineno);
  }
  try {
    return ObservedSample(std::move(u), std::move(x), phi);
  } catch (const ValidationError& e) {
    // Row indices in the message refer to data rows; report file lines.
    if (e.rows().empty()) throw;
    std::ostringstream os;
    os << e.what() << " (";
    for (std::size_t i = 0; i < std::min<std::size_t>(e.rows().size(), 10); ++i)
      os << (i ? ", " : "") << "line " << row_line[e.rows()[i]];
    os << ")";
    throw ValidationError(os.str(), e.rows());
  }
}

ObservedSample read_sample_csv(const std::string& path, double phi) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open input file '" + path + "'");
  return read_sample_csv(in, phi);
}

int cmd_fit(const RunConfig& c, std::ostream& out) {
  const ObservedSample sample = load_input(c);
  const Family family = single_family(c);
  const Algorithm algorithm = single_algorithm(c);
  const FitResult r = fit(sample, family, algorithm, fit_options(c, family));
  const auto est = distribution_estimates(r, sample);
  const std::size_t n = sample.size();

  if (c.format == Format::Json) {
    Json j;
    j["command"] = "fit";
    j["family"] = to_string(family);
    j["algorithm"] = to_string(algorithm);
    j["n"] = n;
    j["phi"] = sample.phi();
    j["theta_hat"] = r.theta_hat;
    j["kendall_tau"] = tau_of(r);
    j["loglik"] = r.loglik;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["boundary_hit"] = r.boundary_hit;
    Json life = Json::array(), trunc = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
      life.push_back({{"record", i}, {"x", sample.x(i)}, {"f", r.masses.f[i]},
                      {"F", est.lifetime(sample.x(i))}});
      trunc.push_back({{"record", i}, {"u", sample.u(i)}, {"k", r.masses.k[i]},
                       {"G", est.truncation(sample.u(i))}});
    }
    j["lifetimes"] = life;
    j["truncation"] = trunc;
    out << j.dump(2) << '\n';
  } else {
    write_csv_rows(out, {{"key", "value"},
                         {"command", "fit"},
                         {"family", std::string(to_string(family))},
                         {"algorithm", std::string(to_string(algorithm))},
                         {"n", std::to_string(n)},
                         {"phi", num(sample.phi())},
                         {"theta_hat", num(r.theta_hat)},
                         {"kendall_tau", num(tau_of(r))},
                         {"loglik", num(r.loglik)},
                         {"iterations", std::to_string(r.iterations)},
                         {"converged", flag(r.converged)},
                         {"boundary_hit", flag(r.boundary_hit)}});
    out << "\nrecord,x,f,F\n";
    for (std::size_t i = 0; i < n; ++i)
      out << i << ',' << num(sample.x(i)) << ',' << num(r.masses.f[i]) << ','
          << num(est.lifetime(sample.x(i))) << '\n';
    out << "\nrecord,u,k,G\n";
    for (std::size_t i = 0; i < n; ++i)
      out << i << ',' << num(sample.u(i)) << ',' << num(r.masses.k[i]) << ','
          << num(est.truncation(sample.u(i))) << '\n';
  }
  return r.converged ? kOk : kNonConvergence;
}

int cmd_bootstrap(const RunConfig& c, std::ostream& out) {
  if (c.bootstrap_b < 2) throw ValidationError("--bootstrap B must be at least 2");
  const ObservedSample sample = load_input(c);
  const Family family = single_family(c);
  const Algorithm algorithm = single_algorithm(c);
  const FitOptions fo = fit_options(c, family);
  const FitResult r = fit(sample, family, algorithm, fo);
  if (!r.converged) {
    std::ostringstream os;
    os << "initial fit did not converge in " << r.iterations << " outer iterations";
    throw ConvergenceError(os.str(), r.iterations,
                           std::max(r.last_change_f, r.last_change_k));
  }
  BootstrapOptions bo;
  bo.replicates = c.bootstrap_b;
  bo.seed = c.seed;
  bo.fit = fo;
  const BootstrapReport rep = bootstrap_se(r, sample, bo);

  if (c.format == Format::Json) {
    Json j;
    j["command"] = "bootstrap";
    j["family"] = to_string(family);
    j["algorithm"] = to_string(algorithm);
    j["seed"] = rep.seed;
    j["B"] = rep.replicates;
    j["attempts"] = rep.attempts;
    j["failures"] = rep.failures;
    j["rejected_total"] = rep.rejected_total;
    j["theta_hat"] = rep.theta_hat;
    j["kendall_tau"] = tau_of(r);
    j["se_theta"] = rep.se_theta;
    j["ci_theta"] = {rep.ci_theta.first, rep.ci_theta.second};
    Json q = Json::array();
    for (std::size_t i = 0; i < rep.quantiles.size(); ++i)
      q.push_back({{"p", rep.quantiles[i]}, {"x", rep.f_points[i]}, {"se_F", rep.se_f[i]},
                   {"u", rep.k_points[i]}, {"se_G", rep.se_k[i]}});
    j["quantiles"] = q;
    j["replicate_thetas"] = rep.replicate_thetas;
    out << j.dump(2) << '\n';
  } else {
    write_csv_rows(out, {{"key", "value"},
                         {"command", "bootstrap"},
                         {"family", std::string(to_string(family))},
                         {"algorithm", std::string(to_string(algorithm))},
                         {"seed", std::to_string(rep.seed)},
                         {"B", std::to_string(rep.replicates)},
                         {"attempts", std::to_string(rep.attempts)},
                         {"failures", std::to_string(rep.failures)},
                         {"rejected_total", std::to_string(rep.rejected_total)},
                         {"theta_hat", num(rep.theta_hat)},
                         {"kendall_tau", num(tau_of(r))},
                         {"se_theta", num(rep.se_theta)},
                         {"ci_lo", num(rep.ci_theta.first)},
                         {"ci_hi", num(rep.ci_theta.second)}});
    out << "\np,x,se_F,u,se_G\n";
    for (std::size_t i = 0; i < rep.quantiles.size(); ++i)
      out << num(rep.quantiles[i]) << ',' << num(rep.f_points[i]) << ','
          << num(rep.se_f[i]) << ',' << num(rep.k_points[i]) << ',' << num(rep.se_k[i])
          << '\n';
    out << "\nreplicate,theta\n";
    for (std::size_t i = 0; i < rep.replicate_thetas.size(); ++i)
      out << i << ',' << num(rep.replicate_thetas[i]) << '\n';
  }
  return kOk;
}

int cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream& log) {
  if (c.model.empty()) throw ValidationError("--model is required");
  if (c.replicates == 0) throw ValidationError("--replicates must be at least 1");
  const ModelSpec model = find_model(c.model, c.n);
  ExperimentOptions eo;
  eo.algorithms = c.algorithms;
  eo.independence_comparator = c.comparator;
  eo.fit = fit_options(c, model.family);
  const ExperimentReport rep = run_experiment(model, c.replicates, c.seed, eo);
  log << "simulate: " << model.label << ", n=" << model.n << ", " << rep.replicates
      << " replicates in " << rep.wall_seconds << " s\n";

  if (c.format == Format::Json) {
    Json j;
    j["command"] = "simulate";
    j["model"] = model.label;
    j["family"] = to_string(model.family);
    j["theta"] = model.theta;
    j["n"] = model.n;
    j["phi"] = model.phi;
    j["u_shift"] = model.u_shift;
    j["replicates"] = rep.replicates;
    j["seed"] = rep.seed;
    j["truncation_proportion"] = rep.truncation_proportion;
    Json algs = Json::array();
    for (const auto& s : rep.algorithms) {
      Json d = Json::array();
      for (std::size_t q = 0; q < kDeciles; ++q)
        d.push_back({{"p", rep.probabilities[q]}, {"x", rep.x_deciles[q]},
                     {"u", rep.u_deciles[q]}, {"mse_F", s.mse_f[q]},
                     {"bias_F", s.bias_f[q]}, {"mse_G", s.mse_k[q]},
                     {"bias_G", s.bias_k[q]}});
      algs.push_back({{"algorithm", to_string(s.algorithm)},
                      {"successes", s.successes},
                      {"failures", s.failures},
                      {"nonconverged", s.nonconverged},
                      {"theta_mean", s.theta_mean},
                      {"theta_bias", s.theta_bias},
                      {"theta_sd", s.theta_sd},
                      {"deciles", d}});
    }
    j["algorithms"] = algs;
    if (rep.relative_mse_f)
      j["relative_mse_F"] = Json(std::vector<double>(rep.relative_mse_f->begin(),
                                                     rep.relative_mse_f->end()));
    if (rep.independence) {
      j["independence_npmle"] = {
          {"successes", rep.independence->successes},
          {"failures", rep.independence->failures},
          {"bias_F", std::vector<double>(rep.independence->bias_f.begin(),
                                         rep.independence->bias_f.end())},
          {"mse_F", std::vector<double>(rep.independence->mse_f.begin(),
                                        rep.independence->mse_f.end())}};
    }
    out << j.dump(2) << '\n';
  } else {
    write_csv_rows(out, {{"key", "value"},
                         {"command", "simulate"},
                         {"model", model.label},
                         {"family", std::string(to_string(model.family))},
                         {"theta", num(model.theta)},
                         {"n", std::to_string(model.n)},
                         {"phi", num(model.phi)},
                         {"u_shift", num(model.u_shift)},
                         {"replicates", std::to_string(rep.replicates)},
                         {"seed", std::to_string(rep.seed)},
                         {"truncation_proportion", num(rep.truncation_proportion)}});
    out << "\nalgorithm,successes,failures,nonconverged,theta_mean,theta_bias,theta_sd\n";
    for (const auto& s : rep.algorithms)
      out << to_string(s.algorithm) << ',' << s.successes << ',' << s.failures << ','
          << s.nonconverged << ',' << num(s.theta_mean) << ',' << num(s.theta_bias) << ','
          << num(s.theta_sd) << '\n';
    out << "\nalgorithm,p,x,u,mse_F,bias_F,mse_G,bias_G\n";
    for (const auto& s : rep.algorithms)
      for (std::size_t q = 0; q < kDeciles; ++q)
        out << to_string(s.algorithm) << ',' << num(rep.probabilities[q]) << ','
            << num(rep.x_deciles[q]) << ',' << num(rep.u_deciles[q]) << ','
            << num(s.mse_f[q]) << ',' << num(s.bias_f[q]) << ',' << num(s.mse_k[q])
            << ',' << num(s.bias_k[q]) << '\n';
    if (rep.relative_mse_f) {
      out << "\np,relative_mse_F\n";
      for (std::size_t q = 0; q < kDeciles; ++q)
        out << num(rep.probabilities[q]) << ',' << num((*rep.relative_mse_f)[q]) << '\n';
    }
    if (rep.independence) {
      out << "\np,independence_bias_F,independence_mse_F\n";
      for (std::size_t q = 0; q < kDeciles; ++q)
        out << num(rep.probabilities[q]) << ',' << num(rep.independence->bias_f[q]) << ','
            << num(rep.independence->mse_f[q]) << '\n';
    }
  }
  return kOk;
}

int cmd_validate(const RunConfig& c, std::ostream& out) {
  ValidationOptions vo;
  vo.families = c.families;
  vo.hook = c.validate_hook;
  const ValidationReport rep = validate_copulas(vo);
  if (c.format == Format::Json) {
    Json checks = Json::array();
    for (const auto& k : rep.checks)
      checks.push_back({{"family", to_string(k.family)}, {"theta", k.theta},
                        {"check", k.check}, {"passed", k.passed}, {"worst", k.worst},
                        {"tolerance", k.tolerance}});
    Json j;
    j["command"] = "validate";
    j["all_passed"] = rep.all_passed();
    j["checks"] = checks;
    out << j.dump(2) << '\n';
  } else {
    out << "family,theta,check,status,worst,tolerance\n";
    for (const auto& k : rep.checks)
      out << to_string(k.family) << ',' << num(k.theta) << ',' << k.check << ','
          << (k.passed ? "pass" : "fail") << ',' << num(k.worst) << ','
          << num(k.tolerance) << '\n';
  }
  return rep.all_passed() ? kOk : kFailure;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Copula-based NPMLE for doubly truncated data", "dtcop"};
  app.require_subcommand(1);
  RunConfig c;
  std::string copula = "frank", algo = "simple", format = "csv";
  double theta_lo = 0.0, theta_hi = 0.0, theta_init = 0.0, phi = 0.0;
  long long seed = 1;

  auto* fit_cmd = app.add_subcommand("fit", "fit a copula model to a CSV sample");
  auto* boot_cmd = app.add_subcommand("bootstrap", "fit plus copula bootstrap standard errors");
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo study for a labelled model");
  auto* val_cmd = app.add_subcommand("validate", "copula self-checks");

  std::vector<CLI::Option*> lo_opts, hi_opts, init_opts, phi_opts;
  for (auto* sub : {fit_cmd, boot_cmd, sim_cmd, val_cmd}) {
    sub->add_option("--copula", copula, "fgm|frank|clayton|indep (validate: comma list)");
    sub->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out, "output path (default stdout)");
  }
  for (auto* sub : {fit_cmd, boot_cmd, sim_cmd}) {
    sub->add_option("--algo", algo, "simple|full (simulate: comma list)");
    sub->add_option("--tol", c.tol, "convergence tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", c.max_outer, "maximum outer iterations")
        ->check(CLI::PositiveNumber);
    lo_opts.push_back(sub->add_option("--theta-lo", theta_lo, "lower theta bound"));
    hi_opts.push_back(sub->add_option("--theta-hi", theta_hi, "upper theta bound"));
    init_opts.push_back(
        sub->add_option("--theta-init", theta_init, "start the theta search locally here"));
  }
  for (auto* sub : {fit_cmd, boot_cmd}) {
    sub->add_option("--input", c.input, "CSV with header u,x or u,x,v")->required();
    phi_opts.push_back(sub->add_option("--phi", phi, "window length V - U")->required());
  }
  boot_cmd->add_option("--bootstrap", c.bootstrap_b, "number of replicates B");
  for (auto* sub : {boot_cmd, sim_cmd}) sub->add_option("--seed", seed, "master seed");
  sim_cmd->add_option("--model", c.model, "model label, e.g. \"Model 2.3\"")->required();
  sim_cmd->add_option("--n", c.n, "sample size")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--replicates", c.replicates, "Monte Carlo replicates");
  sim_cmd->add_flag("--comparator", c.comparator,
                    "also report the independence NPMLE bias");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ValidationError(e.what());
  }

  CLI::App* used = app.get_subcommands().front();
  c.command = used == fit_cmd    ? Command::Fit
              : used == boot_cmd ? Command::Bootstrap
              : used == sim_cmd  ? Command::Simulate
                                 : Command::Validate;
  c.families.clear();
  for (const auto& name : split(copula, ','))
    if (!name.empty()) c.families.push_back(parse_family(name));
  if (c.families.empty()) throw ValidationError("--copula names no family");
  c.algorithms.clear();
  for (const auto& name : split(algo, ',')) c.algorithms.push_back(parse_algorithm(name));
  c.format = format == "json" ? Format::Json : Format::Csv;
  if (seed < 0) throw ValidationError("--seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  auto given = [](const std::vector<CLI::Option*>& opts) {
    return std::any_of(opts.begin(), opts.end(), [](auto* o) { return o->count() > 0; });
  };
  if (given(lo_opts)) c.theta_lo = theta_lo;
  if (given(hi_opts)) c.theta_hi = theta_hi;
  if (given(init_opts)) c.theta_init = theta_init;
  if (given(phi_opts)) {
    if (!(phi > 0.0)) throw ValidationError("--phi must be positive");
    c.phi = phi;
  }
  if (c.theta_lo && c.theta_hi && *c.theta_lo > *c.theta_hi)
    throw ValidationError("--theta-lo exceeds --theta-hi");
  return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostringstream buffer;
  try {
    int code = kOk;
    switch (config.command) {
      case Command::Fit: code = cmd_fit(config, buffer); break;
      case Command::Bootstrap: code = cmd_bootstrap(config, buffer); break;
      case Command::Simulate: code = cmd_simulate(config, buffer, err); break;
      case Command::Validate: code = cmd_validate(config, buffer); break;
    }
    if (config.out.empty()) {
      out << buffer.str();
    } else {
      file.open(config.out);
      if (!file) throw std::ios_base::failure("cannot open output file '" + config.out + "'");
      file << buffer.str();
      if (!file) throw std::ios_base::failure("write to '" + config.out + "' failed");
    }
    if (code == kNonConvergence) err << "warning: fit did not converge (converged=false)\n";
    return code;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const DomainError& e) {
    err << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const ConvergenceError& e) {
    err << "non-convergence: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const DegeneracyError& e) {
    err << "degeneracy: " << e.what() << " (record " << e.index() << ", value "
        << e.value() << ")\n";
    return kDegeneracy;
  } catch (const std::ios_base::failure& e) {
    err << "i/o error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse_args(argc, argv, out);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kValidation;
  }
  if (!config) return kOk;
  return run(*config, out, err);
}

}  // namespace dtcopula::cli
