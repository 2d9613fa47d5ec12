#include "study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "json.hpp"

#include <reftaylor/errors.hpp>
#include <reftaylor/field_registry.hpp>
#include <reftaylor/interp1d.hpp>
#include <reftaylor/mesh.hpp>
#include <reftaylor/quadrature.hpp>

namespace reftaylor::cli {

namespace {

struct NamedCommand {
  Command command;
  const char* name;
};

constexpr NamedCommand kCommands[] = {
    {Command::Expand, "expand"},   {Command::Interp1d, "interp1d"},
    {Command::Simplex, "simplex"}, {Command::Fem, "fem"},
    {Command::Savings, "savings"}, {Command::Registry, "registry"},
    {Command::Selftest, "selftest"},
};

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index writes
// only its own slot, so the result does not depend on the schedule.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
}

template <typename T>
std::vector<T> sorted_unique(std::vector<T> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

// "exp" with dim 2 resolves to "exp2d" when no exact entry exists.
FieldEntry resolve_field(const std::string& name, int dim) {
  try {
    return lookup_field(name);
  } catch (const InvalidArgument&) {
    if (!name.empty() && !std::isdigit(static_cast<unsigned char>(name.back()))) {
      const std::string suffixed = name + std::to_string(dim) + "d";
      for (const auto& known : registry_names())
        if (known == suffixed) return lookup_field(suffixed);
    }
    throw;
  }
}

Point uniform_in_box(const Box& box, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point p(box.dim());
  for (int i = 0; i < box.dim(); ++i) p[i] = box.lo[i] + u(rng) * (box.hi[i] - box.lo[i]);
  return p;
}

Point uniform_in_simplex(const Simplex& s, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  Vector w(s.dim() + 1);
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = expo(rng);
  return s.from_barycentric(w / w.sum());
}

StudyResult expand_study(const StudyConfig& cfg) {
  const FieldEntry entry = resolve_field(cfg.function.empty() ? "exp1d" : cfg.function, cfg.dim);
  const Box& box = entry.field.domain();

  struct Draw {
    Point a;
    Point h;
    SegmentBounds bounds;
  };
  std::mt19937_64 rng(cfg.seed);
  std::vector<Draw> draws;
  while (static_cast<int>(draws.size()) < cfg.draws) {
    Point a = uniform_in_box(box, rng);
    Point h = uniform_in_box(box, rng) - a;
    if (h.norm() < 1e-3) continue;
    SegmentBounds b = entry.bounds_on(a, h);
    draws.push_back({std::move(a), std::move(h), b});
  }

  const auto ms = sorted_unique(cfg.m_values);
  StudyResult result;
  result.table.header = {"m",           "max_abs_remainder", "width_classical",
                         "width_refined", "violations",      "width_ratio"};
  std::vector<std::vector<Cell>> rows(ms.size());
  std::vector<int> violations(ms.size(), 0);
  parallel_for(ms.size(), cfg.threads, [&](std::size_t i) {
    const int m = ms[i];
    double worst = 0.0;
    double w_classical = 0.0;
    double w_refined = 0.0;
    for (const auto& d : draws) {
      const auto refined = refined_expansion(entry.field, d.a, d.h, m, cfg.kind, d.bounds);
      const auto classical = taylor1(entry.field, d.a, d.h, d.bounds);
      worst = std::max(worst, std::abs(refined.remainder_eps));
      w_classical = std::max(w_classical, classical.bound_width());
      w_refined = std::max(w_refined, refined.bound_width());
      // Rounding in exact - approx, relative to the size of the terms.
      const double slack = 1e-13 * (1.0 + std::abs(refined.exact)) / refined.h_norm;
      if (d.bounds.certified && !refined.contained(slack)) ++violations[i];
    }
    const double ratio = w_classical > 0.0 ? w_refined / w_classical : 0.0;
    rows[i] = {static_cast<long long>(m), worst, w_classical, w_refined,
               static_cast<long long>(violations[i]), ratio};
  });
  result.table.rows = std::move(rows);
  for (int v : violations) result.violations += v;
  result.summary["draws"] = static_cast<double>(draws.size());
  return result;
}

StudyResult interp1d_study(const StudyConfig& cfg) {
  StudyResult result;
  const bool class_p = cfg.function.empty() || cfg.function.rfind("classP", 0) == 0;
  if (class_p) {
    const auto betas = sorted_unique(cfg.beta_values);
    result.table.header = {"beta",          "lambda",        "measured_sup_error",
                           "bound_classical", "bound_refined", "ratio"};
    result.table.rows.resize(betas.size());
    std::vector<int> violations(betas.size(), 0);
    parallel_for(betas.size(), cfg.threads, [&](std::size_t i) {
      const Interval iv(0.0, 1.0);
      const double lambda = lambda_from_beta(betas[i], iv);
      const ClassPParams p{lambda, lambda, 0.0, 0.0};
      const auto f = class_p_function(p, iv);
      const auto cmp = compare_bounds(f, iv, class_p_norms(p, iv));
      if (cmp.measured_sup_error > cmp.best() + 1e-10) ++violations[i];
      if (cmp.refined > betas[i] * cmp.classical + 1e-12) ++violations[i];
      result.table.rows[i] = {betas[i], lambda, cmp.measured_sup_error, cmp.classical,
                              cmp.refined, cmp.beta};
    });
    for (int v : violations) result.violations += v;
    return result;
  }

  const FieldEntry entry = resolve_field(cfg.function, 1);
  if (entry.dim() != 1) throw InvalidArgument("interp1d needs a one-dimensional function");
  const auto subs = sorted_unique(cfg.subdivisions);
  result.table.header = {"subdivisions",    "length",        "measured_sup_error",
                         "bound_classical", "bound_refined", "ratio"};
  result.table.rows.resize(subs.size());
  std::vector<int> violations(subs.size(), 0);
  parallel_for(subs.size(), cfg.threads, [&](std::size_t i) {
    const double lo = entry.field.domain().lo[0];
    const double hi = entry.field.domain().hi[0];
    const Interval iv(lo, lo + (hi - lo) / subs[i]);
    DerivativeNorms1D norms;
    if (entry.norms) {
      norms = {entry.norms->d1_inf, entry.norms->d2_inf};
    } else {
      norms = sampled_norms(entry.field, iv);
    }
    const auto cmp = compare_bounds(entry.field, iv, norms);
    if (entry.norms && cmp.measured_sup_error > cmp.best() + 1e-10) ++violations[i];
    result.table.rows[i] = {static_cast<long long>(subs[i]), iv.length(), cmp.measured_sup_error,
                            cmp.classical, cmp.refined, cmp.beta};
  });
  for (int v : violations) result.violations += v;
  return result;
}

StudyResult simplex_study(const StudyConfig& cfg) {
  const FieldEntry entry =
      resolve_field(cfg.function.empty() ? "exp" : cfg.function, cfg.dim);
  const auto subs = sorted_unique(cfg.subdivisions);
  StudyResult result;
  result.table.header = {"subdivisions",    "h",
                         "measured_pi",     "measured_pi_star",
                         "bound_classical", "bound_refined",
                         "bound_corrected", "ratio"};
  result.table.rows.resize(subs.size());
  std::vector<int> violations(subs.size(), 0);
  parallel_for(subs.size(), cfg.threads, [&](std::size_t i) {
    const auto mesh = uniform_mesh(entry.field.domain(), subs[i]);
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(subs[i]));
    const auto& rule = simplex_rule_degree4(mesh.dim());
    double err_pi = 0.0;
    double err_star = 0.0;
    DerivativeNorms sampled{};
    for (const auto& s : mesh.simplices()) {
      const SimplexInterpolant interp(s, entry.field);
      auto probe = [&](const Point& P) {
        const double v = entry.field.value(P);
        err_pi = std::max(err_pi, std::abs(interp.pi(P) - v));
        err_star = std::max(err_star, std::abs(interp.pi_star(P) - v));
      };
      for (const auto& bary : rule.barycentric)
        probe(s.from_barycentric(Eigen::Map<const Vector>(bary.data(), s.dim() + 1)));
      for (int k = 0; k < cfg.samples; ++k) probe(uniform_in_simplex(s, rng));
      if (!entry.norms) {
        const auto local = sampled_derivative_norms(s, entry.field);
        sampled.d1_inf = std::max(sampled.d1_inf, local.d1_inf);
        sampled.d2_inf = std::max(sampled.d2_inf, local.d2_inf);
      }
    }
    const auto bounds = interp_error_bounds(mesh.mesh_size(), entry.norms.value_or(sampled));
    if (entry.norms && (err_pi > bounds.combined || err_star > bounds.corrected)) ++violations[i];
    const double ratio = err_star > 0.0 ? err_pi / err_star : 0.0;
    result.table.rows[i] = {static_cast<long long>(subs[i]), mesh.mesh_size(), err_pi, err_star,
                            bounds.classical, bounds.refined, bounds.corrected, ratio};
  });
  for (int v : violations) result.violations += v;
  return result;
}

EllipticProblem fem_problem(const StudyConfig& cfg) {
  if (cfg.dim != 1 && cfg.dim != 2) throw InvalidArgument("fem supports --dim 1 or 2");
  auto problem = sine_problem(cfg.dim, cfg.diffusion, cfg.reaction);
  if (cfg.C) problem.constants.C = *cfg.C;
  if (cfg.alpha) problem.constants.alpha = *cfg.alpha;
  problem.validate();
  return problem;
}

StudyResult fem_study(const StudyConfig& cfg) {
  const auto problem = fem_problem(cfg);
  const auto subs = sorted_unique(cfg.subdivisions);
  StudyResult result;
  result.table.header = {"subdivisions",   "h",          "dofs",
                         "l2_error",       "interp_error", "bound_classical",
                         "bound_refined",  "bound_corrected", "cea_lhs",
                         "cea_rhs",        "ratio"};
  result.table.rows.resize(subs.size());
  std::vector<int> violations(subs.size(), 0);
  std::vector<double> hs(subs.size());
  std::vector<double> errors(subs.size());
  // The FEM solve is single-threaded; rows still run side by side.
  parallel_for(subs.size(), cfg.threads, [&](std::size_t i) {
    const auto mesh = uniform_mesh(Box::unit(cfg.dim), subs[i]);
    const auto r = estimate_report(problem, mesh, cfg.space);
    const double cea_rhs = r.c_over_alpha * r.measured_interp_error;
    if (r.measured_interp_error > r.applicable_interp_bound()) ++violations[i];
    if (r.measured_solution_error > cea_rhs) ++violations[i];
    hs[i] = r.h;
    errors[i] = r.measured_solution_error;
    result.table.rows[i] = {static_cast<long long>(subs[i]),
                            r.h,
                            static_cast<long long>(r.dofs),
                            r.measured_solution_error,
                            r.measured_interp_error,
                            r.interp_bound_classical,
                            r.interp_bound_refined,
                            r.interp_bound_corrected,
                            r.measured_solution_error,
                            cea_rhs,
                            r.measured_solution_error / cea_rhs};
  });
  for (int v : violations) result.violations += v;
  if (subs.size() >= 2) result.summary["slope"] = convergence_slope(hs, errors);
  result.summary["C"] = problem.constants.C;
  result.summary["alpha"] = problem.constants.alpha;
  return result;
}

StudyResult savings_study(const StudyConfig& cfg) {
  if (cfg.dim < 1 || cfg.dim > 3) throw InvalidArgument("savings supports --dim 1, 2 or 3");
  const auto defaults = default_constants(Box::unit(cfg.dim), cfg.diffusion, cfg.reaction);
  const double C = cfg.C.value_or(defaults.C);
  const double alpha = cfg.alpha.value_or(defaults.alpha);
  const double d2 = cfg.d2.value_or(std::numbers::pi * std::numbers::pi);
  const auto s = mesh_savings(cfg.eps, d2, C, alpha, cfg.dim);
  StudyResult result;
  result.table.header = {"dim",         "eps",        "d2_inf",     "C",     "alpha",
                         "h_classical", "h_corrected", "node_factor", "ratio"};
  result.table.rows.push_back({static_cast<long long>(cfg.dim), cfg.eps, d2, C, alpha,
                               s.h_classical, s.h_corrected, s.node_factor, s.ratio()});
  return result;
}

StudyResult registry_study() {
  StudyResult result;
  result.table.header = {"name", "dim", "analytic_norms", "certified_segment_bounds", "d1_inf",
                         "d2_inf"};
  for (const auto& e : registry()) {
    const auto n = e.norms.value_or(DerivativeNorms{});
    result.table.rows.push_back({e.name, static_cast<long long>(e.dim()),
                                 static_cast<long long>(e.has_analytic_norms()),
                                 static_cast<long long>(e.has_certified_segment_bounds()),
                                 n.d1_inf, n.d2_inf});
  }
  return result;
}

StudyResult selftest_study(const StudyConfig& cfg) {
  const auto entries = registry();
  StudyResult result;
  result.table.header = {"name", "dim", "gradient_error", "hessian_asymmetry", "pass"};
  result.table.rows.resize(entries.size());
  std::vector<int> failures(entries.size(), 0);
  parallel_for(entries.size(), cfg.threads, [&](std::size_t i) {
    const auto& e = entries[i];
    std::mt19937_64 rng(cfg.seed + i);
    std::normal_distribution<double> normal(0.0, 1.0);
    // Probe the interior so central differences stay in the domain.
    Box inner = e.field.domain();
    const Point margin = 1e-3 * (inner.hi - inner.lo);
    inner.lo += margin;
    inner.hi -= margin;
    std::vector<Point> points;
    std::vector<Point> dirs;
    double asym = 0.0;
    for (int k = 0; k < 50; ++k) {
      points.push_back(uniform_in_box(inner, rng));
      Point d(e.dim());
      for (int j = 0; j < e.dim(); ++j) d[j] = normal(rng);
      dirs.push_back(d.normalized());
      Point d2(e.dim());
      for (int j = 0; j < e.dim(); ++j) d2[j] = normal(rng);
      const double hv = e.field.hessian_form(points.back(), dirs.back(), d2);
      const double vh = e.field.hessian_form(points.back(), d2, dirs.back());
      asym = std::max(asym, std::abs(hv - vh) / (1.0 + std::abs(hv)));
    }
    const double grad = gradient_consistency_error(e.field, points, dirs);
    const bool pass = grad <= 1e-6 && asym <= 1e-12;
    if (!pass) failures[i] = 1;
    result.table.rows[i] = {e.name, static_cast<long long>(e.dim()), grad, asym,
                            static_cast<long long>(pass)};
  });
  for (int f : failures) result.violations += f;
  return result;
}

std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&c)) {
    if (s->find_first_of(",\"\n") == std::string::npos) return *s;
    std::string quoted = "\"";
    for (char ch : *s) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + '"';
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", std::get<double>(c));
  return buf;
}

}  // namespace

Command parse_command(const std::string& name) {
  for (const auto& c : kCommands)
    if (name == c.name) return c.command;
  throw InvalidArgument("unknown command '" + name + "'");
}

const char* to_string(Command c) {
  for (const auto& nc : kCommands)
    if (nc.command == c) return nc.name;
  return "?";
}

void validate(const StudyConfig& cfg) {
  auto require = [](bool ok, const char* message) {
    if (!ok) throw InvalidArgument(message);
  };
  switch (cfg.command) {
    case Command::Expand:
      require(!cfg.m_values.empty(), "--m needs at least one value");
      for (int m : cfg.m_values) require(m >= 1, "--m values must be >= 1");
      require(cfg.draws >= 1, "--draws must be positive");
      break;
    case Command::Interp1d:
      require(!cfg.beta_values.empty(), "--beta needs at least one value");
      [[fallthrough]];
    case Command::Simplex:
    case Command::Fem:
      require(!cfg.subdivisions.empty(), "--subdivisions needs at least one value");
      for (int s : cfg.subdivisions) require(s >= 1, "--subdivisions values must be positive");
      require(cfg.samples >= 0, "--samples must be nonnegative");
      break;
    case Command::Savings:
      require(cfg.eps > 0.0, "--eps must be positive");
      break;
    case Command::Registry:
    case Command::Selftest:
      break;
  }
  require(cfg.dim >= 1 && cfg.dim <= 3, "--dim must be 1, 2 or 3");
}

StudyResult run_study(const StudyConfig& config) {
  validate(config);
  switch (config.command) {
    case Command::Expand: return expand_study(config);
    case Command::Interp1d: return interp1d_study(config);
    case Command::Simplex: return simplex_study(config);
    case Command::Fem: return fem_study(config);
    case Command::Savings: return savings_study(config);
    case Command::Registry: return registry_study();
    case Command::Selftest: return selftest_study(config);
  }
  throw InvalidArgument("unhandled command");
}

void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i)
    os << (i ? "," : "") << table.header[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
}

std::string manifest_json(const StudyConfig& cfg, const StudyResult& result,
                          double wall_seconds) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json c;
  c["command"] = to_string(cfg.command);
  c["function"] = cfg.function;
  c["m"] = cfg.m_values;
  c["subdivisions"] = cfg.subdivisions;
  c["beta"] = cfg.beta_values;
  c["dim"] = cfg.dim;
  c["space"] = reftaylor::to_string(cfg.space);
  c["kind"] = cfg.kind == WeightKind::Closed ? "closed" : "open";
  c["eps"] = cfg.eps;
  c["diffusion"] = cfg.diffusion;
  c["reaction"] = cfg.reaction;
  c["C"] = cfg.C ? nlohmann::ordered_json(*cfg.C) : nlohmann::ordered_json();
  c["alpha"] = cfg.alpha ? nlohmann::ordered_json(*cfg.alpha) : nlohmann::ordered_json();
  c["d2"] = cfg.d2 ? nlohmann::ordered_json(*cfg.d2) : nlohmann::ordered_json();
  c["draws"] = cfg.draws;
  c["samples"] = cfg.samples;
  c["output"] = cfg.output.string();
  j["config"] = c;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["wall_time_seconds"] = wall_seconds;
  j["rows"] = result.table.rows.size();
  j["violations"] = result.violations;
  j["summary"] = result.summary;
  return j.dump(2) + "\n";
}

int run(const StudyConfig& config, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  StudyResult result;
  try {
    result = run_study(config);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SolverError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (config.output.empty()) {
    write_csv(out, result.table);
  } else {
    std::ofstream csv(config.output, std::ios::binary);
    if (!csv) {
      err << "error: cannot write " << config.output.string() << '\n';
      return kExitIo;
    }
    write_csv(csv, result.table);
    const auto manifest_path = config.output.string() + ".manifest.json";
    std::ofstream manifest(manifest_path, std::ios::binary);
    if (!manifest) {
      err << "error: cannot write " << manifest_path << '\n';
      return kExitIo;
    }
    manifest << manifest_json(config, result, wall);
    if (!csv || !manifest) {
      err << "error: write failed\n";
      return kExitIo;
    }
  }
  for (const auto& [key, value] : result.summary) err << key << " = " << value << '\n';
  if (result.violations > 0) {
    err << "bound violations: " << result.violations << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

int default_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("REFTAYLOR_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) return static_cast<int>(std::min<long>(cap, hw));
  }
  return hw;
}

}  // namespace reftaylor::cli
