#include "cdig/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <system_error>

#include "cdig/check_suite.hpp"
#include "cdig/curvature.hpp"
#include "cdig/error.hpp"
#include "cdig/format.hpp"

namespace cdig::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

// JSON numbers carry the same 9 significant digits as the CSV output.
ordered_json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  const std::string text = format_g9(v);
  double rounded = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), rounded);
  return rounded;
}

std::string csv_line(std::initializer_list<std::string> fields) {
  std::string line;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) line += ',';
    line += f;
    first = false;
  }
  line += '\n';
  return line;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ClassSpec target_spec(const RunConfig& cfg) {
  if (cfg.class_id) return class_spec(*cfg.class_id, cfg.grid);
  return single_point(*cfg.c, *cfg.d, cfg.grid);
}

CdParams target_params(const RunConfig& cfg) {
  if (cfg.class_id) {
    auto [c, d] = class_spec(*cfg.class_id).representative();
    return make_params(c, d, cfg.cont);
  }
  return make_params(*cfg.c, *cfg.d, cfg.cont);
}

void write_output(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.out == "-") {
    out << content;
    out.flush();
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot open output file '" + cfg.out + "'");
  file << content;
  file.close();
  if (!file) throw ComputationError("failed writing '" + cfg.out + "'");
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw UsageError(what + ": not a number: '" + text + "'");
  return v;
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (!(std::isfinite(cfg.cont.eps_c) && cfg.cont.eps_c > 0.0 && cfg.cont.eps_c <= 0.1)) {
    throw UsageError("--eps-c must lie in (0, 0.1]");
  }
  if (!(std::isfinite(cfg.cont.eps_d) && cfg.cont.eps_d > 0.0 && cfg.cont.eps_d <= 0.1)) {
    throw UsageError("eps_d must lie in (0, 0.1]");
  }
  const bool needs_target = cfg.command == Command::bounds || cfg.command == Command::curvature;
  if (needs_target) {
    const bool explicit_cd = cfg.c.has_value() || cfg.d.has_value();
    if (cfg.class_id && explicit_cd) throw UsageError("give either --class or --c/--d, not both");
    if (!cfg.class_id && !(cfg.c && cfg.d)) throw UsageError("give --class or both --c and --d");
    if (cfg.class_id && (*cfg.class_id < 1 || *cfg.class_id > 5)) {
      throw UsageError("--class must be 1..5");
    }
    if (explicit_cd) {
      try {
        make_params(*cfg.c, *cfg.d, cfg.cont);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
    }
  }
  if (cfg.command == Command::table1 || cfg.command == Command::bounds) {
    try {
      validate_grid(cfg.grid);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  if (cfg.command == Command::curvature && (cfg.n_max < 2 || cfg.n_max > 16)) {
    throw UsageError("--n-max must lie in [2, 16]");
  }
  if (cfg.command == Command::check && !cfg.only.empty()) {
    const auto& names = check_names();
    if (std::find(names.begin(), names.end(), cfg.only) == names.end()) {
      std::string list;
      for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
      throw UsageError("unknown check '" + cfg.only + "' (known: " + list + ")");
    }
  }
  if (cfg.out.empty()) throw UsageError("--out must not be empty");
}

std::string render_table1(const RunConfig& cfg) {
  std::string csv = "class,c_spec,d_spec,i_mean\n";
  ordered_json rows = ordered_json::array();
  for (int id = 1; id <= 5; ++id) {
    const ClassSpec cls = class_spec(id, cfg.grid);
    const SweepReport rep = i_mean(cls, cfg.cont);
    csv += csv_line({std::to_string(id), cls.c_spec(), cls.d_spec(), format_g9(rep.i_mean)});
    rows.push_back({{"class", id},
                    {"c_spec", cls.c_spec()},
                    {"d_spec", cls.d_spec()},
                    {"i_mean", json_number(rep.i_mean)}});
  }
  return cfg.format == Format::csv ? csv : dump(rows);
}

std::string render_bounds(const RunConfig& cfg, std::ostream& log) {
  const SweepReport rep = i_mean(target_spec(cfg), cfg.cont);
  log << "I_mean = " << format_g9(rep.i_mean) << " over " << rep.cells.size() << " cells ("
      << rep.grid << ")\n";
  if (cfg.format == Format::json) {
    ordered_json rows = ordered_json::array();
    for (const auto& cell : rep.cells) {
      rows.push_back({{"c", json_number(cell.c)},
                      {"d", json_number(cell.d)},
                      {"p1", json_number(cell.p1)},
                      {"f", json_number(cell.f)},
                      {"f_fisher", json_number(cell.f_fisher)},
                      {"i", json_number(cell.i)}});
    }
    return dump(rows);
  }
  std::string csv = "c,d,p1,f,f_fisher,i\n";
  csv.reserve(rep.cells.size() * 64);
  for (const auto& cell : rep.cells) {
    csv += csv_line({format_g9(cell.c), format_g9(cell.d), format_g9(cell.p1), format_g9(cell.f),
                     format_g9(cell.f_fisher), format_g9(cell.i)});
  }
  return csv;
}

std::string render_curvature(const RunConfig& cfg, std::ostream& log, bool& all_failed) {
  const CdParams params = target_params(cfg);
  if (cfg.n_max > 12) {
    log << "warning: n-max " << cfg.n_max << " above 12; cost grows like n^5\n";
  }
  const auto reports = curvature_ratio_scan(params, cfg.n_max);
  all_failed = true;
  std::string csv = "n,R_cd,R_fisher,ratio,step_check\n";
  ordered_json rows = ordered_json::array();
  for (const auto& rep : reports) {
    const bool failed = !rep.error.empty();
    if (failed) {
      log << "n = " << rep.n << ": " << rep.error << "\n";
    } else {
      all_failed = false;
    }
    const std::string status = failed ? "nan" : (rep.step_ok ? "pass" : "fail");
    csv += csv_line({std::to_string(rep.n), format_g9(rep.R), format_g9(rep.R_fisher),
                     format_g9(rep.ratio), status});
    rows.push_back({{"n", rep.n},
                    {"R_cd", json_number(rep.R)},
                    {"R_fisher", json_number(rep.R_fisher)},
                    {"ratio", json_number(rep.ratio)},
                    {"step_check", status}});
  }
  return cfg.format == Format::csv ? csv : dump(rows);
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    switch (cfg.command) {
      case Command::table1:
        write_output(cfg, render_table1(cfg), out);
        return kOk;
      case Command::bounds:
        write_output(cfg, render_bounds(cfg, err), out);
        return kOk;
      case Command::curvature: {
        bool all_failed = false;
        const std::string content = render_curvature(cfg, err, all_failed);
        write_output(cfg, content, out);
        return all_failed ? kComputationError : kOk;
      }
      case Command::check: {
        CheckOptions opts;
        opts.cont = cfg.cont;
        opts.seed = cfg.seed;
        out << "seed " << cfg.seed << ", eps_c " << format_g9(cfg.cont.eps_c) << "\n";
        bool ok = true;
        for (const auto& r : run_checks(opts, cfg.only)) {
          ok = ok && r.pass;
          std::string name = r.name;
          name.resize(std::max<std::size_t>(name.size(), 13), ' ');
          out << name << (r.pass ? "pass  " : "FAIL  ") << r.detail << "\n";
        }
        out << (ok ? "all checks passed" : "some checks FAILED") << "\n";
        return ok ? kOk : kInvariantFailure;
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kComputationError;
  }
  return kComputationError;
}

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Information geometry of (c,d)-entropies: bound tables, curvature scans, checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cdig 0.1.0");

  int class_id = 0;
  double c = 0.0, d = 0.0, eps_c = 0.0;
  std::string format = "csv";

  auto add_eps = [&](CLI::App* sub) {
    return sub->add_option("--eps-c", eps_c, "Continuation offset for c = 1 (env CDIG_EPS_C)");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Output path, - for stdout")->capture_default_str();
    sub->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--p-step", cfg.grid.p_step, "p1 grid step")->capture_default_str();
    sub->add_option("--c-step", cfg.grid.c_step, "c grid step")->capture_default_str();
    sub->add_option("--d-max", cfg.grid.d_max, "largest d for class 4")->capture_default_str();
    sub->add_option("--d-step", cfg.grid.d_step, "d grid step")->capture_default_str();
  };
  auto add_target = [&](CLI::App* sub) {
    auto* cls = sub->add_option("--class", class_id, "complexity class 1..5");
    auto* oc = sub->add_option("--c", c, "explicit c");
    auto* od = sub->add_option("--d", d, "explicit d");
    cls->excludes(oc)->excludes(od);
    return std::tuple{cls, oc, od};
  };

  auto* table1 = app.add_subcommand("table1", "Mean bound difference per complexity class");
  add_grid(table1);
  add_output(table1);
  auto* eps_t1 = add_eps(table1);

  auto* bounds = app.add_subcommand("bounds", "Bound functions f, f_Fisher and I over a grid");
  auto [b_cls, b_c, b_d] = add_target(bounds);
  add_grid(bounds);
  add_output(bounds);
  auto* eps_b = add_eps(bounds);

  auto* curvature = app.add_subcommand("curvature", "Scalar curvature ratio to Fisher, n = 2..n-max");
  auto [k_cls, k_c, k_d] = add_target(curvature);
  curvature->add_option("--n-max", cfg.n_max, "largest dimension, 2..16")->capture_default_str();
  add_output(curvature);
  auto* eps_k = add_eps(curvature);

  auto* check = app.add_subcommand("check", "Run the invariant suite");
  check->add_option("--only", cfg.only, "run a single check family");
  check->add_option("--seed", cfg.seed, "Monte-Carlo seed")->capture_default_str();
  auto* eps_ck = add_eps(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    CLI::Option* eps_opt = nullptr;
    if (table1->parsed()) {
      cfg.command = Command::table1;
      eps_opt = eps_t1;
    } else if (bounds->parsed()) {
      cfg.command = Command::bounds;
      eps_opt = eps_b;
      if (b_cls->count()) cfg.class_id = class_id;
      if (b_c->count()) cfg.c = c;
      if (b_d->count()) cfg.d = d;
    } else if (curvature->parsed()) {
      cfg.command = Command::curvature;
      eps_opt = eps_k;
      if (k_cls->count()) cfg.class_id = class_id;
      if (k_c->count()) cfg.c = c;
      if (k_d->count()) cfg.d = d;
    } else {
      cfg.command = Command::check;
      eps_opt = eps_ck;
    }
    cfg.format = format == "json" ? Format::json : Format::csv;
    if (eps_opt->count()) {
      cfg.cont.eps_c = eps_c;
    } else if (const char* env = std::getenv("CDIG_EPS_C"); env && *env) {
      cfg.cont.eps_c = parse_double(env, "CDIG_EPS_C");
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return execute(cfg, std::cout, std::cerr);
}

}  // namespace cdig::cli
