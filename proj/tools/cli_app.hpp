#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <list>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spheremean/spheremean.hpp"
#include "spheremean/verify/criteria.hpp"

namespace spheremean::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kInternal = 2 };

/// Parses "n=2,r=1,ell=1" (keys n, r, ell; missing keys keep the given defaults).
inline OperatorSpec parse_spec(const std::string& text, int n = 1, double r = 1.0, int ell = 0) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigurationError("spec entry '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "n")
        n = std::stoi(value);
      else if (key == "r")
        r = std::stod(value);
      else if (key == "ell" || key == "l")
        ell = std::stoi(value);
      else
        throw ConfigurationError("unknown spec key '" + key + "'");
    } catch (const std::logic_error&) {
      throw ConfigurationError("bad value in spec entry '" + item + "'");
    }
  }
  return OperatorSpec(n, r, ell);
}

namespace detail {

struct SpecOptions {
  std::string spec;
  int n = 1;
  double r = 1.0;
  int ell = 0;
  CLI::Option* n_opt = nullptr;
  CLI::Option* r_opt = nullptr;
  CLI::Option* ell_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--spec", spec, "operator as n=..,r=..,ell=..");
    n_opt = app->add_option("--n", n, "dimension (1..3)");
    r_opt = app->add_option("--r", r, "sphere radius");
    ell_opt = app->add_option("--ell", ell, "radial derivative order");
  }

  /// --n/--r/--ell override the matching entries of --spec.
  OperatorSpec resolve() const {
    const OperatorSpec base = parse_spec(spec);
    return OperatorSpec(n_opt->count() ? n : base.n(), r_opt->count() ? r : base.r(),
                        ell_opt->count() ? ell : base.ell());
  }
};

inline void emit(const CsvWriter& csv, const std::string& out, std::ostream& os) {
  if (out.empty())
    os << csv.str();
  else
    csv.save(out);
}

inline void emit_json(const nlohmann::json& j, const std::string& path) {
  spheremean::detail::write_atomically(path, j.dump(2) + "\n");
}

inline std::string json_scalar(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_float()) return format_double(v.get<double>());
  throw ConfigurationError("config key '" + key + "' must be a scalar");
}

/// Rewrites argv so that values from --config come right after the subcommand name; since every
/// option keeps its last value, flags given on the command line override the file.
inline std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigurationError("--config needs a file name");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config.empty()) return rest;
  std::ifstream in(config);
  if (!in) throw ConfigurationError("cannot open config file " + config);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("malformed config file: ") + e.what());
  }
  if (!j.is_object()) throw ConfigurationError("config file must hold a JSON object");
  if (rest.size() < 2) return rest;
  const std::string& sub = rest[1];
  const nlohmann::json& section = j.contains(sub) && j[sub].is_object() ? j[sub] : j;
  std::vector<std::string> injected;
  for (const auto& [key, value] : section.items()) {
    if (value.is_object()) continue;
    injected.push_back("--" + key);
    injected.push_back(json_scalar(value, key));
  }
  std::vector<std::string> out{rest[0], sub};
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), rest.begin() + 2, rest.end());
  return out;
}

}  // namespace detail

/// Runs one command line; returns the process exit status.
inline int run(const std::vector<std::string>& raw_args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  try {
    args = detail::expand_config(raw_args.empty() ? std::vector<std::string>{"spheremean"} : raw_args);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  CLI::App app{"Spherical mean value operators on periodic grids", "spheremean"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  std::function<int()> action;

  // bessel-eval
  double nu = 0.0;
  int ell = 0;
  double x_value = 0.0, x_min = 0.0, x_max = 10.0;
  int samples = 1001;
  std::string out_path;
  {
    auto* c = app.add_subcommand("bessel-eval", "evaluate j_nu^(ell) on a uniform x grid or at one point");
    c->add_option("--nu", nu, "Bessel order (> -1)")->required();
    c->add_option("--ell", ell, "derivative order")->capture_default_str();
    auto* xo = c->add_option("--x", x_value, "single abscissa");
    c->add_option("--x-min", x_min)->capture_default_str();
    c->add_option("--x-max", x_max)->capture_default_str();
    c->add_option("--samples", samples)->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--out", out_path, "CSV output (default stdout)");
    c->callback([&, xo] {
      action = [&, xo] {
        const DerivativeExpansion d(BesselOrder(nu), ell);
        CsvWriter csv{"x", "value"};
        if (xo->count()) {
          csv.row({x_value, d(x_value)});
        } else {
          for (int i = 0; i < samples; ++i) {
            const double x = samples == 1 ? x_min : x_min + (x_max - x_min) * i / (samples - 1);
            csv.row({x, d(x)});
          }
        }
        detail::emit(csv, out_path, out);
        return int(kOk);
      };
    });
  }

  // bessel-coeffs
  {
    auto* c = app.add_subcommand("bessel-coeffs", "C_{ell,k}: recurrence checked against the closed form");
    c->add_option("--nu", nu, "Bessel order (> -1)")->required();
    c->add_option("--ell", ell, "derivative order")->required();
    c->add_option("--out", out_path, "CSV output (default stdout)");
    c->callback([&] {
      action = [&] {
        const CoeffTable t = deriv_coeffs(ell, BesselOrder(nu));
        std::string text = "k,exact,value\n";
        for (const auto& [k, q] : t.entries)
          text += std::to_string(k) + "," + q.str() + "," + format_double(to_double(q)) + "\n";
        if (out_path.empty())
          out << text;
        else
          spheremean::detail::write_atomically(out_path, text);
        return int(kOk);
      };
    });
  }

  // bessel-zeros
  int count = 10;
  {
    auto* c = app.add_subcommand("bessel-zeros", "first positive zeros of j_nu^(ell) with certified brackets");
    c->add_option("--nu", nu, "Bessel order (> -1)")->required();
    c->add_option("--ell", ell)->capture_default_str();
    c->add_option("--count", count)->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--out", out_path, "CSV output (default stdout)");
    c->callback([&] {
      action = [&] {
        const ZeroSequence zs = find_zeros(BesselOrder(nu), ell, count);
        CsvWriter csv{"m", "zero", "lo", "hi"};
        for (std::size_t m = 0; m < zs.zeros.size(); ++m)
          csv.row({double(m + 1), zs.zeros[m], zs.brackets[m].lo, zs.brackets[m].hi});
        detail::emit(csv, out_path, out);
        return int(kOk);
      };
    });
  }

  std::list<detail::SpecOptions> spec_store;

  // symbol
  double rho_max = 20.0;
  {
    auto* c = app.add_subcommand("symbol", "radial Fourier multiplier rho^ell j^(ell)_{n/2-1}(r rho)");
    auto& spec_opts = spec_store.emplace_back();
    spec_opts.attach(c);
    c->add_option("--rho-max", rho_max)->capture_default_str();
    c->add_option("--samples", samples)->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--out", out_path, "CSV output (default stdout)");
    c->callback([&] {
      action = [&] {
        const SymbolEvaluator sym(spec_opts.resolve());
        CsvWriter csv{"rho", "symbol"};
        for (int i = 0; i < samples; ++i) {
          const double rho = samples == 1 ? 0.0 : rho_max * i / (samples - 1);
          csv.row({rho, sym(rho)});
        }
        detail::emit(csv, out_path, out);
        return int(kOk);
      };
    });
  }

  // symbol-zeros
  {
    auto* c = app.add_subcommand("symbol-zeros", "frequency magnitudes where the multiplier vanishes");
    auto& spec_opts = spec_store.emplace_back();
    spec_opts.attach(c);
    c->add_option("--count", count, "number of positive zeros a_m/r")->capture_default_str()->check(
        CLI::PositiveNumber);
    c->add_option("--out", out_path, "CSV output (default stdout)");
    c->callback([&] {
      action = [&] {
        const auto zs = symbol_zeros(spec_opts.resolve(), count);
        CsvWriter csv{"index", "rho"};
        for (std::size_t i = 0; i < zs.size(); ++i) csv.row({double(i), zs[i]});
        detail::emit(csv, out_path, out);
        return int(kOk);
      };
    });
  }

  // invert-scan
  double A = 0.0, B = 0.0, s_max = 1000.0;
  int window_samples = 64, scan_samples = 200;
  {
    auto* c = app.add_subcommand("invert-scan", "window lower-bound scan over log-spaced |xi| in (B, s-max]");
    auto& spec_opts = spec_store.emplace_back();
    spec_opts.attach(c);
    auto* a_opt = c->add_option("--A", A, "window constant (default: recorded value)");
    auto* b_opt = c->add_option("--B", B, "frequency cut (default: recorded value)");
    c->add_option("--s-max", s_max)->capture_default_str();
    c->add_option("--samples", scan_samples, "number of log-spaced samples")->capture_default_str();
    c->add_option("--window-samples", window_samples)->capture_default_str();
    c->add_option("--out", out_path, "CSV output (default stdout)");
    c->callback([&, a_opt, b_opt] {
      action = [&, a_opt, b_opt] {
        const OperatorSpec spec = spec_opts.resolve();
        if (!a_opt->count() || !b_opt->count()) {
          const auto rec = recorded_invertibility_constants(spec.n(), spec.ell());
          if (!a_opt->count()) A = rec.A;
          if (!b_opt->count()) B = rec.B;
        }
        if (!(s_max > B)) throw ConfigurationError("--s-max must exceed B");
        if (scan_samples < 1) throw ConfigurationError("--samples must be positive");
        const ScanReport rep = invertibility_scan(spec, InvertibilityParams::log_spaced(A, B, s_max, scan_samples,
                                                                                         window_samples));
        CsvWriter csv{"s", "window_lo", "window_hi", "sup", "arg_sup", "threshold", "pass"};
        for (const auto& w : rep.windows)
          csv.row({w.s, w.window_lo, w.window_hi, w.sup, w.arg_sup, w.threshold, w.pass ? 1.0 : 0.0});
        detail::emit(csv, out_path, out);
        err << "invert-scan A=" << format_double(A) << " B=" << format_double(B) << ": "
            << rep.windows.size() - rep.failures().size() << "/" << rep.windows.size() << " windows pass\n";
        return int(kOk);
      };
    });
  }

  // apply
  std::string in_path, method = "spectral", report_path;
  {
    auto* c = app.add_subcommand("apply", "apply the operator to a field file");
    auto& spec_opts = spec_store.emplace_back();
    spec_opts.attach(c);
    c->add_option("--in", in_path, "input field")->required();
    c->add_option("--method", method)->capture_default_str()->check(
        CLI::IsMember({"quadrature", "spectral", "both"}));
    c->add_option("--out", out_path, "output field (spectral result when --method both)");
    c->add_option("--report", report_path, "CSV with the quadrature/spectral discrepancy (method both)");
    c->callback([&] {
      action = [&] {
        const OperatorSpec spec = spec_opts.resolve();
        const Field u = read_field(in_path);
        if (method == "quadrature") {
          const Field v = apply_quadrature(spec, default_rule(spec.n()), u);
          if (!out_path.empty()) write_field(v, out_path);
          return int(kOk);
        }
        const Field v = apply_spectral(spec, u);
        if (!out_path.empty()) write_field(v, out_path);
        if (method == "both") {
          const Field q = apply_quadrature(spec, default_rule(spec.n()), u);
          const double rel = relative_l2_difference(q, v);
          CsvWriter csv{"n", "r", "ell", "discrepancy"};
          csv.row({double(spec.n()), spec.r(), double(spec.ell()), rel});
          detail::emit(csv, report_path, out);
        }
        return int(kOk);
      };
    });
  }

  // kernel-check
  int m = 1, axis = 1;
  std::size_t points = 32;
  double box = 0.0;
  {
    auto* c = app.add_subcommand("kernel-check", "apply both routes to the plane wave at a_m/r along one axis");
    auto& spec_opts = spec_store.emplace_back();
    spec_opts.attach(c);
    c->add_option("--m", m, "zero index")->capture_default_str();
    c->add_option("--axis", axis, "axis 1..n")->capture_default_str();
    c->add_option("--points", points, "samples per axis")->capture_default_str();
    auto* box_opt = c->add_option("--box", box, "period length (default: a_m/r on wavenumber 1)");
    c->add_option("--out", out_path, "CSV output (default stdout)");
    c->callback([&, box_opt] {
      action = [&, box_opt] {
        const OperatorSpec spec = spec_opts.resolve();
        const Grid grid = box_opt->count() ? Grid::cube(spec.n(), points, box) : kernel_grid(spec, m, points);
        const KernelReport rep = kernel_check(spec, grid, m, axis, default_rule(spec.n()));
        CsvWriter csv{"m",           "axis",         "target",           "lattice_k",
                      "snapped",     "symbol_floor", "spectral_residual", "quadrature_residual"};
        csv.row({double(rep.m), double(rep.axis), rep.target, double(rep.lattice_k), rep.snapped, rep.symbol_floor,
                 rep.spectral_residual, rep.quadrature_residual});
        detail::emit(csv, out_path, out);
        return int(kOk);
      };
    });
  }

  // range-test / solve
  double eps_sym = 0.0, eps_data = kDefaultEpsData;
  CLI::Option* eps_sym_opt = nullptr;
  auto resolve_eps = [&](const SpectralOperator& op) {
    return eps_sym_opt && eps_sym_opt->count() ? eps_sym : default_eps_sym(op);
  };
  {
    auto* c = app.add_subcommand("range-test", "classify frequency bins of w against the multiplier zeros");
    auto& spec_opts = spec_store.emplace_back();
    spec_opts.attach(c);
    c->add_option("--in", in_path, "field w")->required();
    auto* es = c->add_option("--eps-sym", eps_sym, "degeneracy threshold (default 1e-8 max|symbol|)");
    c->add_option("--eps-data", eps_data)->capture_default_str();
    c->add_option("--report", report_path, "JSON report (default stdout)");
    c->callback([&, es] {
      eps_sym_opt = es;
      action = [&] {
        const OperatorSpec spec = spec_opts.resolve();
        check_range_order(spec);
        const Field w = read_field(in_path);
        const SpectralOperator op(spec, w.grid);
        const RangeReport rep = range_test(op, w, resolve_eps(op), eps_data);
        if (report_path.empty())
          out << rep.to_json().dump(2) << "\n";
        else
          detail::emit_json(rep.to_json(), report_path);
        return int(kOk);
      };
    });
  }
  {
    auto* c = app.add_subcommand("solve", "minimum-norm preimage of w by thresholded spectral division");
    auto& spec_opts = spec_store.emplace_back();
    spec_opts.attach(c);
    c->add_option("--in", in_path, "field w")->required();
    c->add_option("--out", out_path, "preimage field v")->required();
    auto* es = c->add_option("--eps-sym", eps_sym, "degeneracy threshold (default 1e-8 max|symbol|)");
    c->add_option("--eps-data", eps_data)->capture_default_str();
    c->add_option("--report", report_path, "JSON report");
    c->callback([&, es] {
      eps_sym_opt = es;
      action = [&] {
        const OperatorSpec spec = spec_opts.resolve();
        check_range_order(spec);
        const Field w = read_field(in_path);
        const SpectralOperator op(spec, w.grid);
        try {
          const Solution sol = solve(op, w, resolve_eps(op), eps_data);
          write_field(sol.v, out_path);
          if (!report_path.empty()) detail::emit_json(sol.report.to_json(), report_path);
        } catch (const RangeError& e) {
          if (!report_path.empty()) detail::emit_json(e.report().to_json(), report_path);
          throw;
        }
        return int(kOk);
      };
    });
  }

  // gen-field
  std::uint64_t seed = 1;
  double band = 2.0 / 3.0;
  int dim = 1;
  {
    auto* c = app.add_subcommand("gen-field", "random band-limited field");
    c->add_option("--n", dim, "dimension")->required();
    c->add_option("--points", points, "samples per axis")->capture_default_str();
    c->add_option("--box", box, "period length")->required();
    c->add_option("--seed", seed)->capture_default_str();
    c->add_option("--band", band, "kept fraction of the Nyquist radius")->capture_default_str();
    c->add_option("--out", out_path, "output field")->required();
    c->callback([&] {
      action = [&] {
        write_field(random_band_limited(Grid::cube(dim, points, box), seed, band), out_path);
        return int(kOk);
      };
    });
  }

  // selftest
  std::vector<int> only;
  {
    auto* c = app.add_subcommand("selftest", "run the verification checks and print a pass/fail table");
    c->add_option("--only", only, "criterion ids to run (default all)")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    c->callback([&] {
      action = [&] {
        const auto t0 = std::chrono::steady_clock::now();
        int failed = 0, ran = 0;
        for (const auto& crit : verify::criteria()) {
          if (!only.empty() && std::find(only.begin(), only.end(), crit.id) == only.end()) continue;
          const auto r = verify::run_criterion(crit);
          out << verify::format_result(r) << std::endl;
          failed += !r.pass;
          ++ran;
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char line[96];
        std::snprintf(line, sizeof line, "selftest: %d/%d passed in %.1fs", ran - failed, ran, secs);
        out << line << std::endl;
        return failed ? int(kInternal) : int(kOk);
      };
    });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? int(kOk) : int(kValidation);
  }

  try {
    return action();
  } catch (const ConsistencyError& e) {
    err << "consistency error: " << e.what() << "\n";
    return kInternal;
  } catch (const SearchError& e) {
    err << "search error: " << e.what() << " in [" << format_double(e.lo()) << ", " << format_double(e.hi())
        << "]\n";
    return kInternal;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << " at offset " << e.offset() << "\n";
    return kValidation;
  } catch (const RangeError& e) {
    err << "range error: " << e.what() << "\n";
    return kValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ConfigurationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const UnsupportedOrderError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

inline int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace spheremean::cli
