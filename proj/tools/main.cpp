#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fracweyl/coefficients.hpp"
#include "fracweyl/domain.hpp"
#include "fracweyl/errors.hpp"
#include "fracweyl/io.hpp"
#include "fracweyl/studies.hpp"
#include "fracweyl/symbol.hpp"
#include "fracweyl/version.hpp"
#include "fracweyl/weylfit.hpp"

extern "C" void openblas_set_num_threads(int);

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fracweyl;

namespace {

struct Options {
  std::string study;
  std::string config_path;
  std::string out_dir = "out";
  double a = 0.5;
  std::vector<double> a_list;
  int n = 0;
  std::vector<int> n_list;
  double h = 0.0;
  std::vector<double> h_list;
  std::string domain_spec;
  std::string symbol_spec = "isotropic";
  std::string coefficient_spec;
  std::string potential_spec;
  std::string phi_spec = "kink:1,1,0.5";
  double a_prime = 0.0;
  double kappa = 1.0;
  double control_shift = 0.0;
  std::vector<int> k_list = {2, 4, 8, 16, 32};
  int levels = 3;
  double radius_base = 0.25;
  double window_lo = 0.05;
  double window_hi = 0.25;
  int seeds = 1000;
  int interlacing_seeds = 500;
  int size_min = 5;
  int size_max = 50;
  unsigned long long seed = 20240817ULL;
  int threads = 1;
  int which = 1;
  int krylov_threshold = 1024;
  int transform_size = 0;
  double p = 0.0;
};

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string g12(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string tok =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument(what + ": cannot parse number \"" + tok + "\"");
    }
    if (used != tok.size())
      throw std::invalid_argument(what + ": trailing characters in \"" + tok + "\"");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

Domain parse_domain(const std::string& spec) {
  if (spec.empty())
    throw std::invalid_argument(
        "missing --domain; expected interval:x0,x1 | rect:x0,y0,x1,y1 | "
        "disk:cx,cy,r | polygon:x1,y1,... | lshape");
  const std::size_t colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "lshape") {
    if (!rest.empty())
      throw std::invalid_argument("domain lshape takes no parameters");
    std::vector<Eigen::Vector2d> v = {
        Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 0), Eigen::Vector2d(2, 1),
        Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 2), Eigen::Vector2d(0, 2)};
    return Domain::polygon(v);
  }
  if (rest.empty())
    throw std::invalid_argument("domain \"" + spec + "\" needs parameters");
  const std::vector<double> p = parse_numbers(rest, "domain " + head);
  if (head == "interval") {
    if (p.size() != 2)
      throw std::invalid_argument("domain interval takes x0,x1");
    return Domain::interval(p[0], p[1]);
  }
  if (head == "rect") {
    if (p.size() != 4)
      throw std::invalid_argument("domain rect takes x0,y0,x1,y1");
    return Domain::rectangle(Eigen::Vector2d(p[0], p[1]), Eigen::Vector2d(p[2], p[3]));
  }
  if (head == "disk") {
    if (p.size() != 3)
      throw std::invalid_argument("domain disk takes cx,cy,r");
    return Domain::disk(Eigen::Vector2d(p[0], p[1]), p[2]);
  }
  if (head == "polygon") {
    if (p.size() < 6 || p.size() % 2 != 0)
      throw std::invalid_argument("domain polygon takes x1,y1,x2,y2,... (at least 3 vertices)");
    std::vector<Eigen::Vector2d> v;
    for (std::size_t i = 0; i < p.size(); i += 2)
      v.emplace_back(p[i], p[i + 1]);
    return Domain::polygon(v);
  }
  throw std::invalid_argument(
      "unknown domain \"" + head +
      "\"; expected interval:x0,x1 | rect:x0,y0,x1,y1 | disk:cx,cy,r | "
      "polygon:x1,y1,... | lshape");
}

ScalarField parse_field(const std::string& spec, int dimension, const std::string& what) {
  const std::size_t colon = spec.find(':');
  CoefficientSpec cs;
  cs.family = spec.substr(0, colon);
  if (colon != std::string::npos && colon + 1 < spec.size())
    cs.params = parse_numbers(spec.substr(colon + 1), what + " " + cs.family);
  return make_coefficient(cs, dimension);
}

PrincipalSymbol parse_symbol(const std::string& spec, double a, int dimension) {
  if (spec == "isotropic") return PrincipalSymbol::isotropic(a);
  if (spec.rfind("scaled:", 0) == 0)
    return PrincipalSymbol::scaled(a, parse_field(spec.substr(7), dimension, "coefficient"));
  if (spec.rfind("anisotropic:", 0) == 0) {
    const std::string rest = spec.substr(12);
    const std::size_t colon = rest.find(':');
    CoefficientSpec cs;
    cs.family = rest.substr(0, colon);
    if (colon != std::string::npos && colon + 1 < rest.size())
      cs.params = parse_numbers(rest.substr(colon + 1), "matrix coefficient " + cs.family);
    return PrincipalSymbol::anisotropic(a, make_matrix_coefficient(cs, dimension));
  }
  throw std::invalid_argument(
      "unknown symbol \"" + spec +
      "\"; expected isotropic | scaled:FAMILY:... | anisotropic:diag:d1,d2 | "
      "anisotropic:matrix:a11,a12,a22");
}

double resolve_h(const Options& o, const Domain& domain) {
  if (domain.dimension() == 1 && o.n > 0) {
    const BoundingBox bb = domain.bounding_box();
    return (bb.hi(0) - bb.lo(0)) / o.n;
  }
  if (o.h > 0.0) return o.h;
  throw std::invalid_argument(domain.dimension() == 1
                                  ? "interval studies need --n or --h"
                                  : "2D studies need --h");
}

ScalarField optional_field(const std::string& spec, int dimension, const std::string& what) {
  if (spec.empty()) return ScalarField();
  return parse_field(spec, dimension, what);
}

void apply_config(const std::string& path, const CLI::App& app, Options& o) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file \"" + path + "\"");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object())
    throw std::invalid_argument("config file must hold a JSON object");

  struct Key {
    const char* name;
    std::function<void(const json&)> set;
  };
  const std::vector<Key> keys = {
      {"study", [&](const json& v) { o.study = v.get<std::string>(); }},
      {"out-dir", [&](const json& v) { o.out_dir = v.get<std::string>(); }},
      {"a", [&](const json& v) { o.a = v.get<double>(); }},
      {"a-list", [&](const json& v) { o.a_list = v.get<std::vector<double>>(); }},
      {"n", [&](const json& v) { o.n = v.get<int>(); }},
      {"n-list", [&](const json& v) { o.n_list = v.get<std::vector<int>>(); }},
      {"h", [&](const json& v) { o.h = v.get<double>(); }},
      {"h-list", [&](const json& v) { o.h_list = v.get<std::vector<double>>(); }},
      {"domain", [&](const json& v) { o.domain_spec = v.get<std::string>(); }},
      {"symbol", [&](const json& v) { o.symbol_spec = v.get<std::string>(); }},
      {"coefficient", [&](const json& v) { o.coefficient_spec = v.get<std::string>(); }},
      {"potential", [&](const json& v) { o.potential_spec = v.get<std::string>(); }},
      {"phi", [&](const json& v) { o.phi_spec = v.get<std::string>(); }},
      {"a-prime", [&](const json& v) { o.a_prime = v.get<double>(); }},
      {"kappa", [&](const json& v) { o.kappa = v.get<double>(); }},
      {"control-shift", [&](const json& v) { o.control_shift = v.get<double>(); }},
      {"k-list", [&](const json& v) { o.k_list = v.get<std::vector<int>>(); }},
      {"levels", [&](const json& v) { o.levels = v.get<int>(); }},
      {"radius-base", [&](const json& v) { o.radius_base = v.get<double>(); }},
      {"window-lo", [&](const json& v) { o.window_lo = v.get<double>(); }},
      {"window-hi", [&](const json& v) { o.window_hi = v.get<double>(); }},
      {"seeds", [&](const json& v) { o.seeds = v.get<int>(); }},
      {"interlacing-seeds", [&](const json& v) { o.interlacing_seeds = v.get<int>(); }},
      {"size-min", [&](const json& v) { o.size_min = v.get<int>(); }},
      {"size-max", [&](const json& v) { o.size_max = v.get<int>(); }},
      {"seed", [&](const json& v) { o.seed = v.get<unsigned long long>(); }},
      {"threads", [&](const json& v) { o.threads = v.get<int>(); }},
      {"which", [&](const json& v) { o.which = v.get<int>(); }},
      {"krylov-threshold", [&](const json& v) { o.krylov_threshold = v.get<int>(); }},
      {"transform-size", [&](const json& v) { o.transform_size = v.get<int>(); }},
      {"p", [&](const json& v) { o.p = v.get<double>(); }},
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Key* match = nullptr;
    for (const auto& k : keys)
      if (it.key() == k.name) {
        match = &k;
        break;
      }
    if (!match)
      throw std::invalid_argument("unknown config key \"" + it.key() + "\"");
    if (app.count("--" + it.key()) > 0) continue;
    try {
      match->set(it.value());
    } catch (const json::exception& e) {
      throw std::invalid_argument("config key \"" + it.key() + "\": " + e.what());
    }
  }
}

json resolved_config(const Options& o) {
  json cfg;
  cfg["study"] = o.study;
  cfg["out-dir"] = o.out_dir;
  cfg["a"] = o.a;
  cfg["a-list"] = o.a_list;
  cfg["n"] = o.n;
  cfg["n-list"] = o.n_list;
  cfg["h"] = o.h;
  cfg["h-list"] = o.h_list;
  cfg["domain"] = o.domain_spec;
  cfg["symbol"] = o.symbol_spec;
  cfg["coefficient"] = o.coefficient_spec;
  cfg["potential"] = o.potential_spec;
  cfg["phi"] = o.phi_spec;
  cfg["a-prime"] = o.a_prime;
  cfg["kappa"] = o.kappa;
  cfg["control-shift"] = o.control_shift;
  cfg["k-list"] = o.k_list;
  cfg["levels"] = o.levels;
  cfg["radius-base"] = o.radius_base;
  cfg["window-lo"] = o.window_lo;
  cfg["window-hi"] = o.window_hi;
  cfg["seeds"] = o.seeds;
  cfg["interlacing-seeds"] = o.interlacing_seeds;
  cfg["size-min"] = o.size_min;
  cfg["size-max"] = o.size_max;
  cfg["seed"] = o.seed;
  cfg["threads"] = o.threads;
  cfg["which"] = o.which;
  cfg["krylov-threshold"] = o.krylov_threshold;
  cfg["transform-size"] = o.transform_size;
  cfg["p"] = o.p;
  return cfg;
}

json fit_json(const WeylEstimate& fit) {
  return json{{"c_hat", fit.C_hat},
              {"dispersion", fit.dispersion},
              {"j_min", fit.j_min},
              {"j_max", fit.j_max}};
}

void run_weyl_constant_cmd(const Options& o, const fs::path& out, json& cfg) {
  const Domain domain = parse_domain(o.domain_spec);
  cfg["domain-description"] = domain.describe();
  const PrincipalSymbol sym = parse_symbol(o.symbol_spec, o.a, domain.dimension());
  const WeylConstantResult wc = weyl_constant(sym, domain);
  const HypothesisReport hyp = check_hypotheses(sym, domain, 10000, o.seed);

  json rep;
  rep["a"] = o.a;
  rep["domain"] = domain.describe();
  rep["symbol"] = o.symbol_spec;
  rep["c_prime"] = wc.C_prime;
  rep["c"] = wc.C;
  rep["volume_used"] = wc.volume_used;
  rep["converged"] = wc.converged;
  rep["hypotheses"] = {{"ellipticity_constant", hyp.ellipticity_constant},
                       {"even_ok", hyp.even_ok},
                       {"homogeneous_ok", hyp.homogeneous_ok},
                       {"max_even_violation", hyp.max_even_violation},
                       {"max_homogeneity_violation", hyp.max_homogeneity_violation},
                       {"samples", hyp.samples}};
  write_text(out / "weyl_constant.json", rep.dump(2) + "\n");

  std::printf("domain   %s\n", domain.describe().c_str());
  std::printf("symbol   %s, order %.12g\n", o.symbol_spec.c_str(), 2.0 * o.a);
  std::printf("C_prime = %.12g\n", wc.C_prime);
  std::printf("C = %.12g\n", wc.C);
  std::printf("volume   %.12g\n", wc.volume_used);
  std::printf("hypotheses: ellipticity %.6g, even %s, homogeneous %s\n",
              hyp.ellipticity_constant, hyp.even_ok ? "ok" : "VIOLATED",
              hyp.homogeneous_ok ? "ok" : "VIOLATED");
  if (!wc.converged)
    std::printf("warning: quadrature refinement did not settle; treat C as approximate\n");
}

void run_spectrum_cmd(const Options& o, const fs::path& out, json& cfg) {
  const Domain domain = parse_domain(o.domain_spec);
  const int dim = domain.dimension();
  const double h = resolve_h(o, domain);
  cfg["h"] = h;
  cfg["domain-description"] = domain.describe();
  const ScalarField coeff = optional_field(o.coefficient_spec, dim, "coefficient");

  SpectrumRun run = run_spectrum(domain, o.a, h, coeff, false, o.transform_size);
  const Spectrum& sp = run.spectrum;
  const int N = static_cast<int>(sp.values.size());

  write_spectrum_csv(out / "spectrum.csv", sp);
  write_spectrum_json(out / "spectrum.json", sp);
  write_grid_csv(out / "grid.csv", *run.grid);

  const double lam1 = sp.values(0);
  const double shift = lam1 <= 0.0 ? 1.0 - lam1 : 0.0;
  Spectrum fitted = sp;
  if (shift != 0.0) {
    fitted.values = sp.values.array() + shift;
    fitted.meta.shift = sp.meta.shift + shift;
  }

  {
    CsvTable t;
    t.header = {"j", "lambda", "g"};
    for (int j = 1; j <= N; ++j) {
      const double g =
          fitted.values(j - 1) * std::pow(static_cast<double>(j), -2.0 * o.a / dim);
      t.rows.push_back({format_int(j), format_double(sp.values(j - 1)), format_double(g)});
    }
    write_csv(out / "gtrace.csv", t);
  }

  if (lam1 > 0.0) {
    CsvTable t;
    t.header = {"t", "count"};
    const int K = 64;
    const double t1 = sp.values(N - 1);
    for (int k = 0; k < K; ++k) {
      const double tk = lam1 * std::pow(t1 / lam1, static_cast<double>(k) / (K - 1));
      t.rows.push_back({format_double(tk), format_int(counting_function(sp, tk))});
    }
    write_csv(out / "ntrace.csv", t);
  }

  json rep;
  rep["size"] = N;
  rep["dimension"] = dim;
  rep["a"] = o.a;
  rep["h"] = h;
  rep["shift"] = shift;
  rep["lambda_min"] = lam1;
  rep["lambda_max"] = sp.values(N - 1);
  rep["kernel_cutoff"] = run.kernel_cutoff;
  rep["transform_size"] = run.transform_size;

  std::optional<WeylEstimate> fit;
  try {
    fit = weyl_fit(fitted, o.a, dim, {o.window_lo, o.window_hi});
  } catch (const std::exception&) {
    // Too few eigenvalues for the window; the spectrum itself is still reported.
  }
  if (fit) {
    rep["fit"] = fit_json(*fit);
    const double p = dim / (2.0 * o.a);
    try {
      const double c0 = weyl_from_counting(fitted, o.a, dim);
      rep["counting_c0"] = c0;
      rep["c_from_counting"] = std::pow(c0, -1.0 / p);
      const LemmaA1Report lem = lemmaA1_crosscheck(fitted, 0.0, p);
      rep["lemma"] = {{"mu_monotone", lem.mu_monotone},
                      {"counting_duality", lem.counting_duality},
                      {"mu_constant", lem.mu_constant},
                      {"lambda_constant", lem.lambda_constant},
                      {"counting_constant", lem.counting_constant},
                      {"max_inconsistency", lem.max_inconsistency},
                      {"dispersion", lem.dispersion},
                      {"consistent", lem.consistent}};
    } catch (const std::exception&) {
    }
  }
  write_text(out / "report.json", rep.dump(2) + "\n");

  {
    CsvTable t;
    t.header = {"quantity", "value"};
    t.rows.push_back({"size", format_int(N)});
    t.rows.push_back({"a", g12(o.a)});
    t.rows.push_back({"h", g12(h)});
    t.rows.push_back({"shift", g12(shift)});
    t.rows.push_back({"lambda_min", g12(lam1)});
    t.rows.push_back({"lambda_max", g12(sp.values(N - 1))});
    if (fit) {
      t.rows.push_back({"c_hat", g12(fit->C_hat)});
      t.rows.push_back({"dispersion", g12(fit->dispersion)});
      t.rows.push_back({"window", "[" + format_int(fit->j_min) + ", " +
                                      format_int(fit->j_max) + "]"});
    }
    write_text(out / "report.txt", format_table(t));
  }

  std::printf("spectrum  %s  a=%.6g  h=%.6g  size=%d\n", domain.describe().c_str(), o.a,
              h, N);
  std::printf("lambda_1=%.12g  lambda_%d=%.12g\n", lam1, N, sp.values(N - 1));
  if (fit)
    std::printf("c_hat=%.12g  dispersion=%.6g  window=[%d, %d]\n", fit->C_hat,
                fit->dispersion, fit->j_min, fit->j_max);
  if (N <= 64) {
    CsvTable t;
    t.header = {"j", "lambda"};
    for (int j = 1; j <= N; ++j)
      t.rows.push_back({format_int(j), g12(sp.values(j - 1))});
    std::fputs(format_table(t).c_str(), stdout);
  }
}

void run_convergence_cmd(const Options& o, const fs::path& out, json& cfg) {
  const Domain domain = parse_domain(o.domain_spec);
  const int dim = domain.dimension();
  const std::vector<double> a_values = o.a_list.empty() ? std::vector<double>{o.a} : o.a_list;
  std::vector<double> h_values;
  if (dim == 1 && !o.n_list.empty()) {
    const BoundingBox bb = domain.bounding_box();
    const double length = bb.hi(0) - bb.lo(0);
    for (int n : o.n_list) {
      if (n < 2) throw std::invalid_argument("n-list entries must be at least 2");
      h_values.push_back(length / n);
    }
  } else if (!o.h_list.empty()) {
    h_values = o.h_list;
  } else {
    h_values.push_back(resolve_h(o, domain));
  }
  cfg["domain-description"] = domain.describe();
  cfg["h-values"] = h_values;
  const ScalarField coeff = optional_field(o.coefficient_spec, dim, "coefficient");

  const ConvergenceReport report =
      convergence_study(domain, a_values, h_values, coeff, {o.window_lo, o.window_hi});

  CsvTable t;
  t.header = {"a", "h", "n_interior", "c_hat", "dispersion", "c_reference",
              "abs_error", "shift"};
  for (const ConvergenceRow& r : report.rows)
    t.rows.push_back({format_double(r.a), format_double(r.h), format_int(r.n_interior),
                      format_double(r.c_hat), format_double(r.dispersion),
                      format_double(r.c_reference), format_double(r.abs_error),
                      format_double(r.shift)});
  write_csv(out / "convergence.csv", t);

  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "spectrum_a%g_n%d.csv", report.rows[i].a,
                  report.rows[i].n_interior);
    write_spectrum_csv(out / name, report.spectra[i]);
  }

  json rep;
  rep["window"] = {report.window[0], report.window[1]};
  rep["rows"] = json::array();
  for (const ConvergenceRow& r : report.rows)
    rep["rows"].push_back({{"a", r.a},
                           {"h", r.h},
                           {"n_interior", r.n_interior},
                           {"c_hat", r.c_hat},
                           {"dispersion", r.dispersion},
                           {"c_reference", r.c_reference},
                           {"abs_error", r.abs_error},
                           {"shift", r.shift}});
  write_text(out / "report.json", rep.dump(2) + "\n");

  CsvTable view;
  view.header = t.header;
  for (const ConvergenceRow& r : report.rows)
    view.rows.push_back({g6(r.a), g6(r.h), format_int(r.n_interior), g6(r.c_hat),
                         g6(r.dispersion), g6(r.c_reference), g6(r.abs_error),
                         g6(r.shift)});
  std::printf("convergence  %s\n", domain.describe().c_str());
  std::fputs(format_table(view).c_str(), stdout);
}

void run_sandwich_cmd(const Options& o, const fs::path& out, json& cfg) {
  const Domain domain = parse_domain(o.domain_spec);
  const double h = resolve_h(o, domain);
  cfg["h"] = h;
  cfg["domain-description"] = domain.describe();
  const ScalarField coeff = optional_field(o.coefficient_spec, domain.dimension(), "coefficient");

  const SandwichReport report =
      sandwich_study(domain, o.a, h, o.levels, o.radius_base, coeff);

  CsvTable t;
  t.header = {"kind", "level", "radius", "n_interior", "c_hat", "dispersion",
              "c_quadrature", "lambda_min"};
  for (const SandwichLevel& l : report.levels)
    t.rows.push_back({l.kind, format_int(l.level), format_double(l.radius),
                      format_int(l.n_interior), format_double(l.c_hat),
                      format_double(l.dispersion), format_double(l.c_quadrature),
                      format_double(l.lambda_min)});
  write_csv(out / "levels.csv", t);

  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "spectrum_%s%d.csv", report.levels[i].kind.c_str(),
                  report.levels[i].level);
    write_spectrum_csv(out / name, report.spectra[i]);
  }

  json rep;
  rep["a"] = o.a;
  rep["h"] = h;
  rep["levels_requested"] = o.levels;
  rep["radius_base"] = report.radius_base;
  rep["shift"] = report.shift;
  rep["max_eigen_violation"] = report.max_eigen_violation;
  rep["eigen_ok"] = report.eigen_ok;
  rep["fits_ordered"] = report.fits_ordered;
  rep["quadrature_monotone"] = report.quadrature_monotone;
  rep["levels"] = json::array();
  for (const SandwichLevel& l : report.levels)
    rep["levels"].push_back({{"kind", l.kind},
                             {"level", l.level},
                             {"radius", l.radius},
                             {"n_interior", l.n_interior},
                             {"c_hat", l.c_hat},
                             {"dispersion", l.dispersion},
                             {"c_quadrature", l.c_quadrature},
                             {"lambda_min", l.lambda_min}});
  write_text(out / "report.json", rep.dump(2) + "\n");

  CsvTable view;
  view.header = t.header;
  for (const SandwichLevel& l : report.levels)
    view.rows.push_back({l.kind, format_int(l.level), g6(l.radius),
                         format_int(l.n_interior), g6(l.c_hat), g6(l.dispersion),
                         g6(l.c_quadrature), g6(l.lambda_min)});
  std::printf("sandwich  %s  a=%.6g  h=%.6g\n", domain.describe().c_str(), o.a, h);
  std::fputs(format_table(view).c_str(), stdout);
  std::printf("eigenvalue ordering %s (max violation %.3g)\n",
              report.eigen_ok ? "ok" : "VIOLATED", report.max_eigen_violation);
  std::printf("fitted constants ordered %s\n", report.fits_ordered ? "ok" : "VIOLATED");
  std::printf("quadrature constants monotone %s\n",
              report.quadrature_monotone ? "ok" : "VIOLATED");
}

void run_perturbation_cmd(const Options& o, const fs::path& out, json& cfg) {
  const Domain domain = parse_domain(o.domain_spec);
  const int dim = domain.dimension();
  const double h = resolve_h(o, domain);
  cfg["h"] = h;
  cfg["domain-description"] = domain.describe();
  if (o.a_prime == 0.0)
    throw std::invalid_argument("perturbation needs --a-prime");
  const ScalarField coeff = optional_field(o.coefficient_spec, dim, "coefficient");
  const ScalarField potential = optional_field(o.potential_spec, dim, "potential");

  const PerturbationReport report = perturbation_study(
      domain, o.a, h, o.a_prime, o.kappa, potential, coeff, o.control_shift);

  CsvTable t;
  t.header = {"j", "lambda_base", "lambda_perturbed"};
  for (std::size_t j = 0; j < report.base_values.size(); ++j)
    t.rows.push_back({format_int(static_cast<long long>(j) + 1),
                      format_double(report.base_values[j]),
                      format_double(report.perturbed_values[j])});
  write_csv(out / "perturbation.csv", t);

  json rep;
  rep["a"] = o.a;
  rep["a_prime"] = report.a_prime;
  rep["kappa"] = report.kappa;
  rep["h"] = h;
  rep["n_interior"] = report.n_interior;
  rep["shift"] = report.shift;
  rep["base_fit"] = fit_json(report.base_fit);
  rep["perturbed_fit"] = fit_json(report.perturbed_fit);
  rep["delta"] = report.delta;
  rep["threshold"] = report.threshold;
  rep["invariance_ok"] = report.invariance_ok;
  rep["control_shift"] = report.control_shift;
  rep["control_shift_error"] = report.control_shift_error;
  write_text(out / "report.json", rep.dump(2) + "\n");

  std::printf("perturbation  %s  a=%.6g  a'=%.6g  kappa=%.6g  size=%d\n",
              domain.describe().c_str(), o.a, report.a_prime, report.kappa,
              report.n_interior);
  std::printf("c_hat base=%.12g (disp %.6g)  perturbed=%.12g (disp %.6g)\n",
              report.base_fit.C_hat, report.base_fit.dispersion,
              report.perturbed_fit.C_hat, report.perturbed_fit.dispersion);
  std::printf("delta=%.6g  threshold=%.6g  invariance %s\n", report.delta,
              report.threshold, report.invariance_ok ? "ok" : "VIOLATED");
  if (report.control_shift != 0.0)
    std::printf("constant-potential control: shift %.6g reproduced to %.3g\n",
                report.control_shift, report.control_shift_error);
}

void run_mollify_cmd(const Options& o, const fs::path& out, json& cfg) {
  const Domain domain = parse_domain(o.domain_spec);
  const int dim = domain.dimension();
  const double h = resolve_h(o, domain);
  cfg["h"] = h;
  cfg["domain-description"] = domain.describe();
  const ScalarField phi = parse_field(o.phi_spec, dim, "coefficient");

  const MollifyReport report = mollification_study(domain, o.a, h, phi, o.k_list, o.p);

  CsvTable t;
  t.header = {"k", "sup_coefficient_diff", "opnorm_resolvent_diff", "schatten_sup"};
  for (const MollifyRow& r : report.rows)
    t.rows.push_back({format_int(r.k), format_double(r.sup_coefficient_diff),
                      format_double(r.opnorm_resolvent_diff),
                      format_double(r.schatten_sup)});
  write_csv(out / "mollify.csv", t);

  json rep;
  rep["a"] = o.a;
  rep["h"] = h;
  rep["phi"] = o.phi_spec;
  rep["b"] = report.b;
  rep["p"] = report.p;
  rep["opnorm_nonincreasing"] = report.opnorm_nonincreasing;
  rep["schatten_nonincreasing"] = report.schatten_nonincreasing;
  rep["opnorm_final_over_first"] = report.opnorm_final_over_first;
  rep["schatten_final_over_first"] = report.schatten_final_over_first;
  rep["rows"] = json::array();
  for (const MollifyRow& r : report.rows)
    rep["rows"].push_back({{"k", r.k},
                           {"sup_coefficient_diff", r.sup_coefficient_diff},
                           {"opnorm_resolvent_diff", r.opnorm_resolvent_diff},
                           {"schatten_sup", r.schatten_sup}});
  write_text(out / "report.json", rep.dump(2) + "\n");

  CsvTable view;
  view.header = t.header;
  for (const MollifyRow& r : report.rows)
    view.rows.push_back({format_int(r.k), g6(r.sup_coefficient_diff),
                         g6(r.opnorm_resolvent_diff), g6(r.schatten_sup)});
  std::printf("mollify  %s  a=%.6g  h=%.6g  phi=%s  p=%.6g  b=%.6g\n",
              domain.describe().c_str(), o.a, h, o.phi_spec.c_str(), report.p, report.b);
  std::fputs(format_table(view).c_str(), stdout);
  std::printf("operator norm trend %s (final/first %.4g)\n",
              report.opnorm_nonincreasing ? "nonincreasing" : "NOT MONOTONE",
              report.opnorm_final_over_first);
  std::printf("weak Schatten trend %s (final/first %.4g)\n",
              report.schatten_nonincreasing ? "nonincreasing" : "NOT MONOTONE",
              report.schatten_final_over_first);
}

void run_snumber_suite_cmd(const Options& o, const fs::path& out, json& cfg) {
  (void)cfg;
  const SnumberSuiteReport suite =
      snumber_suite(o.seeds, o.size_min, o.size_max, o.seed);
  const InterlacingSuiteReport inter =
      interlacing_suite(o.interlacing_seeds, o.size_min, o.size_max, o.seed);

  CsvTable t;
  t.header = {"check", "trials", "violations", "max_violation"};
  for (const SuiteCheckRow& r : suite.rows)
    t.rows.push_back({r.name, format_int(r.trials), format_int(r.violations),
                      format_double(r.max_violation)});
  t.rows.push_back({"interlacing", format_int(inter.trials), format_int(inter.violations),
                    format_double(inter.max_violation)});
  write_csv(out / "suite.csv", t);

  const bool all_ok = suite.all_ok && inter.all_ok;
  json rep;
  rep["seeds"] = o.seeds;
  rep["interlacing_seeds"] = o.interlacing_seeds;
  rep["size_min"] = o.size_min;
  rep["size_max"] = o.size_max;
  rep["seed"] = o.seed;
  rep["all_ok"] = all_ok;
  rep["rows"] = json::array();
  for (const SuiteCheckRow& r : suite.rows)
    rep["rows"].push_back({{"check", r.name},
                           {"trials", r.trials},
                           {"violations", r.violations},
                           {"max_violation", r.max_violation}});
  rep["rows"].push_back({{"check", "interlacing"},
                         {"trials", inter.trials},
                         {"violations", inter.violations},
                         {"max_violation", inter.max_violation}});
  write_text(out / "report.json", rep.dump(2) + "\n");

  CsvTable view;
  view.header = t.header;
  for (const SuiteCheckRow& r : suite.rows)
    view.rows.push_back(
        {r.name, format_int(r.trials), format_int(r.violations), g6(r.max_violation)});
  view.rows.push_back({"interlacing", format_int(inter.trials),
                       format_int(inter.violations), g6(inter.max_violation)});
  std::printf("s-number suite  seeds=%d  interlacing=%d  sizes=[%d, %d]\n", o.seeds,
              o.interlacing_seeds, o.size_min, o.size_max);
  std::fputs(format_table(view).c_str(), stdout);
  std::printf("result: %s\n", all_ok ? "all checks passed" : "VIOLATIONS FOUND");
}

void run_boundary_cmd(const Options& o, const fs::path& out, json& cfg) {
  const Domain domain = parse_domain(o.domain_spec);
  const double h = resolve_h(o, domain);
  cfg["h"] = h;
  cfg["domain-description"] = domain.describe();

  const BoundaryStudyResult res =
      boundary_exponent_study(domain, o.a, h, o.which, o.krylov_threshold, o.seed);

  json rep;
  rep["a"] = res.a;
  rep["h"] = res.h;
  rep["n_interior"] = res.n_interior;
  rep["eigenfunction"] = res.eigenfunction;
  rep["used_krylov"] = res.used_krylov;
  rep["exponent"] = res.fit.exponent;
  rep["d_min"] = res.fit.d_min;
  rep["d_max"] = res.fit.d_max;
  rep["nodes_used"] = res.fit.nodes_used;
  write_text(out / "report.json", rep.dump(2) + "\n");

  std::printf("boundary exponent  %s  a=%.6g  h=%.6g  size=%d%s\n",
              domain.describe().c_str(), o.a, h, res.n_interior,
              res.used_krylov ? "  (Lanczos)" : "");
  std::printf("eigenfunction %d decays like d^%.6g over d in [%.6g, %.6g] (%d nodes)\n",
              res.eigenfunction, res.fit.exponent, res.fit.d_min, res.fit.d_max,
              res.fit.nodes_used);
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Numerical laboratory for Weyl asymptotics of fractional-order "
               "Dirichlet operators"};
  app.set_help_flag("--help", "print this help message and exit");
  app.add_option("--study,study", o.study,
                 "study to run: weyl-constant | spectrum | convergence | sandwich | "
                 "perturbation | mollify | snumber-suite | boundary-exponent");
  app.add_option("--config", o.config_path,
                 "JSON config file; explicit flags override its values");
  app.add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
  app.add_option("--a", o.a, "fractional exponent a, 0 < a <= 1")->capture_default_str();
  app.add_option("--a-list", o.a_list, "comma-separated a values (convergence)")
      ->delimiter(',');
  app.add_option("--n", o.n, "interval resolution: h = length / n");
  app.add_option("--n-list", o.n_list,
                 "comma-separated interval resolutions (convergence)")
      ->delimiter(',');
  app.add_option("--h", o.h, "grid spacing (2D, or 1D without --n)");
  app.add_option("--h-list", o.h_list, "comma-separated spacings (convergence)")
      ->delimiter(',');
  app.add_option("--domain", o.domain_spec,
                 "interval:x0,x1 | rect:x0,y0,x1,y1 | disk:cx,cy,r | "
                 "polygon:x1,y1,... | lshape");
  app.add_option("--symbol", o.symbol_spec,
                 "isotropic | scaled:FAMILY:... | anisotropic:diag:d1,d2 | "
                 "anisotropic:matrix:a11,a12,a22 (weyl-constant)")
      ->capture_default_str();
  app.add_option("--coefficient", o.coefficient_spec,
                 "positive scaling coefficient FAMILY:p1,p2,... applied to the operator");
  app.add_option("--potential", o.potential_spec,
                 "potential FAMILY:p1,p2,... (perturbation)");
  app.add_option("--phi", o.phi_spec, "coefficient to mollify (mollify)")
      ->capture_default_str();
  app.add_option("--a-prime", o.a_prime, "order of the perturbing kernel (perturbation)");
  app.add_option("--kappa", o.kappa, "strength of the perturbing kernel")
      ->capture_default_str();
  app.add_option("--control-shift", o.control_shift,
                 "nonzero c also runs the constant-potential control (perturbation)");
  app.add_option("--k-list", o.k_list, "mollifier sharpness ladder (mollify)")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--levels", o.levels, "inner/outer approximation levels (sandwich)")
      ->capture_default_str();
  app.add_option("--radius-base", o.radius_base,
                 "offset radius of level l is radius-base / l (sandwich)")
      ->capture_default_str();
  app.add_option("--window-lo", o.window_lo, "fit window lower fraction")
      ->capture_default_str();
  app.add_option("--window-hi", o.window_hi, "fit window upper fraction")
      ->capture_default_str();
  app.add_option("--seeds", o.seeds, "randomized trials (snumber-suite)")
      ->capture_default_str();
  app.add_option("--interlacing-seeds", o.interlacing_seeds,
                 "interlacing trials (snumber-suite)")
      ->capture_default_str();
  app.add_option("--size-min", o.size_min, "smallest random matrix size")
      ->capture_default_str();
  app.add_option("--size-max", o.size_max, "largest random matrix size")
      ->capture_default_str();
  app.add_option("--seed", o.seed, "seed feeding every randomized piece of a run")
      ->capture_default_str();
  app.add_option("--threads", o.threads, "BLAS threads")->capture_default_str();
  app.add_option("--which", o.which, "1-based eigenfunction index (boundary-exponent)")
      ->capture_default_str();
  app.add_option("--krylov-threshold", o.krylov_threshold,
                 "size above which boundary-exponent switches to Lanczos")
      ->capture_default_str();
  app.add_option("--transform-size", o.transform_size,
                 "DFT length per axis for kernel synthesis (0 = automatic)");
  app.add_option("--p", o.p, "weak Schatten exponent (mollify; 0 = n / 2a)");
  app.set_version_flag("--version", FRACWEYL_VERSION);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = utc_now();

  try {
    if (!o.config_path.empty()) apply_config(o.config_path, app, o);

    if (o.study.empty())
      throw std::invalid_argument(
          "no study selected; choose one of weyl-constant, spectrum, convergence, "
          "sandwich, perturbation, mollify, snumber-suite, boundary-exponent");
    static const std::set<std::string> known = {
        "weyl-constant", "spectrum",      "convergence",   "sandwich",
        "perturbation",  "mollify",       "snumber-suite", "boundary-exponent"};
    if (!known.count(o.study))
      throw std::invalid_argument(
          "unknown study \"" + o.study +
          "\"; choose one of weyl-constant, spectrum, convergence, sandwich, "
          "perturbation, mollify, snumber-suite, boundary-exponent");

    auto check_a = [](double a) {
      if (!(a > 0.0) || a > 1.0) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "a must lie in (0, 1]; got %g", a);
        throw std::invalid_argument(buf);
      }
    };
    check_a(o.a);
    for (double av : o.a_list) check_a(av);
    if (o.threads < 1) throw std::invalid_argument("threads must be positive");
    if (!(o.window_lo >= 0.0 && o.window_lo < o.window_hi && o.window_hi <= 1.0))
      throw std::invalid_argument("fit window fractions must satisfy 0 <= lo < hi <= 1");

    openblas_set_num_threads(o.threads);

    const fs::path out(o.out_dir);
    json cfg = resolved_config(o);

    if (o.study == "weyl-constant")
      run_weyl_constant_cmd(o, out, cfg);
    else if (o.study == "spectrum")
      run_spectrum_cmd(o, out, cfg);
    else if (o.study == "convergence")
      run_convergence_cmd(o, out, cfg);
    else if (o.study == "sandwich")
      run_sandwich_cmd(o, out, cfg);
    else if (o.study == "perturbation")
      run_perturbation_cmd(o, out, cfg);
    else if (o.study == "mollify")
      run_mollify_cmd(o, out, cfg);
    else if (o.study == "snumber-suite")
      run_snumber_suite_cmd(o, out, cfg);
    else
      run_boundary_cmd(o, out, cfg);

    RunManifest manifest;
    manifest.tool = "fracweyl";
    manifest.version = FRACWEYL_VERSION;
    manifest.study = o.study;
    manifest.config_json = cfg.dump();
    manifest.seed = o.seed;
    manifest.threads = o.threads;
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest.started_utc = started;
    write_manifest(out / "manifest.json", manifest);
  } catch (const constraint_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
