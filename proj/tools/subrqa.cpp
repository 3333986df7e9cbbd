// subrqa: command-line front end for the subrqa library.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
// 3 computational failure (reconstruction, saturation, discrepancy).

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "subrqa/asymptotics.hpp"
#include "subrqa/densities.hpp"
#include "subrqa/errors.hpp"
#include "subrqa/json_io.hpp"
#include "subrqa/recognizability.hpp"
#include "subrqa/recplot.hpp"
#include "subrqa/rqa.hpp"
#include "subrqa/substitution.hpp"
#include "subrqa/verification.hpp"

using namespace subrqa;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCompute = 3;

struct Globals {
  std::string format = "text";
  std::string method = "exact";
  std::string log_base = "e";
  bool no_cache = false;
};

struct Scale {
  std::size_t m = 1;
  std::size_t ell = 1;
  std::size_t h = 1;
  std::optional<double> eps;
};

AsymptoticOptions asymptotic_options(const Globals& g) {
  AsymptoticOptions o;
  o.reconstruction.method = density_method_from_string(g.method);
  o.use_cache = !g.no_cache;
  return o;
}

// Replaces h by the quantized value when --eps was given.
std::size_t resolve_h(const Scale& s) {
  if (!s.eps) return s.h;
  if (!(*s.eps > 0 && *s.eps < 1)) throw DomainError("--eps must lie in (0, 1)");
  const std::size_t h = quantize_eps(*s.eps);
  std::cerr << "note: eps=" << *s.eps << " quantized to h=" << h << " (eps=2^-" << h
            << "); distances between sequences only take values 2^-i\n";
  return h;
}

void add_scale_options(CLI::App* cmd, Scale& s, bool with_ell = true) {
  cmd->add_option("-m,--embedding", s.m, "Embedding dimension m")->check(CLI::PositiveNumber);
  if (with_ell) cmd->add_option("-l,--lmin", s.ell, "Minimal line length l")->check(CLI::PositiveNumber);
  auto* h = cmd->add_option("-h", s.h, "Threshold exponent: eps = 2^-h")->check(CLI::PositiveNumber);
  cmd->add_option("--eps", s.eps, "Threshold eps in (0,1); quantized to 2^-ceil(-log2 eps)")->excludes(h);
}

std::string entropy_text(double ent, std::size_t q, const std::string& base) {
  // Symbolic form r·log q when ENT is a small rational multiple of log q.
  const double unit = std::log(static_cast<double>(q));
  const double value = base == "2" ? ent / std::log(2.0) : ent;
  std::ostringstream out;
  if (auto r = snap_rational(ent / unit, 1e-12, Integer(12))) {
    const std::string coef = *r == 1 ? "" : to_string(*r) + " ";
    out << coef << (base == "2" ? "log2 " : "log ") << q << " = ";
  }
  out << std::setprecision(15) << value;
  return out.str();
}

void print_report_text(std::ostream& out, const RQAReport& r, std::size_t q, const std::string& base) {
  out << to_string(r.provenance) << " (n=" << (r.n ? std::to_string(*r.n) : std::string("inf")) << ", m=" << r.m
      << ", h=" << r.h << ", l=" << r.l_min << ")\n";
  auto line = [&](const char* name, const std::string& v) { out << "  " << std::left << std::setw(9) << name << v << "\n"; };
  auto approx = [](const Rational& v) {
    std::ostringstream s;
    s << to_string(v) << "  (" << std::setprecision(10) << to_double(v) << ")";
    return s.str();
  };
  line("RR", approx(r.RR));
  line("DET", r.DET ? approx(*r.DET) : "undefined");
  line("Lavg", r.Lavg ? (r.Lavg->infinite ? "inf" : approx(r.Lavg->value)) : "undefined");
  line("ENT", r.ENT ? entropy_text(*r.ENT, q, base) : "undefined");
  line("C", r.C ? approx(*r.C) : "undefined");
  line("lineDens", approx(r.lineDens));
  for (const auto& note : r.notes) out << "  note: " << note << "\n";
}

Json gap_json(const RQAReport& emp, const RQAReport& asy) {
  Json g;
  auto put = [&](const char* name, const std::optional<Rational>& a, const std::optional<Rational>& b) {
    g[name] = a && b ? Json(std::abs(to_double(Rational(*a - *b)))) : Json(nullptr);
  };
  put("RR", emp.RR, asy.RR);
  put("DET", emp.DET, asy.DET);
  put("C", emp.C, asy.C);
  put("lineDens", emp.lineDens, asy.lineDens);
  return g;
}

void emit_reports(const Globals& g, const Substitution& s, std::vector<RQAReport> reports) {
  if (g.log_base == "2") {
    for (auto& r : reports) {
      if (r.ENT) r.ENT = *r.ENT / std::log(2.0);
    }
  }
  if (g.format == "json") {
    Json j;
    j["substitution"] = s.to_string();
    j["log_base"] = g.log_base;
    j["reports"] = Json::array();
    for (const auto& r : reports) j["reports"].push_back(to_json(r));
    j["gap"] = reports.size() == 2 ? gap_json(reports[0], reports[1]) : Json(nullptr);
    std::cout << j.dump(2) << "\n";
  } else if (g.format == "csv") {
    std::cout << reports_to_csv(reports);
  } else {
    // Text mode keeps natural-log values and prints them in the requested base.
    for (auto& r : reports) {
      if (r.ENT && g.log_base == "2") r.ENT = *r.ENT * std::log(2.0);
      print_report_text(std::cout, r, s.q(), g.log_base);
    }
    if (reports.size() == 2) {
      const Json gap = gap_json(reports[0], reports[1]);
      std::cout << "gap |empirical - asymptotic|:";
      for (const auto& [k, v] : gap.items()) {
        std::cout << " " << k << "=" << (v.is_null() ? std::string("n/a") : std::to_string(v.get<double>()));
      }
      std::cout << "\n";
    }
  }
}

int cmd_classify(const Globals& g, const std::string& spec, bool constants_only) {
  const Substitution s = Substitution::parse(spec);
  const Classification cls = classify(s);
  std::optional<RecogConstants> rc;
  if (cls.kind == SubstitutionKind::PrimitiveAperiodic) rc = recognizability_constants(normalize(s).substitution);
  if (constants_only && !rc) {
    throw DomainError("recognizability constants need a primitive aperiodic substitution; " + s.to_string() + " is " +
                      to_string(cls.kind));
  }
  if (g.format == "json") {
    Json j;
    j["substitution"] = s.to_string();
    if (!constants_only) {
      j["kind"] = to_string(cls.kind);
      j["normalization"] = to_string(cls.normalization);
      j["absorbing_letter"] = cls.absorbing_letter ? Json(to_int(*cls.absorbing_letter)) : Json(nullptr);
    }
    j["constants"] = rc ? to_json(*rc) : Json(nullptr);
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << s.to_string() << "\n";
  if (!constants_only) {
    std::cout << "  kind           " << to_string(cls.kind) << "\n";
    std::cout << "  normalization  " << to_string(cls.normalization) << "\n";
    if (cls.absorbing_letter) std::cout << "  absorbing      " << to_int(*cls.absorbing_letter) << "\n";
  }
  if (rc) {
    std::cout << "  q=" << rc->q << " alpha=" << rc->alpha << " beta=" << rc->beta << " c=" << to_string(rc->c)
              << " K=" << rc->K << " R=" << rc->R << " R0=" << rc->R0 << "\n";
  }
  return kExitOk;
}

int cmd_densities(const Globals& g, const std::string& spec, std::size_t ell_max) {
  const Substitution s = Substitution::parse(spec);
  const Classification cls = classify(s);
  if (cls.kind != SubstitutionKind::PrimitiveAperiodic) {
    throw DomainError("density tables need a primitive aperiodic substitution; " + s.to_string() + " is " +
                      to_string(cls.kind));
  }
  const AsymptoticOptions o = asymptotic_options(g);
  const DensityTable table = load_or_reconstruct(normalize(s).substitution, o.reconstruction, o.use_cache);
  if (g.format == "json") {
    Json j = to_json(table);
    Json dens = Json::object();
    for (std::size_t l = 1; l <= ell_max; ++l) {
      const Rational d = dens_K(table, l);
      if (d != 0) dens[std::to_string(l)] = rational_to_json(d);
    }
    j["dens_K"] = dens;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << describe(table, ell_max);
  }
  return kExitOk;
}

int cmd_analyze(const Globals& g, const std::string& spec, const Scale& scale, std::optional<std::size_t> n,
                bool asymptotic, bool exclude_n) {
  const Substitution s = Substitution::parse(spec);
  if (!n && !asymptotic) throw CLI::ValidationError("analyze", "give --n, --asymptotic, or both");
  const std::size_t h = resolve_h(scale);
  std::vector<RQAReport> reports;
  if (n) {
    if (*n < 2) throw CLI::ValidationError("--n", "must be at least 2");
    const std::size_t hp = reduced_h(scale.m, h);
    const BitSequence x = generating_prefix(s, *n + scale.ell + hp);
    reports.push_back(analyze_prefix(x, *n, scale.m, scale.ell, h,
                                     exclude_n ? BoundaryPolicy::ExcludeNBoundary : BoundaryPolicy::Include));
  }
  if (asymptotic) {
    reports.push_back(to_report(asymptotic_quantifiers(s, scale.m, scale.ell, h, asymptotic_options(g))));
  }
  emit_reports(g, s, std::move(reports));
  return kExitOk;
}

std::optional<Rational> pick(const RQAReport& r, const std::string& quantity) {
  if (quantity == "RR") return r.RR;
  if (quantity == "DET") return r.DET;
  if (quantity == "C") return r.C;
  if (quantity == "lineDens") return r.lineDens;
  if (quantity == "Lavg" && r.Lavg && !r.Lavg->infinite) return r.Lavg->value;
  return std::nullopt;
}

int cmd_convergence(const Globals& g, const std::string& spec, const Scale& scale, const std::string& quantity,
                    std::vector<unsigned> exponents) {
  const Substitution s = Substitution::parse(spec);
  const std::size_t h = resolve_h(scale);
  std::sort(exponents.begin(), exponents.end());
  const RQAReport asy = to_report(asymptotic_quantifiers(s, scale.m, scale.ell, h, asymptotic_options(g)));
  const std::size_t hp = reduced_h(scale.m, h);
  const std::size_t n_max = std::size_t{1} << exponents.back();
  const BitSequence x = generating_prefix(s, n_max + scale.ell + hp);
  const auto a = pick(asy, quantity);
  std::cout << "n,empirical,asymptotic,gap\n" << std::setprecision(12);
  for (unsigned t : exponents) {
    const std::size_t n = std::size_t{1} << t;
    const auto e = pick(analyze_prefix(x, n, scale.m, scale.ell, h), quantity);
    std::cout << n << ",";
    if (e) std::cout << to_double(*e);
    std::cout << ",";
    if (a) std::cout << to_double(*a);
    std::cout << ",";
    if (e && a) std::cout << std::abs(to_double(Rational(*e - *a)));
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_render(const std::string& spec, std::size_t n, const Scale& scale, const std::string& image,
               const std::string& output) {
  const Substitution s = Substitution::parse(spec);
  const std::size_t hp = reduced_h(scale.m, resolve_h(scale));
  const BitSequence x = generating_prefix(s, n + hp);
  std::ofstream file;
  if (!output.empty()) {
    file.open(output, std::ios::binary);
    if (!file) throw DomainError("cannot open " + output);
  }
  std::ostream& out = output.empty() ? std::cout : file;
  if (image == "pgm") {
    render_pgm(out, x, n, hp);
  } else {
    out << render_ascii(x, n, hp);
  }
  return kExitOk;
}

int cmd_verify(const Globals& g, const VerifyOptions& options) {
  const auto results = verify_reference(options);
  if (g.format == "json") {
    Json j = Json::array();
    for (const auto& c : results) {
      j.push_back({{"family", c.family}, {"name", c.name}, {"passed", c.passed},
                   {"informational", c.informational}, {"detail", c.detail}});
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << format_results(results);
  }
  return all_passed(results) && !results.empty() ? kExitOk : kExitVerify;
}

int cmd_det_scan(const Globals& g, const std::string& spec, const Scale& scale, std::size_t h_first,
                 std::size_t h_last) {
  const Substitution s = Substitution::parse(spec);
  const auto rows = determinism_limit_scan(s, scale.m, scale.ell, h_first, h_last, asymptotic_options(g));
  if (g.format == "json") {
    Json j = Json::array();
    for (const auto& r : rows) {
      j.push_back({{"h", r.h}, {"DET", rational_to_json(r.DET)}, {"envelope", r.envelope}});
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "h,DET,one_minus_DET,envelope\n" << std::setprecision(12);
  for (const auto& r : rows) {
    std::cout << r.h << "," << to_string(r.DET) << "," << to_double(Rational(1 - r.DET)) << "," << r.envelope << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrence quantification of binary constant-length substitution subshifts"};
  app.set_help_flag("--help", "Print help and exit");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--method", g.method, "Density reconstruction method")->check(CLI::IsMember({"exact", "snap"}));
  app.add_option("--log-base", g.log_base, "Logarithm base for ENT")->check(CLI::IsMember({"e", "2"}));
  app.add_flag("--no-cache", g.no_cache, "Ignore and do not write the density cache");

  std::string spec;
  Scale scale;
  std::function<int()> run;

  auto* classify_cmd = app.add_subcommand("classify", "Classify a substitution and print its constants");
  classify_cmd->add_option("spec", spec, "Substitution, e.g. 0->01,1->10")->required();
  classify_cmd->callback([&] { run = [&] { return cmd_classify(g, spec, false); }; });

  auto* constants_cmd = app.add_subcommand("constants", "Recognizability constants alpha, beta, K, R, R0");
  constants_cmd->add_option("spec", spec)->required();
  constants_cmd->callback([&] { run = [&] { return cmd_classify(g, spec, true); }; });

  std::size_t ell_max = 0;
  auto* densities_cmd = app.add_subcommand("densities", "Density table of inner line starts");
  densities_cmd->add_option("spec", spec)->required();
  densities_cmd->add_option("--lmax", ell_max, "Also list dens(K_l) for l up to this length");
  densities_cmd->callback([&] { run = [&] { return cmd_densities(g, spec, ell_max); }; });

  std::optional<std::size_t> n;
  bool asymptotic = false, exclude_n = false;
  auto* analyze_cmd = app.add_subcommand(
      "analyze",
      "Empirical (--n) and/or exact asymptotic (--asymptotic) quantifiers.\n"
      "Thresholds are dyadic: --eps is rounded down to 2^-ceil(-log2 eps).");
  analyze_cmd->add_option("spec", spec)->required();
  analyze_cmd->add_option("--n", n, "Prefix length for the empirical report");
  analyze_cmd->add_flag("--asymptotic", asymptotic, "Exact report for n = infinity");
  analyze_cmd->add_flag("--exclude-n-boundary", exclude_n, "Drop lines touching the n-boundary");
  add_scale_options(analyze_cmd, scale);
  analyze_cmd->callback([&] { run = [&] { return cmd_analyze(g, spec, scale, n, asymptotic, exclude_n); }; });

  std::string quantity = "RR";
  std::vector<unsigned> exponents{10, 12, 14};
  auto* convergence_cmd = app.add_subcommand("convergence", "CSV of empirical vs asymptotic along n = 2^t");
  convergence_cmd->add_option("spec", spec)->required();
  convergence_cmd->add_option("--quantity", quantity)->check(CLI::IsMember({"RR", "DET", "Lavg", "C", "lineDens"}));
  convergence_cmd->add_option("--scales", exponents, "Exponents t")->delimiter(',')->check(CLI::Range(1u, 26u));
  add_scale_options(convergence_cmd, scale);
  convergence_cmd->callback([&] { run = [&] { return cmd_convergence(g, spec, scale, quantity, exponents); }; });

  std::size_t render_n = 64;
  std::string image = "ascii", output;
  auto* render_cmd = app.add_subcommand("render", "Render a recurrence plot (row 0 at top)");
  render_cmd->add_option("spec", spec)->required();
  render_cmd->add_option("--n", render_n)->check(CLI::PositiveNumber);
  render_cmd->add_option("--image", image)->check(CLI::IsMember({"ascii", "pgm"}));
  render_cmd->add_option("-o,--output", output, "Output file (default stdout)");
  add_scale_options(render_cmd, scale, false);
  render_cmd->callback([&] { run = [&] { return cmd_render(spec, render_n, scale, image, output); }; });

  VerifyOptions vopts;
  std::string table_file;
  auto* verify_cmd = app.add_subcommand("verify", "Check the published golden values");
  verify_cmd->add_option("--filter", vopts.filter, "Only families whose name contains this");
  verify_cmd->add_option("--table", table_file, "Density table JSON to use instead of reconstructing")
      ->check(CLI::ExistingFile);
  verify_cmd->add_option("--oracle-n", vopts.oracle_n, "Prefix length for the finite-plot oracle");
  verify_cmd->callback([&] {
    run = [&] {
      if (!table_file.empty()) vopts.table_file = table_file;
      vopts.reconstruction.method = density_method_from_string(g.method);
      vopts.use_cache = !g.no_cache;
      return cmd_verify(g, vopts);
    };
  });

  std::size_t h_first = 1, h_last = 24;
  auto* scan_cmd = app.add_subcommand("det-scan", "Exact DET over a range of h");
  scan_cmd->add_option("spec", spec)->required();
  scan_cmd->add_option("-m,--embedding", scale.m)->check(CLI::PositiveNumber);
  scan_cmd->add_option("-l,--lmin", scale.ell)->check(CLI::PositiveNumber);
  scan_cmd->add_option("--h-first", h_first)->check(CLI::PositiveNumber);
  scan_cmd->add_option("--h-last", h_last)->check(CLI::PositiveNumber);
  scan_cmd->callback([&] { run = [&] { return cmd_det_scan(g, spec, scale, h_first, h_last); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return run();
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "computation failed: " << e.what() << "\n";
    return kExitCompute;
  }
}
