// Command-line interface: exact truncation solutions, variational spectra,
// figure data (curves + points, optional SVG), Hellmann-Feynman checks, and
// the physical-parameter energy map.  All output is deterministic: CSV with
// 15 significant digits, LF endings, mandatory header row; JSON mirrors the
// CSV fields by name.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "qradial/analysis.hpp"
#include "qradial/frobenius.hpp"
#include "qradial/model.hpp"
#include "qradial/variational.hpp"

namespace {

using nlohmann::json;

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qradial::NumericError("cannot open output file: " + path);
  out << text;
}

struct CommonOpts {
  std::string format = "csv";
  std::string out;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", opts.out, "Write output to PATH instead of stdout");
  cmd->add_option("--jobs", opts.jobs, "Worker threads (0 = hardware parallelism)")
      ->capture_default_str();
}

// ---------------------------------------------------------------- truncate

int cmd_truncate(int n, double gamma, const CommonOpts& opts) {
  const auto solutions = qradial::all_solutions(n, gamma);
  std::vector<int> nodes(solutions.size());
  for (std::size_t k = 0; k < solutions.size(); ++k) nodes[k] = qradial::count_nodes(solutions[k]);

  if (opts.format == "json") {
    json root;
    root["n"] = n;
    root["gamma"] = gamma;
    root["solutions"] = json::array();
    for (std::size_t k = 0; k < solutions.size(); ++k) {
      const auto& s = solutions[k];
      json rec;
      rec["i"] = s.i;
      rec["delta_root"] = s.delta_root;
      rec["W"] = s.eigenvalue;
      rec["nodes"] = nodes[k];
      rec["coefficients"] = std::vector<double>(s.coeffs.data(), s.coeffs.data() + s.coeffs.size());
      root["solutions"].push_back(rec);
    }
    write_text(opts.out, root.dump(2) + "\n");
    return 0;
  }

  std::ostringstream csv;
  csv << "n,i,delta_root,W,nodes";
  for (int k = 0; k <= n; ++k) csv << ",a_" << k;
  csv << "\n";
  for (std::size_t k = 0; k < solutions.size(); ++k) {
    const auto& s = solutions[k];
    csv << s.n << "," << s.i << "," << fmt_num(s.delta_root) << "," << fmt_num(s.eigenvalue) << ","
        << nodes[k];
    for (int c = 0; c <= n; ++c) csv << "," << fmt_num(s.coeffs[c]);
    csv << "\n";
  }
  write_text(opts.out, csv.str());
  return 0;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(double gamma, double delta, int levels, double tol, const CommonOpts& opts) {
  const qradial::SpectrumResult res =
      qradial::spectrum(qradial::DimensionlessModel(gamma, delta), levels, tol);

  if (opts.format == "json") {
    json root;
    root["gamma"] = gamma;
    root["delta"] = delta;
    root["basis_size"] = res.basis_size_used;
    root["converged"] = res.fully_converged();
    root["levels"] = json::array();
    for (const auto& l : res.levels)
      root["levels"].push_back(
          {{"j", l.index}, {"W", l.eigenvalue}, {"converged", l.converged}, {"est_error", l.est_error}});
    write_text(opts.out, root.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "j,W,converged,est_error\n";
    for (const auto& l : res.levels)
      csv << l.index << "," << fmt_num(l.eigenvalue) << "," << (l.converged ? 1 : 0) << ","
          << fmt_num(l.est_error) << "\n";
    write_text(opts.out, csv.str());
  }
  return res.fully_converged() ? 0 : 1;
}

// ---------------------------------------------------------------- figure

std::string svg_figure(const qradial::SweepTable& table) {
  const double width = 640, height = 480;
  const double ml = 70, mr = 20, mt = 20, mb = 55;
  const double x0 = table.delta_grid.front(), x1 = table.delta_grid.back();
  double y0 = table.levels.minCoeff(), y1 = table.levels.maxCoeff();
  for (const auto& p : table.truncation_points) {
    y0 = std::min(y0, p.eigenvalue);
    y1 = std::max(y1, p.eigenvalue);
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb); };
  auto num = [](double v) {
    char b[32];
    std::snprintf(b, sizeof(b), "%.2f", v);
    return std::string(b);
  };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr << "\" height=\""
    << height - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";

  // delta ticks at integers, W ticks at multiples of 5
  for (int t = static_cast<int>(std::ceil(x0)); t <= static_cast<int>(std::floor(x1)); ++t) {
    s << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(py(y0)) << "\" x2=\"" << num(px(t))
      << "\" y2=\"" << num(py(y0) + 5) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << num(px(t)) << "\" y=\"" << num(py(y0) + 20)
      << "\" font-size=\"12\" text-anchor=\"middle\">" << t << "</text>\n";
  }
  for (int t = static_cast<int>(std::ceil(y0 / 5.0)) * 5; t <= y1; t += 5) {
    s << "<line x1=\"" << num(px(x0) - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(px(x0))
      << "\" y2=\"" << num(py(t)) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << num(px(x0) - 10) << "\" y=\"" << num(py(t) + 4)
      << "\" font-size=\"12\" text-anchor=\"end\">" << t << "</text>\n";
  }
  s << "<text x=\"" << num((ml + width - mr) / 2) << "\" y=\"" << num(height - 15)
    << "\" font-size=\"16\" text-anchor=\"middle\">\xCE\xB4</text>\n";
  s << "<text x=\"" << num(18.0) << "\" y=\"" << num((mt + height - mb) / 2)
    << "\" font-size=\"16\" text-anchor=\"middle\">W</text>\n";

  for (int j = 0; j < table.levels.rows(); ++j) {
    s << "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"1.5\" points=\"";
    for (std::size_t g = 0; g < table.delta_grid.size(); ++g) {
      if (g) s << " ";
      s << num(px(table.delta_grid[g])) << "," << num(py(table.levels(j, static_cast<int>(g))));
    }
    s << "\"/>\n";
  }
  for (const auto& p : table.truncation_points)
    s << "<circle cx=\"" << num(px(p.delta_root)) << "\" cy=\"" << num(py(p.eigenvalue))
      << "\" r=\"3.5\" fill=\"blue\"/>\n";
  s << "</svg>\n";
  return s.str();
}

int cmd_figure(double gamma, const std::string& range, int grid, int levels, int n_trunc_max,
               double tol, bool emit_svg, const CommonOpts& opts) {
  const auto colon = range.find(':');
  if (colon == std::string::npos)
    throw std::domain_error("figure: --range expects MIN:MAX, e.g. -3:3");
  const double dmin = std::stod(range.substr(0, colon));
  const double dmax = std::stod(range.substr(colon + 1));

  const qradial::SweepTable table =
      qradial::sweep(gamma, dmin, dmax, grid, levels, n_trunc_max, opts.jobs, tol);

  const std::filesystem::path dir = opts.out.empty() ? "." : opts.out;
  std::filesystem::create_directories(dir);

  std::ostringstream curves;
  curves << "delta";
  for (int j = 0; j < levels; ++j) curves << ",W_" << j;
  curves << "\n";
  for (std::size_t g = 0; g < table.delta_grid.size(); ++g) {
    curves << fmt_num(table.delta_grid[g]);
    for (int j = 0; j < levels; ++j) curves << "," << fmt_num(table.levels(j, static_cast<int>(g)));
    curves << "\n";
  }
  write_text((dir / "curves.csv").string(), curves.str());

  std::ostringstream points;
  points << "n,i,delta_root,W,matched_level,residual\n";
  for (const auto& p : table.truncation_points)
    points << p.n << "," << p.i << "," << fmt_num(p.delta_root) << "," << fmt_num(p.eigenvalue) << ","
           << p.matched_level << "," << fmt_num(p.residual) << "\n";
  write_text((dir / "points.csv").string(), points.str());

  if (emit_svg) write_text((dir / "figure.svg").string(), svg_figure(table));

  bool all_converged = true;
  for (char c : table.grid_converged) all_converged = all_converged && c;
  return all_converged ? 0 : 1;
}

// ---------------------------------------------------------------- hft

int cmd_hft(double gamma, double delta, int level, double h, const CommonOpts& opts) {
  const qradial::HellmannFeynmanResult r = qradial::hellmann_feynman_check(gamma, delta, level, h);
  if (opts.format == "json") {
    json root{{"gamma", gamma}, {"delta", delta}, {"level", level}, {"h", h},
              {"lhs", r.lhs},   {"rhs", r.rhs},   {"abs_diff", r.abs_diff}};
    write_text(opts.out, root.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "lhs,rhs,abs_diff\n"
        << fmt_num(r.lhs) << "," << fmt_num(r.rhs) << "," << fmt_num(r.abs_diff) << "\n";
    write_text(opts.out, csv.str());
  }
  return 0;
}

// ---------------------------------------------------------------- physical

int cmd_physical(const qradial::PhysicalParameters& p, int levels, double tol,
                 const CommonOpts& opts) {
  p.validate();
  const int nu = qradial::nu_from_quantum_numbers(p.l, p.s);
  const double omega = qradial::omega_from_charge(p);
  const double delta = qradial::delta_from_physical(p, omega);
  const qradial::DimensionlessModel model(std::abs(nu), delta);
  const qradial::SpectrumResult res = qradial::spectrum(model, levels, tol);

  if (opts.format == "json") {
    json root;
    root["m"] = p.m;
    root["q_abs"] = p.q_abs;
    root["g"] = p.g;
    root["b"] = p.b;
    root["rho"] = p.rho;
    root["k"] = p.k;
    root["l"] = p.l;
    root["s"] = p.s;
    root["omega"] = omega;
    root["nu"] = nu;
    root["gamma"] = model.gamma;
    root["delta"] = delta;
    root["converged"] = res.fully_converged();
    root["levels"] = json::array();
    for (const auto& l : res.levels)
      root["levels"].push_back(
          {{"j", l.index},
           {"W", l.eigenvalue},
           {"energy", qradial::energy_from_eigenvalue(l.eigenvalue, omega, p.k, p.m)}});
    write_text(opts.out, root.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "j,W,energy,omega,nu,gamma,delta\n";
    for (const auto& l : res.levels)
      csv << l.index << "," << fmt_num(l.eigenvalue) << ","
          << fmt_num(qradial::energy_from_eigenvalue(l.eigenvalue, omega, p.k, p.m)) << ","
          << fmt_num(omega) << "," << nu << "," << fmt_num(model.gamma) << "," << fmt_num(delta) << "\n";
    write_text(opts.out, csv.str());
  }
  return res.fully_converged() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit for the radial problem u'' + u'/x - gamma^2/x^2 u - (delta x + x^2) u + W u = 0"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a flat key=value file");

  // truncate
  auto* truncate = app.add_subcommand("truncate", "Exact polynomial solutions at truncation roots");
  int tr_n = 1;
  double tr_gamma = 0.0;
  CommonOpts tr_opts;
  truncate->add_option("--n", tr_n, "Polynomial degree n >= 0")->required();
  truncate->add_option("--gamma", tr_gamma, "gamma = |nu| >= 0")->required();
  add_common(truncate, tr_opts);

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Variational spectrum at one delta");
  double sp_gamma = 0.0, sp_delta = 0.0, sp_tol = 1e-9;
  int sp_levels = 5;
  CommonOpts sp_opts;
  spectrum->add_option("--gamma", sp_gamma)->required();
  spectrum->add_option("--delta", sp_delta)->required();
  spectrum->add_option("--levels", sp_levels)->capture_default_str();
  spectrum->add_option("--tol", sp_tol, "Consecutive-basis agreement tolerance")->capture_default_str();
  add_common(spectrum, sp_opts);

  // figure
  auto* figure = app.add_subcommand("figure", "Sweep curves.csv/points.csv (+ optional SVG)");
  double fg_gamma = 0.0, fg_tol = 1e-9;
  std::string fg_range = "-3:3";
  int fg_grid = 61, fg_levels = 5, fg_ntrunc = 4;
  bool fg_svg = false;
  CommonOpts fg_opts;
  figure->add_option("--gamma", fg_gamma)->required();
  figure->add_option("--range", fg_range, "delta window MIN:MAX")->capture_default_str();
  figure->add_option("--grid", fg_grid, "Number of grid points")->capture_default_str();
  figure->add_option("--levels", fg_levels)->capture_default_str();
  figure->add_option("--n-trunc-max", fg_ntrunc, "Largest truncation degree to overlay")
      ->capture_default_str();
  figure->add_option("--tol", fg_tol)->capture_default_str();
  figure->add_flag("--svg", fg_svg, "Also write figure.svg");
  add_common(figure, fg_opts);

  // hft
  auto* hft = app.add_subcommand("hft", "Hellmann-Feynman check dW/d(delta) = <x>");
  hft->set_help_flag("--help", "Print this help message and exit");  // frees -h for the step width
  double hf_gamma = 0.0, hf_delta = 0.0, hf_h = 1e-3;
  int hf_level = 0;
  CommonOpts hf_opts;
  hft->add_option("--gamma", hf_gamma)->required();
  hft->add_option("--delta", hf_delta)->required();
  hft->add_option("--level", hf_level)->capture_default_str();
  hft->add_option("--h", hf_h, "Centered-difference half-width")->capture_default_str();
  add_common(hft, hf_opts);

  // physical
  auto* physical = app.add_subcommand("physical", "Energies from physical parameters");
  qradial::PhysicalParameters pp;
  int ph_levels = 5;
  double ph_tol = 1e-9;
  CommonOpts ph_opts;
  physical->add_option("--m", pp.m)->required();
  physical->add_option("--q", pp.q_abs, "|q|")->required();
  physical->add_option("--g", pp.g)->required();
  physical->add_option("--b", pp.b)->required();
  physical->add_option("--rho", pp.rho)->required();
  physical->add_option("--k", pp.k)->capture_default_str();
  physical->add_option("--l", pp.l)->capture_default_str();
  physical->add_option("--s", pp.s, "+1 or -1")->capture_default_str();
  physical->add_option("--levels", ph_levels)->capture_default_str();
  physical->add_option("--tol", ph_tol)->capture_default_str();
  add_common(physical, ph_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (truncate->parsed()) return cmd_truncate(tr_n, tr_gamma, tr_opts);
    if (spectrum->parsed()) return cmd_spectrum(sp_gamma, sp_delta, sp_levels, sp_tol, sp_opts);
    if (figure->parsed())
      return cmd_figure(fg_gamma, fg_range, fg_grid, fg_levels, fg_ntrunc, fg_tol, fg_svg, fg_opts);
    if (hft->parsed()) return cmd_hft(hf_gamma, hf_delta, hf_level, hf_h, hf_opts);
    if (physical->parsed()) return cmd_physical(pp, ph_levels, ph_tol, ph_opts);
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
