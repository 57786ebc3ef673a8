#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "p4r/asymptotics.hpp"
#include "p4r/error.hpp"
#include "p4r/hermite.hpp"
#include "p4r/painleve4.hpp"
#include "p4r/rootfinder.hpp"

using namespace p4r;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string command;
  std::string m_text = "1";
  std::string n_text = "1";
  std::string r_text = "1";
  std::string family = "I";
  std::string scale = "m";
  unsigned precision_bits = kDefaultPrecisionBits;
  int samples = 0;
  std::string window;
  std::string x_text = "1.4,0";
  int grid = 101;
  std::string out;
  std::string format;
  std::uint64_t seed = RootFinderOptions{}.seed;
  int max_mn = 6;
  bool with_sigma = false;
};

struct Output {
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string num(const HpReal& v) { return v.to_string(25); }

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> out;
  for (const auto& item : split(text)) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError(std::string("bad integer in ") + flag + ": '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string(flag) + " is empty");
  return out;
}

HpReal parse_real(const std::string& text, const char* flag) {
  try {
    return HpReal::parse(text);
  } catch (const std::exception&) {
    throw UsageError(std::string("bad number for ") + flag + ": '" + text + "'");
  }
}

std::vector<double> parse_reals(const std::string& text, std::size_t count, const char* flag) {
  std::vector<double> out;
  for (const auto& item : split(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("bad number in ") + flag + ": '" + item + "'");
    }
  }
  if (out.size() != count) throw UsageError(std::string(flag) + " needs " + std::to_string(count) + " comma-separated numbers");
  return out;
}

ComplexHP parse_point(const std::string& text) {
  const auto parts = split(text);
  if (parts.empty() || parts.size() > 2) throw UsageError("--x needs 're' or 're,im'");
  return ComplexHP(parse_real(parts[0], "--x"), parts.size() == 2 ? parse_real(parts[1], "--x") : HpReal());
}

HpReal parse_r(const Config& c) {
  const HpReal r = parse_real(c.r_text, "--r");
  if (r < HpReal(1)) throw UsageError("--r must be at least 1");
  return r;
}

int single(const std::string& text, const char* flag) {
  const auto v = parse_int_list(text, flag);
  if (v.size() != 1) throw UsageError(std::string(flag) + " takes a single value for this command");
  return v[0];
}

// ---------------------------------------------------------------------------

Output cmd_zeros(const Config& c) {
  const int m = single(c.m_text, "--m");
  const int n = single(c.n_text, "--n");
  if (m < 1 || n < 1) throw UsageError("zeros needs m, n >= 1");
  if (c.scale != "m" && c.scale != "n") throw UsageError("--scale must be m or n");
  RootFinderOptions opts;
  opts.seed = c.seed;
  const RootSet rs = scaled_zero_cloud(static_cast<unsigned>(m), static_cast<unsigned>(n),
                                       c.scale == "m" ? ScaleVariable::M : ScaleVariable::N, c.precision_bits, opts);
  Output out;
  out.params = {{"m", std::to_string(m)}, {"n", std::to_string(n)}, {"scale", c.scale}, {"seed", std::to_string(c.seed)}};
  std::size_t clustered = 0;
  for (bool b : rs.clustered) clustered += b ? 1 : 0;
  out.meta = {{"degree", std::to_string(rs.source_degree)},
              {"iterations", std::to_string(rs.iterations)},
              {"clustered", std::to_string(clustered)}};
  out.columns = {"re", "im", "residual"};
  for (std::size_t k = 0; k < rs.roots.size(); ++k) {
    out.rows.push_back({num(rs.roots[k].re), num(rs.roots[k].im), num(rs.residuals[k])});
  }
  return out;
}

Output cmd_boundary(const Config& c) {
  const HpReal r = parse_r(c);
  TraceOptions opts;
  if (c.samples > 0) opts.samples_per_quadrant = c.samples;
  const BoundaryCurve curve = trace_boundary(r, opts);
  Output out;
  out.params = {{"r", num(r)}, {"samples_per_quadrant", std::to_string(opts.samples_per_quadrant)}};
  out.meta = {{"x_c_re", num(curve.corner.re)},
              {"x_c_im", num(curve.corner.im)},
              {"real_axis_crossing", num(curve.real_axis_crossing)},
              {"imaginary_axis_crossing", num(curve.imaginary_axis_crossing)},
              {"points", std::to_string(curve.points.size())}};
  out.columns = {"re", "im", "residual", "corner"};
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    out.rows.push_back({num(curve.points[k].re), num(curve.points[k].im), num(curve.residuals[k]),
                        curve.is_corner[k] ? "1" : "0"});
  }
  return out;
}

Output cmd_compare(const Config& c) {
  const auto family = parse_family(c.family);
  if (!family) throw UsageError("--family must be I, II or III");
  const auto ms = parse_int_list(c.m_text, "--m");
  const auto ns = parse_int_list(c.n_text, "--n");
  if (ms.size() != ns.size()) throw UsageError("--m and --n lists must have the same length");
  for (std::size_t k = 0; k < ms.size(); ++k) {
    if (ms[k] < 1 || ns[k] < 1) throw UsageError("compare needs m, n >= 1");
    if (static_cast<long>(ms[k]) * ns[0] != static_cast<long>(ms[0]) * ns[k]) {
      throw UsageError("all (m, n) pairs must share the ratio r = m/n");
    }
  }
  const HpReal r = HpReal(static_cast<long>(ms[0])) / HpReal(static_cast<long>(ns[0]));
  std::vector<std::string> range_text = {"1.1", "3"};
  if (!c.window.empty()) {
    const auto parts = split(c.window);
    if (parts.size() != 2 && parts.size() != 4) throw UsageError("--window needs 'x0,x1' or 'x0,x1,y0,y1'");
    range_text = {parts[0], parts[1]};
  }
  const HpReal x0 = parse_real(range_text[0], "--window");
  const HpReal x1 = parse_real(range_text[1], "--window");
  if (!(x1 > x0)) throw UsageError("--window needs x0 < x1");
  const int samples = c.samples > 0 ? c.samples : 50;
  if (samples < 4) throw UsageError("--samples must be at least 4");

  Output out;
  std::string pairs;
  for (std::size_t k = 0; k < ms.size(); ++k) {
    pairs += (k ? ";" : "") + std::to_string(ms[k]) + "," + std::to_string(ns[k]);
  }
  out.params = {{"family", std::string(to_string(*family))}, {"pairs", pairs}, {"r", num(r)},
                {"x0", num(x0)}, {"x1", num(x1)}, {"samples", std::to_string(samples)}};
  out.columns = {"m", "n", "x", "exact", "asymptotic", "abs_error", "status"};
  std::vector<ComplexHP> approx;
  std::vector<HpReal> xs;
  int interior = 0;
  const HpReal right_edge = abs(boundary_crossing_on_ray(r, HpReal(0)));
  const HpReal left_edge = abs(boundary_crossing_on_ray(r, HpReal::pi()));
  for (int k = 0; k < samples; ++k) {
    const HpReal x = x0 + (x1 - x0) * HpReal(k) / HpReal(samples - 1);
    xs.push_back(x);
    const SpectralData sd = spectral_data(ComplexHP(x), r);
    if (abs(x) <= (x.sign() >= 0 ? right_edge : left_edge)) ++interior;
    approx.push_back(asymptotic_w(*family, sd));
  }
  if (interior > 0) {
    std::cerr << "warning: " << interior << " sample(s) lie inside the elliptic region, where the formula does not apply\n";
  }
  for (std::size_t p = 0; p < ms.size(); ++p) {
    const LogDerivRational w = build_solution(*family, ms[p], ns[p]);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      std::vector<std::string> row = {std::to_string(ms[p]), std::to_string(ns[p]), num(xs[k])};
      try {
        const ComplexHP exact = scaled_eval(w, ComplexHP(xs[k]));
        row.insert(row.end(), {num(exact.re), num(approx[k].re), num(abs(exact - approx[k])), "ok"});
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NearPole) throw;
        row.insert(row.end(), {"", num(approx[k].re), "", "near_pole"});
      }
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

Output cmd_phase(const Config& c) {
  const HpReal r = parse_r(c);
  const ComplexHP x = parse_point(c.x_text);
  const auto w = parse_reals(c.window.empty() ? "-3,3,-3,3" : c.window, 4, "--window");
  if (!(w[1] > w[0]) || !(w[3] > w[2])) throw UsageError("--window needs x0 < x1 and y0 < y1");
  if (c.grid < 2) throw UsageError("--grid must be at least 2");
  const SpectralData sd = spectral_data(x, r);
  const PhaseChart chart = phase_chart(sd, {w[0], w[1], w[2], w[3]}, c.grid);
  Output out;
  out.params = {{"x_re", num(x.re)}, {"x_im", num(x.im)}, {"r", num(r)},   {"window", c.window.empty() ? "-3,3,-3,3" : c.window},
                {"grid", std::to_string(c.grid)}, {"with_sigma", c.with_sigma ? "1" : "0"}};
  out.meta = {{"a_re", num(sd.a.re)}, {"a_im", num(sd.a.im)}, {"b_re", num(sd.b.re)}, {"b_im", num(sd.b.im)},
              {"c_re", num(sd.c.re)}, {"c_im", num(sd.c.im)}, {"re_phi_a", num(re_phi_tilde(sd.a, sd))},
              {"re_phi_b", num(re_phi_tilde(sd.b, sd))}};
  out.columns = {"kind", "re", "im", "sign"};
  for (int iy = 0; iy < c.grid; ++iy) {
    for (int ix = 0; ix < c.grid; ++ix) {
      const double re = w[0] + (w[1] - w[0]) * ix / (c.grid - 1);
      const double im = w[2] + (w[3] - w[2]) * iy / (c.grid - 1);
      out.rows.push_back({"cell", num(re), num(im),
                          std::to_string(chart.signs[static_cast<std::size_t>(iy * c.grid + ix)])});
    }
  }
  if (c.with_sigma) {
    for (const auto& z : trace_sigma(sd)) out.rows.push_back({"sigma", num(z.re), num(z.im), "0"});
  }
  return out;
}

Output cmd_sigma(const Config& c) {
  const HpReal r = parse_r(c);
  const ComplexHP x = parse_point(c.x_text);
  const SpectralData sd = spectral_data(x, r);
  const auto path = trace_sigma(sd, c.samples > 0 ? c.samples : 4000);
  Output out;
  out.params = {{"x_re", num(x.re)}, {"x_im", num(x.im)}, {"r", num(r)}};
  out.meta = {{"a_re", num(sd.a.re)}, {"a_im", num(sd.a.im)}, {"b_re", num(sd.b.re)}, {"b_im", num(sd.b.im)},
              {"winding", num(winding_angle(path))}, {"points", std::to_string(path.size())}};
  out.columns = {"re", "im"};
  for (const auto& z : path) out.rows.push_back({num(z.re), num(z.im)});
  return out;
}

Output cmd_verify(const Config& c, bool& all_pass) {
  if (c.max_mn < 0) throw UsageError("--max-mn must be non-negative");
  const int top = c.max_mn;
  Output out;
  out.params = {{"max_mn", std::to_string(top)}};
  out.columns = {"suite", "family", "m", "n", "pass"};
  all_pass = true;
  std::size_t count = 0;
  const auto record = [&](const std::string& suite, const std::string& family, int m, int n, bool ok) {
    out.rows.push_back({suite, family, std::to_string(m), std::to_string(n), ok ? "1" : "0"});
    all_pass = all_pass && ok;
    ++count;
  };
  for (Family f : {Family::I, Family::II, Family::III}) {
    for (int m = 0; m <= top; ++m) {
      for (int n = 0; n <= top; ++n) {
        if (!valid_indices(f, m, n)) continue;
        record("ode_residual", std::string(to_string(f)), m, n, p4_residual(build_solution(f, m, n)).is_zero());
      }
    }
  }
  for (int m = 1; m <= top; ++m) {
    for (int n = 1; n <= top; ++n) {
      const ExactRationalFn total = as_rational(build_solution(Family::I, m, n)) +
                                    as_rational(build_solution(Family::II, m, n)) +
                                    as_rational(build_solution(Family::III, m, n)) + ExactRationalFn(ExactPoly{0, 2});
      record("sum_rule", "", m, n, total.is_zero());
    }
  }
  for (int m = 1; m <= top; ++m) {
    for (int n = 1; n <= m; ++n) {
      const LemmaSwitchCheck lemma = check_lemma_switch(static_cast<unsigned>(m), static_cast<unsigned>(n));
      record("lemma_switch", "", m, n, lemma.holds && lemma.hmn_holds);
      record("psi_representation", "", m, n, check_psi_representations(static_cast<unsigned>(m), static_cast<unsigned>(n)).holds());
    }
  }
  for (int m = 0; m <= top; ++m) {
    for (int n = 0; n <= top; ++n) {
      record("symmetry", "", m, n, check_hermite_symmetry(static_cast<unsigned>(m), static_cast<unsigned>(n)));
    }
    record("specialization", "", m, 1, check_hermite_specializations(static_cast<unsigned>(m)));
  }
  out.meta = {{"checks", std::to_string(count)}, {"all_pass", all_pass ? "true" : "false"}};
  return out;
}

// ---------------------------------------------------------------------------

void emit(const Config& c, const Output& o, std::ostream& os) {
  if (c.format == "json") {
    nlohmann::ordered_json doc;
    doc["tool"] = "p4r";
    doc["version"] = kVersion;
    doc["command"] = c.command;
    doc["precision_bits"] = c.precision_bits;
    doc["parameters"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : o.params) doc["parameters"][k] = v;
    doc["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : o.meta) doc["metadata"][k] = v;
    doc["columns"] = o.columns;
    doc["rows"] = o.rows;
    os << doc.dump(1) << "\n";
    return;
  }
  os << "# p4r " << kVersion << "\n";
  os << "# command: " << c.command << "\n";
  os << "# precision_bits: " << c.precision_bits << "\n";
  for (const auto& [k, v] : o.params) os << "# param " << k << ": " << v << "\n";
  for (const auto& [k, v] : o.meta) os << "# meta " << k << ": " << v << "\n";
  for (std::size_t k = 0; k < o.columns.size(); ++k) os << (k ? "," : "") << o.columns[k];
  os << "\n";
  for (const auto& row : o.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << row[k];
    os << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"Rational Painleve-IV solutions from generalized Hermite polynomials", "p4r"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--precision-bits", cfg.precision_bits, "working precision in bits")->check(CLI::Range(64u, 1u << 20));
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto* zeros = app.add_subcommand("zeros", "zeros of H_{m,n} in the scaled variable");
  zeros->add_option("--m", cfg.m_text)->required();
  zeros->add_option("--n", cfg.n_text)->required();
  zeros->add_option("--scale", cfg.scale, "m (x variable) or n (chi variable)");
  zeros->add_option("--seed", cfg.seed, "seed for the initial guesses");
  common(zeros);

  auto* boundary = app.add_subcommand("boundary", "boundary curve of the elliptic region");
  boundary->add_option("--r", cfg.r_text)->required();
  boundary->add_option("--samples", cfg.samples, "rays per quadrant")->check(CLI::Range(4, 100000));
  common(boundary);

  auto* compare = app.add_subcommand("compare", "exact versus asymptotic values on the real axis");
  compare->add_option("--family", cfg.family);
  compare->add_option("--m", cfg.m_text, "comma-separated m values")->required();
  compare->add_option("--n", cfg.n_text, "comma-separated n values")->required();
  compare->add_option("--r", cfg.r_text, "must equal m/n when given");
  compare->add_option("--window", cfg.window, "x range as 'x0,x1'");
  compare->add_option("--samples", cfg.samples, "points in the x range")->check(CLI::Range(4, 1000000));
  common(compare);

  auto* phase = app.add_subcommand("phase", "sign chart of Re phi~");
  phase->add_option("--x", cfg.x_text, "'re,im'")->required();
  phase->add_option("--r", cfg.r_text)->required();
  phase->add_option("--window", cfg.window, "'x0,x1,y0,y1'");
  phase->add_option("--grid", cfg.grid)->check(CLI::Range(2, 5000));
  phase->add_flag("--with-sigma", cfg.with_sigma, "append the Sigma polyline");
  common(phase);

  auto* sigma = app.add_subcommand("sigma", "Sigma level line from a to b");
  sigma->add_option("--x", cfg.x_text, "'re,im'")->required();
  sigma->add_option("--r", cfg.r_text)->required();
  sigma->add_option("--samples", cfg.samples, "maximum steps")->check(CLI::Range(4, 10000000));
  common(sigma);

  auto* verify = app.add_subcommand("verify", "exact identity suites");
  verify->add_option("--max-mn", cfg.max_mn)->check(CLI::Range(0, 60));
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.format.empty()) cfg.format = cfg.command == "verify" ? "json" : "csv";

  try {
    PrecisionScope scope(cfg.precision_bits);
    Output out;
    bool ok = true;
    if (cfg.command == "zeros") out = cmd_zeros(cfg);
    else if (cfg.command == "boundary") out = cmd_boundary(cfg);
    else if (cfg.command == "compare") {
      if (compare->count("--r") > 0) {
        const auto ms = parse_int_list(cfg.m_text, "--m");
        const auto ns = parse_int_list(cfg.n_text, "--n");
        if (parse_real(cfg.r_text, "--r") * HpReal(static_cast<long>(ns[0])) != HpReal(static_cast<long>(ms[0]))) {
          throw UsageError("--r does not match m/n");
        }
      }
      out = cmd_compare(cfg);
    } else if (cfg.command == "phase") out = cmd_phase(cfg);
    else if (cfg.command == "sigma") out = cmd_sigma(cfg);
    else out = cmd_verify(cfg, ok);

    if (cfg.out.empty()) {
      emit(cfg, out, std::cout);
    } else {
      std::ofstream file(cfg.out);
      if (!file) {
        std::cerr << "error: cannot open " << cfg.out << "\n";
        return 1;
      }
      emit(cfg, out, file);
    }
    if (!ok) {
      std::cerr << "verify: some checks failed\n";
      return 1;
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::DomainError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
