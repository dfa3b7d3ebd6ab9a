// Command-line front end: loads a measure (spec file or preset), runs one
// pipeline and writes CSV/JSON artifacts to stdout or into --out DIR.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "spherepoly/io.hpp"
#include "spherepoly/verify.hpp"

namespace {

using namespace spherepoly;
using io::json;

constexpr int kExitOk = 0;
constexpr int kExitIdentity = 2;
constexpr int kExitNotPD = 3;
constexpr int kExitParse = 64;

struct RunConfig {
  std::string command;
  std::string spec_path;
  std::string preset_name;
  std::size_t N = 27;
  std::string format = "json";
  std::optional<std::size_t> nodes;
  std::optional<double> tol;
  std::string out_dir;
  std::vector<double> point;  // interleaved re, im
  std::string gamma_path;
  std::string diag_path;
};

class Output {
 public:
  explicit Output(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }
  void write(const std::string& name, const std::string& text) const {
    if (dir_.empty()) {
      std::cout << text;
      if (!text.empty() && text.back() != '\n') std::cout << '\n';
      return;
    }
    std::ofstream f(std::filesystem::path(dir_) / name, std::ios::binary);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
  }

 private:
  std::string dir_;
};

MeasureSpec load(const RunConfig& cfg) {
  if (!cfg.spec_path.empty()) return io::load_spec(cfg.spec_path);
  try {
    return preset(cfg.preset_name.empty() ? "lebesgue" : cfg.preset_name);
  } catch (const std::invalid_argument& e) {
    throw io::ParseError(e.what());
  }
}

EntropyOptions entropy_options(const RunConfig& cfg) {
  EntropyOptions o;
  if (cfg.nodes) o.resolution = QuadratureResolution{*cfg.nodes, *cfg.nodes};
  return o;
}

MomentKernel kernel_for(const MeasureSpec& spec, const RunConfig& cfg) {
  if (cfg.nodes && !spec.exact_moments()) return quadrature_kernel(spec, cfg.N, {*cfg.nodes, *cfg.nodes});
  return kernel_window(spec, cfg.N);
}

Point point_for(const MeasureSpec& spec, const RunConfig& cfg) {
  if (cfg.point.empty()) return Point(spec.d, 0.0);
  if (cfg.point.size() != 2 * spec.d) throw io::ParseError("--point needs 2d numbers (re, im per coordinate)");
  Point z(spec.d);
  for (std::size_t j = 0; j < spec.d; ++j) z[j] = cplx(cfg.point[2 * j], cfg.point[2 * j + 1]);
  if (norm(z) > 1.0 + 1e-15) throw io::ParseError("--point must lie in the closed unit ball");
  return z;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_moments(const RunConfig& cfg, const Output& out) {
  const MeasureSpec spec = normalize(load(cfg));
  const MomentKernel K = kernel_for(spec, cfg);
  const EntropyResult ent = entropy(spec, entropy_options(cfg));
  const double residual = K.provenance == Provenance::exact ? check_measure_condition(K, spec, cfg.N) : check_measure_condition(K);
  if (cfg.format == "csv") {
    out.write("kernel.csv", io::kernel_csv(K));
    if (!cfg.out_dir.empty()) out.write("entropy.json", dump(io::entropy_json(ent)));
  } else {
    json j = io::kernel_json(K);
    j["measure_condition_residual"] = residual;
    j["nontrivial"] = K.nontrivial();
    j["entropy"] = io::entropy_json(ent);
    out.write("kernel.json", dump(j));
  }
  return kExitOk;
}

int cmd_ops(const RunConfig& cfg, const Output& out) {
  const MeasureSpec spec = normalize(load(cfg));
  const OrthonormalSystem sys = gram_schmidt(kernel_for(spec, cfg), cfg.N);
  if (cfg.format == "csv") {
    out.write("polynomials.csv", io::polynomials_csv(sys));
  } else {
    out.write("polynomials.json", dump(io::polynomials_json(sys)));
  }
  return kExitOk;
}

int cmd_verblunsky(const RunConfig& cfg, const Output& out) {
  const MeasureSpec spec = normalize(load(cfg));
  const MomentKernel K = kernel_for(spec, cfg);
  const VerblunskyTable t = verblunsky_table(K, cfg.N);
  if (cfg.format == "csv") {
    out.write("gamma.csv", io::gamma_csv(t, spec.d));
    if (!cfg.out_dir.empty()) out.write("diagonal.csv", io::diagonal_csv(K));
  } else {
    out.write("gamma.json", dump(io::gamma_json(t, spec.d)));
  }
  return t.max_abs() < 1.0 ? kExitOk : kExitIdentity;
}

int cmd_christoffel(const RunConfig& cfg, const Output& out) {
  const MeasureSpec spec = normalize(load(cfg));
  const MomentKernel K = kernel_for(spec, cfg);
  const OrthonormalSystem sys = gram_schmidt(K, cfg.N);
  const VerblunskyTable t = verblunsky_table(K, cfg.N);
  const Point z = point_for(spec, cfg);
  const auto rows = io::christoffel_rows(sys, t, entropy(spec, entropy_options(cfg)), z);
  if (cfg.format == "csv") {
    out.write("christoffel.csv", io::christoffel_csv(rows));
  } else {
    out.write("christoffel.json", dump(io::christoffel_json(rows, z)));
  }
  return kExitOk;
}

int report_exit(const SzegoReport& rep) { return rep.first_residual <= 1e-8 && rep.second_residual <= 1e-9 ? kExitOk : kExitIdentity; }

std::string second_list_csv(const SzegoReport& rep) {
  std::string s = "rank,index,product,sharp,cd_sum,lambda_inverse,residual\n";
  for (const SecondListRow& r : rep.second_list)
    s += std::to_string(r.rank) + ",\"" + io::index_text(r.index) + "\"," + io::num(r.product) + "," + io::num(r.sharp) + "," +
         io::num(r.cd_sum) + "," + io::num(r.lambda_inverse) + "," + io::num(r.residual) + "\n";
  return s;
}

int cmd_szego(const RunConfig& cfg, const Output& out) {
  SzegoOptions opt;
  opt.entropy = entropy_options(cfg);
  const SzegoReport rep = summary_report(load(cfg), cfg.N, opt);
  if (cfg.format == "csv") {
    out.write("second_list.csv", second_list_csv(rep));
  } else {
    out.write("szego.json", dump(io::szego_json(rep)));
  }
  return report_exit(rep);
}

int cmd_verify(const RunConfig& cfg, const Output& out) {
  const VerifyResult res = verify_spec(load(cfg), cfg.N, cfg.tol, entropy_options(cfg));
  if (cfg.format == "csv") {
    std::string s = "check,value,tolerance,pass\n";
    for (const Check& c : res.checks) s += c.name + "," + io::num(c.value) + "," + io::num(c.tolerance) + "," + (c.pass() ? "1" : "0") + "\n";
    out.write("verify.csv", s);
  } else {
    json checks = json::array();
    for (const Check& c : res.checks) checks.push_back({{"check", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass()}});
    out.write("verify.json", dump({{"N", cfg.N}, {"pass", res.pass()}, {"checks", checks}}));
  }
  return res.pass() ? kExitOk : kExitIdentity;
}

int cmd_reconstruct(const RunConfig& cfg, const Output& out) {
  MomentKernel K;
  json extra;
  if (!cfg.gamma_path.empty() || !cfg.diag_path.empty()) {
    if (cfg.gamma_path.empty() || cfg.diag_path.empty()) throw io::ParseError("reconstruct needs both --gamma and --diag");
    std::size_t d = 1;
    const std::vector<double> diag = io::parse_diagonal_csv(io::read_file(cfg.diag_path), &d);
    const VerblunskyTable t = io::parse_gamma_csv(io::read_file(cfg.gamma_path));
    if (diag.size() != t.N + 1) throw io::ParseError("diagonal length does not match gamma table");
    try {
      K = reconstruct_kernel(diag, t, t.N, d);
    } catch (const std::invalid_argument& e) {
      throw io::ParseError(e.what());
    }
  } else {
    const MeasureSpec spec = normalize(load(cfg));
    const MomentKernel source = kernel_for(spec, cfg);
    std::vector<double> diag(cfg.N + 1);
    for (std::size_t k = 0; k <= cfg.N; ++k) diag[k] = source(k, k).real();
    K = reconstruct_kernel(diag, verblunsky_table(source, cfg.N), cfg.N, spec.d);
    extra["round_trip_max_abs"] = (K.entries - source.entries).cwiseAbs().maxCoeff();
  }
  if (cfg.format == "csv") {
    out.write("kernel.csv", io::kernel_csv(K));
  } else {
    json j = io::kernel_json(K);
    if (!extra.is_null()) j.update(extra);
    out.write("kernel.json", dump(j));
  }
  return kExitOk;
}

int cmd_counterexample(const RunConfig& cfg, const Output& out) {
  const SzegoReport rep = counterexample_report(cfg.N);
  if (cfg.format == "csv") {
    out.write("second_list.csv", second_list_csv(rep));
  } else {
    out.write("counterexample.json", dump(io::szego_json(rep)));
  }
  return report_exit(rep);
}

int run(const RunConfig& cfg) {
  const Output out(cfg.out_dir);
  if (cfg.command == "moments") return cmd_moments(cfg, out);
  if (cfg.command == "ops") return cmd_ops(cfg, out);
  if (cfg.command == "verblunsky") return cmd_verblunsky(cfg, out);
  if (cfg.command == "christoffel") return cmd_christoffel(cfg, out);
  if (cfg.command == "szego") return cmd_szego(cfg, out);
  if (cfg.command == "verify") return cmd_verify(cfg, out);
  if (cfg.command == "reconstruct") return cmd_reconstruct(cfg, out);
  if (cfg.command == "counterexample") return cmd_counterexample(cfg, out);
  throw io::ParseError("unknown command " + cfg.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal polynomials, Verblunsky coefficients and Szego entropy for measures on the unit sphere of C^d"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&cfg](CLI::App* sub) {
    auto* spec = sub->add_option("--spec", cfg.spec_path, "measure spec JSON file")->check(CLI::ExistingFile);
    auto* pre = sub->add_option("--preset", cfg.preset_name, "built-in measure")->check(CLI::IsMember(preset_names()));
    spec->excludes(pre);
    sub->add_option("-N", cfg.N, "last shortlex rank of the truncation")->check(CLI::NonNegativeNumber);
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--nodes", cfg.nodes, "quadrature nodes per angle and per radial coordinate")->check(CLI::PositiveNumber);
    sub->add_option("--tol", cfg.tol, "replace every verification tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out_dir, "write artifacts into this directory instead of stdout");
  };

  const std::pair<const char*, const char*> commands[] = {
      {"moments", "moment kernel window, measure-condition residual and entropy"},
      {"ops", "orthonormal, monic and sharp polynomial coefficients"},
      {"verblunsky", "table of Verblunsky coefficients and defects"},
      {"christoffel", "Christoffel approximates per level and the tail bracket"},
      {"szego", "both coinciding lists, entropy side and verdict"},
      {"verify", "run every identity and invariant; exit 2 on violation"},
      {"reconstruct", "kernel from diagonal and coefficient table"},
      {"counterexample", "report for 2|z1|^2 on the sphere in C^2 with its checks"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub);
    sub->callback([&cfg, n = std::string(name)] { cfg.command = n; });
    if (std::string(name) == "christoffel")
      sub->add_option("--point", cfg.point, "evaluation point as re im pairs (default origin)")->expected(1, -1);
    if (std::string(name) == "reconstruct") {
      sub->add_option("--gamma", cfg.gamma_path, "gamma table CSV")->check(CLI::ExistingFile);
      sub->add_option("--diag", cfg.diag_path, "diagonal CSV")->check(CLI::ExistingFile);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    return run(cfg);
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const NotPositiveDefinite& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotPD;
  } catch (const IdentityViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIdentity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
