#include "homog3/cli.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "homog3/balls.hpp"
#include "homog3/boxes.hpp"
#include "homog3/continuation.hpp"
#include "homog3/errors.hpp"
#include "homog3/frame_geometry.hpp"
#include "homog3/metric_json.hpp"
#include "homog3/models.hpp"
#include "homog3/surfaces.hpp"
#include "homog3/torus_jacobi.hpp"

namespace homog3 {
namespace {

using nlohmann::json;

std::vector<double> parse_doubles(const std::string& text, std::size_t expected,
                                  const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + ": cannot parse '" + item + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size())
      throw std::invalid_argument(std::string(what) + ": cannot parse '" + item + "'");
    if (!std::isfinite(v))
      throw std::invalid_argument(std::string(what) + ": entries must be finite");
    out.push_back(v);
  }
  if (expected != 0 && out.size() != expected)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(expected) +
                                " comma-separated numbers");
  return out;
}

std::vector<int> parse_ints(const std::string& text, const char* what) {
  std::vector<int> out;
  for (double v : parse_doubles(text, 0, what)) {
    const int n = static_cast<int>(v);
    if (static_cast<double>(n) != v)
      throw std::invalid_argument(std::string(what) + ": entries must be integers");
    out.push_back(n);
  }
  if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return out;
}

// Options shared by every metric-consuming subcommand.
struct MetricOpts {
  std::string inline_json;
  std::string file;
  std::string a_csv;
};

void add_metric_options(CLI::App* sub, MetricOpts& opts) {
  sub->add_option("--metric", opts.inline_json, "Metric as an inline JSON object");
  sub->add_option("--metric-file", opts.file, "Path to a JSON metric file");
  sub->add_option("--A", opts.a_csv, "Semidirect matrix A as a,b,c,d (row-major)");
}

MetricModel resolve_metric(const MetricOpts& opts) {
  const int given = (!opts.inline_json.empty()) + (!opts.file.empty()) + (!opts.a_csv.empty());
  if (given != 1)
    throw std::invalid_argument("provide exactly one of --metric, --metric-file, --A");
  if (!opts.a_csv.empty()) {
    const auto v = parse_doubles(opts.a_csv, 4, "--A");
    Mat2 A;
    A << v[0], v[1], v[2], v[3];
    return SemidirectModel{A};
  }
  if (!opts.file.empty()) {
    std::ifstream in(opts.file);
    if (!in) throw std::invalid_argument("cannot open metric file '" + opts.file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_metric_string(ss.str());
  }
  return parse_metric_string(opts.inline_json);
}

SemidirectModel require_semidirect(const MetricModel& model, const char* cmd) {
  if (const auto* sd = std::get_if<SemidirectModel>(&model)) return *sd;
  throw std::invalid_argument(std::string(cmd) + " requires a semidirect metric");
}

Mat2 parse_lattice(const std::string& text) {
  if (text.empty()) return Mat2::Identity();
  const auto v = parse_doubles(text, 4, "--lattice");
  Mat2 L;
  L << v[0], v[1], v[2], v[3];
  return L;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json mat2_json(const Mat2& M) {
  return json::array({json::array({M(0, 0), M(0, 1)}), json::array({M(1, 0), M(1, 1)})});
}

json mat3_json(const Mat3& M) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(json::array({M(i, 0), M(i, 1), M(i, 2)}));
  return rows;
}

void write_output(const std::string& path, std::ostream& fallback, const std::string& text) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw numerical_error("failed writing output file '" + path + "'");
}

FrameMetricData frame_data_of(const MetricModel& model, const char* cmd) {
  if (const auto* sd = std::get_if<SemidirectModel>(&model)) return frame_data(*sd);
  if (const auto* sl = std::get_if<Sl2FrameMetric>(&model)) return frame_data(*sl);
  throw std::invalid_argument(std::string(cmd) +
                              " requires a Lie group metric (semidirect or sl2tilde)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"homog3: geometry of homogeneous 3-manifolds presented as metric Lie groups"};
  app.require_subcommand(1);
  long long seed = 0;  // reserved for randomized sweeps; all current outputs are deterministic
  app.add_option("--seed", seed, "Seed for randomized sweeps (reserved)")->default_val(0);

  std::string result;       // rendered output of the chosen subcommand
  std::string result_path;  // --out target, empty = stdout

  // describe
  {
    auto* sub = app.add_subcommand("describe", "Cheeger constant and critical mean curvature");
    auto opts = std::make_shared<MetricOpts>();
    auto out_path = std::make_shared<std::string>();
    add_metric_options(sub, *opts);
    sub->add_option("--out", *out_path, "Write output to this file instead of stdout");
    sub->callback([&, opts, out_path] {
      const CheegerReport rep = cheeger_report(resolve_metric(*opts));
      json j;
      j["Ch"] = rep.Ch;
      j["Hcrit"] = rep.Hcrit;
      j["unimodular"] = rep.unimodular;
      result = j.dump(2) + "\n";
      result_path = *out_path;
    });
  }

  // curvature
  {
    auto* sub = app.add_subcommand("curvature", "Ricci tensor, spectrum, and sectional data");
    auto opts = std::make_shared<MetricOpts>();
    auto out_path = std::make_shared<std::string>();
    add_metric_options(sub, *opts);
    sub->add_option("--out", *out_path, "Write output to this file instead of stdout");
    sub->callback([&, opts, out_path] {
      const CurvatureReport rep = curvature_report(frame_data_of(resolve_metric(*opts), "curvature"));
      json j;
      j["ricci"] = mat3_json(rep.ricci);
      j["ricci_eigenvalues"] = json::array({rep.eigenvalues(0), rep.eigenvalues(1), rep.eigenvalues(2)});
      j["scalar"] = rep.scalar;
      j["sectional"] = json::array({rep.sectional[0], rep.sectional[1], rep.sectional[2]});
      result = j.dump(2) + "\n";
      result_path = *out_path;
    });
  }

  // leaf
  {
    auto* sub = app.add_subcommand("leaf", "Shape data of the horizontal leaf z = const");
    auto opts = std::make_shared<MetricOpts>();
    auto out_path = std::make_shared<std::string>();
    auto z = std::make_shared<double>(0.0);
    add_metric_options(sub, *opts);
    sub->add_option("--z", *z, "Leaf height (the shape data is height independent)");
    sub->add_option("--out", *out_path, "Write output to this file instead of stdout");
    sub->callback([&, opts, out_path, z] {
      const SemidirectModel m = require_semidirect(resolve_metric(*opts), "leaf");
      const LeafShape shape = leaf_shape(m);
      json j;
      j["z"] = *z;
      j["H"] = shape.H;
      j["sigma"] = mat2_json(shape.sigma);
      j["sigma_norm_sq"] = shape.sigma_norm_sq;
      j["q"] = jacobi_potential(m);
      result = j.dump(2) + "\n";
      result_path = *out_path;
    });
  }

  // ball
  {
    auto* sub = app.add_subcommand("ball", "Geodesic ball area, volume, isoperimetric ratio");
    auto opts = std::make_shared<MetricOpts>();
    auto out_path = std::make_shared<std::string>();
    auto r = std::make_shared<double>(0.0);
    auto mesh = std::make_shared<std::string>("32x32x16");
    add_metric_options(sub, *opts);
    sub->add_option("--r", *r, "Geodesic radius")->required();
    sub->add_option("--mesh", *mesh, "Angular/radial resolution as <ntheta>x<nphi>x<nr>");
    sub->add_option("--out", *out_path, "Write output to this file instead of stdout");
    sub->callback([&, opts, out_path, r, mesh] {
      const SemidirectModel m = require_semidirect(resolve_metric(*opts), "ball");
      int nt = 0, np = 0, nr = 0;
      if (std::sscanf(mesh->c_str(), "%dx%dx%d", &nt, &np, &nr) != 3)
        throw std::invalid_argument("--mesh expects <ntheta>x<nphi>x<nr>");
      const BallReport rep = geodesic_ball(m, Point{0.0, 0.0, 0.0}, *r, nt, np, nr);
      result = "r,volume,area,ratio\n" + fmt(rep.r) + "," + fmt(rep.volume) + "," +
               fmt(rep.area) + "," + fmt(rep.isoperimetric_ratio) + "\n";
      result_path = *out_path;
    });
  }

  // divergence
  {
    auto* sub = app.add_subcommand("divergence", "Divergence-theorem balance on a coordinate box");
    auto opts = std::make_shared<MetricOpts>();
    auto out_path = std::make_shared<std::string>();
    auto box_csv = std::make_shared<std::string>();
    auto field_txt = std::make_shared<std::string>();
    auto order = std::make_shared<int>(12);
    add_metric_options(sub, *opts);
    sub->add_option("--box", *box_csv, "Cuboid as x0,x1,y0,y1,z0,z1")->required();
    sub->add_option("--field", *field_txt, "normal | killing:<w1>,<w2>,<s>")->required();
    sub->add_option("--order", *order, "Base Gauss-Legendre order per axis");
    sub->add_option("--out", *out_path, "Write output to this file instead of stdout");
    sub->callback([&, opts, out_path, box_csv, field_txt, order] {
      const SemidirectModel m = require_semidirect(resolve_metric(*opts), "divergence");
      const auto b = parse_doubles(*box_csv, 6, "--box");
      CuboidBox box;
      box.lo = Vec3(b[0], b[2], b[4]);
      box.hi = Vec3(b[1], b[3], b[5]);
      VectorField field;
      if (*field_txt == "normal") {
        field = foliation_normal_field();
      } else if (field_txt->rfind("killing:", 0) == 0) {
        const auto w = parse_doubles(field_txt->substr(8), 3, "--field killing");
        field = killing_field(m, Vec2(w[0], w[1]), w[2]);
      } else {
        throw std::invalid_argument("--field must be 'normal' or 'killing:<w1>,<w2>,<s>'");
      }
      const DivergenceBalance bal = divergence_balance(m, box, field, *order);
      json j;
      j["field"] = *field_txt;
      j["box"] = json::array({b[0], b[1], b[2], b[3], b[4], b[5]});
      j["volume_integral"] = bal.volume_integral;
      j["boundary_flux"] = bal.boundary_flux;
      j["discrepancy"] = bal.discrepancy;
      j["boundary_area"] = bal.boundary_area;
      j["order"] = bal.order;
      result = j.dump(2) + "\n";
      result_path = *out_path;
    });
  }

  // cheeger-box
  {
    auto* sub = app.add_subcommand("cheeger-box", "Area/volume ratio sweep of truncated boxes");
    auto opts = std::make_shared<MetricOpts>();
    auto out_path = std::make_shared<std::string>();
    auto ns_csv = std::make_shared<std::string>("4,8,16,32,64");
    auto t0s_csv = std::make_shared<std::string>("1,2,4,8");
    auto lattice_csv = std::make_shared<std::string>();
    add_metric_options(sub, *opts);
    sub->add_option("--ns", *ns_csv, "Comma-separated side multiples n");
    sub->add_option("--t0s", *t0s_csv, "Comma-separated heights t0");
    sub->add_option("--lattice", *lattice_csv, "Cell generators as l11,l12,l21,l22 (columns)");
    sub->add_option("--out", *out_path, "Write output to this file instead of stdout");
    sub->callback([&, opts, out_path, ns_csv, t0s_csv, lattice_csv] {
      const SemidirectModel m = require_semidirect(resolve_metric(*opts), "cheeger-box");
      const auto ns = parse_ints(*ns_csv, "--ns");
      const auto t0s = parse_doubles(*t0s_csv, 0, "--t0s");
      if (t0s.empty()) throw std::invalid_argument("--t0s: empty list");
      const Mat2 lattice = parse_lattice(*lattice_csv);
      const auto sweep = box_ratio_sweep(m, lattice, ns, t0s);
      std::string text = "n,t0,bottom,top,sides,volume,ratio,trace_A\n";
      const double tr = m.A.trace();
      for (const auto& e : sweep) {
        text += std::to_string(e.n) + "," + fmt(e.t0) + "," + fmt(e.report.bottom) + "," +
                fmt(e.report.top) + "," + fmt(e.report.sides) + "," + fmt(e.report.volume) +
                "," + fmt(e.report.ratio) + "," + fmt(tr) + "\n";
      }
      result = text;
      result_path = *out_path;
    });
  }

  // quotient-end
  {
    auto* sub = app.add_subcommand("quotient-end", "Volume and torus area of a lattice quotient end");
    auto opts = std::make_shared<MetricOpts>();
    auto out_path = std::make_shared<std::string>();
    auto T = std::make_shared<double>(0.0);
    auto lattice_csv = std::make_shared<std::string>();
    add_metric_options(sub, *opts);
    sub->add_option("--T", *T, "Height of the end {z >= T}");
    sub->add_option("--lattice", *lattice_csv, "Cell generators as l11,l12,l21,l22 (columns)");
    sub->add_option("--out", *out_path, "Write output to this file instead of stdout");
    sub->callback([&, opts, out_path, T, lattice_csv] {
      const SemidirectModel m = require_semidirect(resolve_metric(*opts), "quotient-end");
      const QuotientEndReport rep = quotient_end_report(m, parse_lattice(*lattice_csv), *T);
      json j;
      j["T"] = rep.T;
      j["cell_area"] = rep.cell_area;
      j["end_volume"] = rep.end_volume;
      j["torus_area"] = rep.torus_area;
      j["identity_residual"] = rep.identity_residual;
      j["end_volume_quadrature"] = rep.end_volume_quadrature;
      j["torus_area_quadrature"] = rep.torus_area_quadrature;
      result = j.dump(2) + "\n";
      result_path = *out_path;
    });
  }

  // jacobi
  {
    auto* sub = app.add_subcommand("jacobi", "Stability operator of a quotient leaf: kernel data");
    auto opts = std::make_shared<MetricOpts>();
    auto out_path = std::make_shared<std::string>();
    auto grid = std::make_shared<int>(32);
    auto z0 = std::make_shared<double>(0.0);
    auto lattice_csv = std::make_shared<std::string>();
    add_metric_options(sub, *opts);
    sub->add_option("--grid", *grid, "Nodes per lattice direction");
    sub->add_option("--z0", *z0, "Leaf height");
    sub->add_option("--lattice", *lattice_csv, "Cell generators as l11,l12,l21,l22 (columns)");
    sub->add_option("--out", *out_path, "Write output to this file instead of stdout");
    sub->callback([&, opts, out_path, grid, z0, lattice_csv] {
      const SemidirectModel m = require_semidirect(resolve_metric(*opts), "jacobi");
      const JacobiOperator L = build_jacobi_operator(m, parse_lattice(*lattice_csv), *z0,
                                                     *grid, *grid);
      const KernelReport rep = kernel_basis(L);
      json j;
      j["grid"] = *grid;
      j["q"] = L.q;
      j["kernel_dim"] = rep.functions.size();
      j["kernel_mean"] = rep.functions.empty() ? 0.0 : rep.functions.front().mean();
      j["second_eigenvalue"] = rep.second_eigenvalue;
      j["multiplicity_warning"] = rep.multiplicity_warning;
      result = j.dump(2) + "\n";
      result_path = *out_path;
    });
  }

  // continue-cmc
  {
    auto* sub = app.add_subcommand("continue-cmc",
                                   "Continue the flat CMC torus into a perturbed metric");
    auto opts = std::make_shared<MetricOpts>();
    auto out_path = std::make_shared<std::string>();
    auto eps = std::make_shared<double>(0.0);
    auto pert = std::make_shared<std::string>("cos");
    auto grid = std::make_shared<int>(32);
    auto tol = std::make_shared<double>(1e-8);
    auto tpar = std::make_shared<double>(0.0);
    auto max_steps = std::make_shared<int>(25);
    auto lattice_csv = std::make_shared<std::string>();
    add_metric_options(sub, *opts);
    sub->add_option("--eps", *eps, "Conformal perturbation amplitude")->required();
    sub->add_option("--pert", *pert, "Perturbation family (only 'cos')");
    sub->add_option("--grid", *grid, "Nodes per lattice direction");
    sub->add_option("--tol", *tol, "Newton sup-residual tolerance");
    sub->add_option("--t", *tpar, "Kernel component of the solution");
    sub->add_option("--max-steps", *max_steps, "Newton step limit");
    sub->add_option("--lattice", *lattice_csv, "Cell generators as l11,l12,l21,l22 (columns)");
    sub->add_option("--out", *out_path, "Write output to this file instead of stdout");
    sub->callback([&, opts, out_path, eps, pert, grid, tol, tpar, max_steps, lattice_csv] {
      const SemidirectModel m = require_semidirect(resolve_metric(*opts), "continue-cmc");
      if (*pert != "cos")
        throw std::invalid_argument("--pert: only the 'cos' family is available");
      const Mat2 lattice = parse_lattice(*lattice_csv);
      const ContinuationState st = cmc_continue(m, lattice, cos_lattice_perturbation(lattice),
                                                *eps, *grid, *grid, *tol, *tpar, *max_steps);
      json j;
      j["eps"] = st.eps;
      j["t"] = st.t;
      j["grid"] = *grid;
      j["c"] = st.c;
      j["newton_steps"] = st.newton_steps;
      j["residual"] = st.residual;
      j["residual_history"] = st.residual_history;
      j["near_kernel_count"] = st.near_kernel_count;
      j["u_min"] = st.u.size() ? st.u.minCoeff() : 0.0;
      j["u_max"] = st.u.size() ? st.u.maxCoeff() : 0.0;
      result = j.dump(2) + "\n";
      result_path = *out_path;
    });
  }

  // cylinder-ratio
  {
    auto* sub = app.add_subcommand("cylinder-ratio",
                                   "Area/volume quotient of the slab S^2(kappa) x [0, R]");
    auto opts = std::make_shared<MetricOpts>();
    auto out_path = std::make_shared<std::string>();
    auto R = std::make_shared<double>(0.0);
    add_metric_options(sub, *opts);
    sub->add_option("--R", *R, "Slab height")->required();
    sub->add_option("--out", *out_path, "Write output to this file instead of stdout");
    sub->callback([&, opts, out_path, R] {
      const MetricModel model = resolve_metric(*opts);
      const auto* prod = std::get_if<ProductS2R>(&model);
      if (!prod) throw std::invalid_argument("cylinder-ratio requires an s2xr metric");
      json j;
      j["R"] = *R;
      j["ratio"] = cylinder_ratio(*prod, *R);
      result = j.dump(2) + "\n";
      result_path = *out_path;
    });
  }

  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.emplace_back("homog3");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& s : full) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    write_output(result_path, out, result);
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace homog3
