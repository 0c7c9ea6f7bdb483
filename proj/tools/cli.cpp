#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nrh/sampling.hpp"
#include "nrh/volume.hpp"

namespace nrh::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Options {
  std::string space;
  std::string direction;
  double t_start = 0.0;
  double t_stop = 1.0;
  int t_steps = 10;
  long samples = 100000;
  std::uint64_t seed = 1;
  int order = kDefaultSeriesOrder;
  std::string format = "csv";
  std::string output;
  bool rk = false;
  double rk_step = 1e-3;
  std::string integrator = "simpson";
  int nodes = 201;
  int threads = 0;
};

// Direction in m, either exact (rational input with rational norm) or float.
struct Direction {
  bool exact = false;
  AlgVec<Radical> m_exact;
  Eigen::VectorXd m;
};

Direction parse_direction(const std::string& text, int dim) {
  Direction dir;
  if (text.empty()) throw UsageError("--direction is required");
  if (text.rfind("random:", 0) == 0) {
    std::uint64_t seed = 0;
    try {
      std::size_t used = 0;
      seed = std::stoull(text.substr(7), &used);
      if (used != text.size() - 7) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError("bad direction '" + text + "': expected random:<non-negative integer>");
    }
    std::mt19937_64 rng = sample_rng(seed, 0);
    dir.m = random_unit_vector(rng, dim);
    return dir;
  }
  std::vector<Rational> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      xs.push_back(parse_rational(item));
    } catch (const std::exception& e) {
      throw UsageError("bad direction component '" + item + "': " + e.what());
    }
  }
  if (static_cast<int>(xs.size()) != dim) {
    throw UsageError("direction has " + std::to_string(xs.size()) + " components, m has dimension " +
                     std::to_string(dim));
  }
  Rational norm2 = 0;
  for (const auto& x : xs) norm2 += x * x;
  if (norm2 == 0) throw UsageError("direction must be nonzero");

  const BigInt p = boost::multiprecision::numerator(norm2);
  const BigInt q = boost::multiprecision::denominator(norm2);
  const BigInt sp = boost::multiprecision::sqrt(p);
  const BigInt sq = boost::multiprecision::sqrt(q);
  dir.m.resize(dim);
  if (sp * sp == p && sq * sq == q) {
    dir.exact = true;
    const Rational norm(sp, sq);
    dir.m_exact.resize(dim);
    for (int i = 0; i < dim; ++i) {
      dir.m_exact(i) = Radical(xs[static_cast<std::size_t>(i)] / norm);
      dir.m(i) = dir.m_exact(i).to_double();
    }
  } else {
    for (int i = 0; i < dim; ++i) dir.m(i) = static_cast<double>(xs[static_cast<std::size_t>(i)]);
    dir.m /= dir.m.norm();
  }
  return dir;
}

std::vector<double> grid(const Options& o) {
  if (o.t_steps < 1) throw UsageError("--t-steps must be at least 1");
  if (!std::isfinite(o.t_start) || !std::isfinite(o.t_stop)) throw UsageError("t-grid bounds must be finite");
  std::vector<double> ts;
  for (int i = 0; i <= o.t_steps; ++i) ts.push_back(o.t_start + (o.t_stop - o.t_start) * i / o.t_steps);
  return ts;
}

template <class T>
void write_matrix_csv(std::ostream& os, const std::string& title, const Endo<T>& m) {
  os << "# " << title << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ",";
      if constexpr (std::is_same_v<T, Radical>) {
        os << m(i, j).to_string();
      } else {
        os << num(m(i, j));
      }
    }
    os << "\n";
  }
}

template <class T>
nlohmann::json matrix_json(const Endo<T>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<T, Radical>) {
        row.push_back(m(i, j).to_string());
      } else {
        row.push_back(m(i, j));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out) {
  const AlgebraSpec spec = resolve_space(o.space);
  const ValidationReport rep = validate(spec);
  std::optional<int> oracle_mismatch;
  if (o.space == "sp2_su2") {
    const AlgebraSpec rebuilt = table_from_matrices(build_matrix_rep());
    int bad = 0;
    for (int i = 0; i < spec.dim_g(); ++i)
      for (int j = i + 1; j < spec.dim_g(); ++j)
        for (int k = 0; k < spec.dim_g(); ++k)
          if (spec.constant(i, j, k) != rebuilt.constant(i, j, k)) {
            ++bad;
            break;
          }
    oracle_mismatch = bad;
  }
  const bool ok = rep.ok() && oracle_mismatch.value_or(0) == 0;

  if (o.format == "json") {
    nlohmann::json j;
    j["space"] = spec.name();
    j["violations"] = nlohmann::json::array();
    for (const auto& v : rep.violations) {
      j["violations"].push_back({{"axiom", to_string(v.axiom)}, {"indices", v.indices}, {"detail", v.detail}});
    }
    for (const auto& [axiom, n] : rep.checks) j["checks"][to_string(axiom)] = n;
    if (oracle_mismatch) j["matrix_oracle_mismatched_pairs"] = *oracle_mismatch;
    j["ok"] = ok;
    out << j.dump(2) << "\n";
  } else {
    out << "space: " << spec.name() << " (dim g = " << spec.dim_g() << ", dim m = " << spec.dim_m() << ")\n";
    for (const auto& [axiom, n] : rep.checks) {
      out << to_string(axiom) << ": " << n << " checked, " << rep.count(axiom) << " violated\n";
    }
    for (const auto& v : rep.violations) {
      out << "violation " << to_string(v.axiom) << " at (";
      for (std::size_t i = 0; i < v.indices.size(); ++i) out << (i ? "," : "") << v.indices[i];
      out << "): " << v.detail << "\n";
    }
    if (oracle_mismatch) out << "matrix oracle: " << *oracle_mismatch << " of 45 pairs differ\n";
    out << rep.violations.size() << " violations\n";
  }
  return ok ? kOk : kFailure;
}

template <class T>
void emit_curvature(const Options& o, const AlgebraSpec& spec, const AlgVec<T>& v, const OsculatingProfile& profile,
                    const OsculatingProfile& generic, std::ostream& out) {
  const CurvatureJet<T> jet = curvature_jet(spec, v);
  if (o.format == "json") {
    nlohmann::json j;
    j["space"] = spec.name();
    j["exact"] = std::is_same_v<T, Radical>;
    nlohmann::json dir = nlohmann::json::array();
    for (int i = 0; i < spec.dim_m(); ++i) {
      if constexpr (std::is_same_v<T, Radical>) {
        dir.push_back(v(i).to_string());
      } else {
        dir.push_back(v(i));
      }
    }
    j["direction"] = dir;
    j["R0"] = matrix_json(jet.r0);
    j["R1"] = matrix_json(jet.r1);
    j["R2"] = matrix_json(jet.r2);
    j["osculating_rank"] = profile.status == OsculatingProfile::Status::determined ? nlohmann::json(profile.rank)
                                                                                   : nlohmann::json(nullptr);
    j["locally_symmetric"] = profile.status == OsculatingProfile::Status::locally_symmetric;
    j["coefficients"] = profile.coefficients;
    j["report"] = describe(profile);
    j["generic_osculating_rank"] = generic.status == OsculatingProfile::Status::determined
                                       ? nlohmann::json(generic.rank)
                                       : nlohmann::json(nullptr);
    out << j.dump(2) << "\n";
    return;
  }
  write_matrix_csv(out, "R_0", jet.r0);
  write_matrix_csv(out, "R^(1)_0", jet.r1);
  write_matrix_csv(out, "R^(2)_0", jet.r2);
  std::istringstream lines(describe(profile));
  for (std::string line; std::getline(lines, line);) out << "# " << line << "\n";
  const std::string g = describe(generic);
  out << "# generic direction, " << g.substr(0, g.find('\n')) << "\n";
}

int cmd_curvature(const Options& o, std::ostream& out) {
  const AlgebraSpec spec = resolve_space(o.space);
  const Direction dir = parse_direction(o.direction, spec.dim_m());
  const int max_n = 6;
  // Special directions can be degenerate (R^(1)_0 = 0 along Q1 on V1), so the
  // rank of the space is also reported from a fixed generic direction.
  std::mt19937_64 rng = sample_rng(0x6e726863ULL, 0);
  const OsculatingProfile generic =
      osculating_rank(spec, from_m<double>(spec, AlgVec<double>(random_unit_vector(rng, spec.dim_m()))), max_n);
  if (dir.exact) {
    const AlgVec<Radical> v = from_m<Radical>(spec, dir.m_exact);
    emit_curvature(o, spec, v, osculating_rank(spec, v, max_n), generic, out);
  } else {
    const AlgVec<double> v = from_m<double>(spec, AlgVec<double>(dir.m));
    emit_curvature(o, spec, v, osculating_rank(spec, v, max_n), generic, out);
  }
  return kOk;
}

int cmd_jacobi(const Options& o, std::ostream& out, std::ostream& err) {
  const AlgebraSpec spec = resolve_space(o.space);
  const Direction dir = parse_direction(o.direction, spec.dim_m());
  const AlgVec<double> v = from_m<double>(spec, AlgVec<double>(dir.m));
  const ClosedFormJacobi<double> rt = closed_form_jacobi(spec, v);
  const std::vector<double> ts = grid(o);
  const int d = spec.dim_m();
  if (o.order < 2) throw UsageError("--order must be at least 2");

  // One chain of expansions per sign of t.
  double t_lo = 0.0, t_hi = 0.0;
  for (double t : ts) {
    t_lo = std::min(t_lo, t);
    t_hi = std::max(t_hi, t);
  }
  std::optional<PiecewiseTaylor> neg, pos;
  try {
    if (t_lo < 0.0) neg = taylor_pieces(rt, t_lo, o.order);
    pos = taylor_pieces(rt, t_hi, o.order);
  } catch (const TruncationError& e) {
    if (!o.rk) {
      err << "error: " << e.what() << " (--order), or pass --rk\n";
      return kFailure;
    }
    err << "warning: " << e.what() << "; A_t columns come from RK4\n";
    neg.reset();
    pos.reset();
  }
  const bool taylor = pos.has_value();

  struct Row {
    double t;
    Eigen::MatrixXd a;
    double det;
    double det_rk = 0.0;
    double diff_rk = 0.0;
  };
  std::vector<Row> rows;
  for (double t : ts) {
    Row row{t, {}, 0.0};
    std::optional<OdeState> rk;
    if (o.rk) rk = ode_oracle(rt, t, o.rk_step);
    if (taylor) {
      row.a = (t < 0.0 ? *neg : *pos).evaluate_A(t);
    } else {
      row.a = rk->a;
    }
    row.det = row.a.determinant();
    if (rk) {
      row.det_rk = rk->a.determinant();
      row.diff_rk = taylor ? (row.a - rk->a).cwiseAbs().maxCoeff() : std::nan("");
    }
    rows.push_back(std::move(row));
  }

  if (o.format == "json") {
    nlohmann::json j;
    j["space"] = spec.name();
    j["N"] = o.order;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json jr{{"t", r.t}, {"A", matrix_json<double>(r.a)}, {"det", r.det}};
      if (o.rk) {
        jr["det_rk"] = r.det_rk;
        jr["max_diff_rk"] = std::isnan(r.diff_rk) ? nlohmann::json(nullptr) : nlohmann::json(r.diff_rk);
      }
      j["rows"].push_back(jr);
    }
    out << j.dump(2) << "\n";
  } else {
    out << "t";
    for (int i = 1; i <= d; ++i)
      for (int k = 1; k <= d; ++k) out << ",a_" << i << "_" << k;
    out << ",det";
    if (o.rk) out << ",det_rk,max_diff_rk";
    out << "\n";
    for (const auto& r : rows) {
      out << num(r.t);
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) out << "," << num(r.a(i, k));
      out << "," << num(r.det);
      if (o.rk) out << "," << num(r.det_rk) << "," << num(r.diff_rk);
      out << "\n";
    }
  }
  return kOk;
}

int cmd_volume(const Options& o, std::ostream& out) {
  const AlgebraSpec spec = resolve_space(o.space);
  const std::vector<double> ts = grid(o);
  if (o.samples < 1) throw UsageError("--samples must be at least 1");
  QuadratureConfig quad;
  quad.sample_count = o.samples;
  quad.seed = o.seed;
  quad.series_order = o.order;
  quad.threads = o.threads;
  quad.t_nodes = o.nodes;
  quad.t_integrator = o.integrator == "gauss" ? TIntegrator::gauss : TIntegrator::simpson;

  std::vector<double> radii;
  for (double t : ts) {
    if (t < 0.0) throw UsageError("volume radii must be non-negative");
    if (!radii.empty() && t <= radii.back()) throw UsageError("volume radii must increase");
    if (t > 0.0) radii.push_back(t);
  }
  std::vector<VolumeRow> rows;
  if (ts.front() == 0.0) rows.push_back({0.0, 1.0, 0.0, spec.dim_m() == 1 ? 2.0 : 0.0, 0.0});
  for (const auto& r : volume_table(spec, radii, quad)) rows.push_back(r);

  if (o.format == "json") {
    nlohmann::json j;
    j["space"] = spec.name();
    j["seed"] = o.seed;
    j["samples"] = o.samples;
    j["N"] = o.order;
    j["integrator"] = o.integrator;
    j["nodes"] = o.nodes;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
      j["rows"].push_back({{"t", r.t},
                           {"theta_mean", r.theta_mean},
                           {"theta_stderr", r.theta_stderr},
                           {"area", r.area},
                           {"volume", r.volume}});
    }
    out << j.dump(2) << "\n";
  } else {
    out << "t,theta_mean,theta_stderr,area,volume\n";
    for (const auto& r : rows) {
      out << num(r.t) << "," << num(r.theta_mean) << "," << num(r.theta_stderr) << "," << num(r.area) << ","
          << num(r.volume) << "\n";
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature, Jacobi fields and geodesic-ball volumes on naturally reductive spaces", "nrh"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--space", o.space, "builtin (sp2_su2, su2_biinv, abelian<d>) or spec JSON path")->required();
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", o.output, "write to this file instead of stdout");
  };
  auto with_grid = [&](CLI::App* sub) {
    sub->add_option("--t-start", o.t_start);
    sub->add_option("--t-stop", o.t_stop);
    sub->add_option("--t-steps", o.t_steps, "number of intervals; rows = steps + 1");
    sub->add_option("--order", o.order, "Taylor order N");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "check the algebraic hypotheses exactly");
  common(validate_cmd);

  CLI::App* curvature_cmd = app.add_subcommand("curvature", "R_0, R^(1)_0, R^(2)_0 and the osculating rank");
  common(curvature_cmd);
  curvature_cmd->add_option("--direction", o.direction, "x1,...,xd (normalized) or random:<seed>")->required();

  CLI::App* jacobi_cmd = app.add_subcommand("jacobi", "Jacobi tensor A_t and det A_t on a t-grid");
  common(jacobi_cmd);
  with_grid(jacobi_cmd);
  jacobi_cmd->add_option("--direction", o.direction, "x1,...,xd (normalized) or random:<seed>")->required();
  jacobi_cmd->add_flag("--rk", o.rk, "add RK4 comparison columns");
  jacobi_cmd->add_option("--rk-step", o.rk_step);

  CLI::App* volume_cmd = app.add_subcommand("volume", "geodesic-sphere areas and ball volumes");
  common(volume_cmd);
  with_grid(volume_cmd);
  volume_cmd->add_option("--samples", o.samples);
  volume_cmd->add_option("--seed", o.seed);
  volume_cmd->add_option("--integrator", o.integrator)->check(CLI::IsMember({"simpson", "gauss"}));
  volume_cmd->add_option("--nodes", o.nodes, "Simpson: nodes over [0, t_stop]; Gauss: nodes per grid interval");
  volume_cmd->add_option("--threads", o.threads, "0 = all cores; never changes results");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  std::ofstream file;
  std::ostringstream buffer;
  std::ostream& sink = o.output.empty() ? out : static_cast<std::ostream&>(buffer);
  int code = kOk;
  try {
    if (*validate_cmd) code = cmd_validate(o, sink);
    if (*curvature_cmd) code = cmd_curvature(o, sink);
    if (*jacobi_cmd) code = cmd_jacobi(o, sink, err);
    if (*volume_cmd) code = cmd_volume(o, sink);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DirectionError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedSpaceError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const TruncationError& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  if (!o.output.empty()) {
    file.open(o.output);
    if (!file) {
      err << "error: cannot write '" << o.output << "'\n";
      return kUsage;
    }
    file << buffer.str();
  }
  return code;
}

}  // namespace nrh::cli
