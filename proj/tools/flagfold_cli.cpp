// Command-line front end for the weighted-flag geometry library. Talks to the
// shared library exclusively through the C API in flagfold/flagfold.h; file
// parsing and formatting live here.

#include "flagfold/flagfold.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitUsage = 64;

struct cli_error : std::runtime_error {
  int code;
  cli_error(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] void fail_input(const std::string& msg) { throw cli_error(kExitInvalidInput, msg); }

int exit_code_for(ff_status status) {
  return status == FF_ERR_INVALID_ARGUMENT ? kExitInvalidInput : kExitNumerical;
}

void check(ff_status status) {
  if (status != FF_OK) throw cli_error(exit_code_for(status), ff_last_error());
}

// Numbers are printed with 12 significant digits so identical configs give
// byte-identical files.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json json_number_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

json json_matrix(const std::vector<double>& m, int rows, int cols) {
  json out = json::array();
  for (int r = 0; r < rows; ++r) {
    json row = json::array();
    for (int c = 0; c < cols; ++c) row.push_back(m[static_cast<size_t>(r) * cols + c]);
    out.push_back(row);
  }
  return out;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail_input(path + ": " + e.what());
  }
}

std::vector<double> parse_number_array(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) fail_input(what + " must be a nonempty array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) fail_input(what + " must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

// Nested row arrays, row-major flattening; rows must have equal lengths.
std::vector<double> parse_matrix(const json& j, int& rows, int& cols, const std::string& what) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    fail_input(what + " must be an array of rows");
  rows = static_cast<int>(j.size());
  cols = static_cast<int>(j.front().size());
  std::vector<double> out;
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      fail_input(what + " has ragged rows");
    for (const auto& v : row) {
      if (!v.is_number()) fail_input(what + " must contain numbers");
      out.push_back(v.get<double>());
    }
  }
  return out;
}

// A covariance matrix file: {"S": [[...], ...]}.
std::vector<double> load_cov_matrix(const std::string& path, int& n) {
  const json j = load_json(path);
  if (!j.contains("S")) fail_input(path + ": missing field \"S\"");
  int rows = 0, cols = 0;
  std::vector<double> S = parse_matrix(j["S"], rows, cols, path + ": S");
  if (rows != cols) fail_input(path + ": S must be square");
  n = rows;
  return S;
}

// A flag representative: either {"mu": [...], "frame": [[...], ...]} or a
// covariance matrix file, which is decomposed.
void load_flag_rep(const std::string& path, int& n, std::vector<double>& mu,
                   std::vector<double>& frame) {
  const json j = load_json(path);
  if (j.contains("mu") && j.contains("frame")) {
    mu = parse_number_array(j["mu"], path + ": mu");
    int rows = 0, cols = 0;
    frame = parse_matrix(j["frame"], rows, cols, path + ": frame");
    n = static_cast<int>(mu.size());
    if (rows != n || cols != n) fail_input(path + ": frame must be n x n");
    return;
  }
  if (j.contains("S")) {
    int rows = 0, cols = 0;
    std::vector<double> S = parse_matrix(j["S"], rows, cols, path + ": S");
    if (rows != cols) fail_input(path + ": S must be square");
    n = rows;
    mu.assign(n, 0.0);
    frame.assign(static_cast<size_t>(n) * n, 0.0);
    check(ff_decompose(S.data(), n, 1e-9, mu.data(), frame.data()));
    return;
  }
  fail_input(path + ": expected fields \"mu\"+\"frame\" or \"S\"");
}

std::vector<double> parse_comma_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail_input(what + ": cannot parse number '" + item + "'");
    }
  }
  if (out.empty()) fail_input(what + ": empty list");
  return out;
}

struct OutputSink {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  explicit OutputSink(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) fail_input("cannot open output file " + path);
      stream = &file;
    }
  }
  std::ostream& out() { return *stream; }
};

void write_json_output(const json& j, const std::string& out_path) {
  OutputSink sink(out_path);
  sink.out() << j.dump(2) << "\n";
}

// --- flagfold JSON files: array of {x, S, m} ----------------------------

struct FlagfoldHandle {
  ff_flagfold* W = nullptr;
  ~FlagfoldHandle() { ff_flagfold_free(W); }
};

void load_flagfold(const std::string& path, FlagfoldHandle& handle, int& dim) {
  const json j = load_json(path);
  if (!j.is_array() || j.empty()) fail_input(path + ": expected a nonempty array of atoms");
  dim = -1;
  for (const auto& atom : j) {
    if (!atom.contains("x") || !atom.contains("S") || !atom.contains("m"))
      fail_input(path + ": atom needs fields x, S, m");
    std::vector<double> x = parse_number_array(atom["x"], path + ": x");
    if (dim < 0) {
      dim = static_cast<int>(x.size());
      handle.W = ff_flagfold_new(dim);
      if (!handle.W) fail_input(ff_last_error());
    }
    if (static_cast<int>(x.size()) != dim) fail_input(path + ": inconsistent atom dimensions");
    int rows = 0, cols = 0;
    std::vector<double> S = parse_matrix(atom["S"], rows, cols, path + ": S");
    if (rows != dim || cols != dim) fail_input(path + ": atom matrix must be n x n");
    if (!atom["m"].is_number()) fail_input(path + ": atom mass must be a number");
    check(ff_flagfold_add_atom(handle.W, x.data(), S.data(), atom["m"].get<double>()));
  }
}

// --- point CSV: header x_1,...,x_n[,mass] -------------------------------

void load_point_csv(const std::string& path, std::vector<double>& points,
                    std::vector<double>& masses, long& count, int& dim) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) fail_input(path + ": empty file");

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  bool has_mass = !header.empty() && header.back() == "mass";
  dim = static_cast<int>(header.size()) - (has_mass ? 1 : 0);
  if (dim < 1) fail_input(path + ": header must name columns x_1..x_n[,mass]");
  for (int c = 0; c < dim; ++c) {
    if (header[c] != "x_" + std::to_string(c + 1))
      fail_input(path + ": expected header column x_" + std::to_string(c + 1));
  }

  points.clear();
  masses.clear();
  count = 0;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row = parse_comma_list(line, path + ":" + std::to_string(line_no));
    if (static_cast<int>(row.size()) != dim + (has_mass ? 1 : 0))
      fail_input(path + ":" + std::to_string(line_no) + ": wrong column count");
    points.insert(points.end(), row.begin(), row.begin() + dim);
    masses.push_back(has_mass ? row.back() : 1.0);
    ++count;
  }
  if (count == 0) fail_input(path + ": no data rows");
}

// --- subcommand state ----------------------------------------------------

struct GlobalOpts {
  std::string out_path;
  std::string format = "csv";
  long seed = 0;
  bool seed_given = false;
};

void add_global_opts(CLI::App* cmd, GlobalOpts& g) {
  cmd->add_option("--out", g.out_path, "Write output to this file instead of stdout");
  cmd->add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", g.seed, "Seed for randomized subroutines")
      ->each([&g](const std::string&) { g.seed_given = true; });
}

const char* termination_name(int t) {
  switch (t) {
    case FF_TERMINATION_HORIZON: return "horizon_reached";
    case FF_TERMINATION_BOUNDARY: return "boundary_hit";
    default: return "step_failure";
  }
}

// --- geodesic -------------------------------------------------------------

struct GeodesicConfig {
  int n = 0;
  std::vector<double> mu0, mu_dot0, u0, b0_upper;
  double h = 1e-3;
  long steps = 1000;
  double mu_min = 1e-3;
  std::string pinch = "quarter-norm";
};

std::vector<double> expand_skew(const std::vector<double>& upper, int n) {
  if (static_cast<int>(upper.size()) != n * (n - 1) / 2)
    fail_input("B0 needs n(n-1)/2 upper-triangular entries in row-major order");
  std::vector<double> B(static_cast<size_t>(n) * n, 0.0);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      B[static_cast<size_t>(i) * n + j] = upper[k];
      B[static_cast<size_t>(j) * n + i] = -upper[k];
      ++k;
    }
  return B;
}

int run_geodesic(const GeodesicConfig& cfg, const GlobalOpts& g,
                 const std::string& ellipsoid_out) {
  if (cfg.n < 2) fail_input("geodesic: need n >= 2");
  if (static_cast<int>(cfg.mu0.size()) != cfg.n || static_cast<int>(cfg.mu_dot0.size()) != cfg.n)
    fail_input("geodesic: mu0 and mu_dot0 must have n entries");
  if (!cfg.u0.empty() && static_cast<int>(cfg.u0.size()) != cfg.n * cfg.n)
    fail_input("geodesic: U0 must have n*n entries, row-major");

  const std::vector<double> B0 = expand_skew(cfg.b0_upper, cfg.n);
  ff_trajectory* traj = nullptr;
  check(ff_shoot(cfg.n, cfg.mu0.data(), cfg.mu_dot0.data(),
                 cfg.u0.empty() ? nullptr : cfg.u0.data(), B0.data(), cfg.h, cfg.steps,
                 cfg.mu_min, cfg.pinch.c_str(), &traj));

  const long size = ff_trajectory_size(traj);
  const int n = cfg.n;
  const bool angles = (n == 3);
  std::vector<double> mu(n), mu_dot(n), frame(static_cast<size_t>(n) * n), lambda(n);

  if (g.format == "csv") {
    OutputSink sink(g.out_path);
    auto& os = sink.out();
    os << "# termination: " << termination_name(ff_trajectory_termination(traj)) << "\n";
    os << "t";
    for (int i = 1; i <= n; ++i) os << ",mu_" << i;
    for (int i = 1; i <= n; ++i) os << ",lambda_" << i;
    for (int r = 1; r <= n; ++r)
      for (int c = 1; c <= n; ++c) os << ",U_" << r << c;
    if (angles) os << ",theta1,theta2";
    os << "\n";
    for (long idx = 0; idx < size; ++idx) {
      double t = 0.0;
      check(ff_trajectory_state(traj, idx, &t, mu.data(), mu_dot.data(), lambda.data(),
                                frame.data()));
      os << fmt(t);
      for (double v : mu) os << "," << fmt(v);
      for (double v : lambda) os << "," << fmt(v);
      for (double v : frame) os << "," << fmt(v);
      if (angles) {
        double t1 = 0.0, t2 = 0.0;
        check(ff_trajectory_angles(traj, idx, &t1, &t2));
        os << "," << fmt(t1) << "," << fmt(t2);
      }
      os << "\n";
    }
  } else {
    json out;
    out["termination"] = termination_name(ff_trajectory_termination(traj));
    json states = json::array();
    for (long idx = 0; idx < size; ++idx) {
      double t = 0.0;
      check(ff_trajectory_state(traj, idx, &t, mu.data(), mu_dot.data(), lambda.data(),
                                frame.data()));
      json s;
      s["t"] = t;
      s["mu"] = json_number_array(mu);
      s["lambda"] = json_number_array(lambda);
      s["U"] = json_matrix(frame, n, n);
      if (angles) {
        double t1 = 0.0, t2 = 0.0;
        check(ff_trajectory_angles(traj, idx, &t1, &t2));
        s["theta1"] = t1;
        s["theta2"] = t2;
      }
      states.push_back(std::move(s));
    }
    out["states"] = std::move(states);
    write_json_output(out, g.out_path);
  }

  if (!ellipsoid_out.empty()) {
    if (!angles) fail_input("--ellipsoid-out requires n = 3");
    json ell = json::array();
    std::vector<double> axes(9), lengths(3);
    for (long idx = 0; idx < size; ++idx) {
      check(ff_trajectory_ellipsoid(traj, idx, axes.data(), lengths.data()));
      json e;
      e["axes"] = json_matrix(axes, 3, 3);
      e["lengths"] = json_number_array(lengths);
      ell.push_back(std::move(e));
    }
    write_json_output(ell, ellipsoid_out);
  }

  ff_trajectory_free(traj);
  return kExitOk;
}

// --- decompose -------------------------------------------------------------

int run_decompose(const std::string& in_path, double zero_tol, const GlobalOpts& g) {
  int n = 0;
  const std::vector<double> S = load_cov_matrix(in_path, n);
  std::vector<double> mu(n), frame(static_cast<size_t>(n) * n), lambda(n);
  check(ff_decompose(S.data(), n, zero_tol, mu.data(), frame.data()));
  check(ff_mu_to_lambda(mu.data(), n, lambda.data()));
  std::vector<int> parts(n);
  int part_count = 0;
  check(ff_type_of(mu.data(), n, zero_tol, parts.data(), &part_count));

  json out;
  out["mu"] = json_number_array(mu);
  out["lambda"] = json_number_array(lambda);
  out["frame"] = json_matrix(frame, n, n);
  out["type"] = json(std::vector<int>(parts.begin(), parts.begin() + part_count));
  write_json_output(out, g.out_path);
  return kExitOk;
}

// --- distance ----------------------------------------------------------------

int run_distance(const std::string& kind, const std::string& a_path, const std::string& b_path,
                 bool normalized, const GlobalOpts& g) {
  double d = 0.0;
  if (kind == "euclidean") {
    int na = 0, nb = 0;
    const std::vector<double> A = load_cov_matrix(a_path, na);
    const std::vector<double> B = load_cov_matrix(b_path, nb);
    if (na != nb) fail_input("distance: matrix sizes differ");
    check(ff_euclidean_distance(A.data(), B.data(), na, &d));
  } else if (kind == "grassmann") {
    const json ja = load_json(a_path), jb = load_json(b_path);
    if (!ja.contains("frame") || !jb.contains("frame"))
      fail_input("distance --kind grassmann: inputs need a \"frame\" field (n x d basis)");
    int ra = 0, ca = 0, rb = 0, cb = 0;
    const std::vector<double> E = parse_matrix(ja["frame"], ra, ca, a_path);
    const std::vector<double> F = parse_matrix(jb["frame"], rb, cb, b_path);
    if (ra != rb || ca != cb) fail_input("distance: frame sizes differ");
    check(ff_grassmann_distance(E.data(), F.data(), ra, ca, normalized ? 1 : 0, &d));
  } else {
    int na = 0, nb = 0;
    std::vector<double> mu1, f1, mu2, f2;
    load_flag_rep(a_path, na, mu1, f1);
    load_flag_rep(b_path, nb, mu2, f2);
    if (na != nb) fail_input("distance: ambient dimensions differ");
    if (kind == "krakus")
      check(ff_krakus_distance(mu1.data(), f1.data(), mu2.data(), f2.data(), na, &d));
    else
      check(ff_conic_distance(mu1.data(), f1.data(), mu2.data(), f2.data(), na, &d));
  }

  if (g.format == "json") {
    json out;
    out["kind"] = kind;
    out["distance"] = d;
    write_json_output(out, g.out_path);
  } else {
    OutputSink sink(g.out_path);
    sink.out() << fmt(d) << "\n";
  }
  return kExitOk;
}

// --- pca -----------------------------------------------------------------------

int run_pca(const std::string& points_path, double eta, const std::string& kernel,
            long max_points, const GlobalOpts& g) {
  std::vector<double> points, masses;
  long count = 0;
  int dim = 0;
  load_point_csv(points_path, points, masses, count, dim);

  if (max_points > 0 && count > max_points) {
    if (!g.seed_given) fail_input("pca: --max-points subsampling requires --seed");
    std::mt19937_64 rng(static_cast<unsigned long long>(g.seed));
    std::vector<long> order(count);
    for (long i = 0; i < count; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(max_points);
    std::sort(order.begin(), order.end());
    std::vector<double> p2, m2;
    for (long i : order) {
      p2.insert(p2.end(), points.begin() + i * dim, points.begin() + (i + 1) * dim);
      m2.push_back(masses[i]);
    }
    points.swap(p2);
    masses.swap(m2);
    count = max_points;
  }

  json out = json::array();
  std::vector<double> S(static_cast<size_t>(dim) * dim);
  for (long i = 0; i < count; ++i) {
    const double* x = points.data() + i * dim;
    const ff_status st = ff_local_covariance(points.data(), masses.data(), count, dim, x, eta,
                                             kernel.c_str(), S.data());
    if (st != FF_OK)
      throw cli_error(exit_code_for(st),
                      "pca: point " + std::to_string(i) + ": " + ff_last_error());
    json atom;
    atom["x"] = json_number_array(std::vector<double>(x, x + dim));
    atom["S"] = json_matrix(S, dim, dim);
    atom["m"] = masses[i];
    out.push_back(std::move(atom));
  }
  write_json_output(out, g.out_path);
  return kExitOk;
}

// --- firstvar ----------------------------------------------------------------

struct FieldOpts {
  std::string field;
  std::string matrix_csv;  // affine: n*n entries, row-major
  std::string offset_csv;  // affine: n entries
  std::string center_csv;  // radial/bump
  int component = 1;       // bump, 1-based
  double radius = 1.0;
  double amplitude = 1.0;
};

ff_vectorfield* make_field(const FieldOpts& opts, int dim) {
  ff_vectorfield* X = nullptr;
  if (opts.field == "affine") {
    if (opts.matrix_csv.empty()) fail_input("firstvar --field affine requires --matrix");
    std::vector<double> A = parse_comma_list(opts.matrix_csv, "--matrix");
    if (static_cast<int>(A.size()) != dim * dim)
      fail_input("--matrix needs n*n entries, row-major");
    std::vector<double> b(dim, 0.0);
    if (!opts.offset_csv.empty()) {
      b = parse_comma_list(opts.offset_csv, "--offset");
      if (static_cast<int>(b.size()) != dim) fail_input("--offset needs n entries");
    }
    check(ff_vectorfield_affine(dim, A.data(), b.data(), &X));
  } else if (opts.field == "radial") {
    std::vector<double> c(dim, 0.0);
    if (!opts.center_csv.empty()) {
      c = parse_comma_list(opts.center_csv, "--center");
      if (static_cast<int>(c.size()) != dim) fail_input("--center needs n entries");
    }
    check(ff_vectorfield_radial(dim, c.data(), &X));
  } else {
    std::vector<double> c(dim, 0.0);
    if (!opts.center_csv.empty()) {
      c = parse_comma_list(opts.center_csv, "--center");
      if (static_cast<int>(c.size()) != dim) fail_input("--center needs n entries");
    }
    if (opts.component < 1 || opts.component > dim)
      fail_input("--component must be in 1..n");
    check(ff_vectorfield_bump(dim, opts.component - 1, c.data(), opts.radius, opts.amplitude,
                              &X));
  }
  return X;
}

int run_firstvar(const std::string& in_path, const FieldOpts& opts, const GlobalOpts& g) {
  FlagfoldHandle handle;
  int dim = 0;
  load_flagfold(in_path, handle, dim);
  ff_vectorfield* X = make_field(opts, dim);
  double value = 0.0;
  const ff_status st = ff_first_variation(handle.W, X, &value);
  ff_vectorfield_free(X);
  check(st);

  if (g.format == "json") {
    json out;
    out["field"] = opts.field;
    out["first_variation"] = value;
    write_json_output(out, g.out_path);
  } else {
    OutputSink sink(g.out_path);
    sink.out() << fmt(value) << "\n";
  }
  return kExitOk;
}

// --- monotonicity ---------------------------------------------------------------

int run_monotonicity(const std::string& in_path, const std::string& center_csv, double d_star,
                     double lambda, const std::string& radii_csv, const GlobalOpts& g) {
  FlagfoldHandle handle;
  int dim = 0;
  load_flagfold(in_path, handle, dim);
  std::vector<double> center = parse_comma_list(center_csv, "--center");
  if (static_cast<int>(center.size()) != dim) fail_input("--center needs n entries");
  std::vector<double> radii = parse_comma_list(radii_csv, "--radii");

  std::vector<double> ratios(radii.size());
  check(ff_monotonicity_ratio(handle.W, center.data(), d_star, lambda, radii.data(),
                              static_cast<long>(radii.size()), ratios.data()));

  if (g.format == "json") {
    json out = json::array();
    for (size_t i = 0; i < radii.size(); ++i) {
      json row;
      row["radius"] = radii[i];
      row["ratio"] = ratios[i];
      out.push_back(std::move(row));
    }
    write_json_output(out, g.out_path);
  } else {
    OutputSink sink(g.out_path);
    sink.out() << "radius,ratio\n";
    for (size_t i = 0; i < radii.size(); ++i)
      sink.out() << fmt(radii[i]) << "," << fmt(ratios[i]) << "\n";
  }
  return kExitOk;
}

// --- euclid-geodesic --------------------------------------------------------------

int run_euclid_geodesic(const std::string& a_path, const std::string& b_path, int steps,
                        const GlobalOpts& g) {
  int na = 0, nb = 0;
  const std::vector<double> A0 = load_cov_matrix(a_path, na);
  const std::vector<double> A1 = load_cov_matrix(b_path, nb);
  if (na != nb) fail_input("euclid-geodesic: matrix sizes differ");
  if (steps < 1) fail_input("euclid-geodesic: --steps must be >= 1");
  const int n = na;

  std::vector<double> mus(static_cast<size_t>(steps + 1) * n);
  std::vector<double> frames(static_cast<size_t>(steps + 1) * n * n);
  check(ff_euclidean_geodesic(A0.data(), A1.data(), n, steps, mus.data(), frames.data()));

  const bool angles = (n == 3);
  std::vector<double> lambda(n);
  auto emit_angles = [&](long p, double& t1, double& t2) {
    // Principal angles of the current leading column / 2-plane against step 0.
    const double* f0 = frames.data();
    const double* fp = frames.data() + static_cast<size_t>(p) * n * n;
    std::vector<double> e0(n), ep(n), e20(2 * n), e2p(2 * n);
    for (int r = 0; r < n; ++r) {
      e0[r] = f0[static_cast<size_t>(r) * n];
      ep[r] = fp[static_cast<size_t>(r) * n];
      e20[static_cast<size_t>(r) * 2] = f0[static_cast<size_t>(r) * n];
      e20[static_cast<size_t>(r) * 2 + 1] = f0[static_cast<size_t>(r) * n + 1];
      e2p[static_cast<size_t>(r) * 2] = fp[static_cast<size_t>(r) * n];
      e2p[static_cast<size_t>(r) * 2 + 1] = fp[static_cast<size_t>(r) * n + 1];
    }
    check(ff_principal_angles(e0.data(), ep.data(), n, 1, 1, &t1));
    double two[2] = {0.0, 0.0};
    check(ff_principal_angles(e20.data(), e2p.data(), n, 2, 2, two));
    t2 = two[0];
  };

  OutputSink sink(g.out_path);
  auto& os = sink.out();
  if (g.format == "json") {
    json states = json::array();
    for (long p = 0; p <= steps; ++p) {
      const double* mu = mus.data() + static_cast<size_t>(p) * n;
      check(ff_mu_to_lambda(mu, n, lambda.data()));
      json s;
      s["t"] = static_cast<double>(p) / steps;
      s["mu"] = json_number_array(std::vector<double>(mu, mu + n));
      s["lambda"] = json_number_array(lambda);
      s["U"] = json_matrix(
          std::vector<double>(frames.begin() + static_cast<long>(p) * n * n,
                              frames.begin() + static_cast<long>(p + 1) * n * n),
          n, n);
      if (angles) {
        double t1 = 0.0, t2 = 0.0;
        emit_angles(p, t1, t2);
        s["theta1"] = t1;
        s["theta2"] = t2;
      }
      states.push_back(std::move(s));
    }
    os << states.dump(2) << "\n";
    return kExitOk;
  }

  os << "t";
  for (int i = 1; i <= n; ++i) os << ",mu_" << i;
  for (int i = 1; i <= n; ++i) os << ",lambda_" << i;
  for (int r = 1; r <= n; ++r)
    for (int c = 1; c <= n; ++c) os << ",U_" << r << c;
  if (angles) os << ",theta1,theta2";
  os << "\n";
  for (long p = 0; p <= steps; ++p) {
    const double* mu = mus.data() + static_cast<size_t>(p) * n;
    check(ff_mu_to_lambda(mu, n, lambda.data()));
    os << fmt(static_cast<double>(p) / steps);
    for (int i = 0; i < n; ++i) os << "," << fmt(mu[i]);
    for (int i = 0; i < n; ++i) os << "," << fmt(lambda[i]);
    const double* f = frames.data() + static_cast<size_t>(p) * n * n;
    for (int i = 0; i < n * n; ++i) os << "," << fmt(f[i]);
    if (angles) {
      double t1 = 0.0, t2 = 0.0;
      emit_angles(p, t1, t2);
      os << "," << fmt(t1) << "," << fmt(t2);
    }
    os << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry of weighted flags: geodesic shooting, distances, and "
               "flagfold measure diagnostics"};
  app.require_subcommand(1);

  // geodesic
  auto* geo = app.add_subcommand("geodesic", "Shoot a geodesic and emit the trajectory");
  GlobalOpts geo_g;
  add_global_opts(geo, geo_g);
  std::string geo_config, geo_ellipsoid_out;
  GeodesicConfig geo_cfg;
  std::string geo_mu0, geo_mu_dot0, geo_b0, geo_u0;
  geo->add_option("--config", geo_config, "JSON config file; flags override its values");
  geo->add_option("--n", geo_cfg.n, "Ambient dimension");
  geo->add_option("--mu0", geo_mu0, "Initial weights, comma-separated");
  geo->add_option("--mu-dot0", geo_mu_dot0, "Initial weight velocity, comma-separated");
  geo->add_option("--b0", geo_b0,
                  "Initial skew velocity: upper-triangular entries, row-major "
                  "(b_12,b_13,...,b_23,...)");
  geo->add_option("--u0", geo_u0, "Initial frame, n*n row-major (default identity)");
  geo->add_option("--timestep", geo_cfg.h, "Time step h");
  geo->add_option("--steps", geo_cfg.steps, "Maximum number of steps");
  geo->add_option("--mu-min", geo_cfg.mu_min, "Boundary stop threshold on the weights");
  geo->add_option("--pinch", geo_cfg.pinch, "Pinch profile: quarter-norm or norm");
  geo->add_option("--ellipsoid-out", geo_ellipsoid_out,
                  "Also write the visualization ellipsoids (JSON), n = 3 only");

  // decompose
  auto* dec = app.add_subcommand("decompose", "Eigen-decompose a covariance matrix file");
  GlobalOpts dec_g;
  add_global_opts(dec, dec_g);
  std::string dec_in;
  double dec_zero_tol = 1e-9;
  dec->add_option("--in", dec_in, "Covariance matrix JSON file")->required();
  dec->add_option("--zero-tol", dec_zero_tol, "Zero threshold for type detection");

  // distance
  auto* dist = app.add_subcommand("distance", "Distance between two inputs");
  GlobalOpts dist_g;
  add_global_opts(dist, dist_g);
  std::string dist_kind, dist_a, dist_b;
  bool dist_normalized = false;
  dist->add_option("--kind", dist_kind, "euclidean, grassmann, krakus, or conic")
      ->required()
      ->check(CLI::IsMember({"euclidean", "grassmann", "krakus", "conic"}));
  dist->add_option("--a", dist_a, "First input file")->required();
  dist->add_option("--b", dist_b, "Second input file")->required();
  dist->add_flag("--normalized", dist_normalized,
                 "Normalize the Grassmann distance by sqrt(dim)");

  // pca
  auto* pca = app.add_subcommand("pca", "Local covariance extraction from a point CSV");
  GlobalOpts pca_g;
  add_global_opts(pca, pca_g);
  std::string pca_points, pca_kernel = "indicator";
  double pca_eta = 0.0;
  long pca_max_points = 0;
  pca->add_option("--points", pca_points, "Point cloud CSV (header x_1..x_n[,mass])")
      ->required();
  pca->add_option("--eta", pca_eta, "Neighborhood radius")->required();
  pca->add_option("--kernel", pca_kernel, "Kernel profile: indicator or bump")
      ->check(CLI::IsMember({"indicator", "bump"}));
  pca->add_option("--max-points", pca_max_points,
                  "Subsample to this many points (requires --seed)");

  // firstvar
  auto* fv = app.add_subcommand("firstvar", "First variation of a flagfold file");
  GlobalOpts fv_g;
  add_global_opts(fv, fv_g);
  std::string fv_in;
  FieldOpts fv_field;
  fv->add_option("--in", fv_in, "Flagfold JSON file")->required();
  fv->add_option("--field", fv_field.field, "Vector field: affine, radial, or bump")
      ->required()
      ->check(CLI::IsMember({"affine", "radial", "bump"}));
  fv->add_option("--matrix", fv_field.matrix_csv, "Affine field matrix, n*n row-major");
  fv->add_option("--offset", fv_field.offset_csv, "Affine field offset, n entries");
  fv->add_option("--center", fv_field.center_csv, "Field center, n entries");
  fv->add_option("--component", fv_field.component, "Bump component, 1-based");
  fv->add_option("--radius", fv_field.radius, "Bump support radius");
  fv->add_option("--amplitude", fv_field.amplitude, "Bump amplitude");

  // monotonicity
  auto* mono = app.add_subcommand("monotonicity", "Density ratios around a point");
  GlobalOpts mono_g;
  add_global_opts(mono, mono_g);
  std::string mono_in, mono_center, mono_radii;
  double mono_dstar = 1.0, mono_lambda = 0.0;
  mono->add_option("--in", mono_in, "Flagfold JSON file")->required();
  mono->add_option("--center", mono_center, "Center point, comma-separated")->required();
  mono->add_option("--dstar", mono_dstar, "Dimension exponent d*")->required();
  mono->add_option("--lambda", mono_lambda, "First-variation bound Lambda");
  mono->add_option("--radii", mono_radii, "Increasing radii, comma-separated")->required();

  // euclid-geodesic
  auto* eg = app.add_subcommand("euclid-geodesic",
                                "Linear matrix interpolation, eigen-decomposed per step");
  GlobalOpts eg_g;
  add_global_opts(eg, eg_g);
  std::string eg_a, eg_b;
  int eg_steps = 100;
  eg->add_option("--a", eg_a, "First covariance matrix JSON file")->required();
  eg->add_option("--b", eg_b, "Second covariance matrix JSON file")->required();
  eg->add_option("--steps", eg_steps, "Number of interpolation steps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ExtrasError& e) {
    std::cerr << e.what() << "\n" << app.help() << std::flush;
    return kExitUsage;
  } catch (const CLI::RequiredError& e) {
    if (app.get_subcommands().empty()) {  // no subcommand given
      std::cerr << e.what() << "\n" << app.help() << std::flush;
      return kExitUsage;
    }
    std::cerr << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalidInput;
  }

  try {
    if (geo->parsed()) {
      if (!geo_config.empty()) {
        const json j = load_json(geo_config);
        try {
          if (j.contains("n")) geo_cfg.n = j["n"].get<int>();
          if (j.contains("mu0")) geo_cfg.mu0 = parse_number_array(j["mu0"], "mu0");
          if (j.contains("mu_dot0"))
            geo_cfg.mu_dot0 = parse_number_array(j["mu_dot0"], "mu_dot0");
          if (j.contains("B0")) geo_cfg.b0_upper = parse_number_array(j["B0"], "B0");
          if (j.contains("U0")) {
            int r = 0, c = 0;
            geo_cfg.u0 = parse_matrix(j["U0"], r, c, "U0");
          }
          if (j.contains("h")) geo_cfg.h = j["h"].get<double>();
          if (j.contains("N")) geo_cfg.steps = j["N"].get<long>();
          if (j.contains("mu_min")) geo_cfg.mu_min = j["mu_min"].get<double>();
          if (j.contains("pinch")) geo_cfg.pinch = j["pinch"].get<std::string>();
        } catch (const json::exception& e) {
          fail_input(geo_config + ": " + e.what());
        }
      }
      // Flags override config-file values.
      if (!geo_mu0.empty()) geo_cfg.mu0 = parse_comma_list(geo_mu0, "--mu0");
      if (!geo_mu_dot0.empty()) geo_cfg.mu_dot0 = parse_comma_list(geo_mu_dot0, "--mu-dot0");
      if (!geo_b0.empty()) geo_cfg.b0_upper = parse_comma_list(geo_b0, "--b0");
      if (!geo_u0.empty()) geo_cfg.u0 = parse_comma_list(geo_u0, "--u0");
      if (geo_cfg.n == 0 && !geo_cfg.mu0.empty())
        geo_cfg.n = static_cast<int>(geo_cfg.mu0.size());
      if (geo_cfg.mu0.empty()) fail_input("geodesic: mu0 is required (config or --mu0)");
      if (geo_cfg.b0_upper.empty())
        geo_cfg.b0_upper.assign(static_cast<size_t>(geo_cfg.n) * (geo_cfg.n - 1) / 2, 0.0);
      return run_geodesic(geo_cfg, geo_g, geo_ellipsoid_out);
    }
    if (dec->parsed()) return run_decompose(dec_in, dec_zero_tol, dec_g);
    if (dist->parsed())
      return run_distance(dist_kind, dist_a, dist_b, dist_normalized, dist_g);
    if (pca->parsed()) return run_pca(pca_points, pca_eta, pca_kernel, pca_max_points, pca_g);
    if (fv->parsed()) return run_firstvar(fv_in, fv_field, fv_g);
    if (mono->parsed())
      return run_monotonicity(mono_in, mono_center, mono_dstar, mono_lambda, mono_radii,
                              mono_g);
    if (eg->parsed()) return run_euclid_geodesic(eg_a, eg_b, eg_steps, eg_g);
  } catch (const cli_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
