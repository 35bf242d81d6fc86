#include "hkxor/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "hkxor/kikuchi_odd.hpp"
#include "hkxor/rng.hpp"

namespace hkxor {

namespace {

void check_symmetric(const Eigen::SparseMatrix<double>& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix is not square");
  const Eigen::SparseMatrix<double> t = m.transpose();
  const Eigen::SparseMatrix<double> diff = m - t;
  double scale = 1.0, dmax = 0.0;
  for (int o = 0; o < m.outerSize(); ++o)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, o); it; ++it) scale = std::max(scale, std::abs(it.value()));
  for (int o = 0; o < diff.outerSize(); ++o)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, o); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
  if (dmax > 1e-12 * scale) throw DomainError("matrix is not symmetric");
}

SpectralResult dense_norm(const Eigen::SparseMatrix<double>& m) {
  const Eigen::MatrixXd d(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d);
  SpectralResult r;
  r.method = "dense";
  r.lambda_min = es.eigenvalues()(0);
  r.lambda_max = es.eigenvalues()(d.rows() - 1);
  const bool top = std::abs(r.lambda_max) >= std::abs(r.lambda_min);
  r.value = top ? std::abs(r.lambda_max) : std::abs(r.lambda_min);
  const Eigen::VectorXd v = es.eigenvectors().col(top ? d.rows() - 1 : 0);
  r.residual = (d * v - (top ? r.lambda_max : r.lambda_min) * v).norm();
  return r;
}

}  // namespace

// Lanczos with full reorthogonalization; restarts from a mix of the two extremal Ritz vectors.
SpectralResult spectral_norm(const Eigen::SparseMatrix<double>& m, const SolverOptions& opt) {
  if (!(opt.tol > 0.0)) throw DomainError("tol must be positive");
  check_symmetric(m);
  const Eigen::Index N = m.rows();
  SpectralResult best;
  best.method = "lanczos";
  if (N == 0 || m.nonZeros() == 0) {
    best.method = "zero";
    return best;
  }
  if (N <= opt.dense_limit) return dense_norm(m);

  CounterRng rng(opt.seed, 7);
  Eigen::VectorXd start(N);
  for (Eigen::Index i = 0; i < N; ++i) start(i) = rng.normal();
  start.normalize();

  const int kdim = static_cast<int>(std::min<Eigen::Index>(opt.krylov, N));
  Eigen::MatrixXd V(N, kdim + 1);
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    std::vector<double> alpha, beta;
    V.col(0) = start;
    int j = 0;
    bool invariant = false;
    for (; j < kdim; ++j) {
      Eigen::VectorXd w = m * V.col(j);
      ++best.iters;
      alpha.push_back(V.col(j).dot(w));
      for (int pass = 0; pass < 2; ++pass)
        w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
      const double b = w.norm();
      beta.push_back(b);
      if (b <= 1e-13 * std::max(1.0, std::abs(alpha.back()))) {
        invariant = true;
        ++j;
        break;
      }
      V.col(j + 1) = w / b;
    }
    const int dim = static_cast<int>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < dim) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const double bl = invariant ? 0.0 : beta[dim - 1];
    const double tmin = es.eigenvalues()(0), tmax = es.eigenvalues()(dim - 1);
    const double rmin = std::abs(bl * es.eigenvectors()(dim - 1, 0));
    const double rmax = std::abs(bl * es.eigenvectors()(dim - 1, dim - 1));
    const bool top = std::abs(tmax) >= std::abs(tmin);
    best.lambda_min = tmin;
    best.lambda_max = tmax;
    best.value = top ? std::abs(tmax) : std::abs(tmin);
    best.residual = top ? rmax : rmin;
    const double lim = opt.tol * std::max(1.0, best.value);
    if ((rmin <= lim && rmax <= lim) || invariant) return best;
    const Eigen::VectorXd ymin = V.leftCols(dim) * es.eigenvectors().col(0);
    const Eigen::VectorXd ymax = V.leftCols(dim) * es.eigenvectors().col(dim - 1);
    start = ymin + ymax;
    start.normalize();
  }
  throw NonConvergence("spectral_norm did not converge", best);
}

Branch parse_branch(const std::string& s) {
  if (s == "auto") return Branch::Auto;
  if (s == "even") return Branch::Even;
  if (s == "odd") return Branch::Odd;
  throw DomainError("branch must be auto, even or odd");
}

namespace {

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double with_margin(double sigma, double tol) { return sigma + tol * std::max(1.0, sigma); }

}  // namespace

Certificate certify_even(const Instance& inst, int ell, double tol, const CertifyOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  if (inst.k % 2) throw DomainError("even branch requested for odd k");
  Certificate c;
  c.digest = hex64(digest(inst));
  c.branch = "even";
  c.n = inst.n;
  c.k = inst.k;
  c.ell = ell;
  c.m = inst.size();
  c.tol = tol;
  const KikuchiGraph g = build_even(inst, ell, opt.max_vertices);
  c.N = g.N;
  c.edges = g.edges.size();
  if (inst.size() == 0) {
    c.algval = 0.5;
    c.seconds = elapsed(t0);
    return c;
  }
  const Regularizer r = regularize(g);
  SolverOptions so = opt.solver;
  so.tol = tol;
  c.solver = spectral_norm(normalized_matrix(g, r), so);
  c.norm = c.solver.value;
  c.trace_gamma = r.trace;
  c.algval = 0.5 + with_margin(c.norm, tol) * r.trace /
                       (2.0 * static_cast<double>(inst.size()) * static_cast<double>(g.delta));
  c.seconds = elapsed(t0);
  return c;
}

Certificate certify_odd(const Instance& inst, int ell, double eps, double tol, const CertifyOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  Certificate c;
  c.digest = hex64(digest(inst));
  c.branch = "odd";
  c.n = inst.n;
  c.k = inst.k;
  c.ell = ell;
  c.m = inst.size();
  c.eps = eps;
  c.tol = tol;
  if (inst.size() == 0) {
    c.algval = 0.5;
    c.seconds = elapsed(t0);
    return c;
  }
  const int k = inst.k;
  const double H = static_cast<double>(inst.size());
  const BipartiteDecomposition dec = regularity_decompose(inst, ell, eps);
  if (dec.size_warning) c.warnings.push_back("|H| < n * tau_1: decomposition size hypothesis fails");
  double total = 0.0;
  SolverOptions so = opt.solver;
  so.tol = tol;
  for (int t = 1; t <= k; ++t) {
    if (dec.slice(t).empty()) continue;
    const CSOperator cs = cs_operator(dec, t, inst);
    SubCertificate s;
    s.t = t;
    s.buckets = cs.num_buckets;
    s.constraints = cs.num_constraints;
    s.constant_term = cs.constant_term;
    if (ell < k - t) {
      s.fallback = true;
      double sb = 0.0;
      for (auto id : cs.ids) sb += std::abs(inst.constraints[id].coeff);
      s.contribution = sb / (2.0 * H);
      s.algval = std::pow(k * s.contribution, 2);
      total += s.contribution;
      c.per_t.push_back(s);
      continue;
    }
    const OddKikuchiGraph g = build_odd(dec, t, inst, ell, opt.max_vertices);
    s.N = g.N;
    s.delta_t = g.delta_t;
    if (!g.edges.empty()) {
      s.eta = opt.eta.value_or(default_eta(k, eps, opt.D));
      EdgeDeletion del = edge_delete(g, s.eta);
      const bool use_pruned = del.gamma < 1.0;
      const OddKikuchiGraph& G = use_pruned ? del.graph : g;
      s.gamma = use_pruned ? del.gamma : 0.0;
      if (!use_pruned) c.warnings.push_back("t=" + std::to_string(t) + ": edge deletion removed every edge, using the full graph");
      else if (s.gamma > 0.5) c.warnings.push_back("t=" + std::to_string(t) + ": gamma above 1/2");
      s.edges = G.edges.size();
      const Regularizer r = regularize(G);
      s.solver = spectral_norm(normalized_matrix(G, r), so);
      s.norm = s.solver.value;
      s.norm_term = cs.scale * with_margin(s.norm, tol) * r.trace / ((1.0 - s.gamma) * g.delta_t);
    }
    s.unrepresented = cs.scale * g.unrepresented;
    s.algval = s.constant_term + s.norm_term + s.unrepresented;
    s.contribution = std::sqrt(std::max(0.0, s.algval)) / k;
    total += s.contribution;
    c.N = std::max(c.N, s.N);
    c.edges += s.edges;
    c.per_t.push_back(s);
  }
  c.algval = 0.5 + total;
  c.seconds = elapsed(t0);
  return c;
}

Certificate certify(const Instance& inst, int ell, double eps, double tol, Branch branch, const CertifyOptions& opt) {
  if (branch == Branch::Auto) branch = inst.k % 2 ? Branch::Odd : Branch::Even;
  if (branch == Branch::Even) return certify_even(inst, ell, tol, opt);
  return certify_odd(inst, ell, eps, tol, opt);
}

std::string to_report(const Certificate& c) {
  std::ostringstream o;
  o.precision(17);
  o << "algval=" << c.algval << '\n';
  o << "algval_clamped=" << (c.algval > 1.0 ? std::string(">1") : format_double(c.algval)) << '\n';
  o << "branch=" << c.branch << '\n';
  o << "n=" << c.n << "\nk=" << c.k << "\nm=" << c.m << '\n';
  o << "ell=" << c.ell << '\n';
  o << "eps=" << c.eps << '\n';
  o << "digest=" << c.digest << '\n';
  o << "N=" << c.N << "\nedges=" << c.edges << '\n';
  if (c.branch == "even") {
    o << "norm=" << c.norm << "\ntrace_gamma=" << c.trace_gamma << '\n';
    o << "solver.method=" << c.solver.method << '\n';
  }
  o << "solver.tol=" << c.tol << '\n';
  int64_t iters = c.solver.iters;
  double resid = c.solver.residual;
  for (const auto& s : c.per_t) {
    iters += s.solver.iters;
    resid = std::max(resid, s.solver.residual);
  }
  o << "solver.iters=" << iters << '\n';
  o << "solver.residual=" << resid << '\n';
  o << "per_t.count=" << c.per_t.size() << '\n';
  for (size_t i = 0; i < c.per_t.size(); ++i) {
    const auto& s = c.per_t[i];
    const std::string p = "per_t[" + std::to_string(i) + "].";
    o << p << "t=" << s.t << '\n' << p << "buckets=" << s.buckets << '\n' << p << "constraints=" << s.constraints << '\n';
    o << p << "algval=" << s.algval << '\n' << p << "eps_bound=" << s.contribution << '\n';
    o << p << "constant=" << s.constant_term << '\n' << p << "norm_term=" << s.norm_term << '\n';
    o << p << "unrepresented=" << s.unrepresented << '\n';
    o << p << "gamma=" << s.gamma << '\n' << p << "eta=" << s.eta << '\n' << p << "N=" << s.N << '\n';
    o << p << "edges=" << s.edges << '\n' << p << "fallback=" << (s.fallback ? 1 : 0) << '\n';
    o << p << "solver.iters=" << s.solver.iters << '\n' << p << "solver.residual=" << s.solver.residual << '\n';
  }
  for (const auto& w : c.warnings) o << "warning=" << w << '\n';
  o << "seconds=" << c.seconds << '\n';
  return o.str();
}

TraceMoment trace_moment(const Eigen::SparseMatrix<double>& a, int r, uint64_t nnz_budget) {
  if (r < 1) throw DomainError("trace moment needs r >= 1");
  if (static_cast<uint64_t>(2 * r) * static_cast<uint64_t>(a.nonZeros()) > nnz_budget)
    throw ResourceError("trace moment exceeds the memory budget");
  Eigen::SparseMatrix<double> b = a;
  for (int i = 1; i < r; ++i) {
    b = (b * a).pruned();
    if (static_cast<uint64_t>(b.nonZeros()) > nnz_budget) throw ResourceError("trace moment exceeds the memory budget");
  }
  TraceMoment tm;
  tm.value = b.squaredNorm();
  tm.root = std::pow(tm.value, 1.0 / (2.0 * r));
  return tm;
}

TraceMoment trace_moment(const KikuchiGraph& g, const Regularizer& reg, int r, uint64_t nnz_budget) {
  return trace_moment(normalized_matrix(g, reg), r, nnz_budget);
}

}  // namespace hkxor
