#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "roompass/eigensolve.hpp"

namespace roompass {

namespace {

double splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z = z ^ (z >> 31);
  return (static_cast<double>(z >> 11) * 0x1.0p-53) * 2.0 - 1.0;  // (-1, 1)
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace

bool tridiag_ql(std::vector<double>& d, std::vector<double>& e,
                std::vector<double>* z) {
  const int m = static_cast<int>(d.size());
  if (m == 0) return true;
  e.resize(m, 0.0);  // e[i] couples d[i], d[i+1]; e[m-1] is workspace
  const double eps = std::numeric_limits<double>::epsilon();

  for (int l = 0; l < m; ++l) {
    int iter = 0;
    int split;
    do {
      for (split = l; split < m - 1; ++split) {
        const double dd = std::abs(d[split]) + std::abs(d[split + 1]);
        if (std::abs(e[split]) <= eps * dd) break;
      }
      if (split != l) {
        if (iter++ == 80) return false;
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[split] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = split - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[split] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z) {
            for (int k = 0; k < m; ++k) {
              f = (*z)[k * m + (i + 1)];
              (*z)[k * m + (i + 1)] = s * (*z)[k * m + i] + c * f;
              (*z)[k * m + i] = c * (*z)[k * m + i] - s * f;
            }
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[split] = 0.0;
      }
    } while (split != l);
  }

  // ascending order, columns of z permuted alongside
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
  std::vector<double> ds(m);
  for (int i = 0; i < m; ++i) ds[i] = d[order[i]];
  d = ds;
  if (z) {
    std::vector<double> zs(static_cast<std::size_t>(m) * m);
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < m; ++j) zs[k * m + j] = (*z)[k * m + order[j]];
    *z = zs;
  }
  return true;
}

PencilSolver::PencilSolver(const SparseSymMatrix& S, const SparseSymMatrix& B,
                           EigSolveOptions opts)
    : S_(S), B_(B), opts_(opts), combo_({&S, &B}) {
  opts_.validate();
  if (S.n != B.n) throw std::invalid_argument("PencilSolver: dimension mismatch");
  n_ = S.n;
  s_norm_ = S.one_norm();
  b_norm_ = B.one_norm();
  if (b_norm_ <= 0.0) throw std::invalid_argument("PencilSolver: B is zero");
  ldlt_.analyze(combo_.pattern());
  rng_state_ = opts_.seed ^ (0x6a09e667f3bcc909ull + static_cast<std::uint64_t>(n_));
}

double PencilSolver::rng_uniform() { return splitmix64_next(rng_state_); }

bool PencilSolver::factor_at(double sigma) {
  combo_.combine({1.0, -sigma}, shifted_vals_);
  const LdltInfo info = ldlt_.factorize(shifted_vals_);
  return info.ok && !info.near_singular();
}

int PencilSolver::count_below(double lambda) {
  if (!factor_at(lambda)) throw SingularShiftError(lambda);
  return ldlt_.info().n_negative;
}

int PencilSolver::count_below_robust(double lambda, double* used) {
  const double scale = std::max(1.0, std::abs(lambda));
  if (factor_at(lambda)) {
    if (used) *used = lambda;
    return ldlt_.info().n_negative;
  }
  double delta = 1e-13 * scale;
  for (int attempt = 0; attempt < 16; ++attempt) {
    for (double sgn : {1.0, -1.0}) {
      const double t = lambda + sgn * delta;
      if (factor_at(t)) {
        if (used) *used = t;
        return ldlt_.info().n_negative;
      }
    }
    delta *= 4.0;
  }
  throw SingularShiftError(lambda);
}

void PencilSolver::op_apply(const std::vector<double>& x, std::vector<double>& y) const {
  y.resize(n_);
  B_.multiply(x.data(), y.data());
  const_cast<LdltFactor&>(ldlt_).solve(y);
}

double PencilSolver::relative_residual(const std::vector<double>& x,
                                       double lambda) const {
  std::vector<double> sx(n_), bx(n_);
  S_.multiply(x.data(), sx.data());
  B_.multiply(x.data(), bx.data());
  double r2 = 0.0, x2 = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double ri = sx[i] - lambda * bx[i];
    r2 += ri * ri;
    x2 += x[i] * x[i];
  }
  return std::sqrt(r2) / (residual_scale(lambda) * std::sqrt(x2));
}

// One slice: shift-invert Lanczos at the slice midpoint with full
// reorthogonalization in the B inner product.  Converged pairs are locked
// between restarts, so a restarted Krylov space explores only the
// B-orthogonal complement; repeated eigenvalues surface as separate pairs.
EigPairList PencilSolver::lanczos_slice(double lo, double hi, int want,
                                        bool& complete) {
  complete = false;
  EigPairList result;
  if (want <= 0) {
    complete = true;
    return result;
  }

  const double width = hi - lo;
  double sigma = 0.5 * (lo + hi);
  {
    bool ok = factor_at(sigma);
    for (int k = 1; !ok && k <= 8; ++k) {
      sigma = 0.5 * (lo + hi) + (k % 2 ? 1.0 : -1.0) * width * 1e-3 * ((k + 1) / 2);
      ok = factor_at(sigma);
    }
    if (!ok) throw SingularShiftError(sigma);
  }

  const int ncv = std::clamp(2 * want + 16, 24, std::max(24, std::min(n_, 180)));
  std::vector<std::vector<double>> locked;  // B-orthonormal converged vectors
  int ops_budget = opts_.max_iterations;

  const int max_restarts = 5;
  for (int restart = 0; restart <= max_restarts && ops_budget > 0 &&
                        static_cast<int>(result.size()) < want;
       ++restart) {
    std::vector<double> v(n_), bu(n_), u(n_);
    for (int i = 0; i < n_; ++i) v[i] = rng_uniform();
    for (int sweep = 0; sweep < 2; ++sweep) {
      B_.multiply(v.data(), bu.data());
      for (const auto& x : locked) axpy(-dot(x, bu), x, v);
    }
    B_.multiply(v.data(), bu.data());
    const double nb = std::sqrt(std::max(0.0, dot(v, bu)));
    if (nb <= 0.0) break;
    for (double& vi : v) vi /= nb;

    std::vector<std::vector<double>> V;
    std::vector<double> alpha, beta;
    double op_scale = 0.0;

    // Ritz data of the current tridiagonal section
    std::vector<double> td, te, z;
    auto ritz_solve = [&]() -> bool {
      const int j = static_cast<int>(V.size());
      td = alpha;
      te = beta;
      te.resize(j, 0.0);
      z.assign(static_cast<std::size_t>(j) * j, 0.0);
      for (int i = 0; i < j; ++i) z[static_cast<std::size_t>(i) * j + i] = 1.0;
      return tridiag_ql(td, te, &z);
    };
    auto converged_indices = [&]() -> std::vector<int> {
      const int j = static_cast<int>(V.size());
      const double beta_last =
          beta.size() >= static_cast<std::size_t>(j) ? beta[j - 1] : 0.0;
      std::vector<int> conv;
      for (int i = 0; i < j; ++i) {
        const double theta = td[i];
        if (std::abs(theta) < 1e-300) continue;
        const double lam = sigma + 1.0 / theta;
        if (!(lam > lo && lam < hi)) continue;
        const double resid_t =
            std::abs(beta_last * z[static_cast<std::size_t>(j - 1) * j + i]);
        if (resid_t <= std::max(std::abs(theta) * 1e-11, 1e-14 * op_scale))
          conv.push_back(i);
      }
      return conv;
    };

    bool exhausted = false;
    while (static_cast<int>(V.size()) < ncv && ops_budget > 0) {
      V.push_back(v);
      const int j = static_cast<int>(V.size()) - 1;
      op_apply(V[j], u);
      --ops_budget;
      if (j > 0) axpy(-beta[j - 1], V[j - 1], u);
      B_.multiply(u.data(), bu.data());
      const double aj = dot(V[j], bu);
      axpy(-aj, V[j], u);
      alpha.push_back(aj);
      for (int sweep = 0; sweep < 2; ++sweep) {
        B_.multiply(u.data(), bu.data());
        for (const auto& w : V) axpy(-dot(w, bu), w, u);
        for (const auto& x : locked) axpy(-dot(x, bu), x, u);
      }
      B_.multiply(u.data(), bu.data());
      const double bj = std::sqrt(std::max(0.0, dot(u, bu)));
      op_scale = std::max({op_scale, std::abs(aj), bj, 1e-300});

      if (bj <= 1e-14 * op_scale) {
        // invariant subspace; splice in a fresh direction (T gains a
        // zero coupling and becomes block diagonal, which is fine)
        beta.push_back(0.0);
        std::vector<double> f(n_);
        for (int i = 0; i < n_; ++i) f[i] = rng_uniform();
        for (int sweep = 0; sweep < 2; ++sweep) {
          B_.multiply(f.data(), bu.data());
          for (const auto& w : V) axpy(-dot(w, bu), w, f);
          for (const auto& x : locked) axpy(-dot(x, bu), x, f);
        }
        B_.multiply(f.data(), bu.data());
        const double fn = std::sqrt(std::max(0.0, dot(f, bu)));
        if (fn <= 1e-10) {
          exhausted = true;  // nothing left outside span(V) + locked
          break;
        }
        for (double& fi : f) fi /= fn;
        v = f;
      } else {
        beta.push_back(bj);
        v = u;
        for (double& vi : v) vi /= bj;
      }

      const int jj = static_cast<int>(V.size());
      if (jj >= std::max(want, 8) && (jj % 6 == 0 || jj == ncv)) {
        if (!ritz_solve()) continue;
        if (static_cast<int>(converged_indices().size()) +
                static_cast<int>(result.size()) >=
            want)
          break;
      }
    }

    // extract once per run: Ritz vectors of distinct indices are mutually
    // B-orthogonal, and locked-orthogonality prevents cross-run duplicates
    if (!V.empty() && ritz_solve()) {
      const int j = static_cast<int>(V.size());
      for (int i : converged_indices()) {
        std::vector<double> x(n_, 0.0);
        for (int t = 0; t < j; ++t)
          axpy(z[static_cast<std::size_t>(t) * j + i], V[t], x);
        std::vector<double> bx(n_), sx(n_);
        B_.multiply(x.data(), bx.data());
        const double bn = std::sqrt(std::max(dot(x, bx), 1e-300));
        for (double& xi : x) xi /= bn;
        S_.multiply(x.data(), sx.data());
        B_.multiply(x.data(), bx.data());
        const double lam = dot(x, sx) / dot(x, bx);
        if (!(lam > lo && lam < hi)) continue;
        if (relative_residual(x, lam) > opts_.tolerance) continue;
        result.emplace_back(lam, x);
        locked.push_back(result.back().second);
      }
    }
    if (exhausted) break;
  }

  std::sort(result.begin(), result.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (static_cast<int>(result.size()) > want) result.resize(want);
  complete = static_cast<int>(result.size()) == want;
  return result;
}

EigPairList PencilSolver::solve_interval(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("solve_interval: lo >= hi");
  const int clo = count_below(lo);
  const int chi = count_below(hi);
  EigPairList out;

  struct Task {
    double lo, hi;
    int clo, chi;
  };
  std::vector<Task> stack{{lo, hi, clo, chi}};
  while (!stack.empty()) {
    const Task t = stack.back();
    stack.pop_back();
    const int m = t.chi - t.clo;
    if (m <= 0) continue;
    if (m <= opts_.slice_capacity) {
      bool complete = false;
      EigPairList pairs = lanczos_slice(t.lo, t.hi, m, complete);
      if (complete) {
        for (auto& p : pairs) out.push_back(std::move(p));
        continue;
      }
    }
    const double scale = std::max({1.0, std::abs(t.lo), std::abs(t.hi)});
    if (t.hi - t.lo <= 1e-11 * scale)
      throw ConvergenceError("eigensolve: cluster of " + std::to_string(m) +
                             " eigenvalues did not converge in a slice of width " +
                             std::to_string(t.hi - t.lo));
    double used = 0.0;
    int cmid;
    try {
      cmid = count_below_robust(0.5 * (t.lo + t.hi), &used);
    } catch (const SingularShiftError&) {
      throw ConvergenceError("eigensolve: could not place a shift inside slice");
    }
    if (!(used > t.lo && used < t.hi))
      throw ConvergenceError("eigensolve: slice too thin to bisect");
    stack.push_back({used, t.hi, cmid, t.chi});
    stack.push_back({t.lo, used, t.clo, cmid});
  }

  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (static_cast<int>(out.size()) != chi - clo)
    throw CertificationError(
        "eigensolve: inertia certificate mismatch: expected " +
        std::to_string(chi - clo) + " eigenvalues in interval, found " +
        std::to_string(out.size()));
  return out;
}

EigPairList PencilSolver::smallest(int k, double* lo_used, double* hi_used) {
  if (k < 1) throw std::invalid_argument("smallest: k < 1");
  if (k > n_) throw std::invalid_argument("smallest: k exceeds dimension");

  // lower bracket: double downward until no eigenvalue lies below
  double lo = -std::max(1e-8, 1e-8 * s_norm_ / b_norm_);
  double lo_adj = lo;
  for (int it = 0;; ++it) {
    if (it > 220) throw ConvergenceError("smallest: no lower bound found");
    if (count_below_robust(lo, &lo_adj) == 0) break;
    lo *= 4.0;
  }
  // upper bracket: double the width until at least k eigenvalues enclosed
  double w = std::max(1.0, std::abs(lo_adj));
  double hi = lo_adj + w, hi_adj = hi;
  for (int it = 0;; ++it) {
    if (it > 220) throw ConvergenceError("smallest: no upper bound found");
    if (count_below_robust(hi, &hi_adj) >= k) break;
    w *= 2.0;
    hi = lo_adj + w;
  }
  // pull the upper end down so the interval is not grossly overpopulated
  double lo_b = lo_adj, hi_b = hi_adj;
  for (int it = 0; it < 24; ++it) {
    if (count_below_robust(hi_b, nullptr) <= k + opts_.slice_capacity) break;
    double mid_adj;
    const int c = count_below_robust(0.5 * (lo_b + hi_b), &mid_adj);
    if (!(mid_adj > lo_b && mid_adj < hi_b)) break;
    if (c >= k)
      hi_b = mid_adj;
    else
      lo_b = mid_adj;
  }
  hi_adj = hi_b;

  EigPairList pairs = solve_interval(lo_adj, hi_adj);
  if (static_cast<int>(pairs.size()) > k) pairs.resize(k);
  if (static_cast<int>(pairs.size()) < k)
    throw ConvergenceError("smallest: bracket lost eigenvalues");
  if (lo_used) *lo_used = lo_adj;
  if (hi_used) *hi_used = hi_adj;
  return pairs;
}

int count_below(const SparseSymMatrix& S, const SparseSymMatrix& B, double lambda) {
  PencilSolver solver(S, B);
  return solver.count_below(lambda);
}

EigPairs eigs_smallest(const SparseSymMatrix& S, const SparseSymMatrix& B, int k,
                       const EigSolveOptions& opts) {
  PencilSolver solver(S, B, opts);
  EigPairList pairs = solver.smallest(k, nullptr, nullptr);
  EigPairs out;
  for (const auto& [lam, vec] : pairs) {
    out.spectrum.insert(lam, 1, "", solver.relative_residual(vec, lam),
                        opts.merge_tol);
    out.vectors.push_back(vec);
  }
  return out;
}

Spectrum eigs_in_interval(const SparseSymMatrix& S, const SparseSymMatrix& B,
                          double lo, double hi, const EigSolveOptions& opts) {
  PencilSolver solver(S, B, opts);
  EigPairList pairs = solver.solve_interval(lo, hi);
  Spectrum spec;
  for (const auto& [lam, vec] : pairs)
    spec.insert(lam, 1, "", solver.relative_residual(vec, lam), opts.merge_tol);
  return spec;
}

}  // namespace roompass
