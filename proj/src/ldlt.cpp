#include "roompass/ldlt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace roompass {

namespace {

// Full (symmetrized) adjacency, diagonal dropped.
void build_adjacency(const SparseSymMatrix& a, std::vector<int>& xadj,
                     std::vector<int>& adj) {
  const int n = a.n;
  std::vector<int> deg(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      const int j = a.cols[p];
      if (j == i) continue;
      deg[i]++;
      deg[j]++;
    }
  }
  xadj.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) xadj[i + 1] = xadj[i] + deg[i];
  adj.assign(xadj[n], 0);
  std::vector<int> next(xadj.begin(), xadj.end() - 1);
  for (int i = 0; i < n; ++i) {
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      const int j = a.cols[p];
      if (j == i) continue;
      adj[next[i]++] = j;
      adj[next[j]++] = i;
    }
  }
}

// BFS from root over one component; returns the position where the last
// level begins in `order`.  level[] doubles as the visited marker.
int bfs_component(int root, const std::vector<int>& xadj, const std::vector<int>& adj,
                  std::vector<int>& level, std::vector<int>& order) {
  order.clear();
  order.push_back(root);
  level[root] = 0;
  int last_level_begin = 0;
  std::size_t head = 0;
  int current_level = 0;
  while (head < order.size()) {
    const int v = order[head++];
    if (level[v] > current_level) {
      current_level = level[v];
      last_level_begin = static_cast<int>(head) - 1;
    }
    for (int p = xadj[v]; p < xadj[v + 1]; ++p) {
      const int w = adj[p];
      if (level[w] < 0) {
        level[w] = level[v] + 1;
        order.push_back(w);
      }
    }
  }
  return last_level_begin;
}

}  // namespace

std::vector<int> rcm_ordering(const SparseSymMatrix& pattern) {
  const int n = pattern.n;
  std::vector<int> xadj, adj;
  build_adjacency(pattern, xadj, adj);
  std::vector<int> degree(n);
  for (int i = 0; i < n; ++i) degree[i] = xadj[i + 1] - xadj[i];

  std::vector<int> perm;
  perm.reserve(n);
  std::vector<int> level(n, -1), scratch;
  std::vector<char> placed(n, 0);

  for (int seed = 0; seed < n; ++seed) {
    if (placed[seed]) continue;
    // pseudo-peripheral start: two BFS passes from the component seed
    int root = seed;
    for (int pass = 0; pass < 2; ++pass) {
      const int tail = bfs_component(root, xadj, adj, level, scratch);
      int best = scratch[tail];
      for (std::size_t k = tail; k < scratch.size(); ++k)
        if (degree[scratch[k]] < degree[best]) best = scratch[k];
      for (int v : scratch) level[v] = -1;
      root = best;
    }
    // Cuthill-McKee: BFS appending neighbors in increasing degree order
    const std::size_t begin = perm.size();
    perm.push_back(root);
    placed[root] = 1;
    std::size_t head = begin;
    std::vector<int> nbrs;
    while (head < perm.size()) {
      const int v = perm[head++];
      nbrs.clear();
      for (int p = xadj[v]; p < xadj[v + 1]; ++p)
        if (!placed[adj[p]]) nbrs.push_back(adj[p]);
      std::sort(nbrs.begin(), nbrs.end(), [&](int a, int b) {
        if (degree[a] != degree[b]) return degree[a] < degree[b];
        return a < b;
      });
      for (int w : nbrs) {
        placed[w] = 1;
        perm.push_back(w);
      }
    }
    std::reverse(perm.begin() + begin, perm.end());
  }
  return perm;
}

std::vector<int> nested_dissection_ordering(const SparseSymMatrix& pattern) {
  const int n = pattern.n;
  std::vector<int> xadj, adj;
  build_adjacency(pattern, xadj, adj);

  std::vector<int> perm;
  perm.reserve(n);
  std::vector<int> level(n, -1);   // BFS scratch, -1 = untouched
  std::vector<char> removed(n, 0); // eliminated or assigned to a separator

  // iterative post-order: each task orders one connected piece
  std::vector<std::vector<int>> stack;
  {
    std::vector<char> seen(n, 0);
    for (int s = 0; s < n; ++s) {
      if (seen[s]) continue;
      std::vector<int> comp{s};
      seen[s] = 1;
      for (std::size_t h = 0; h < comp.size(); ++h)
        for (int p = xadj[comp[h]]; p < xadj[comp[h] + 1]; ++p)
          if (!seen[adj[p]]) {
            seen[adj[p]] = 1;
            comp.push_back(adj[p]);
          }
      std::sort(comp.begin(), comp.end());
      stack.push_back(std::move(comp));
    }
  }

  constexpr int kLeafSize = 160;

  std::function<void(std::vector<int>&)> dissect = [&](std::vector<int>& comp) {
    if (static_cast<int>(comp.size()) <= kLeafSize) {
      // small piece: Cuthill-McKee within the piece (reversed at the end)
      for (int v : comp) level[v] = 0;  // membership marker
      std::vector<int> local;
      std::vector<char> placed(comp.size(), 0);
      // BFS from the lowest-degree member
      auto deg_in = [&](int v) {
        int d = 0;
        for (int p = xadj[v]; p < xadj[v + 1]; ++p)
          if (level[adj[p]] == 0) ++d;
        return d;
      };
      std::vector<int> rest = comp;
      while (!rest.empty()) {
        int root = rest.front();
        for (int v : rest)
          if (level[v] == 0 && deg_in(v) < deg_in(root)) root = v;
        std::vector<int> bfs{root};
        level[root] = 1;
        for (std::size_t h = 0; h < bfs.size(); ++h) {
          std::vector<int> nb;
          for (int p = xadj[bfs[h]]; p < xadj[bfs[h] + 1]; ++p)
            if (level[adj[p]] == 0) nb.push_back(adj[p]);
          std::sort(nb.begin(), nb.end(), [&](int a, int b) {
            const int da = deg_in(a), db = deg_in(b);
            if (da != db) return da < db;
            return a < b;
          });
          for (int w : nb) {
            level[w] = 1;
            bfs.push_back(w);
          }
        }
        std::reverse(bfs.begin(), bfs.end());
        local.insert(local.end(), bfs.begin(), bfs.end());
        std::vector<int> remaining;
        for (int v : rest)
          if (level[v] == 0) remaining.push_back(v);
        rest = std::move(remaining);
      }
      for (int v : comp) level[v] = -1;
      perm.insert(perm.end(), local.begin(), local.end());
      return;
    }

    // BFS level structure from a pseudo-peripheral vertex of the piece
    for (int v : comp) level[v] = -2;  // membership
    int root = comp.front();
    std::vector<int> bfs;
    auto run_bfs = [&](int r) {
      bfs.clear();
      bfs.push_back(r);
      level[r] = 0;
      int depth = 0;
      for (std::size_t h = 0; h < bfs.size(); ++h) {
        const int v = bfs[h];
        depth = std::max(depth, level[v]);
        for (int p = xadj[v]; p < xadj[v + 1]; ++p) {
          const int w = adj[p];
          if (level[w] == -2) {
            level[w] = level[v] + 1;
            bfs.push_back(w);
          }
        }
      }
      return depth;
    };
    int depth = run_bfs(root);
    {  // second pass from the far end
      const int far = bfs.back();
      for (int v : comp) level[v] = -2;
      root = far;
      depth = run_bfs(root);
    }
    if (depth < 2) {
      // blob with no usable level structure; emit as-is
      for (int v : comp) level[v] = -1;
      perm.insert(perm.end(), comp.begin(), comp.end());
      return;
    }
    // thinnest level near the middle becomes the separator
    const int lo = std::max(1, depth * 35 / 100);
    const int hi = std::max(lo, depth * 65 / 100);
    std::vector<int> level_count(depth + 1, 0);
    for (int v : comp) level_count[level[v]]++;
    int sep_level = lo;
    for (int l = lo; l <= hi; ++l)
      if (level_count[l] < level_count[sep_level]) sep_level = l;

    std::vector<int> separator;
    for (int v : comp)
      if (level[v] == sep_level) separator.push_back(v);
    std::sort(separator.begin(), separator.end());
    for (int v : separator) level[v] = -3;  // removed

    // components of the piece minus the separator
    std::vector<std::vector<int>> parts;
    for (int v : comp) {
      if (level[v] < 0) continue;  // separator (or untouched, impossible)
      std::vector<int> part{v};
      level[v] = -4;
      for (std::size_t h = 0; h < part.size(); ++h)
        for (int p = xadj[part[h]]; p < xadj[part[h] + 1]; ++p) {
          const int w = adj[p];
          if (level[w] >= 0) {
            level[w] = -4;
            part.push_back(w);
          }
        }
      std::sort(part.begin(), part.end());
      parts.push_back(std::move(part));
    }
    for (int v : comp) level[v] = -1;
    for (auto& part : parts) dissect(part);
    perm.insert(perm.end(), separator.begin(), separator.end());
  };

  for (auto& comp : stack) dissect(comp);
  return perm;
}

std::vector<int> fill_ordering(const SparseSymMatrix& pattern) {
  return pattern.n < 2000 ? rcm_ordering(pattern)
                          : nested_dissection_ordering(pattern);
}

void LdltFactor::analyze(const SparseSymMatrix& pattern) {
  n_ = pattern.n;
  perm_ = fill_ordering(pattern);
  iperm_.assign(n_, 0);
  for (int k = 0; k < n_; ++k) iperm_[perm_[k]] = k;

  // Build the upper triangle of P A P^T in compressed column form.  An
  // input entry (r, c) lands in permuted position (iperm[r], iperm[c]);
  // the permutation may swap it across the diagonal, hence the min/max.
  // map_ lets factorize() scatter input values without re-deriving this.
  const int nnz = pattern.nnz();
  ap_.assign(n_ + 1, 0);
  ai_.assign(nnz, 0);
  map_.assign(nnz, 0);
  for (int r = 0; r < n_; ++r) {
    for (int p = pattern.row_ptr[r]; p < pattern.row_ptr[r + 1]; ++p) {
      const int col = std::max(iperm_[r], iperm_[pattern.cols[p]]);
      ap_[col + 1]++;
    }
  }
  for (int k = 0; k < n_; ++k) ap_[k + 1] += ap_[k];
  std::vector<int> next(ap_.begin(), ap_.end() - 1);
  for (int r = 0; r < n_; ++r) {
    for (int p = pattern.row_ptr[r]; p < pattern.row_ptr[r + 1]; ++p) {
      const int a = iperm_[r], b = iperm_[pattern.cols[p]];
      const int col = std::max(a, b), row = std::min(a, b);
      const int pos = next[col]++;
      ai_[pos] = row;
      map_[p] = pos;
    }
  }

  // Elimination tree and column counts of L (up-looking traversal).
  parent_.assign(n_, -1);
  lnz_.assign(n_, 0);
  std::vector<int> flag(n_, -1);
  for (int k = 0; k < n_; ++k) {
    parent_[k] = -1;
    flag[k] = k;
    for (int p = ap_[k]; p < ap_[k + 1]; ++p) {
      int i = ai_[p];
      if (i >= k) continue;
      for (; flag[i] != k; i = parent_[i]) {
        if (parent_[i] == -1) parent_[i] = k;
        lnz_[i]++;
        flag[i] = k;
      }
    }
  }
  lp_.assign(n_ + 1, 0);
  for (int k = 0; k < n_; ++k) lp_[k + 1] = lp_[k] + lnz_[k];
  li_.assign(lp_[n_], 0);
  lx_.assign(lp_[n_], 0.0);
  d_.assign(n_, 0.0);
  ax_.assign(nnz, 0.0);
}

LdltInfo LdltFactor::factorize(const std::vector<double>& vals, double singular_tol) {
  if (n_ == 0) throw std::logic_error("LdltFactor: analyze before factorize");
  if (vals.size() != map_.size())
    throw std::invalid_argument("LdltFactor: value array not aligned with pattern");
  for (std::size_t p = 0; p < map_.size(); ++p) ax_[map_[p]] = vals[p];

  std::vector<double> y(n_, 0.0);
  std::vector<int> pattern(n_), flag(n_, -1), fill(n_);
  for (int k = 0; k < n_; ++k) fill[k] = lp_[k];

  LdltInfo info;
  info.ok = true;
  double dmax = 0.0;
  for (int k = 0; k < n_; ++k) {
    // scatter column k of the permuted upper triangle; the nonzero
    // pattern of row k of L is the union of etree paths
    int top = n_;
    flag[k] = k;
    y[k] = 0.0;
    for (int p = ap_[k]; p < ap_[k + 1]; ++p) {
      int i = ai_[p];
      if (i == k) {
        y[k] += ax_[p];
        continue;
      }
      y[i] += ax_[p];
      int len = 0;
      for (; flag[i] != k; i = parent_[i]) {
        pattern[len++] = i;
        flag[i] = k;
      }
      while (len > 0) pattern[--top] = pattern[--len];
    }
    // up-looking sparse triangular solve in topological order
    double dk = y[k];
    y[k] = 0.0;  // slot k is read again as a row index by later columns
    for (int t = top; t < n_; ++t) {
      const int j = pattern[t];
      const double yj = y[j];
      y[j] = 0.0;
      for (int p = lp_[j]; p < fill[j]; ++p) y[li_[p]] -= lx_[p] * yj;
      const double lkj = yj / d_[j];
      dk -= lkj * yj;
      li_[fill[j]] = k;
      lx_[fill[j]] = lkj;
      fill[j]++;
    }
    d_[k] = dk;
    dmax = std::max(dmax, std::abs(dk));
    if (dk == 0.0) {
      info.ok = false;  // hard breakdown, cannot continue dividing
      info_ = info;
      return info;
    }
  }
  info.max_abs_pivot = dmax;
  info.min_abs_pivot = dmax;
  const double thresh = singular_tol * std::max(dmax, 1e-300);
  for (int k = 0; k < n_; ++k) {
    const double dk = d_[k];
    info.min_abs_pivot = std::min(info.min_abs_pivot, std::abs(dk));
    if (std::abs(dk) <= thresh)
      info.n_zero++;
    else if (dk < 0.0)
      info.n_negative++;
    else
      info.n_positive++;
  }
  info_ = info;
  return info;
}

void LdltFactor::solve(std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("LdltFactor::solve: size mismatch");
  std::vector<double> b(n_);
  for (int k = 0; k < n_; ++k) b[k] = x[perm_[k]];
  // L z = b
  for (int k = 0; k < n_; ++k) {
    const double bk = b[k];
    const int pend = lp_[k] + lnz_[k];
    for (int p = lp_[k]; p < pend; ++p) b[li_[p]] -= lx_[p] * bk;
  }
  // D w = z
  for (int k = 0; k < n_; ++k) b[k] /= d_[k];
  // L^T y = w
  for (int k = n_ - 1; k >= 0; --k) {
    double bk = b[k];
    const int pend = lp_[k] + lnz_[k];
    for (int p = lp_[k]; p < pend; ++p) bk -= lx_[p] * b[li_[p]];
    b[k] = bk;
  }
  for (int k = 0; k < n_; ++k) x[perm_[k]] = b[k];
}

}  // namespace roompass
