#include "core/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "core/error.hpp"

namespace vtf {

MeasureGrid disk_grid(double radius, double h) {
  require(radius > 0.0 && h > 0.0 && std::isfinite(radius / h), Errc::invalid_argument, "bad disk grid");
  const int k = std::max(2, int(std::ceil(radius / h - 1e-12)));
  const double hh = radius / k;
  MeasureGrid g;
  g.nx = g.ny = 2 * k + 1;
  g.h = hh;
  g.x0 = g.y0 = -k * hh;
  g.mask.assign(g.size(), 0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x(i), y = g.y(j);
      g.mask[g.index(i, j)] = x * x + y * y <= radius * radius * (1 + 1e-12);
    }
  g.center = g.index(k, k);
  return g;
}

MeasureGrid box_grid(int nx, int ny, double h, double x0, double y0) {
  require(nx >= 1 && ny >= 1 && h > 0.0, Errc::invalid_argument, "bad box grid");
  MeasureGrid g;
  g.nx = nx;
  g.ny = ny;
  g.h = h;
  g.x0 = x0;
  g.y0 = y0;
  g.mask.assign(g.size(), 1);
  g.center = g.index(nx / 2, ny / 2);
  return g;
}

namespace {

struct Edge {
  int u, v;
  double cost;
  double flow = 0.0;  // net flow u -> v
};

}  // namespace

LipschitzResult dual_lipschitz_lp(const MeasureGrid& g, const std::vector<double>& a, const std::vector<double>& b,
                                  int stencil) {
  require(stencil == 4 || stencil == 8, Errc::invalid_argument, "stencil must be 4 or 8");
  require(g.mask.size() == g.size() && a.size() == g.size() && b.size() == g.size(), Errc::invalid_argument,
          "measure sizes do not match the grid");
  require(g.center < g.size() && g.mask[g.center], Errc::invalid_argument, "pinned node is outside the mask");

  std::vector<int> node(g.size(), -1);
  std::vector<std::size_t> lattice;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.mask[k]) {
      node[k] = int(lattice.size());
      lattice.push_back(k);
    }
  const int n = int(lattice.size());

  std::vector<double> supply(n);
  double scale = 0.0;
  for (int v = 0; v < n; ++v) {
    const double d = (a[lattice[v]] - b[lattice[v]]) * g.h * g.h;
    require(std::isfinite(d), Errc::numeric, "measure has non-finite entries");
    supply[v] = d;
    scale += std::abs(d);
  }
  const int c = node[g.center];
  supply[c] = 0.0;
  double rest = 0.0;
  for (int v = 0; v < n; ++v) rest += supply[v];
  supply[c] = -rest;

  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj(n);
  const int di[4] = {1, 0, 1, 1}, dj[4] = {0, 1, 1, -1};
  for (int v = 0; v < n; ++v) {
    const int i = int(lattice[v] % g.nx), j = int(lattice[v] / g.nx);
    for (int s = 0; s < (stencil == 8 ? 4 : 2); ++s) {
      const int ii = i + di[s], jj = j + dj[s];
      if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny) continue;
      const int w = node[g.index(ii, jj)];
      if (w < 0) continue;
      adj[v].push_back(int(edges.size()));
      adj[w].push_back(int(edges.size()));
      edges.push_back({v, w, g.h * std::hypot(di[s], dj[s])});
    }
  }

  LipschitzResult res;
  res.phi.assign(g.size(), 0.0);
  const double tiny = 1e-15 * std::max(scale, 1e-300);
  for (auto& s : supply)
    if (std::abs(s) <= tiny) s = 0.0;

  // Potentials pi = base + offset keep every residual arc at nonnegative
  // reduced cost c(u,v) + pi(u) - pi(v).
  std::vector<double> base(n, 0.0);
  double offset = 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<int> pred(n, -1);
  std::vector<char> done(n, 0);
  std::vector<int> touched;
  using Item = std::pair<double, int>;

  // Cheapest residual arc u -> v along edge e: cost and capacity.
  auto arc = [&](int e, int u, double& cost, double& cap) {
    const Edge& E = edges[e];
    const double f = E.u == u ? E.flow : -E.flow;  // flow in direction u -> v
    if (f < 0.0) {
      cost = -E.cost;
      cap = -f;
    } else {
      cost = E.cost;
      cap = inf;
    }
  };
  auto other = [&](int e, int u) { return edges[e].u == u ? edges[e].v : edges[e].u; };

  const int max_aug = 50 * n + 1000;
  while (true) {
    double top = -inf;
    bool any = false;
    for (int v = 0; v < n; ++v)
      if (supply[v] > 0.0) {
        top = std::max(top, base[v]);
        any = true;
      }
    if (!any) break;
    require(res.augmentations < max_aug, Errc::internal, "min-cost flow did not terminate");

    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int v : touched) {
      dist[v] = inf;
      pred[v] = -1;
      done[v] = 0;
    }
    touched.clear();
    for (int v = 0; v < n; ++v)
      if (supply[v] > 0.0) {
        dist[v] = top - base[v];
        touched.push_back(v);
        heap.push({dist[v], v});
      }
    int sink = -1;
    double D = 0.0;
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (done[u] || d > dist[u]) continue;
      done[u] = 1;
      if (supply[u] < 0.0) {
        sink = u;
        D = d;
        break;
      }
      for (int e : adj[u]) {
        const int v = other(e, u);
        if (done[v]) continue;
        double cost, cap;
        arc(e, u, cost, cap);
        const double rc = std::max(cost + base[u] - base[v], 0.0);
        if (d + rc < dist[v]) {
          if (dist[v] == inf) touched.push_back(v);
          dist[v] = d + rc;
          pred[v] = e;
          heap.push({dist[v], v});
        }
      }
    }
    require(sink >= 0, Errc::internal, "min-cost flow: no augmenting path (LP infeasible)");

    for (int v : touched)
      if (done[v]) base[v] += dist[v] - D;
    offset += D;

    double amount = -supply[sink];
    int v = sink;
    while (pred[v] >= 0) {
      const int u = other(pred[v], v);
      double cost, cap;
      arc(pred[v], u, cost, cap);
      amount = std::min(amount, cap);
      v = u;
    }
    const int source = v;
    amount = std::min(amount, supply[source]);
    v = sink;
    while (pred[v] >= 0) {
      const int e = pred[v];
      const int u = other(e, v);
      Edge& E = edges[e];
      E.flow += E.u == u ? amount : -amount;
      if (std::abs(E.flow) <= tiny) E.flow = 0.0;
      v = u;
    }
    supply[source] -= amount;
    supply[sink] += amount;
    if (std::abs(supply[source]) <= tiny) supply[source] = 0.0;
    if (std::abs(supply[sink]) <= tiny) supply[sink] = 0.0;
    ++res.augmentations;
  }

  for (const Edge& E : edges) res.value += E.cost * std::abs(E.flow);
  // phi = -pi, shifted so that phi(center) = 0.
  for (int v = 0; v < n; ++v) res.phi[lattice[v]] = base[c] - base[v];
  double viol = 0.0;
  for (const Edge& E : edges)
    viol = std::max(viol, std::abs(res.phi[lattice[E.u]] - res.phi[lattice[E.v]]) - E.cost);
  require(viol <= 1e-9 * std::max(1.0, g.h), Errc::internal, "min-cost flow potentials are not 1-Lipschitz");
  for (int v = 0; v < n; ++v)
    res.dual_value += res.phi[lattice[v]] * (v == c ? 0.0 : (a[lattice[v]] - b[lattice[v]]) * g.h * g.h);
  return res;
}

double dual_lipschitz(const MeasureGrid& g, const std::vector<double>& a, const std::vector<double>& b, int stencil) {
  return dual_lipschitz_lp(g, a, b, stencil).value;
}

}  // namespace vtf
