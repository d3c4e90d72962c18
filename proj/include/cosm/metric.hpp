#pragma once

#include "cosm/structure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cosm {

// Entity-indexed symmetric distance table with zero diagonal; exact rationals.
struct MetricTable {
    std::string construction;
    Rational alpha = Rational(0);  // composite mixing weight where applicable
    std::vector<std::vector<Rational>> d;

    std::size_t size() const { return d.size(); }
};

inline MetricTable zero_table(std::size_t n, std::string construction) {
    MetricTable t;
    t.construction = std::move(construction);
    t.d.assign(n, std::vector<Rational>(n, Rational(0)));
    return t;
}

// int(x) = {y : x <= y}, ext(x) = {y : y <= x}, both reflexively closed.
struct IntExt {
    std::vector<bool> intension;
    std::vector<bool> extension;
};

inline IntExt intension_extension(const SubpatternGraph& graph, EntityIndex x) {
    const std::size_t n = graph.q.size();
    IntExt out{std::vector<bool>(n, false), std::vector<bool>(n, false)};
    out.intension[x] = out.extension[x] = true;
    for (EntityIndex y = 0; y < n; ++y) {
        if (graph.has_edge(x, y)) out.intension[y] = true;
        if (graph.has_edge(y, x)) out.extension[y] = true;
    }
    return out;
}

// Tanimoto distance 1 - |A&B|/|A|B|; empty vs empty is 0, empty vs non-empty 1.
inline Rational tanimoto_distance(const std::vector<bool>& a, const std::vector<bool>& b) {
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] && b[i]) ++inter;
        if (a[i] || b[i]) ++uni;
    }
    if (uni == 0) return Rational(0);
    return Rational(1) - Rational(static_cast<long long>(inter), static_cast<long long>(uni));
}

struct TanimotoMetrics {
    MetricTable intensional;
    MetricTable extensional;
    MetricTable composite;  // alpha*d_I + (1-alpha)*d_E
};

inline TanimotoMetrics tanimoto_metrics(const SubpatternGraph& graph, const Rational& alpha) {
    if (alpha < 0 || alpha > 1) throw Error("bad-params", "alpha must lie in [0,1]");
    const std::size_t n = graph.q.size();
    TanimotoMetrics out{zero_table(n, "tanimoto-intensional"), zero_table(n, "tanimoto-extensional"),
                        zero_table(n, "tanimoto-composite")};
    out.composite.alpha = alpha;
    std::vector<IntExt> sets;
    sets.reserve(n);
    for (EntityIndex x = 0; x < n; ++x) sets.push_back(intension_extension(graph, x));
    for (EntityIndex x = 0; x < n; ++x) {
        for (EntityIndex y = x + 1; y < n; ++y) {
            const Rational di = tanimoto_distance(sets[x].intension, sets[y].intension);
            const Rational de = tanimoto_distance(sets[x].extension, sets[y].extension);
            out.intensional.d[x][y] = out.intensional.d[y][x] = di;
            out.extensional.d[x][y] = out.extensional.d[y][x] = de;
            const Rational comp = alpha * di + (Rational(1) - alpha) * de;
            out.composite.d[x][y] = out.composite.d[y][x] = comp;
        }
    }
    return out;
}

// Normalized Q(*,x) masses over the pattern extension of x; an all-zero Q
// profile falls back to uniform and is flagged degenerate.
struct QDistribution {
    EntityIndex entity = kNoEntity;
    std::vector<std::pair<EntityIndex, Rational>> mass;  // support in entity order
    bool degenerate = false;
};

inline QDistribution q_distribution(const SubpatternGraph& graph, EntityIndex x) {
    QDistribution out;
    out.entity = x;
    const IntExt ie = intension_extension(graph, x);
    std::vector<std::pair<EntityIndex, Rational>> q;
    Rational total(0);
    for (EntityIndex y = 0; y < graph.q.size(); ++y) {
        if (!ie.extension[y]) continue;
        Rational value(0);
        const PairQ& cell = graph.q[y][x];
        if (cell.state == PairQ::State::Value && cell.best.is_value() && cell.best.value > 0)
            value = cell.best.value;
        q.push_back({y, value});
        total += value;
    }
    if (total == 0) {
        out.degenerate = true;
        const Rational share(1, static_cast<long long>(q.size()));
        for (auto& [y, v] : q) v = share;
    } else {
        for (auto& [y, v] : q) v /= total;
    }
    out.mass = std::move(q);
    return out;
}

namespace detail {

// Exact transportation simplex (MODI) with Bland's rule; supplies and demands
// must balance. Returns the minimum total ground-distance shipment cost.
inline Rational transport_simplex(const std::vector<Rational>& supply,
                                  const std::vector<Rational>& demand,
                                  const std::vector<std::vector<Rational>>& cost) {
    const std::size_t m = supply.size(), n = demand.size();
    std::vector<std::vector<Rational>> flow(m, std::vector<Rational>(n, Rational(0)));
    std::vector<std::vector<bool>> basis(m, std::vector<bool>(n, false));

    // Northwest corner start; keeps exactly m+n-1 basis cells (some may carry
    // zero flow on degenerate instances).
    {
        std::vector<Rational> s = supply, d = demand;
        std::size_t i = 0, j = 0;
        while (i < m && j < n) {
            const Rational t = rational_min(s[i], d[j]);
            flow[i][j] = t;
            basis[i][j] = true;
            s[i] -= t;
            d[j] -= t;
            if (i + 1 == m && j + 1 == n) break;
            if (s[i] == 0 && i + 1 < m)
                ++i;
            else
                ++j;
        }
    }

    for (;;) {
        // Duals from u_i + v_j = c_ij over the basis tree.
        std::vector<std::optional<Rational>> u(m), v(n);
        u[0] = Rational(0);
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (!basis[i][j]) continue;
                    if (u[i] && !v[j]) {
                        v[j] = cost[i][j] - *u[i];
                        progress = true;
                    } else if (!u[i] && v[j]) {
                        u[i] = cost[i][j] - *v[j];
                        progress = true;
                    }
                }
            }
        }
        for (std::size_t i = 0; i < m; ++i)
            if (!u[i]) throw Error("transport-internal", "disconnected basis");
        for (std::size_t j = 0; j < n; ++j)
            if (!v[j]) throw Error("transport-internal", "disconnected basis");
        // Entering cell: first with negative reduced cost (Bland).
        std::size_t ei = m, ej = n;
        for (std::size_t i = 0; i < m && ei == m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (basis[i][j]) continue;
                if (cost[i][j] - *u[i] - *v[j] < 0) {
                    ei = i;
                    ej = j;
                    break;
                }
            }
        }
        if (ei == m) break;  // optimal

        // Unique cycle in basis + entering cell: path from row ei to column ej
        // through basis cells, alternating row/column moves.
        struct Step {
            std::size_t i, j;
        };
        std::vector<Step> path;
        std::vector<bool> row_seen(m, false), col_seen(n, false);
        auto dfs = [&](auto&& self, bool at_row, std::size_t idx) -> bool {
            if (at_row) {
                if (row_seen[idx]) return false;
                row_seen[idx] = true;
                for (std::size_t j = 0; j < n; ++j) {
                    if (!basis[idx][j]) continue;
                    path.push_back({idx, j});
                    if (j == ej || self(self, false, j)) return true;
                    path.pop_back();
                }
                return false;
            }
            if (col_seen[idx]) return false;
            col_seen[idx] = true;
            for (std::size_t i = 0; i < m; ++i) {
                if (!basis[i][idx]) continue;
                path.push_back({i, idx});
                if (self(self, true, i)) return true;
                path.pop_back();
            }
            return false;
        };
        if (!dfs(dfs, true, ei)) throw Error("transport-internal", "basis cycle not found");

        // Alternating signs starting with + on the entering cell; odd path
        // positions lose flow.
        Rational theta(-1);
        std::size_t leave = path.size();
        for (std::size_t k = 0; k < path.size(); k += 2) {
            if (theta < 0 || flow[path[k].i][path[k].j] < theta) {
                theta = flow[path[k].i][path[k].j];
                leave = k;
            }
        }
        flow[ei][ej] += theta;
        basis[ei][ej] = true;
        for (std::size_t k = 0; k < path.size(); ++k) {
            if (k % 2 == 0)
                flow[path[k].i][path[k].j] -= theta;
            else
                flow[path[k].i][path[k].j] += theta;
        }
        basis[path[leave].i][path[leave].j] = false;
    }

    Rational total(0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) total += flow[i][j] * cost[i][j];
    return total;
}

}  // namespace detail

// Kantorovich/transport distance between two finite distributions over the
// ground metric; exact.
inline Rational hutchinson_distance(const QDistribution& p, const QDistribution& q,
                                    const MetricTable& ground) {
    std::vector<Rational> supply, demand;
    std::vector<EntityIndex> ps, qs;
    for (const auto& [y, v] : p.mass) {
        if (v == 0) continue;
        if (y >= ground.size()) throw Error("missing-ground", "support entity missing from ground table");
        ps.push_back(y);
        supply.push_back(v);
    }
    for (const auto& [y, v] : q.mass) {
        if (v == 0) continue;
        if (y >= ground.size()) throw Error("missing-ground", "support entity missing from ground table");
        qs.push_back(y);
        demand.push_back(v);
    }
    if (ps.empty() || qs.empty())
        throw Error("bad-transport", "transport distance needs non-empty distributions");
    std::vector<std::vector<Rational>> cost(ps.size(), std::vector<Rational>(qs.size()));
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = 0; j < qs.size(); ++j) cost[i][j] = ground.d[ps[i]][qs[j]];
    return detail::transport_simplex(supply, demand, cost);
}

// Full pairwise transport table over per-entity Q-distributions.
inline MetricTable hutchinson_metrics(const SubpatternGraph& graph, const MetricTable& ground) {
    const std::size_t n = graph.q.size();
    MetricTable out = zero_table(n, "hutchinson-extension");
    std::vector<QDistribution> dists;
    dists.reserve(n);
    for (EntityIndex x = 0; x < n; ++x) dists.push_back(q_distribution(graph, x));
    for (EntityIndex x = 0; x < n; ++x) {
        for (EntityIndex y = x + 1; y < n; ++y) {
            const Rational d = hutchinson_distance(dists[x], dists[y], ground);
            out.d[x][y] = out.d[y][x] = d;
        }
    }
    return out;
}

// Rational association statistics between two tables over unordered
// off-diagonal pairs; reported, never asserted.
struct CorrelationStats {
    std::optional<Rational> kendall_tau;  // tau-a
    std::optional<Rational> pearson_r2;
};

inline CorrelationStats correlation_stats(const MetricTable& a, const MetricTable& b) {
    std::vector<Rational> xs, ys;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            xs.push_back(a.d[i][j]);
            ys.push_back(b.d[i][j]);
        }
    }
    CorrelationStats stats;
    const std::size_t n = xs.size();
    if (n < 2) return stats;
    long long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const int sx = xs[i] < xs[j] ? -1 : (xs[j] < xs[i] ? 1 : 0);
            const int sy = ys[i] < ys[j] ? -1 : (ys[j] < ys[i] ? 1 : 0);
            if (sx * sy > 0) ++concordant;
            if (sx * sy < 0) ++discordant;
        }
    }
    stats.kendall_tau =
        Rational(concordant - discordant) / Rational(static_cast<long long>(n * (n - 1) / 2));
    Rational mx(0), my(0);
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<long long>(n);
    my /= static_cast<long long>(n);
    Rational sxy(0), sxx(0), syy(0);
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx != 0 && syy != 0) stats.pearson_r2 = (sxy * sxy) / (sxx * syy);
    return stats;
}

}  // namespace cosm
