#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>

#include "brattelikit/errors.hpp"
#include "brattelikit/renormalization.hpp"

namespace brattelikit {

// Cutting-and-stacking state at one level: per vertex, the left endpoints of
// its tower's intervals (bottom to top), all of the vertex's width.
template <class S>
struct Stacks {
    int level = 0;
    std::vector<S> width;                     // per vertex at `level`
    std::vector<std::vector<S>> interval_lo;  // per vertex, bottom -> top
};

// Interval exchange data: parallel arrays sorted by lo. Gap cells are tower
// tops where the map is undefined at this depth.
template <class S>
struct Iet {
    std::vector<S> lo, hi, shift;
    std::vector<char> is_gap;
    S domain_lo{0}, domain_hi{0};

    size_t size() const { return lo.size(); }
    // Index of the cell with lo < x < hi, or -1 (gap cells included).
    long locate(const S& x) const {
        auto it = std::upper_bound(lo.begin(), lo.end(), x);
        if (it == lo.begin()) return -1;
        long i = static_cast<long>(it - lo.begin()) - 1;
        if (!(lo[static_cast<size_t>(i)] < x && x < hi[static_cast<size_t>(i)])) return -1;
        return i;
    }
};

struct CodeOrbitResult {
    std::vector<int> itinerary;  // level-0 interval symbols, length steps_done + 1
    bool truncated = false;
    long steps_done = 0;
};

// Rectangles R_i = [X_{i-1},X_i] x [Y_{i-1},Y_i] along the diagonal, with the
// top/bottom identification T^+ and the right/left identification T^-.
template <class S>
struct SurfaceModel {
    std::vector<S> width, height;  // per level-0 vertex
    std::vector<S> xcum, ycum;     // cumulative, size n+1
    Iet<S> top;                    // T^+ on [0, sum width]
    Iet<S> right;                  // T^- on [0, sum height]
    int depth = 0;

    S area() const {
        S a(0);
        for (size_t i = 0; i < width.size(); ++i) a += width[i] * height[i];
        return a;
    }
};

template <class S>
Stacks<S> build_stacks(const DiagramSide& side, const WeightFunction& w, const EdgeOrders& orders, int k);

template <class S>
Iet<S> iet_from_stacks(const Stacks<S>& st, bool wrap_tops);

template <class S>
CodeOrbitResult code_orbit(const Iet<S>& iet, const std::vector<S>& cuts, S x, long steps);

template <class S>
SurfaceModel<S> build_surface(const WeightedBundle& b, int depth);

template <class S>
SurfaceModel<S> scale_surface(const SurfaceModel<S>& s, const S& xfactor, const S& yfactor);

// g_t: expand horizontals by e^t, contract verticals by e^{-t}.
SurfaceModel<double> teichmuller_deform(const SurfaceModel<double>& s, double t);

template <class S>
struct RenormMapResult {
    SurfaceModel<S> surface;
    std::vector<S> geo_width, geo_height;  // rectangle data from the geometric route
    double max_deviation = 0;              // against the shifted-bundle data
    std::vector<double> step_times;        // t of each single renormalization step
};

// Geometric route: k single steps of deform-by-g_{t_1}, cut along the level-1
// outgoing orders, stack along the incoming orders. Compared against the
// algebraic shift_weighted data; deviation beyond tol throws.
template <class S>
RenormMapResult<S> renorm_map(const WeightedBundle& b, int k, int surface_depth, double tol);

struct CylinderInfo {
    double width = 0, height = 0;
    std::string width_exact, height_exact;  // rational literals in exact mode
};

struct EulerData {
    bool available = false;
    int components = 0;
    std::vector<long long> component_chi;
    std::vector<long long> component_genus;
    long long vertices = 0, edges = 0, faces = 0;
    std::string note;
};

struct ApproximantResult {
    WeightedBundle bundle;  // identity-tail truncation, weights extended periodically
    int level = 0;
    std::vector<CylinderInfo> cylinders;  // vertical cylinders, one per level-i vertex
    EulerData euler;
};

// Identity-tail truncation at +-i; the vertical flow is completely periodic
// and the surface closes up into |V_i| cylinders.
ApproximantResult finite_approximant(const WeightedBundle& b, int i, int pad_depth = 4);

struct PaReport {
    bool is_stationary = false;
    int period = 0;
    double expansion_factor = 0;
    std::optional<Rational> expansion_q;
    std::string note;
};

// Detects a period j of the full bi-infinite matrix sequence (orders must be
// policy-generated, hence periodic); the period map expands horizontals by
// the PF eigenvalue of the period block.
PaReport stationary_pa_report(const BiInfiniteDiagram& d, const EdgeOrders& pos_orders,
                              const EdgeOrders& neg_orders, int max_period = 12, int probe = 96);

std::string export_surface_svg(const SurfaceModel<double>& s);

// Closed-surface Euler characteristic via the rectangle cell complex; both
// identifications must be gap-free (finite approximants).
template <class S>
EulerData euler_characteristic(const SurfaceModel<S>& s);

// ---------------------------------------------------------------------------
// template implementations

template <class S>
Stacks<S> build_stacks(const DiagramSide& side, const WeightFunction& w, const EdgeOrders& orders, int k) {
    if (w.max_level() < k) throw Error("weight function not deep enough for stacks");
    Stacks<S> st;
    st.level = 0;
    auto w0 = weight_level_as<S>(w, 0);
    int n0 = side.vertex_count(0);
    if (static_cast<int>(w0.size()) != n0) throw Error("weight/vertex count mismatch at level 0");
    st.width = w0;
    st.interval_lo.resize(w0.size());
    S x(0);
    for (size_t v = 0; v < w0.size(); ++v) {
        st.interval_lo[v] = {x};
        x += w0[v];
    }

    for (int j = 1; j <= k; ++j) {
        auto wj = weight_level_as<S>(w, j);
        auto wprev = weight_level_as<S>(w, j - 1);
        int nj = side.vertex_count(j);
        Stacks<S> next;
        next.level = j;
        next.width = wj;
        next.interval_lo.resize(static_cast<size_t>(nj));

        // Horizontal offset of each outgoing edge's sliver inside its stack.
        int nprev = side.vertex_count(j - 1);
        std::map<std::tuple<int, int, long long>, S> offset;  // (source, range, copy) -> offset
        for (int v = 0; v < nprev; ++v) {
            S off(0);
            for (const Edge& e : orders.outgoing(side, j - 1, v)) {
                offset[{e.source, e.range, e.copy}] = off;
                off += wj[static_cast<size_t>(e.range)];
            }
        }

        for (int u = 0; u < nj; ++u) {
            if (!(wj[static_cast<size_t>(u)] > 0))
                throw NeedsPositiveWeightsError(j, u);
            auto& tower = next.interval_lo[static_cast<size_t>(u)];
            for (const Edge& e : orders.incoming(side, j, u)) {
                const S& off = offset.at({e.source, e.range, e.copy});
                for (const S& lo : st.interval_lo[static_cast<size_t>(e.source)]) tower.push_back(lo + off);
            }
        }
        st = std::move(next);
    }
    return st;
}

template <class S>
Iet<S> iet_from_stacks(const Stacks<S>& st, bool wrap_tops) {
    struct Cell {
        S lo, hi, shift;
        char gap;
    };
    std::vector<Cell> cells;
    S total(0);
    for (size_t v = 0; v < st.width.size(); ++v) total += st.width[v] * scalar_from_ll<S>(static_cast<long long>(st.interval_lo[v].size()));

    for (size_t v = 0; v < st.width.size(); ++v) {
        const auto& tower = st.interval_lo[v];
        const S& w = st.width[v];
        for (size_t i = 0; i < tower.size(); ++i) {
            Cell c;
            c.lo = tower[i];
            c.hi = tower[i] + w;
            if (i + 1 < tower.size()) {
                c.shift = tower[i + 1] - tower[i];
                c.gap = 0;
            } else if (wrap_tops) {
                c.shift = tower[0] - tower[i];
                c.gap = 0;
            } else {
                c.shift = S(0);
                c.gap = 1;
            }
            cells.push_back(std::move(c));
        }
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.lo < b.lo; });

    Iet<S> iet;
    iet.domain_lo = S(0);
    // Stacks partition the level-0 interval; the domain is its full span.
    iet.domain_hi = total;
    for (auto& c : cells) {
        iet.lo.push_back(c.lo);
        iet.hi.push_back(c.hi);
        iet.shift.push_back(c.shift);
        iet.is_gap.push_back(c.gap);
    }
    return iet;
}

template <class S>
CodeOrbitResult code_orbit(const Iet<S>& iet, const std::vector<S>& cuts, S x, long steps) {
    CodeOrbitResult out;
    auto symbol = [&](const S& p) -> int {
        auto it = std::upper_bound(cuts.begin(), cuts.end(), p);
        if (it == cuts.begin() || it == cuts.end()) throw Error("point outside the coded interval");
        return static_cast<int>(it - cuts.begin()) - 1;
    };
    out.itinerary.push_back(symbol(x));
    for (long i = 0; i < steps; ++i) {
        long c = iet.locate(x);
        if (c < 0 || iet.is_gap[static_cast<size_t>(c)]) {
            out.truncated = true;
            return out;
        }
        x += iet.shift[static_cast<size_t>(c)];
        out.itinerary.push_back(symbol(x));
        ++out.steps_done;
    }
    return out;
}

template <class S>
SurfaceModel<S> build_surface(const WeightedBundle& b, int depth) {
    SurfaceModel<S> s;
    s.depth = depth;
    s.width = weight_level_as<S>(b.w_plus, 0);
    s.height = weight_level_as<S>(b.w_minus, 0);
    if (s.width.size() != s.height.size()) throw Error("weld size mismatch between weight functions");
    s.xcum.push_back(S(0));
    for (const S& w : s.width) s.xcum.push_back(s.xcum.back() + w);
    s.ycum.push_back(S(0));
    for (const S& h : s.height) s.ycum.push_back(s.ycum.back() + h);

    s.top = iet_from_stacks(build_stacks<S>(positive_part(b.diagram), b.w_plus, b.pos_orders, depth), false);
    s.right = iet_from_stacks(build_stacks<S>(negative_part(b.diagram), b.w_minus, b.neg_orders, depth), false);
    return s;
}

template <class S>
SurfaceModel<S> scale_surface(const SurfaceModel<S>& s, const S& xf, const S& yf) {
    SurfaceModel<S> out = s;
    auto scale_vec = [](std::vector<S>& v, const S& f) {
        for (S& x : v) x *= f;
    };
    scale_vec(out.width, xf);
    scale_vec(out.xcum, xf);
    scale_vec(out.height, yf);
    scale_vec(out.ycum, yf);
    scale_vec(out.top.lo, xf);
    scale_vec(out.top.hi, xf);
    scale_vec(out.top.shift, xf);
    out.top.domain_lo *= xf;
    out.top.domain_hi *= xf;
    scale_vec(out.right.lo, yf);
    scale_vec(out.right.hi, yf);
    scale_vec(out.right.shift, yf);
    out.right.domain_lo *= yf;
    out.right.domain_hi *= yf;
    return out;
}

inline SurfaceModel<double> teichmuller_deform(const SurfaceModel<double>& s, double t) {
    return scale_surface<double>(s, std::exp(t), std::exp(-t));
}

template <class S>
RenormMapResult<S> renorm_map(const WeightedBundle& b, int k, int surface_depth, double tol) {
    if (k < 0) throw Error("renormalization count must be nonnegative");
    if (b.w_plus.max_level() < k + surface_depth)
        throw Error("w^+ not deep enough for renorm_map");

    std::vector<S> W = weight_level_as<S>(b.w_plus, 0);
    std::vector<S> H = weight_level_as<S>(b.w_minus, 0);
    WeightedBundle cur = b;
    RenormMapResult<S> out;

    for (int step = 0; step < k; ++step) {
        DiagramSide pos = positive_part(cur.diagram);
        auto w1 = weight_level_as<S>(cur.w_plus, 1);
        auto w0 = weight_level_as<S>(cur.w_plus, 0);
        S sum1(0);
        for (const S& v : w1) sum1 += v;
        if (!(to_double(sum1) > 0)) throw Error("level width sum vanished during renormalization");
        out.step_times.push_back(-std::log(to_double(sum1)));

        int n1 = pos.vertex_count(1);
        std::vector<S> neww(static_cast<size_t>(n1), S(0)), newh(static_cast<size_t>(n1), S(0));
        std::vector<char> seen(static_cast<size_t>(n1), 0);
        for (int u = 0; u < n1; ++u) {
            for (const Edge& e : cur.pos_orders.incoming(pos, 1, u)) {
                if (!(to_double(w0[static_cast<size_t>(e.source)]) > 0))
                    throw NeedsPositiveWeightsError(0, e.source);
                // Deformed source rectangle width W/sum1, cut in the edge-weight
                // proportion w1(u)/w0(s(e)).
                S sliver = W[static_cast<size_t>(e.source)] / sum1 * w1[static_cast<size_t>(u)] /
                           w0[static_cast<size_t>(e.source)];
                if (!seen[static_cast<size_t>(u)]) {
                    neww[static_cast<size_t>(u)] = sliver;
                    seen[static_cast<size_t>(u)] = 1;
                } else {
                    double dev = std::abs(to_double(sliver) - to_double(neww[static_cast<size_t>(u)]));
                    out.max_deviation = std::max(out.max_deviation, dev);
                }
                newh[static_cast<size_t>(u)] += H[static_cast<size_t>(e.source)] * sum1;
            }
        }
        W = std::move(neww);
        H = std::move(newh);
        cur = shift_weighted(cur, 1);
    }

    auto aw = weight_level_as<S>(cur.w_plus, 0);
    auto ah = weight_level_as<S>(cur.w_minus, 0);
    for (size_t v = 0; v < W.size(); ++v) {
        out.max_deviation = std::max(out.max_deviation, std::abs(to_double(W[v]) - to_double(aw[v])));
        out.max_deviation = std::max(out.max_deviation, std::abs(to_double(H[v]) - to_double(ah[v])));
    }
    if (out.max_deviation > tol) throw ToleranceViolationError(out.max_deviation);

    out.surface = build_surface<S>(cur, surface_depth);
    // Rectangle data carries the geometric route; identifications come from
    // the shifted bundle.
    out.surface.width = W;
    out.surface.height = H;
    out.surface.xcum.assign(1, S(0));
    for (const S& w : W) out.surface.xcum.push_back(out.surface.xcum.back() + w);
    out.surface.ycum.assign(1, S(0));
    for (const S& h : H) out.surface.ycum.push_back(out.surface.ycum.back() + h);
    out.geo_width = W;
    out.geo_height = H;
    return out;
}

namespace euler_detail {

// Exact coordinate identity for rationals; grid snapping for doubles (the
// approximant breakpoint spacings sit far above the grid).
template <class S>
struct PointKey;
template <>
struct PointKey<double> {
    using type = long long;
    static type make(const double& x) { return llround(x * 1e10); }
    static double canon(const double& x) { return std::round(x * 1e11) / 1e11; }
};
template <>
struct PointKey<Rational> {
    using type = Rational;
    static type make(const Rational& x) {
        Rational c = x;
        c.canonicalize();
        return c;
    }
    static Rational canon(const Rational& x) { return x; }
};

// Closure of the endpoint partitions under one gluing map. Returns false if
// the point sets refuse to stabilize within the caps.
template <class S>
bool close_partitions(const Iet<S>& iet, const std::vector<S>& anchors, std::set<S>& tops, std::set<S>& bots,
                      int max_rounds = 64, size_t max_points = 40000) {
    auto ins = [](std::set<S>& set, const S& x) { return set.insert(PointKey<S>::canon(x)).second; };
    for (const S& a : anchors) {
        ins(tops, a);
        ins(bots, a);
    }
    for (size_t c = 0; c < iet.size(); ++c) {
        ins(tops, iet.lo[c]);
        ins(tops, iet.hi[c]);
        ins(bots, iet.lo[c] + iet.shift[c]);
        ins(bots, iet.hi[c] + iet.shift[c]);
    }
    for (int round = 0; round < max_rounds; ++round) {
        bool changed = false;
        for (const S& p : std::vector<S>(bots.begin(), bots.end())) {
            for (size_t c = 0; c < iet.size(); ++c) {
                S ilo = iet.lo[c] + iet.shift[c], ihi = iet.hi[c] + iet.shift[c];
                if (ilo < p && p < ihi) {
                    if (ins(tops, p - iet.shift[c])) changed = true;
                    break;
                }
            }
        }
        for (const S& p : std::vector<S>(tops.begin(), tops.end())) {
            long c = iet.locate(p);
            if (c >= 0 && ins(bots, p + iet.shift[static_cast<size_t>(c)])) changed = true;
        }
        if (tops.size() > max_points || bots.size() > max_points) return false;
        if (!changed) return true;
    }
    return false;
}

}  // namespace euler_detail

template <class S>
EulerData euler_characteristic(const SurfaceModel<S>& s) {
    EulerData out;
    for (char g : s.top.is_gap)
        if (g) {
            out.note = "top identification has gaps; complex not closed";
            return out;
        }
    for (char g : s.right.is_gap)
        if (g) {
            out.note = "right identification has gaps; complex not closed";
            return out;
        }

    std::set<S> xt, xb, yr, yl;
    if (!euler_detail::close_partitions(s.top, s.xcum, xt, xb) ||
        !euler_detail::close_partitions(s.right, s.ycum, yr, yl)) {
        out.note = "breakpoint orbits did not close within caps";
        return out;
    }

    int n = static_cast<int>(s.width.size());
    auto rect_of = [&](const std::vector<S>& cum, const S& p) {
        // Rectangle whose span strictly contains p (p is never a cum here).
        for (int i = 0; i < n; ++i)
            if (cum[static_cast<size_t>(i)] < p && p < cum[static_cast<size_t>(i + 1)]) return i;
        return -1;
    };

    // Union-find over boundary nodes keyed by (side, rect, coordinate).
    using Key = typename euler_detail::PointKey<S>::type;
    std::map<std::tuple<int, int, Key>, int> node_id;
    std::vector<int> parent;
    auto node = [&](int side, int rect, const S& coord) {
        auto key = std::make_tuple(side, rect, euler_detail::PointKey<S>::make(coord));
        auto it = node_id.find(key);
        if (it != node_id.end()) return it->second;
        int id = static_cast<int>(parent.size());
        parent.push_back(id);
        node_id.emplace(key, id);
        return id;
    };
    std::function<int(int)> find = [&](int a) { return parent[static_cast<size_t>(a)] == a ? a : parent[static_cast<size_t>(a)] = find(parent[static_cast<size_t>(a)]); };
    auto unite = [&](int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); };

    std::vector<int> rect_parent(static_cast<size_t>(n));
    std::iota(rect_parent.begin(), rect_parent.end(), 0);
    std::function<int(int)> rfind = [&](int a) { return rect_parent[static_cast<size_t>(a)] == a ? a : rect_parent[static_cast<size_t>(a)] = rfind(rect_parent[static_cast<size_t>(a)]); };
    auto runite = [&](int a, int b) { rect_parent[static_cast<size_t>(rfind(a))] = rfind(b); };

    enum { TOP = 0, BOT = 1, RIGHT = 2, LEFT = 3 };
    long long top_segments = 0, right_segments = 0;

    auto glue_line = [&](const std::set<S>& srcset, const std::set<S>& dstset, const Iet<S>& iet,
                         const std::vector<S>& cum, int src_side, int dst_side, long long& count) -> bool {
        std::vector<S> pts(srcset.begin(), srcset.end());
        std::vector<S> dst(dstset.begin(), dstset.end());
        for (size_t i = 0; i + 1 < pts.size(); ++i) {
            const S& p = pts[i];
            const S& q = pts[i + 1];
            S mid = (p + q) / scalar_from_ll<S>(2);
            long c = iet.locate(mid);
            if (c < 0) return false;
            const S& sh = iet.shift[static_cast<size_t>(c)];
            // CW validity: the image endpoints must be adjacent in the
            // destination partition, otherwise the complex is inconsistent.
            S ip = euler_detail::PointKey<S>::canon(p + sh);
            S iq = euler_detail::PointKey<S>::canon(q + sh);
            auto lo_it = std::lower_bound(dst.begin(), dst.end(), ip);
            if (lo_it == dst.end() || !(*lo_it == ip)) return false;
            auto next_it = lo_it + 1;
            if (next_it == dst.end() || !(*next_it == iq)) return false;
            int r_src = rect_of(cum, mid);
            S midi = mid + sh;
            int r_dst = rect_of(cum, midi);
            if (r_src < 0 || r_dst < 0) return false;
            unite(node(src_side, r_src, p), node(dst_side, r_dst, p + sh));
            unite(node(src_side, r_src, q), node(dst_side, r_dst, q + sh));
            runite(r_src, r_dst);
            ++count;
        }
        return true;
    };

    if (!glue_line(xt, xb, s.top, s.xcum, TOP, BOT, top_segments) ||
        !glue_line(yr, yl, s.right, s.ycum, RIGHT, LEFT, right_segments)) {
        out.note = "segment gluing failed (partition mismatch or degenerate layout)";
        return out;
    }

    // Corner coincidences within each rectangle.
    for (int i = 0; i < n; ++i) {
        const S& x0 = s.xcum[static_cast<size_t>(i)];
        const S& x1 = s.xcum[static_cast<size_t>(i + 1)];
        const S& y0 = s.ycum[static_cast<size_t>(i)];
        const S& y1 = s.ycum[static_cast<size_t>(i + 1)];
        unite(node(TOP, i, x0), node(LEFT, i, y1));
        unite(node(TOP, i, x1), node(RIGHT, i, y1));
        unite(node(BOT, i, x0), node(LEFT, i, y0));
        unite(node(BOT, i, x1), node(RIGHT, i, y0));
    }

    // chi per connected component of the gluing.
    std::map<int, long long> vcnt, ecnt, fcnt;
    std::map<int, int> class_component;
    for (const auto& [key, id] : node_id) {
        int rect = std::get<1>(key);
        int cls = find(id);
        class_component[cls] = rfind(rect);
    }
    for (const auto& [cls, comp] : class_component) ++vcnt[comp];
    // Re-walk segments to attribute edges to components.
    auto count_edges = [&](const std::set<S>& srcset, const std::vector<S>& cum) {
        std::vector<S> pts(srcset.begin(), srcset.end());
        for (size_t i = 0; i + 1 < pts.size(); ++i) {
            S mid = (pts[i] + pts[i + 1]) / scalar_from_ll<S>(2);
            int r = rect_of(cum, mid);
            ++ecnt[rfind(r)];
        }
    };
    count_edges(xt, s.xcum);
    count_edges(yr, s.ycum);
    for (int i = 0; i < n; ++i) ++fcnt[rfind(i)];

    out.available = true;
    for (const auto& [comp, f] : fcnt) {
        long long chi = vcnt[comp] - ecnt[comp] + f;
        out.component_chi.push_back(chi);
        long long genus = (2 - chi) / 2;
        out.component_genus.push_back(genus);
        if ((2 - chi) % 2 != 0) {
            out.available = false;
            out.note = "odd Euler characteristic; complex inconsistent";
        }
        out.vertices += vcnt[comp];
        out.edges += ecnt[comp];
        out.faces += f;
    }
    out.components = static_cast<int>(fcnt.size());
    return out;
}

}  // namespace brattelikit
