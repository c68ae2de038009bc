#include "brattelikit/surface.hpp"

#include <cstdio>
#include <numeric>
#include <sstream>

namespace brattelikit {

namespace {

std::vector<std::vector<Rational>> copy_extend_q(const WeightFunction& w, int i, int upto) {
    std::vector<std::vector<Rational>> levels;
    for (int k = 0; k <= upto; ++k) levels.push_back(w.level_q(std::min(k, i)));
    return levels;
}

std::vector<std::vector<double>> copy_extend_d(const WeightFunction& w, int i, int upto) {
    std::vector<std::vector<double>> levels;
    for (int k = 0; k <= upto; ++k) levels.push_back(w.level_d(std::min(k, i)));
    return levels;
}

template <class S>
SurfaceModel<S> approximant_surface(const WeightedBundle& b, int i) {
    SurfaceModel<S> s;
    s.depth = i;
    s.width = weight_level_as<S>(b.w_plus, 0);
    s.height = weight_level_as<S>(b.w_minus, 0);
    s.xcum.push_back(S(0));
    for (const S& w : s.width) s.xcum.push_back(s.xcum.back() + w);
    s.ycum.push_back(S(0));
    for (const S& h : s.height) s.ycum.push_back(s.ycum.back() + h);
    s.top = iet_from_stacks(build_stacks<S>(positive_part(b.diagram), b.w_plus, b.pos_orders, i), true);
    s.right = iet_from_stacks(build_stacks<S>(negative_part(b.diagram), b.w_minus, b.neg_orders, i), true);
    return s;
}

}  // namespace

ApproximantResult finite_approximant(const WeightedBundle& b, int i, int pad_depth) {
    if (i < 0) throw Error("approximant level must be nonnegative");
    if (b.w_plus.max_level() < i || b.w_minus.max_level() < i)
        throw Error("bundle weights not deep enough for the requested approximant");

    int weld = b.diagram.weld_size();
    MatrixSource pos = MatrixSource::stationary({IntMatrix::identity(weld)});
    MatrixSource neg = pos;
    if (i >= 1) {
        std::vector<IntMatrix> pw, nw;
        for (int k = 1; k <= i; ++k) {
            pw.push_back(b.diagram.matrix_at(k));
            nw.push_back(b.diagram.matrix_at(-k));
        }
        pos = MatrixSource::explicit_window(std::move(pw), TailPolicy::Identity, false);
        neg = MatrixSource::explicit_window(std::move(nw), TailPolicy::Identity, true);
    }
    BiInfiniteDiagram trunc(std::move(pos), std::move(neg), weld);

    // Identity tails force constant weights beyond level i.
    int upto = i + std::max(pad_depth, 1);
    WeightFunction wp = b.w_plus.is_exact() ? WeightFunction::exact(copy_extend_q(b.w_plus, i, upto))
                                            : WeightFunction::floating(copy_extend_d(b.w_plus, i, upto));
    WeightFunction wm = b.w_minus.is_exact() ? WeightFunction::exact(copy_extend_q(b.w_minus, i, upto))
                                             : WeightFunction::floating(copy_extend_d(b.w_minus, i, upto));

    ApproximantResult out{
        WeightedBundle{std::move(trunc), std::move(wp), std::move(wm), b.pos_orders, b.neg_orders,
                       b.name.empty() ? "approximant" : b.name + "-approximant"},
        i,
        {},
        {}};

    HeightVectors h = heights(out.bundle.diagram, out.bundle.w_minus, i);
    auto widths_d = out.bundle.w_plus.level_d(i);
    auto heights_d = h.level_d(i);
    for (size_t v = 0; v < widths_d.size(); ++v) {
        CylinderInfo c;
        c.width = widths_d[v];
        c.height = heights_d[v];
        if (out.bundle.w_plus.is_exact()) c.width_exact = rational_to_string(out.bundle.w_plus.level_q(i)[v]);
        if (out.bundle.w_minus.is_exact()) c.height_exact = rational_to_string(h.level_q(i)[v]);
        out.cylinders.push_back(std::move(c));
    }

    if (out.bundle.w_plus.is_exact() && out.bundle.w_minus.is_exact()) {
        out.euler = euler_characteristic(approximant_surface<Rational>(out.bundle, i));
    } else {
        out.euler = euler_characteristic(approximant_surface<double>(out.bundle, i));
    }
    return out;
}

PaReport stationary_pa_report(const BiInfiniteDiagram& d, const EdgeOrders& pos_orders,
                              const EdgeOrders& neg_orders, int max_period, int probe) {
    PaReport rep;
    if (pos_orders.has_overrides() || neg_orders.has_overrides()) {
        rep.note = "explicit order overrides are not checked for periodicity";
        return rep;
    }

    auto seq = [&](long p) -> IntMatrix {  // position -> matrix, positions Z
        long level = p >= 0 ? p + 1 : p;
        return d.matrix_at(level);
    };

    bool pos_st = d.positive_source().kind() == MatrixSource::Kind::Stationary;
    bool neg_st = d.negative_source().kind() == MatrixSource::Kind::Stationary;
    bool structural = pos_st && neg_st && d.shift_offset() == 0;

    for (int j = 1; j <= max_period; ++j) {
        int lo, hi;
        if (structural) {
            int pp = *d.positive_source().stationary_period();
            int pn = *d.negative_source().stationary_period();
            lo = -j - pn;
            hi = pp + j;
        } else {
            lo = -probe;
            hi = probe;
        }
        bool ok = true;
        try {
            for (int p = lo; p <= hi && ok; ++p) ok = seq(p + j) == seq(p);
        } catch (const Error&) {
            ok = false;
        }
        if (!ok) continue;
        if (!structural) continue;  // sampled agreement is not a proof

        rep.is_stationary = true;
        rep.period = j;
        IntMatrix block = d.matrix_at(1);
        for (int k = 2; k <= j; ++k) block = block.then_up(d.matrix_at(k));
        try {
            PfData pf = pf_of_block(block, j);
            rep.expansion_factor = pf.lambda;
            rep.expansion_q = pf.lambda_q;
        } catch (const NotPrimitiveError&) {
            rep.note = "period block not primitive; no hyperbolic expansion";
        }
        return rep;
    }
    rep.note = structural ? "no period found up to bound" : "source not detectably periodic (sampled)";
    return rep;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::string export_surface_svg(const SurfaceModel<double>& s) {
    double tw = s.xcum.back(), th = s.ycum.back();
    double scale = 640.0 / std::max(tw, th);
    double margin = 40.0;
    double W = tw * scale + 2 * margin, H = th * scale + 2 * margin;
    auto X = [&](double x) { return margin + x * scale; };
    auto Y = [&](double y) { return margin + (th - y) * scale; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(W) << "\" height=\"" << fmt(H)
      << "\" viewBox=\"0 0 " << fmt(W) << " " << fmt(H) << "\">\n";
    o << "<g fill=\"none\" stroke=\"black\" stroke-width=\"1\">\n";
    for (size_t i = 0; i < s.width.size(); ++i) {
        double x0 = s.xcum[i], y0 = s.ycum[i];
        o << "<rect x=\"" << fmt(X(x0)) << "\" y=\"" << fmt(Y(y0 + s.height[i])) << "\" width=\""
          << fmt(s.width[i] * scale) << "\" height=\"" << fmt(s.height[i] * scale) << "\"/>\n";
    }
    o << "</g>\n";

    auto rect_top_y = [&](double x) {
        for (size_t i = 0; i < s.width.size(); ++i)
            if (s.xcum[i] <= x && x <= s.xcum[i + 1]) return s.ycum[i] + s.height[i];
        return th;
    };
    auto rect_bot_y = [&](double x) {
        for (size_t i = 0; i < s.width.size(); ++i)
            if (s.xcum[i] <= x && x <= s.xcum[i + 1]) return s.ycum[i];
        return 0.0;
    };
    auto rect_left_x = [&](double y) {
        for (size_t i = 0; i < s.height.size(); ++i)
            if (s.ycum[i] <= y && y <= s.ycum[i + 1]) return s.xcum[i];
        return 0.0;
    };
    auto rect_right_x = [&](double y) {
        for (size_t i = 0; i < s.height.size(); ++i)
            if (s.ycum[i] <= y && y <= s.ycum[i + 1]) return s.xcum[i] + s.width[i];
        return tw;
    };

    // Matching labels: interiors of edges with the same label are identified.
    o << "<g font-family=\"monospace\" font-size=\"11\" fill=\"black\">\n";
    int label = 0;
    for (size_t c = 0; c < s.top.size(); ++c) {
        if (s.top.is_gap[c]) continue;
        ++label;
        double mid = 0.5 * (s.top.lo[c] + s.top.hi[c]);
        double img = mid + s.top.shift[c];
        o << "<text x=\"" << fmt(X(mid)) << "\" y=\"" << fmt(Y(rect_top_y(mid)) - 3) << "\" text-anchor=\"middle\">A"
          << label << "</text>\n";
        o << "<text x=\"" << fmt(X(img)) << "\" y=\"" << fmt(Y(rect_bot_y(img)) + 11) << "\" text-anchor=\"middle\">A"
          << label << "</text>\n";
    }
    label = 0;
    for (size_t c = 0; c < s.right.size(); ++c) {
        if (s.right.is_gap[c]) continue;
        ++label;
        double mid = 0.5 * (s.right.lo[c] + s.right.hi[c]);
        double img = mid + s.right.shift[c];
        o << "<text x=\"" << fmt(X(rect_right_x(mid)) + 4) << "\" y=\"" << fmt(Y(mid)) << "\">B" << label
          << "</text>\n";
        o << "<text x=\"" << fmt(X(rect_left_x(img)) - 16) << "\" y=\"" << fmt(Y(img)) << "\">B" << label
          << "</text>\n";
    }
    o << "</g>\n";

    // Singular candidates: identification breakpoints on the boundary.
    o << "<g fill=\"red\">\n";
    for (size_t c = 0; c < s.top.size(); ++c) {
        double x = s.top.lo[c];
        o << "<circle cx=\"" << fmt(X(x)) << "\" cy=\"" << fmt(Y(rect_top_y(x))) << "\" r=\"2\"/>\n";
    }
    for (size_t c = 0; c < s.right.size(); ++c) {
        double y = s.right.lo[c];
        o << "<circle cx=\"" << fmt(X(rect_right_x(y))) << "\" cy=\"" << fmt(Y(y)) << "\" r=\"2\"/>\n";
    }
    o << "</g>\n</svg>\n";
    return o.str();
}

}  // namespace brattelikit
