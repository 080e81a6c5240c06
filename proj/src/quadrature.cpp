#include "cnode/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace cnode {

void validate(const QuadratureConfig& cfg) {
    if (!(cfg.tolerance > 0.0) || cfg.tolerance > 1e-2)
        throw InvalidInputError("quadrature tolerance must lie in (0, 1e-2]");
    if (cfg.max_refinement < 0 || cfg.max_refinement > 48)
        throw InvalidInputError("max_refinement must lie in [0, 48]");
    if (cfg.truncation_radius < 0.0 || !std::isfinite(cfg.truncation_radius))
        throw InvalidInputError("truncation_radius must be finite and non-negative");
}

namespace {

// Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 7> kGl7X = {
    -0.9491079123427585245262, -0.7415311855993944398639, -0.4058451513773971669066,
    0.0,
    0.4058451513773971669066, 0.7415311855993944398639, 0.9491079123427585245262};
constexpr std::array<double, 7> kGl7W = {
    0.1294849661688696932706, 0.2797053914892766679015, 0.3818300505051189449504,
    0.4179591836734693877551,
    0.3818300505051189449504, 0.2797053914892766679015, 0.1294849661688696932706};

constexpr std::array<double, 9> kGl9X = {
    -0.9681602395076260898356, -0.8360311073266357942994, -0.6133714327005903973087,
    -0.3242534234038089290385, 0.0, 0.3242534234038089290385,
    0.6133714327005903973087, 0.8360311073266357942994, 0.9681602395076260898356};
constexpr std::array<double, 9> kGl9W = {
    0.0812743883615744119719, 0.1806481606948574040585, 0.2606106964029354623187,
    0.3123470770400028400686, 0.3302393550012597631645, 0.3123470770400028400686,
    0.2606106964029354623187, 0.1806481606948574040585, 0.0812743883615744119719};

enum Cls { kOutside, kInside, kStraddle };

constexpr int kMinStraddleDepth = 4; // resolve the curve before trusting strip estimates
constexpr double kTruncationPad = 1.5;

class LevelSetIntegrator {
  public:
    LevelSetIntegrator(const WeylSymbolModel& model, double level,
                       const std::function<double(double)>& f, const QuadratureConfig& cfg)
        : m_(model), level_(level), f_(f), cfg_(cfg) {}

    QuadratureResult run() {
        QuadratureResult res;
        if (level_ >= m_.peak_squared())
            return res; // empty super-level set up to measure zero

        PlaneBox root;
        if (cfg_.truncation_radius > 0.0) {
            double R = cfg_.truncation_radius;
            root = PlaneBox{-R, R, -R, R};
            check_truncation(root);
        } else {
            root = m_.superlevel_box(level_, kTruncationPad);
        }
        if (root.empty())
            return res;

        double scale = coarse_scale(root);
        tol_total_ = cfg_.tolerance * std::max(std::abs(scale), 1e-300);

        int cls = classify(root);
        double v1 = estimate(root, cls);
        res.value = recurse(root, 0, tol_total_, v1, cls);
        res.error_estimate = err_total_;
        res.cells = cells_;
        res.evaluations = evals_;
        // Deep isolated cells (tangency chains) may stop at max_refinement
        // with a local excess; the verdict is the accumulated estimate.
        res.converged = err_total_ <= 2.0 * tol_total_;
        return res;
    }

  private:
    double integrand(double t, double w) {
        ++evals_;
        return f_(m_.squared(t, w));
    }

    int classify(const PlaneBox& c) {
        auto [mn, mx] = m_.squared_range(c);
        if (mx <= level_)
            return kOutside;
        if (mn >= level_)
            return kInside;
        return kStraddle;
    }

    void check_truncation(const PlaneBox& root) {
        double edge = 0.0;
        PlaneBox sides[4] = {{root.t_lo, root.t_lo, root.w_lo, root.w_hi},
                             {root.t_hi, root.t_hi, root.w_lo, root.w_hi},
                             {root.t_lo, root.t_hi, root.w_lo, root.w_lo},
                             {root.t_lo, root.t_hi, root.w_hi, root.w_hi}};
        for (const auto& s : sides)
            edge = std::max(edge, m_.squared_range(s).second);
        if (edge > cfg_.tolerance * m_.peak_squared())
            throw InvalidInputError("truncation_radius too small: symbol above tolerance*M at the cutoff");
    }

    double smooth_gl(const PlaneBox& c) {
        double tm = 0.5 * (c.t_lo + c.t_hi), th = 0.5 * c.width();
        double wm = 0.5 * (c.w_lo + c.w_hi), wh = 0.5 * c.height();
        double acc = 0.0;
        for (int i = 0; i < 9; ++i) {
            double t = tm + th * kGl9X[i];
            double row = 0.0;
            for (int j = 0; j < 9; ++j)
                row += kGl9W[j] * integrand(t, wm + wh * kGl9X[j]);
            acc += kGl9W[i] * row;
        }
        return acc * th * wh;
    }

    // Roots of u(s) - level along one line, bracketed by sign changes over
    // an equispaced scan and polished by bisection.
    void line_roots(const std::function<double(double)>& u, double lo, double hi,
                    std::vector<double>& roots) {
        constexpr int kScan = 16;
        roots.clear();
        double prev_s = lo, prev_g = u(lo) - level_;
        for (int k = 1; k <= kScan; ++k) {
            double s = lo + (hi - lo) * k / kScan;
            double g = u(s) - level_;
            if ((prev_g > 0.0) != (g > 0.0)) {
                double a = prev_s, b = s, ga = prev_g;
                for (int it = 0; it < 60; ++it) {
                    double mid = 0.5 * (a + b);
                    double gm = u(mid) - level_;
                    if ((ga > 0.0) != (gm > 0.0))
                        b = mid;
                    else {
                        a = mid;
                        ga = gm;
                    }
                }
                roots.push_back(0.5 * (a + b));
            }
            prev_s = s;
            prev_g = g;
        }
    }

    // Straddle cell: outer Gauss rule along the axis transversal to the level
    // curve, inner integrals over the root-delimited inside sub-intervals.
    // The strip length I(x) is only piecewise smooth: it kinks where the
    // level curve crosses the inner-parallel edges and where lines start or
    // stop intersecting the curve (tangencies). The outer interval is split
    // at edge crossings and at root-count transitions so that every Gauss
    // segment sees a fixed root structure.
    double straddle_strips(const PlaneBox& c) {
        auto g = m_.squared_gradient(0.5 * (c.t_lo + c.t_hi), 0.5 * (c.w_lo + c.w_hi));
        bool inner_is_w = std::abs(g[1]) * c.height() >= std::abs(g[0]) * c.width();
        double o_lo = inner_is_w ? c.t_lo : c.w_lo;
        double o_hi = inner_is_w ? c.t_hi : c.w_hi;
        double i_lo = inner_is_w ? c.w_lo : c.t_lo;
        double i_hi = inner_is_w ? c.w_hi : c.t_hi;

        auto at = [&](double x, double s) {
            ++evals_;
            return inner_is_w ? m_.squared(x, s) : m_.squared(s, x);
        };

        // number of sign changes of u - level along the inner line at x
        auto scan_count = [&](double x) {
            int changes = 0;
            double prev = at(x, i_lo) - level_;
            for (int k = 1; k <= 16; ++k) {
                double v = at(x, i_lo + (i_hi - i_lo) * k / 16.0) - level_;
                changes += (prev > 0.0) != (v > 0.0);
                prev = v;
            }
            return changes;
        };

        std::vector<double> roots;
        auto inner_integral = [&](double x) {
            line_roots([&](double s) { return at(x, s); }, i_lo, i_hi, roots);
            double inner = 0.0;
            double a = i_lo;
            for (size_t k = 0; k <= roots.size(); ++k) {
                double b = k < roots.size() ? roots[k] : i_hi;
                if (b > a && at(x, 0.5 * (a + b)) >= level_) {
                    double mm = 0.5 * (a + b), hh = 0.5 * (b - a);
                    double sub = 0.0;
                    for (int q = 0; q < 7; ++q)
                        sub += kGl7W[q] * f_(at(x, mm + hh * kGl7X[q]));
                    inner += sub * hh;
                }
                a = b;
            }
            return inner;
        };
        auto plain_gauss = [&](double a, double b) {
            double om = 0.5 * (a + b), oh = 0.5 * (b - a);
            double strip = 0.0;
            for (int j = 0; j < 7; ++j)
                strip += kGl7W[j] * inner_integral(om + oh * kGl7X[j]);
            return strip * oh;
        };
        // Substitution x = end -+ W u^2 toward a marked endpoint: I(x) of
        // square-root type there becomes analytic in u.
        auto toward_end = [&](double a, double b, bool singular_right) {
            double width = b - a, strip = 0.0;
            for (int j = 0; j < 9; ++j) {
                double u = 0.5 + 0.5 * kGl9X[j];
                double x = singular_right ? b - width * u * u : a + width * u * u;
                strip += 0.5 * kGl9W[j] * inner_integral(x) * 2.0 * width * u;
            }
            return strip;
        };

        const double span = o_hi - o_lo;
        std::vector<double> splits{o_lo, o_hi}, kinks, marks;
        for (double edge : {i_lo, i_hi}) {
            line_roots([&](double x) { return at(x, edge); }, o_lo, o_hi, kinks);
            splits.insert(splits.end(), kinks.begin(), kinks.end());
            marks.insert(marks.end(), kinks.begin(), kinks.end());
        }
        std::sort(splits.begin(), splits.end());

        // isolate root-count transitions (tangencies) by recursive halving
        std::vector<std::pair<double, double>> segments;
        for (size_t s = 0; s + 1 < splits.size(); ++s) {
            std::vector<std::pair<double, double>> work{{splits[s], splits[s + 1]}};
            int split_budget = 64;
            while (!work.empty()) {
                auto [a, b] = work.back();
                work.pop_back();
                if (!(b > a))
                    continue;
                double pad = 1e-9 * span;
                double mid = 0.5 * (a + b);
                if (b - a < 4.0 * pad) {
                    marks.push_back(mid);
                    segments.push_back({a, b});
                    continue;
                }
                bool uniform = scan_count(a + pad) == scan_count(mid) &&
                               scan_count(mid) == scan_count(b - pad);
                if (uniform || --split_budget < 0)
                    segments.push_back({a, b});
                else {
                    work.push_back({a, mid});
                    work.push_back({mid, b});
                }
            }
        }

        auto near_mark = [&](double x) {
            for (double m : marks)
                if (std::abs(x - m) <= 4e-9 * span)
                    return true;
            return false;
        };
        double acc = 0.0;
        for (auto [a, b] : segments) {
            bool sl = near_mark(a), sr = near_mark(b);
            if (sl && sr) {
                double mid = 0.5 * (a + b);
                acc += toward_end(a, mid, false) + toward_end(mid, b, true);
            } else if (sl || sr) {
                acc += toward_end(a, b, sr);
            } else {
                acc += plain_gauss(a, b);
            }
        }
        return acc;
    }

    double estimate(const PlaneBox& c, int cls) {
        if (cls == kOutside)
            return 0.0;
        if (cls == kInside)
            return smooth_gl(c);
        return straddle_strips(c);
    }

    // Cheap global pass fixing the scale that "relative tolerance" refers to.
    double coarse_scale(const PlaneBox& root) {
        constexpr int n = 16;
        double dt = root.width() / n, dw = root.height() / n;
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                PlaneBox c{root.t_lo + i * dt, root.t_lo + (i + 1) * dt,
                           root.w_lo + j * dw, root.w_lo + (j + 1) * dw};
                int cls = classify(c);
                if (cls == kOutside)
                    continue;
                double cell = 0.0;
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b) {
                        double t = c.t_lo + (a + 0.5) * dt / 4;
                        double w = c.w_lo + (b + 0.5) * dw / 4;
                        if (cls == kInside || m_.squared(t, w) >= level_)
                            cell += integrand(t, w);
                    }
                acc += cell / 16.0 * c.area();
            }
        return acc;
    }

    double recurse(const PlaneBox& c, int depth, double tol_cell, double v1, int cls) {
        if (cls == kOutside)
            return 0.0;
        double tm = 0.5 * (c.t_lo + c.t_hi), wm = 0.5 * (c.w_lo + c.w_hi);
        PlaneBox child[4] = {{c.t_lo, tm, c.w_lo, wm},
                             {tm, c.t_hi, c.w_lo, wm},
                             {c.t_lo, tm, wm, c.w_hi},
                             {tm, c.t_hi, wm, c.w_hi}};
        int ccls[4];
        double cest[4];
        double v2 = 0.0;
        for (int i = 0; i < 4; ++i) {
            ccls[i] = classify(child[i]);
            cest[i] = estimate(child[i], ccls[i]);
            v2 += cest[i];
        }
        double err = std::abs(v1 - v2);
        bool settled = err <= tol_cell && !(cls == kStraddle && depth < kMinStraddleDepth);
        if (settled || depth >= cfg_.max_refinement) {
            err_total_ += err;
            ++cells_;
            return v2;
        }
        double out = 0.0;
        for (int i = 0; i < 4; ++i)
            out += recurse(child[i], depth + 1, 0.25 * tol_cell, cest[i], ccls[i]);
        return out;
    }

    const WeylSymbolModel& m_;
    double level_;
    const std::function<double(double)>& f_;
    const QuadratureConfig& cfg_;
    double tol_total_ = 0.0;
    double err_total_ = 0.0;
    long cells_ = 0;
    long evals_ = 0;
};

} // namespace

QuadratureResult superlevel_integral(const WeylSymbolModel& model, double level,
                                     const std::function<double(double)>& f,
                                     const QuadratureConfig& cfg) {
    validate(cfg);
    if (!(level > 0.0) || !std::isfinite(level))
        throw InvalidInputError("level must be positive and finite");
    return LevelSetIntegrator(model, level, f, cfg).run();
}

} // namespace cnode
