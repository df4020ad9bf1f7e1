#pragma once

// Real-root isolation for monic cubics: Sturm-sequence bracketing, bisection
// to 1e-12, one Newton polishing step. Exact root counts in an interval are
// what the equilibrium census depends on, which is why this is not done with
// companion-matrix eigenvalues.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace mht {

/// p(u) = u^3 + b u^2 + c u + d.
struct MonicCubic {
  double b = 0, c = 0, d = 0;

  double eval(double u) const { return ((u + b) * u + c) * u + d; }
  double deriv(double u) const { return (3.0 * u + 2.0 * b) * u + c; }
  double second_deriv(double u) const { return 6.0 * u + 2.0 * b; }

  /// Classic cubic discriminant (positive: three distinct real roots;
  /// negative: one real root; zero: a multiple root).
  double discriminant() const {
    return 18.0 * b * c * d - 4.0 * b * b * b * d + b * b * c * c -
           4.0 * c * c * c - 27.0 * d * d;
  }

  /// All real roots lie in [-bound, bound].
  double cauchy_bound() const {
    return 1.0 + std::max({std::abs(b), std::abs(c), std::abs(d)});
  }
};

/// One isolated real root with its multiplicity (1 or 2; a triple root is
/// reported once with multiplicity 3).
struct CubicRoot {
  double value = 0;
  int multiplicity = 1;
};

namespace detail {

// Sturm chain of a monic cubic:
//   p0 = p, p1 = p', p2 = e*u + f, p3 = constant,
// with e = 2(b^2 - 3c)/9 and f = (b*c - 9*d)/9.
struct SturmChain {
  MonicCubic p;
  double e, f;     // p2
  double p3;       // constant
  bool degenerate; // chain broke down (multiple root or e ~ 0)

  explicit SturmChain(const MonicCubic& q) : p(q) {
    e = 2.0 * (q.b * q.b - 3.0 * q.c) / 9.0;
    f = (q.b * q.c - 9.0 * q.d) / 9.0;
    const double scale = 1.0 + q.b * q.b + std::abs(q.c);
    degenerate = std::abs(e) <= 1e-14 * scale;
    p3 = 0.0;
    if (!degenerate) {
      // remainder of p' by (e*u + f) is p' evaluated at its root.
      const double root2 = -f / e;
      p3 = -p.deriv(root2);
    }
  }

  int sign_variations(double x) const {
    double vals[4] = {p.eval(x), p.deriv(x), e * x + f, p3};
    int n = degenerate ? 3 : 4;
    int changes = 0;
    int prev = 0;
    for (int i = 0; i < n; ++i) {
      int s = (vals[i] > 0) - (vals[i] < 0);
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++changes;
      prev = s;
    }
    return changes;
  }

  // number of distinct real roots in (lo, hi]
  int count(double lo, double hi) const { return sign_variations(lo) - sign_variations(hi); }
};

inline double bisect_to(const MonicCubic& p, double lo, double hi, double width) {
  double flo = p.eval(lo);
  for (int i = 0; i < 200 && (hi - lo) > width; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = p.eval(mid);
    if (fm == 0.0) return mid;
    if ((flo < 0) == (fm < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double newton_polish(const MonicCubic& p, double u, double lo, double hi) {
  const double dp = p.deriv(u);
  if (dp != 0.0) {
    const double u2 = u - p.eval(u) / dp;
    if (u2 >= lo && u2 <= hi && std::abs(p.eval(u2)) <= std::abs(p.eval(u))) return u2;
  }
  return u;
}

// locate a root of even multiplicity inside [lo, hi]: it sits at a critical
// point of p, so bisect p' there.
inline bool locate_touch_root(const MonicCubic& p, double lo, double hi, double& out) {
  double dlo = p.deriv(lo), dhi = p.deriv(hi);
  if ((dlo < 0) == (dhi < 0)) return false;
  for (int i = 0; i < 200 && (hi - lo) > 1e-14 * (1.0 + std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double dm = p.deriv(mid);
    if (dm == 0.0) { lo = hi = mid; break; }
    if ((dlo < 0) == (dm < 0)) {
      lo = mid;
      dlo = dm;
    } else {
      hi = mid;
    }
  }
  out = 0.5 * (lo + hi);
  const double scale = 1.0 + std::abs(p.b) + std::abs(p.c) + std::abs(p.d);
  return std::abs(p.eval(out)) <= 1e-9 * scale;
}

}  // namespace detail

/// Distinct real roots of p in (lo, hi] by Sturm count. Falls back to
/// critical-point analysis when the chain degenerates.
inline int sturm_distinct_roots(const MonicCubic& p, double lo, double hi) {
  detail::SturmChain chain(p);
  if (!chain.degenerate) return chain.count(lo, hi);
  // degenerate chain: count sign changes over the monotone segments split at
  // the critical points.
  std::vector<double> knots{lo, hi};
  const double cd = 4.0 * p.b * p.b - 12.0 * p.c;
  if (cd > 0) {
    const double rt = std::sqrt(cd);
    for (double t : {(-2.0 * p.b - rt) / 6.0, (-2.0 * p.b + rt) / 6.0})
      if (t > lo && t < hi) knots.push_back(t);
  }
  std::sort(knots.begin(), knots.end());
  int cnt = 0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double va = p.eval(knots[i]), vb = p.eval(knots[i + 1]);
    if ((va < 0 && vb >= 0) || (va > 0 && vb <= 0)) ++cnt;
  }
  return cnt;
}

/// All real roots of p inside [lo, hi], ascending, each reported once with
/// its multiplicity. Every simple root is bisected to 1e-12 and polished by
/// one Newton step; residuals are far below 1e-10 for the O(1) coefficients
/// this library produces.
inline std::vector<CubicRoot> cubic_real_roots(const MonicCubic& p, double lo, double hi) {
  std::vector<CubicRoot> out;
  if (!(lo < hi)) return out;

  detail::SturmChain chain(p);
  const double scale = 1.0 + std::abs(p.b) + std::abs(p.c) + std::abs(p.d);

  // nudge endpoints off exact roots so the half-open Sturm counts behave.
  double a = lo, z = hi;
  if (p.eval(a) == 0.0) a = std::nextafter(a, -std::numeric_limits<double>::infinity());
  if (p.eval(z) == 0.0) z = std::nextafter(z, std::numeric_limits<double>::infinity());

  struct Iv { double lo, hi; int cnt; };
  std::vector<Iv> stack;

  auto count_in = [&](double x0, double x1) -> int {
    if (!chain.degenerate) return chain.count(x0, x1);
    return sturm_distinct_roots(p, x0, x1);
  };

  const int total = count_in(a, z);
  if (total <= 0) {
    // a double root does not change sign; Sturm still sees it as one distinct
    // root, so total==0 genuinely means no roots unless the chain degenerated.
    if (chain.degenerate) {
      double t;
      if (detail::locate_touch_root(p, a, z, t) && t >= lo && t <= hi)
        out.push_back({t, 2});
    }
    return out;
  }
  stack.push_back({a, z, total});

  while (!stack.empty()) {
    Iv iv = stack.back();
    stack.pop_back();
    if (iv.cnt == 0) continue;

    const double width = iv.hi - iv.lo;
    const double wtol = 1e-12 * (1.0 + std::abs(iv.lo) + std::abs(iv.hi));

    if (iv.cnt == 1 || width <= wtol) {
      const double vlo = p.eval(iv.lo), vhi = p.eval(iv.hi);
      if ((vlo < 0) != (vhi < 0)) {
        double rt = detail::bisect_to(p, iv.lo, iv.hi, 1e-12);
        rt = detail::newton_polish(p, rt, iv.lo, iv.hi);
        out.push_back({rt, width <= wtol && iv.cnt > 1 ? iv.cnt : 1});
      } else {
        // even-multiplicity root (tangency) inside; find it on p'.
        double t;
        if (detail::locate_touch_root(p, iv.lo, iv.hi, t)) {
          out.push_back({t, 2});
        } else if (width > wtol) {
          const double mid = 0.5 * (iv.lo + iv.hi);
          const int cl = count_in(iv.lo, mid);
          stack.push_back({iv.lo, mid, cl});
          stack.push_back({mid, iv.hi, iv.cnt - cl});
        }
      }
      continue;
    }

    double mid = 0.5 * (iv.lo + iv.hi);
    if (p.eval(mid) == 0.0) mid = std::nextafter(mid, iv.hi);
    const int cl = count_in(iv.lo, mid);
    stack.push_back({iv.lo, mid, cl});
    stack.push_back({mid, iv.hi, iv.cnt - cl});
  }

  std::sort(out.begin(), out.end(), [](const CubicRoot& x, const CubicRoot& y) {
    return x.value < y.value;
  });
  // merge anything closer than the isolation resolution.
  std::vector<CubicRoot> merged;
  for (const auto& rt : out) {
    if (!merged.empty() && std::abs(rt.value - merged.back().value) <= 4e-12 * (1.0 + std::abs(rt.value)))
      merged.back().multiplicity += rt.multiplicity;
    else
      merged.push_back(rt);
  }
  // near-degenerate safety: a reported simple root whose residual is poor is
  // rejected rather than returned wrong.
  std::vector<CubicRoot> checked;
  for (const auto& rt : merged)
    if (std::abs(p.eval(rt.value)) <= 1e-9 * scale) checked.push_back(rt);
  return checked;
}

/// All real roots over the Cauchy bound interval.
inline std::vector<CubicRoot> cubic_real_roots(const MonicCubic& p) {
  const double B = p.cauchy_bound();
  return cubic_real_roots(p, -B, B);
}

}  // namespace mht
