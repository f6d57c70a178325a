#include "disclosure/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace disclosure {

namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e

// Series for W near the branch point x = -1/e, in p = sqrt(2(e*x + 1)).
// Upper sign gives W0, lower gives W-1.
double branch_point_guess(double x, bool principal) {
  double p = std::sqrt(std::max(0.0, 2.0 * (std::exp(1.0) * x + 1.0)));
  if (!principal) p = -p;
  return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
}

double halley_lambert(double x, double w, double wlo, double whi,
                      bool increasing, const ToleranceConfig& tol) {
  // Maintain [wlo, whi] as a safeguard; w e^w - x is monotone on each branch
  // interval (increasing for w >= -1, decreasing for w <= -1), so bisection
  // always makes progress when Halley misbehaves.
  //
  // The residual target scales with |x| (callers handle x = 0 before getting
  // here) so small arguments converge to small relative error too. When the
  // target is below what rounding in w e^w allows, the bracket collapses to
  // machine resolution first and the iterate is returned at that point, so a
  // tight target cannot hang the loop.
  const double f_tol = tol.abs_tol * std::abs(x);
  for (int it = 0; it < tol.max_iter; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (f == 0.0) return w;
    const bool resid_ok = std::abs(f) <= f_tol;
    if ((f > 0.0) == increasing) {
      whi = w;
    } else {
      wlo = w;
    }
    const double fp = ew * (w + 1.0);
    const double fpp = ew * (w + 2.0);
    double step = 0.0;
    const double denom = fp - 0.5 * f * fpp / fp;
    if (fp != 0.0 && std::isfinite(denom) && denom != 0.0) {
      step = f / denom;
    }
    double next = w - step;
    const bool halley_ok = step != 0.0 && next > wlo && next < whi;
    if (!halley_ok) {
      next = 0.5 * (wlo + whi);  // bisect when Halley leaves the bracket
    }
    if (resid_ok) {
      // The residual gate alone leaves O(f_tol / f') error in w, which gets
      // large where the derivative is small. One extra accepted Halley step
      // polishes the iterate to machine precision; keep w if the step was
      // rejected (happens only hard against the branch point where fp ~ 0).
      return halley_ok ? next : w;
    }
    if (next == w) return w;  // bracket narrowed to machine resolution
    w = next;
  }
  throw std::runtime_error("lambert_w: max_iter exhausted");
}

}  // namespace

double lambert_w0(double x, const ToleranceConfig& tol) {
  if (!(x >= -kInvE)) {
    // Allow rounding slack right at the branch point; callers that build the
    // argument from exp/log arithmetic can land a few ulp below -1/e.
    if (x >= -kInvE - 1e-12) {
      x = -kInvE;
    } else {
      throw std::domain_error("lambert_w0: argument below -1/e");
    }
  }
  if (x == 0.0) return 0.0;
  if (x == -kInvE) return -1.0;

  double w;
  if (x < -0.25) {
    w = branch_point_guess(x, true);
  } else if (x < 3.0) {
    // log1p-based guess is within a few percent on this range.
    w = std::log1p(x) * (1.0 - std::log1p(std::log1p(x)) / (2.0 + std::log1p(x)));
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  // W0 maps [-1/e, inf) to [-1, inf).
  double whi = (x > 0.0) ? std::log1p(x) + 1.0 : 0.0;
  return halley_lambert(x, std::min(std::max(w, -1.0), whi), -1.0, whi,
                        /*increasing=*/true, tol);
}

double lambert_wm1(double x, const ToleranceConfig& tol) {
  if (!(x >= -kInvE)) {
    if (x >= -kInvE - 1e-12) {
      x = -kInvE;
    } else {
      throw std::domain_error("lambert_wm1: argument below -1/e");
    }
  }
  if (!(x < 0.0)) {
    throw std::domain_error("lambert_wm1: argument must be negative");
  }
  if (x == -kInvE) return -1.0;

  double w;
  if (x > -0.27) {
    // Toward 0-, W-1(x) ~ log(-x) - log(-log(-x)).
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  } else {
    w = branch_point_guess(x, false);
  }
  // W-1 maps [-1/e, 0) to (-inf, -1]; find a lower bound with a sign change.
  // On this branch w e^w increases toward 0 as w -> -inf, so f(w) = w e^w - x
  // is positive for w far enough left.
  double wlo = std::min(w - 1.0, -2.0);
  while (wlo * std::exp(wlo) - x < 0.0) {
    wlo *= 2.0;
    if (wlo < -750.0) break;  // e^w underflows; f = -x > 0 from here on
  }
  return halley_lambert(x, std::min(std::max(w, wlo), -1.0), wlo, -1.0,
                        /*increasing=*/false, tol);
}

double find_root(const std::function<double(double)>& f, Bracket bracket,
                 const ToleranceConfig& tol) {
  double a = bracket.lo;
  double b = bracket.hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw std::invalid_argument("find_root: no sign change over bracket");
  }

  // Brent's method: b is the current best iterate, a the contrapoint.
  double c = a, fc = fa;
  double d = b - a, e = b - a;
  for (int it = 0; it < tol.max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double machine_tol =
        2.0 * std::numeric_limits<double>::epsilon() * std::abs(b);
    const double m = 0.5 * (c - b);
    if (std::abs(fb) <= tol.abs_tol || std::abs(m) <= machine_tol) {
      return b;
    }
    if (std::abs(e) < machine_tol || std::abs(fa) <= std::abs(fb)) {
      d = e = m;  // bisection
    } else {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;  // secant
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::abs(machine_tol * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;  // accept interpolation
      } else {
        d = e = m;  // fall back to bisection
      }
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > machine_tol) ? d : (m > 0.0 ? machine_tol : -machine_tol);
    fb = f(b);
    if (fb == 0.0) return b;
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
  }
  throw std::runtime_error("find_root: max_iter exhausted");
}

namespace {

struct QuadCtx {
  const std::function<double(double)>& f;
  long evals_left;
};

// Recursive adaptive Simpson with the standard 1/15 Richardson error gate.
double simpson_adapt(QuadCtx& ctx, double a, double b, double fa, double fm,
                     double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  ctx.evals_left -= 2;
  if (ctx.evals_left < 0) {
    throw std::runtime_error("integrate: refinement budget exhausted");
  }
  const double flm = ctx.f(lm);
  const double frm = ctx.f(rm);
  const double h = b - a;
  const double left = h / 12.0 * (fa + 4.0 * flm + fm);
  const double right = h / 12.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
    return left + right + delta / 15.0;
  }
  return simpson_adapt(ctx, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_adapt(ctx, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const ToleranceConfig& tol) {
  if (!(a <= b)) {
    throw std::invalid_argument("integrate: need a <= b");
  }
  if (a == b) return 0.0;

  QuadCtx ctx{f, 2'000'000};
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // Two passes: the first with the requested absolute tolerance, a second
  // tightened pass when the relative criterion turns out to be the binding
  // one for the value actually computed.
  double eps = std::max(tol.abs_tol, tol.rel_tol * std::abs(whole));
  double result = simpson_adapt(ctx, a, b, fa, fm, fb, whole, eps, 48);
  const double target = std::max(tol.abs_tol, tol.rel_tol * std::abs(result));
  if (target < eps * 0.5) {
    result = simpson_adapt(ctx, a, b, fa, fm, fb, whole, target, 48);
  }
  return result;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) {
  return (v << k) | (v >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) {
  // Mix seed and stream id before expanding so that nearby (seed, stream)
  // pairs land in unrelated regions of the state space.
  std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1));
  s ^= rotl(stream_id, 32);
  for (auto& word : state_) word = splitmix64(s);
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
    state_[0] = 1;  // all-zero state is the one invalid xoshiro seed
  }
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256**
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0)) {
    throw std::domain_error("RngStream::exponential: rate must be positive");
  }
  // uniform() < 1, so 1 - u > 0 and log1p is safe.
  return -std::log1p(-uniform()) / rate;
}

}  // namespace disclosure
