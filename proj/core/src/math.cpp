// math.cpp
// Normal distribution functions, Gauss-Hermite / Gauss-Legendre rules by
// Newton iteration on the orthogonal-polynomial recurrences, a bracketed
// hybrid root finder, and the deterministic RNG.

#include "patro/math.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace patro {

double normal_pdf(double x) {
  static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must lie in (0,1), got " +
                                std::to_string(p));
  }
  // Wichura's algorithm AS 241, PPND16 coefficients.
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
              6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
            1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
          1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
    const double den =
        (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
              3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
            5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
          4.2313330701600911252e+1) * r + 1.0);
    return q * num / den;
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
            3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
    val = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    val = num / den;
  }
  return (q < 0.0) ? -val : val;
}

// ===================== quadrature rules =====================

QuadRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: need n >= 1");
  QuadRule rule;
  rule.x.assign(n, 0.0);
  rule.w.assign(n, 0.0);
  const double pi_m4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  const int m = (n + 1) / 2;
  double z = 0.0;
  double pp = 0.0;
  for (int i = 0; i < m; ++i) {
    // Initial guesses for the roots in descending order.
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(n, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.x[1];
    } else {
      z = 2.0 * z - rule.x[i - 2];
    }
    for (int iter = 0; iter < 100; ++iter) {
      // Orthonormal Hermite recurrence; pp is the derivative at z.
      double p1 = pi_m4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * (1.0 + std::abs(z))) break;
    }
    rule.x[i] = z;
    rule.x[n - 1 - i] = -z;
    rule.w[i] = 2.0 / (pp * pp);
    rule.w[n - 1 - i] = rule.w[i];
  }
  if (n % 2 == 1) rule.x[n / 2] = 0.0;
  return rule;
}

QuadRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  QuadRule rule;
  rule.x.assign(n, 0.0);
  rule.w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.w[n - 1 - i] = rule.w[i];
  }
  return rule;
}

namespace {

const QuadRule& cached_rule(int n, QuadRule (*make)(int),
                            std::map<int, QuadRule>& cache, std::mutex& mu) {
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make(n)).first;
  return it->second;
}

}  // namespace

const QuadRule& gauss_hermite_cached(int n) {
  static std::map<int, QuadRule> cache;
  static std::mutex mu;
  return cached_rule(n, gauss_hermite, cache, mu);
}

const QuadRule& gauss_legendre_cached(int n) {
  static std::map<int, QuadRule> cache;
  static std::mutex mu;
  return cached_rule(n, gauss_legendre, cache, mu);
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

// ===================== root finding =====================

RootResult find_root(const std::function<double(double)>& f, double lo,
                     double hi, double f_tol, double x_tol) {
  if (!(lo < hi)) throw std::invalid_argument("find_root: empty bracket");
  double flo = f(lo);
  double fhi = f(hi);
  RootResult res;
  if (std::abs(flo) <= f_tol) {
    res = {lo, flo, 0, true};
    return res;
  }
  if (std::abs(fhi) <= f_tol) {
    res = {hi, fhi, 0, true};
    return res;
  }
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::invalid_argument(
        "find_root: no sign change over [" + std::to_string(lo) + ", " +
        std::to_string(hi) + "]");
  }
  double x = 0.5 * (lo + hi);
  double fx = f(x);
  for (int k = 1; k <= 200; ++k) {
    res.iterations = k;
    if (std::abs(fx) <= f_tol) {
      res.x = x;
      res.f = fx;
      res.converged = true;
      return res;
    }
    // Shrink the bracket around the sign change.
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    if (hi - lo <= x_tol * std::max(1.0, std::abs(x)) ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(x))) {
      res.x = x;
      res.f = fx;
      res.converged = true;
      return res;
    }
    // Secant proposal from the bracket endpoints, bisection fallback.
    double xn = x - fx * (hi - lo) / (fhi - flo);
    const double guard = 0.01 * (hi - lo);
    if (!(xn > lo + guard && xn < hi - guard)) xn = 0.5 * (lo + hi);
    x = xn;
    fx = f(x);
  }
  res.x = x;
  res.f = fx;
  res.converged = false;
  return res;
}

// ===================== random numbers =====================

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  // 53 random bits, offset half a step so the result stays inside (0,1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() { return normal_quantile(uniform()); }

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
  std::uint64_t mixed = splitmix64(state);
  return mixed ^ splitmix64(state);
}

}  // namespace patro
