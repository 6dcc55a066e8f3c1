// math.hpp
// Shared numerics: standard normal functions, Gaussian quadrature rules,
// bracketed scalar root finding, and a deterministic random number stream.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace patro {

// Standard normal density.
double normal_pdf(double x);

// Standard normal CDF, accurate to full double precision via erfc.
double normal_cdf(double x);

// Inverse standard normal CDF (Wichura's PPND16 rational approximation,
// relative error below 1e-15). Throws std::invalid_argument outside (0,1).
double normal_quantile(double p);

// Nodes and weights of an n-point quadrature rule.
struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Hermite rule for the weight exp(-x^2) on the whole real line.
QuadRule gauss_hermite(int n);

// Gauss-Legendre rule on [-1, 1].
QuadRule gauss_legendre(int n);

// Cached rule lookups; thread safe, rules are built once per node count.
const QuadRule& gauss_hermite_cached(int n);
const QuadRule& gauss_legendre_cached(int n);

// Sum with pairwise (cascade) reduction. The result depends only on the
// element order, not on how callers might batch the work.
double pairwise_sum(const double* v, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

struct RootResult {
  double x = 0.0;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Finds a zero of f inside a bracket [lo, hi] with f(lo) and f(hi) of
// opposite sign. Bisection interleaved with secant steps; converges when
// |f| <= f_tol or the bracket width drops below x_tol. Throws
// std::invalid_argument if the bracket does not straddle a sign change.
RootResult find_root(const std::function<double(double)>& f, double lo,
                     double hi, double f_tol, double x_tol = 0.0);

// Deterministic generator with identical output on every platform:
// xoshiro256++ core seeded through splitmix64, normals by inverse CDF.
// std::normal_distribution is implementation defined, so it is avoided
// everywhere results must be reproducible bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double uniform();
  // Standard normal via the inverse CDF.
  double normal();

  // Derives an independent stream seed from (seed, stream) with a
  // splitmix64 mix; used to give each replication its own generator.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t s_[4];
};

}  // namespace patro
