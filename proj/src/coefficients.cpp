#include "bosonwb/coefficients.hpp"

#include <cmath>
#include <string>

namespace bw {

GaussianInt& GaussianInt::operator+=(const GaussianInt& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussianInt operator*(const GaussianInt& a, const GaussianInt& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

GaussianInt operator*(long long s, const GaussianInt& a) { return {a.re * s, a.im * s}; }

namespace {

BigInt binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

cplx ipow(int k) {
  static const cplx t[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return t[k % 4];
}

}  // namespace

BigInt commutator_coefficient(int k, int m, int n) { return factorial(k) * binom(m, k) * binom(n, k); }

std::vector<BigInt> commutator_coefficients(int m, int n) {
  std::vector<BigInt> out;
  for (int k = 0; k <= std::min(m, n); ++k) out.push_back(commutator_coefficient(k, m, n));
  return out;
}

// (phi^2 + pi^2) phi^a pi^b = phi^{a+2} pi^b + phi^a pi^{b+2} - 2ia phi^{a-1} pi^{b+1} - a(a-1) phi^{a-2} pi^b
LambdaTable lambda_coefficients(int s) {
  if (s < 1) throw std::invalid_argument("lambda_coefficients: s must be >= 1");
  LambdaTable cur;
  cur[{2, 0}] = GaussianInt{1, 0};
  cur[{0, 2}] = GaussianInt{1, 0};
  for (int step = 1; step < s; ++step) {
    LambdaTable next;
    for (const auto& [key, c] : cur) {
      const auto [a, b] = key;
      next[{a + 2, b}] += c;
      next[{a, b + 2}] += c;
      if (a >= 1) next[{a - 1, b + 1}] += GaussianInt{0, -2 * a} * c;
      if (a >= 2) next[{a - 2, b}] += (-static_cast<long long>(a) * (a - 1)) * c;
    }
    cur.clear();
    for (auto& [key, c] : next)
      if (!c.is_zero()) cur.emplace(key, std::move(c));
  }
  return cur;
}

BigInt lambda_bound(int s, int a, int b) {
  BigInt r = boost::multiprecision::pow(BigInt(4), s);
  const int e = 2 * s - a - b;
  if (e < 0) throw std::invalid_argument("lambda_bound: a + b exceeds 2s");
  return r * boost::multiprecision::pow(BigInt(s), e);
}

CheckReport lambda_bound_check(int s_max) {
  CheckReport rep;
  rep.name = "lambda_bound";
  for (int s = 1; s <= s_max; ++s) {
    double worst = 0.0;
    bool ok = true;
    for (const auto& [key, c] : lambda_coefficients(s)) {
      const BigInt bound = lambda_bound(s, key.first, key.second);
      if (c.norm2() > bound * bound) ok = false;
      const double ratio = std::sqrt(c.norm2().convert_to<double>()) / bound.convert_to<double>();
      worst = std::max(worst, ratio);
    }
    auto& row = rep.add("s=" + std::to_string(s) + " max |lambda|/bound", worst, 1.0, 0.0);
    row.ok = ok;
  }
  return rep;
}

CheckReport commutator_identity_check(int m_max, int n_max, double tol) {
  CheckReport rep;
  rep.name = "commutator_identity";
  double worst = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    for (int n = 1; n <= n_max; ++n) {
      const int margin = m + n;
      const FockSpace space({margin + 6});
      const auto phi = phi_op(space, 0);
      const auto pi = pi_op(space, 0);
      const auto phim = power(phi, m);
      const auto pin = power(pi, n);
      SparseOperator rhs = scaled(identity_op(space), 0.0);
      for (int k = 1; k <= std::min(m, n); ++k) {
        const cplx c = ipow(k) * commutator_coefficient(k, m, n).convert_to<double>();
        rhs = linear_combination(1.0, rhs, c, compose(power(pi, n - k), power(phi, m - k)));
      }
      const auto diff = linear_combination(1.0, commutator(phim, pin), -1.0, rhs);
      const double dev = max_abs_restricted(diff, interior_projector(space, margin));
      worst = std::max(worst, dev);
      rep.add("m=" + std::to_string(m) + " n=" + std::to_string(n), dev, tol, 0.0);
    }
  }
  rep.extra["max_deviation"] = worst;
  return rep;
}

CheckReport lambda_expansion_check(int s_max, double tol) {
  CheckReport rep;
  rep.name = "lambda_expansion";
  for (int s = 1; s <= s_max; ++s) {
    const int margin = 2 * s;
    const FockSpace space({margin + 6});
    const auto phi = phi_op(space, 0);
    const auto pi = pi_op(space, 0);
    const auto lhs = power(linear_combination(1.0, power(phi, 2), 1.0, power(pi, 2)), s);
    SparseOperator rhs = scaled(identity_op(space), 0.0);
    for (const auto& [key, c] : lambda_coefficients(s))
      rhs = linear_combination(1.0, rhs, c.to_complex(), compose(power(phi, key.first), power(pi, key.second)));
    const double dev = max_abs_restricted(linear_combination(1.0, lhs, -1.0, rhs), interior_projector(space, margin));
    rep.add("s=" + std::to_string(s), dev, tol, 0.0);
  }
  return rep;
}

}  // namespace bw
