// Exact coefficient tables for [phi^m, pi^n] and (phi^2 + pi^2)^s.
#pragma once

#include <map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bosonwb/fock.hpp"
#include "bosonwb/report.hpp"

namespace bw {

using BigInt = boost::multiprecision::cpp_int;

struct GaussianInt {
  BigInt re = 0;
  BigInt im = 0;

  bool is_zero() const { return re == 0 && im == 0; }
  BigInt norm2() const { return re * re + im * im; }
  cplx to_complex() const { return {re.convert_to<double>(), im.convert_to<double>()}; }
  GaussianInt& operator+=(const GaussianInt& o);
  bool operator==(const GaussianInt& o) const { return re == o.re && im == o.im; }
};

GaussianInt operator*(const GaussianInt& a, const GaussianInt& b);
GaussianInt operator*(long long s, const GaussianInt& a);

// C_{k,m,n} = k! C(m,k) C(n,k), with
// [phi^m, pi^n] = sum_{k>=1} i^k C_{k,m,n} pi^{n-k} phi^{m-k}.
BigInt commutator_coefficient(int k, int m, int n);
std::vector<BigInt> commutator_coefficients(int m, int n);  // index k = 0..min(m,n)

// (phi^2 + pi^2)^s = sum lambda_{a,b} phi^a pi^b, keyed by (a, b).
using LambdaTable = std::map<std::pair<int, int>, GaussianInt>;
LambdaTable lambda_coefficients(int s);
// 4^s s^{2s-a-b}
BigInt lambda_bound(int s, int a, int b);

// |lambda^{(s)}_{a,b}| <= 4^s s^{2s-a-b} in exact arithmetic for every s <= s_max.
CheckReport lambda_bound_check(int s_max);
// Operator identities on the interior of a single-site space.
CheckReport commutator_identity_check(int m_max, int n_max, double tol = 1e-9);
CheckReport lambda_expansion_check(int s_max, double tol = 1e-9);

}  // namespace bw
