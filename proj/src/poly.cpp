#include "bosonwb/poly.hpp"

#include <cmath>
#include <stdexcept>

namespace bw {

namespace {

double falling_binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

void accumulate(Poly& p, const Monomial& m, std::complex<double> c) {
  if (c == 0.0) return;
  auto [it, inserted] = p.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) p.erase(it);
  }
}

// (b+^a b^c)(b+^d b^e) = sum_j C(c,j) C(d,j) j! b+^{a+d-j} b^{c+e-j}
std::vector<std::pair<SiteMono, double>> site_product(const SiteMono& x, const SiteMono& y) {
  std::vector<std::pair<SiteMono, double>> out;
  for (int j = 0; j <= std::min(x.ann, y.cre); ++j) {
    const double w = falling_binom(x.ann, j) * falling_binom(y.cre, j) * factorial(j);
    out.push_back({SiteMono{x.site, x.cre + y.cre - j, x.ann + y.ann - j}, w});
  }
  return out;
}

void expand(const Monomial& a, const Monomial& b, std::size_t ia, std::size_t ib, Monomial& cur, double w,
            std::complex<double> c, Poly& out) {
  if (ia == a.size() && ib == b.size()) {
    accumulate(out, cur, c * w);
    return;
  }
  if (ib == b.size() || (ia < a.size() && a[ia].site < b[ib].site)) {
    cur.push_back(a[ia]);
    expand(a, b, ia + 1, ib, cur, w, c, out);
    cur.pop_back();
    return;
  }
  if (ia == a.size() || b[ib].site < a[ia].site) {
    cur.push_back(b[ib]);
    expand(a, b, ia, ib + 1, cur, w, c, out);
    cur.pop_back();
    return;
  }
  for (const auto& [sm, sw] : site_product(a[ia], b[ib])) {
    const bool identity = sm.cre == 0 && sm.ann == 0;
    if (!identity) cur.push_back(sm);
    expand(a, b, ia + 1, ib + 1, cur, w * sw, c, out);
    if (!identity) cur.pop_back();
  }
}

}  // namespace

Poly poly_constant(std::complex<double> c) {
  Poly p;
  accumulate(p, {}, c);
  return p;
}

Poly poly_b(int site) { return Poly{{{SiteMono{site, 0, 1}}, 1.0}}; }
Poly poly_bdag(int site) { return Poly{{{SiteMono{site, 1, 0}}, 1.0}}; }
Poly poly_number(int site) { return Poly{{{SiteMono{site, 1, 1}}, 1.0}}; }

Poly poly_phi(int site) {
  const double s = 1.0 / std::sqrt(2.0);
  return Poly{{{SiteMono{site, 0, 1}}, s}, {{SiteMono{site, 1, 0}}, s}};
}

Poly poly_pi(int site) {
  const double s = 1.0 / std::sqrt(2.0);
  return Poly{{{SiteMono{site, 0, 1}}, std::complex<double>(0, -s)}, {{SiteMono{site, 1, 0}}, std::complex<double>(0, s)}};
}

Poly poly_add(const Poly& a, const Poly& b, std::complex<double> scale_b) {
  Poly out = a;
  for (const auto& [m, c] : b) accumulate(out, m, c * scale_b);
  return out;
}

Poly poly_scale(const Poly& a, std::complex<double> s) {
  Poly out;
  for (const auto& [m, c] : a) accumulate(out, m, c * s);
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  Monomial cur;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) expand(ma, mb, 0, 0, cur, 1.0, ca * cb, out);
  return out;
}

Poly poly_pow(const Poly& a, int p) {
  if (p < 0) throw std::invalid_argument("negative polynomial power");
  Poly out = poly_constant(1.0);
  for (int i = 0; i < p; ++i) out = poly_mul(out, a);
  return out;
}

Poly poly_adjoint(const Poly& a) {
  Poly out;
  for (const auto& [m, c] : a) {
    Monomial d = m;
    for (auto& s : d) std::swap(s.cre, s.ann);
    accumulate(out, d, std::conj(c));
  }
  return out;
}

int mono_degree(const Monomial& m) {
  int d = 0;
  for (const auto& s : m) d += s.cre + s.ann;
  return d;
}

bool mono_touches(const Monomial& m, int site) {
  for (const auto& s : m)
    if (s.site == site) return true;
  return false;
}

}  // namespace bw
