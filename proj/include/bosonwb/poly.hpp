// Normal-ordered polynomials in b, b^dagger used for coupling-constant extraction.
#pragma once

#include <complex>
#include <map>
#include <vector>

namespace bw {

// b^dagger^cre b^ann on one site.
struct SiteMono {
  int site;
  int cre;
  int ann;
  auto operator<=>(const SiteMono&) const = default;
};

// Sites ascending, no identity factors.
using Monomial = std::vector<SiteMono>;
using Poly = std::map<Monomial, std::complex<double>>;

Poly poly_constant(std::complex<double> c);
Poly poly_b(int site);
Poly poly_bdag(int site);
Poly poly_number(int site);
Poly poly_phi(int site);
Poly poly_pi(int site);

Poly poly_add(const Poly& a, const Poly& b, std::complex<double> scale_b = 1.0);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_pow(const Poly& a, int p);
Poly poly_adjoint(const Poly& a);
Poly poly_scale(const Poly& a, std::complex<double> s);

int mono_degree(const Monomial& m);
bool mono_touches(const Monomial& m, int site);

}  // namespace bw
