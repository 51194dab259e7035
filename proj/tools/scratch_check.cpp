// Throwaway sanity harness for the algebra layer; not installed or tested.
#include <cassert>
#include <iostream>

#include "hyptel/polynk.hpp"
#include "hyptel/polyz.hpp"
#include "hyptel/rfuncn.hpp"
#include "hyptel/rfuncnk.hpp"

using namespace hyptel;

int main() {
    // PolyZ basics
    PolyZ p({Int(-1), Int(0), Int(1)});          // x^2 - 1
    PolyZ q({Int(1), Int(1)});                   // x + 1
    assert(poly_gcd(p, q) == q);
    assert(p.divexact(q) == PolyZ({Int(-1), Int(1)}));
    auto roots = integer_roots(p);
    assert(roots.size() == 2 && roots[0] == -1 && roots[1] == 1);
    PolyZ big1({Int("123456789123456789"), Int(2), Int("99999999999999999")});
    PolyZ big2({Int(7), Int("55555555555555553")});
    assert(poly_gcd(big1 * big2, big2) == big2.primitive_part());
    PolyZ g12 = poly_gcd(big1 * big2, big2 * q);
    assert(big2.divides(big1 * big2));
    std::cout << "gcd big: " << g12.to_string("x") << "\n";

    // taylor_shift: (x+1)^2 from x^2 shifted by 1
    PolyZ x2({Int(0), Int(0), Int(1)});
    assert(x2.taylor_shift(Int(1)) == PolyZ({Int(1), Int(2), Int(1)}));

    // PolyNK
    PolyNK n = PolyNK::var_n(), k = PolyNK::var_k();
    PolyNK f = (n + k) * (n - k);
    assert(f == n * n - k * k);
    auto fa = factor_affine_k((n + k) * (n + k) * (n - k + PolyNK(1L)) *
                              PolyNK::from_polyz_n(PolyZ({Int(3), Int(3)})));
    assert(fa.complete());
    std::cout << "unit=" << fa.unit << " content_n=" << fa.content_n.to_string("n")
              << " nfact=" << fa.factors.size() << "\n";
    for (auto& [af, m] : fa.factors) {
        std::cout << "  (" << af.a << "," << af.b << "," << af.c << ")^" << m << "\n";
    }

    // gcd_nk
    PolyNK g = gcd_nk(f * (n + k), (n + k) * (n + k));
    std::cout << "gcd_nk: " << g.to_string() << "\n";
    assert(g == (n + k) * (n + k) || g == n + k);

    // resultant: a = k - n, b = k; b(k+j) = k + j; res_k(k - n, k + j) over
    // common root k = n, j = -n: det should vanish at j = -n i.e. contain j + n
    PolyNK a1 = k - n, b1 = k;
    PolyNK res = resultant_k_shifted(a1, b1);
    std::cout << "res: " << res.to_string() << "\n";   // expect n + j (dk slot = j)

    // RFuncN
    RFuncN r1(PolyZ({Int(1), Int(1)}), PolyZ({Int(-1), Int(1)}));  // (n+1)/(n-1)
    RFuncN r2 = r1 + RFuncN(1L);
    std::cout << "r2 = " << r2.to_string() << "\n";    // 2n/(n-1)
    assert(r2 == RFuncN(PolyZ({Int(0), Int(2)}), PolyZ({Int(-1), Int(1)})));
    assert(r1 * r1.inverse() == RFuncN(1L));
    assert(r1.shifted(2) == RFuncN(PolyZ({Int(3), Int(1)}), PolyZ({Int(1), Int(1)})));
    assert(r1.eval(Rat(3)) == Rat(2));

    // RFuncNK
    RFuncNK s1(n + k, n - k);
    RFuncNK s2 = s1.shifted(1, Rat(1, 2));
    std::cout << "s2 = " << s2.to_string() << "\n";
    // phi: k -> n - k turns (n+k)/(n-k) into (2n-k)/k
    RFuncNK s3 = s1.subst_k_affine(Rat(1), Rat(-1), Rat(0));
    std::cout << "s3 = " << s3.to_string() << "\n";
    assert(s3 == RFuncNK(PolyNK(2L) * n - k, k));

    std::cout << "all scratch checks passed\n";
    return 0;
}
