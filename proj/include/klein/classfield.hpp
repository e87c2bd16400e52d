#pragma once

#include <vector>

#include "klein/ideal.hpp"

namespace klein {

/// Finite abelian group presented by independent cyclic generators whose
/// orders form a divisor chain d1 | d2 | ... | dr (ascending). Also carries
/// the full class enumeration so that discrete logs are table lookups.
struct AbelianGroupPresentation {
    Int order = 1;
    std::vector<Int> cyclic_orders;
    std::vector<FracIdeal> generators;
    std::vector<FracIdeal> class_reps;            // one ideal per class
    std::vector<std::vector<Int>> class_dlogs;    // exponents in the generators
    bool narrow = false;

    /// Number of surjections onto {+-1}, i.e. |Hom(G, Z/2Z)| = 2^(#even d_i).
    Int two_torsion_hom_count() const;
};

AbelianGroupPresentation class_group(const QuadraticField& k);
AbelianGroupPresentation narrow_class_group(const QuadraticField& k);

/// Exponent vector of [I] in the presentation's generators.
std::vector<Int> dlog(const QuadraticField& k, const AbelianGroupPresentation& g,
                      const FracIdeal& i);

/// L = K(sqrt(delta)) unramified over K at all finite primes, indexed by a
/// factorization of the field discriminant into two coprime fundamental
/// discriminants D = D1 * D2 (D1 the representative of smaller absolute
/// value).
struct UnramifiedQuadExt {
    FieldElement delta;
    Int disc_factor_1, disc_factor_2;
};

/// Complete list of the nontrivial unramified quadratic ring extensions of
/// O_K, by coprime fundamental-discriminant factorizations of D. Order is
/// deterministic (ascending |D1|, then D1). Throws InconsistentCount if the
/// genus count disagrees with |Hom(Cl^1, Z/2)| - 1.
std::vector<UnramifiedQuadExt> unramified_quadratic_extensions(const QuadraticField& k);

/// Direct finite-prime check: for every rational prime p | 2D, the inertia
/// pattern in the three quadratic subfields of the biquadratic closure shows
/// that primes of K above p are unramified in L. Throws RamifiedFiber on
/// failure.
void verify_unramified(const QuadraticField& k, const UnramifiedQuadExt& ext);

struct RayClassData {
    Int h, h1;
    int r = 0, t = 0;
};

/// Orders of Cl_K and Cl^1_K with the real-place data; asserts
/// h1 = 2^(r-t) * h. For imaginary fields t is reported as 0.
RayClassData ray_class_data(const QuadraticField& k);

/// The same data for K = Q: h = h1 = 1, r = t = 1.
RayClassData rational_ray_class_data();

/// Prime fundamental discriminant factorization of a fundamental discriminant.
std::vector<Int> prime_discriminants(const Int& D);

bool is_fundamental_discriminant(const Int& D);

} // namespace klein
