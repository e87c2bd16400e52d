#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "klein/qfield.hpp"

namespace klein {

/// Fractional O_K-ideal: den > 0 and an upper-triangular integer matrix
/// [[a, b], [0, c]] with a, c > 0 and 0 <= b < a, whose columns are a Z-basis
/// of den*I in the integral basis {1, omega}. The HNF is the unique canonical
/// form, so ideal equality is componentwise equality.
struct FracIdeal {
    long long d = 0;
    Int den = 1;
    Int a, b, c; // basis vectors (a, 0) and (b, c)

    bool operator==(const FracIdeal& o) const {
        return d == o.d && den == o.den && a == o.a && b == o.b && c == o.c;
    }
    bool is_integral() const { return den == 1; }
};

FracIdeal ring_of_integers(const QuadraticField& k);

/// Smallest O_K-module containing the generators. Throws ZeroIdeal if all are
/// zero.
FracIdeal ideal_from_generators(const QuadraticField& k, const std::vector<FieldElement>& gens);

FracIdeal principal_ideal(const QuadraticField& k, const FieldElement& g);

FracIdeal mul(const QuadraticField& k, const FracIdeal& i, const FracIdeal& j);
FracIdeal inv(const QuadraticField& k, const FracIdeal& i);
FracIdeal mul_element(const QuadraticField& k, const FracIdeal& i, const FieldElement& g);
Rat ideal_norm(const FracIdeal& i);

bool contains(const FracIdeal& i, const FieldElement& x);
/// I subset of J
bool ideal_subset(const QuadraticField& k, const FracIdeal& i, const FracIdeal& j);
bool is_whole_ring(const FracIdeal& i);

/// Z-basis of I as field elements (den already divided out).
std::pair<FieldElement, FieldElement> ideal_basis(const QuadraticField& k, const FracIdeal& i);

/// v_p(I) for a prime ideal p.
int valuation(const QuadraticField& k, const FracIdeal& i, const FracIdeal& p);
int element_valuation(const QuadraticField& k, const FieldElement& x, const FracIdeal& p);

struct PrimeSplitting {
    enum class Kind { Split, Inert, Ramified } kind;
    // Split: two conjugate primes; Inert/Ramified: a single prime.
    std::vector<FracIdeal> primes;
};

/// Factorization of the rational prime p in O_K. Odd p by the Kronecker
/// symbol (D|p); p = 2 split iff D = 1 mod 8, inert iff D = 5 mod 8,
/// ramified iff D even.
PrimeSplitting factor_rational_prime(const QuadraticField& k, const Int& p);

/// All prime ideals of norm <= bound, ordered by (p, canonical factor order).
std::vector<FracIdeal> primes_of_norm_up_to(const QuadraticField& k, const Int& bound);

struct PrincipalityOptions {
    long cap = 10000000;         // candidate/step budget
    bool totally_positive = false; // require a totally positive generator
};

/// Some(g) with (g) = I, or nullopt after a complete search. Imaginary fields
/// enumerate the norm ellipse; real fields walk the reduced-ideal cycle, which
/// is complete within one fundamental-unit period.
std::optional<FieldElement> is_principal(const QuadraticField& k, const FracIdeal& i,
                                         const PrincipalityOptions& opt = {});

/// Steinitz: I (+) J and I' (+) J' are isomorphic O_K-modules iff the classes
/// of I*J and I'*J' agree.
bool steinitz_decide(const QuadraticField& k, const FracIdeal& i1, const FracIdeal& j1,
                     const FracIdeal& i2, const FracIdeal& j2,
                     const PrincipalityOptions& opt = {});

/// Same ideal class test, [I] == [J].
bool same_class(const QuadraticField& k, const FracIdeal& i, const FracIdeal& j,
                const PrincipalityOptions& opt = {});

} // namespace klein
