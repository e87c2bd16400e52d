#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "klein/numbers.hpp"

namespace klein {

/// Basis choice for the ring of integers: omega = sqrt(d) or (1+sqrt(d))/2.
enum class OmegaKind { Sqrt, Half };

inline OmegaKind omega_kind_for(long long d) {
    long long m = ((d % 4) + 4) % 4;
    return m == 1 ? OmegaKind::Half : OmegaKind::Sqrt;
}

/// Q(sqrt(d)) for squarefree d != 0, 1. Value type; cheap to copy.
struct QuadraticField {
    long long d = 0;
    Int D;          // fundamental discriminant: d if d = 1 mod 4, else 4d
    OmegaKind omega_kind = OmegaKind::Sqrt;
    int signature_r = 0; // number of real places (0 or 2)
    Rat minkowski_bound; // rational upper bound for the Minkowski constant

    bool operator==(const QuadraticField& o) const { return d == o.d; }
};

/// a + b*omega over Q(sqrt(d)), exact rational coordinates.
/// The field is tracked by its defining d; mixing fields in arithmetic throws.
struct FieldElement {
    Rat a, b;
    long long d = 0;

    FieldElement() = default;
    FieldElement(Rat a_, Rat b_, long long d_) : a(std::move(a_)), b(std::move(b_)), d(d_) {}

    OmegaKind kind() const { return omega_kind_for(d); }
    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }
    bool operator==(const FieldElement& o) const { return d == o.d && a == o.a && b == o.b; }
};

QuadraticField make_field(long long d);

FieldElement element(const QuadraticField& k, const Rat& a, const Rat& b);
FieldElement from_rational(const QuadraticField& k, const Rat& a);
/// sqrt(d) as an element (b=1 for Sqrt basis, 2*omega-1 for Half basis).
FieldElement sqrt_d(const QuadraticField& k);
FieldElement omega(const QuadraticField& k);

FieldElement add(const FieldElement& x, const FieldElement& y);
FieldElement sub(const FieldElement& x, const FieldElement& y);
FieldElement neg(const FieldElement& x);
FieldElement mul(const FieldElement& x, const FieldElement& y);
FieldElement mul_rat(const FieldElement& x, const Rat& c);
FieldElement inverse(const FieldElement& x);
FieldElement div(const FieldElement& x, const FieldElement& y);

inline FieldElement operator+(const FieldElement& x, const FieldElement& y) { return add(x, y); }
inline FieldElement operator-(const FieldElement& x, const FieldElement& y) { return sub(x, y); }
inline FieldElement operator-(const FieldElement& x) { return neg(x); }
inline FieldElement operator*(const FieldElement& x, const FieldElement& y) { return mul(x, y); }
inline FieldElement operator/(const FieldElement& x, const FieldElement& y) { return div(x, y); }

FieldElement conj(const FieldElement& x);
Rat norm(const FieldElement& x);
Rat trace(const FieldElement& x);

/// Both rational coordinates integral, i.e. x lies in O_K.
bool is_integral(const FieldElement& x);

/// Coordinates of x in the integral basis {1, omega} as exact rationals;
/// equal to (a, b) but named for intent at call sites.
inline std::pair<Rat, Rat> coordinates(const FieldElement& x) { return {x.a, x.b}; }

/// Exact sign of the image of x under the real embedding sending sqrt(d) to
/// the positive (place=0) or negative (place=1) square root. Requires d > 0
/// unless x is rational.
int sign_at_place(const FieldElement& x, int place);

bool is_totally_positive(const FieldElement& x);

/// Units of O_K: x integral with |N(x)| = 1.
bool is_unit(const FieldElement& x);

/// max(|a'|, |b'|) over the {1, omega} coordinates.
Rat height(const FieldElement& x);

std::string to_string(const FieldElement& x);

/// Parses "a+b*s" (s = sqrt(d)) or "a+b*h" (h = (1+sqrt(d))/2, only for
/// d = 1 mod 4); also accepts bare rationals and forms like "s", "-s", "4-s".
FieldElement parse_element(const QuadraticField& k, const std::string& text);

struct UnitData {
    FieldElement fundamental_unit;
    int unit_norm = 0;  // -1 or +1
    int t_exponent = 0; // |O_K^x / totally positive units| = 2^t
};

/// Fundamental unit by continued fractions (d > 0). Throws ImaginaryField for
/// d < 0 and SearchCapExceeded past `cap` expansion steps.
UnitData fundamental_unit(const QuadraticField& k, long cap = 1000000);

} // namespace klein
