#include "klein/qfield.hpp"

#include <map>
#include <sstream>

namespace klein {

namespace {

void check_same_field(const FieldElement& x, const FieldElement& y) {
    if (x.d != y.d)
        fail(ErrorCode::BadInput, "elements of different fields (d=" + std::to_string(x.d) +
                                      " vs d=" + std::to_string(y.d) + ")");
}

// omega^2 = omega_sq_a + omega_sq_b * omega
void omega_square(long long d, Rat& c0, Rat& c1) {
    if (omega_kind_for(d) == OmegaKind::Sqrt) {
        c0 = Rat(d);
        c1 = 0;
    } else {
        // omega = (1+sqrt(d))/2 satisfies omega^2 = omega + (d-1)/4
        c0 = Rat(Int(d) - 1, Int(4));
        c0.canonicalize();
        c1 = 1;
    }
}

} // namespace

QuadraticField make_field(long long d) {
    if (d == 0 || d == 1) fail(ErrorCode::DegenerateD, "d must not be 0 or 1");
    if (!is_squarefree(Int(d)))
        fail(ErrorCode::NotSquarefree, "d = " + std::to_string(d) + " is not squarefree");
    QuadraticField k;
    k.d = d;
    k.omega_kind = omega_kind_for(d);
    k.D = (k.omega_kind == OmegaKind::Half) ? Int(d) : Int(4) * Int(d);
    k.signature_r = d > 0 ? 2 : 0;
    Int s = isqrt_floor(abs_int(k.D)) + 1;
    if (d > 0) {
        // sqrt(D)/2, rounded up through the integer square root
        k.minkowski_bound = make_rat(s, 2);
    } else {
        // 2*sqrt(|D|)/pi with pi underestimated, so the bound overshoots
        k.minkowski_bound = make_rat(2 * s * 100000, 314159);
    }
    // Ring closure of Z + Z*omega: omega^2 must have integral coordinates.
    Rat c0, c1;
    omega_square(d, c0, c1);
    if (!is_integer(c0) || !is_integer(c1))
        fail(ErrorCode::Internal, "integral basis is not closed under multiplication");
    return k;
}

FieldElement element(const QuadraticField& k, const Rat& a, const Rat& b) {
    return FieldElement(a, b, k.d);
}

FieldElement from_rational(const QuadraticField& k, const Rat& a) {
    return FieldElement(a, Rat(0), k.d);
}

FieldElement sqrt_d(const QuadraticField& k) {
    if (k.omega_kind == OmegaKind::Sqrt) return FieldElement(Rat(0), Rat(1), k.d);
    return FieldElement(Rat(-1), Rat(2), k.d); // 2*omega - 1
}

FieldElement omega(const QuadraticField& k) { return FieldElement(Rat(0), Rat(1), k.d); }

FieldElement add(const FieldElement& x, const FieldElement& y) {
    check_same_field(x, y);
    return FieldElement(x.a + y.a, x.b + y.b, x.d);
}

FieldElement sub(const FieldElement& x, const FieldElement& y) {
    check_same_field(x, y);
    return FieldElement(x.a - y.a, x.b - y.b, x.d);
}

FieldElement neg(const FieldElement& x) { return FieldElement(-x.a, -x.b, x.d); }

FieldElement mul(const FieldElement& x, const FieldElement& y) {
    check_same_field(x, y);
    Rat c0, c1;
    omega_square(x.d, c0, c1);
    // (a1 + b1 w)(a2 + b2 w) = a1 a2 + b1 b2 w^2 + (a1 b2 + a2 b1) w
    Rat bb = x.b * y.b;
    return FieldElement(x.a * y.a + bb * c0, x.a * y.b + x.b * y.a + bb * c1, x.d);
}

FieldElement mul_rat(const FieldElement& x, const Rat& c) {
    return FieldElement(x.a * c, x.b * c, x.d);
}

FieldElement conj(const FieldElement& x) {
    if (omega_kind_for(x.d) == OmegaKind::Sqrt) return FieldElement(x.a, -x.b, x.d);
    // conj(omega) = 1 - omega
    return FieldElement(x.a + x.b, -x.b, x.d);
}

Rat norm(const FieldElement& x) {
    FieldElement p = mul(x, conj(x));
    // the product of an element with its conjugate is rational
    if (p.b != 0) fail(ErrorCode::Internal, "norm not rational");
    return p.a;
}

Rat trace(const FieldElement& x) {
    FieldElement s = add(x, conj(x));
    if (s.b != 0) fail(ErrorCode::Internal, "trace not rational");
    return s.a;
}

FieldElement inverse(const FieldElement& x) {
    if (x.is_zero()) fail(ErrorCode::BadInput, "division by zero");
    Rat n = norm(x);
    return mul_rat(conj(x), Rat(1) / n);
}

FieldElement div(const FieldElement& x, const FieldElement& y) { return mul(x, inverse(y)); }

bool is_integral(const FieldElement& x) { return is_integer(x.a) && is_integer(x.b); }

int sign_at_place(const FieldElement& x, int place) {
    // x = u + v*sqrt(d) with rational u, v
    Rat u = x.a, v = x.b;
    if (omega_kind_for(x.d) == OmegaKind::Half) {
        u = x.a + x.b / 2;
        v = x.b / 2;
    }
    if (place == 1) v = -v;
    if (v == 0) return sgn(u);
    if (x.d < 0) fail(ErrorCode::BadInput, "no real place for imaginary field");
    if (u == 0) return sgn(v);
    int su = sgn(u), sv = sgn(v);
    if (su == sv) return su;
    // sign of u + v sqrt(d): compare u^2 against v^2 d
    Rat uu = u * u, vv = v * v * Rat(x.d);
    if (uu == vv) fail(ErrorCode::Internal, "sqrt(d) rational");
    return uu > vv ? su : sv;
}

bool is_totally_positive(const FieldElement& x) {
    if (x.d < 0) return !x.is_zero();
    return sign_at_place(x, 0) > 0 && sign_at_place(x, 1) > 0;
}

bool is_unit(const FieldElement& x) {
    return is_integral(x) && abs_rat(norm(x)) == 1;
}

Rat height(const FieldElement& x) { return std::max(abs_rat(x.a), abs_rat(x.b)); }

std::string to_string(const FieldElement& x) {
    const char* sym = (omega_kind_for(x.d) == OmegaKind::Sqrt) ? "s" : "h";
    if (x.b == 0) return rat_to_string(x.a);
    std::ostringstream os;
    if (x.a != 0) os << rat_to_string(x.a);
    if (x.b > 0 && x.a != 0) os << "+";
    if (x.b == -1)
        os << "-";
    else if (x.b != 1)
        os << rat_to_string(x.b) << "*";
    os << sym;
    return os.str();
}

FieldElement parse_element(const QuadraticField& k, const std::string& text) {
    // terms separated by +/- at top level; each term: rational, or rational*sym,
    // or sym alone, where sym is 's' (sqrt d) or 'h' ((1+sqrt d)/2).
    FieldElement out = from_rational(k, Rat(0));
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (i == text.size()) fail(ErrorCode::BadInput, "empty element");
    while (i < text.size()) {
        skip_ws();
        int sign = 1;
        while (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            if (text[i] == '-') sign = -sign;
            ++i;
            skip_ws();
        }
        if (i == text.size()) fail(ErrorCode::BadInput, "dangling sign in '" + text + "'");
        std::string num;
        while (i < text.size() &&
               (isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/'))
            num += text[i++];
        skip_ws();
        bool has_sym = false;
        char sym = 0;
        if (i < text.size() && text[i] == '*') {
            ++i;
            skip_ws();
        }
        if (i < text.size() && (text[i] == 's' || text[i] == 'h')) {
            has_sym = true;
            sym = text[i++];
        }
        Rat coeff = num.empty() ? Rat(1) : parse_rat(num);
        if (num.empty() && !has_sym)
            fail(ErrorCode::BadInput, "cannot parse element '" + text + "'");
        if (sign < 0) coeff = -coeff;
        if (!has_sym) {
            out = add(out, from_rational(k, coeff));
        } else if (sym == 'h') {
            if (k.omega_kind != OmegaKind::Half)
                fail(ErrorCode::BadInput, "basis symbol 'h' needs d = 1 mod 4");
            out = add(out, element(k, Rat(0), coeff));
        } else {
            out = add(out, mul_rat(sqrt_d(k), coeff));
        }
        skip_ws();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fundamental unit via the continued fraction of omega. The walk expands
// alpha_0 = (P0 + sqrt(D))/2 with P0 = D mod 2; once a state (P, Q) repeats,
// the product of the complete quotients over the cycle is the fundamental
// unit of O_K (it generates the group of automorphisms of the cycle of
// reduced principal ideals).

UnitData fundamental_unit(const QuadraticField& k, long cap) {
    if (k.d < 0)
        fail(ErrorCode::ImaginaryField, "unit group of an imaginary field is finite");
    const Int D = k.D;
    const Int s = isqrt_floor(D);
    Int P = mod_floor(D, Int(2));
    Int Q = 2;
    std::map<std::pair<Int, Int>, int> seen;
    std::vector<std::pair<Int, Int>> states;
    int cycle_start = -1;
    for (long step = 0; step < cap; ++step) {
        auto key = std::make_pair(P, Q);
        auto it = seen.find(key);
        if (it != seen.end()) {
            cycle_start = it->second;
            break;
        }
        seen.emplace(key, static_cast<int>(states.size()));
        states.push_back(key);
        Int a = fdiv(P + s, Q);
        Int Pn = a * Q - P;
        Int Qn = divexact(D - Pn * Pn, Q);
        P = Pn;
        Q = Qn;
    }
    if (cycle_start < 0)
        fail(ErrorCode::SearchCapExceeded, "continued fraction period exceeds cap");

    // epsilon = product of (P_i + sqrt(D)) / Q_i over the cycle
    FieldElement sqrtD = mul_rat(sqrt_d(k), Rat(k.omega_kind == OmegaKind::Half ? 1 : 2));
    FieldElement eps = from_rational(k, Rat(1));
    for (size_t i = static_cast<size_t>(cycle_start); i < states.size(); ++i) {
        FieldElement alpha =
            mul_rat(add(from_rational(k, Rat(states[i].first)), sqrtD), make_rat(1, states[i].second));
        eps = mul(eps, alpha);
    }
    if (!is_integral(eps) || abs_rat(norm(eps)) != 1)
        fail(ErrorCode::Internal, "continued fraction produced a non-unit");
    if (sign_at_place(eps, 0) < 0) eps = neg(eps);

    UnitData u;
    u.fundamental_unit = eps;
    u.unit_norm = norm(eps) == 1 ? 1 : -1;
    u.t_exponent = (u.unit_norm == -1) ? 2 : 1;
    return u;
}

} // namespace klein
