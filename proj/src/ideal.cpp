#include "klein/ideal.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace klein {

namespace {

struct Vec2 {
    Int x, y; // x * 1 + y * omega
};

// Canonical HNF [[a, b], [0, c]] of the Z-span of the given vectors.
// Requires rank 2 (always the case for a nonzero O_K-stable lattice).
void lattice_hnf(std::vector<Vec2> v, Int& a, Int& b, Int& c) {
    // Combine to a single vector carrying the gcd of the omega-components.
    Int g = 0;
    Vec2 w{0, 0};
    for (const auto& t : v) {
        if (t.y == 0) continue;
        if (g == 0) {
            g = abs_int(t.y);
            w = t.y > 0 ? t : Vec2{-t.x, -t.y};
            continue;
        }
        Int s, u, gg;
        mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), u.get_mpz_t(), w.y.get_mpz_t(),
                   t.y.get_mpz_t());
        w = Vec2{s * w.x + u * t.x, gg};
        g = gg;
    }
    if (g == 0) fail(ErrorCode::Internal, "lattice of rank < 2");
    c = g;
    a = 0;
    for (const auto& t : v) {
        Int r = t.x - divexact(t.y, c) * w.x;
        a = gcd(a, r);
    }
    if (a == 0) fail(ErrorCode::Internal, "lattice of rank < 2");
    b = mod_floor(w.x, a);
}

void canonicalize(FracIdeal& id) {
    Int g = gcd(gcd(id.a, id.b), gcd(id.c, id.den));
    if (g > 1) {
        id.a = divexact(id.a, g);
        id.b = divexact(id.b, g);
        id.c = divexact(id.c, g);
        id.den = divexact(id.den, g);
    }
}

FracIdeal from_lattice(long long d, const Int& den, std::vector<Vec2> v) {
    FracIdeal id;
    id.d = d;
    id.den = den;
    lattice_hnf(std::move(v), id.a, id.b, id.c);
    canonicalize(id);
    return id;
}

// omega^2 = c0 + c1*omega with integer c0, c1
void omega_square_int(long long d, Int& c0, Int& c1) {
    if (omega_kind_for(d) == OmegaKind::Sqrt) {
        c0 = d;
        c1 = 0;
    } else {
        c0 = divexact(Int(d) - 1, Int(4));
        c1 = 1;
    }
}

Vec2 mul_omega(long long d, const Vec2& v) {
    Int c0, c1;
    omega_square_int(d, c0, c1);
    // (x + y w) w = y c0 + (x + y c1) w
    return Vec2{v.y * c0, v.x + v.y * c1};
}

Int trace_omega(long long d) { return omega_kind_for(d) == OmegaKind::Sqrt ? Int(0) : Int(1); }
Int norm_omega(long long d) {
    return omega_kind_for(d) == OmegaKind::Sqrt ? Int(-d) : divexact(Int(1) - d, Int(4));
}

// Primitive part: I = (content) * J with J = Z*A + Z*(Bt + omega).
struct PrimitivePart {
    Int A, Bt;
    Rat content;
};

PrimitivePart primitive_part(const FracIdeal& i) {
    PrimitivePart p;
    p.A = divexact(i.a, i.c);
    p.Bt = divexact(i.b, i.c);
    p.content = make_rat(i.c, i.den);
    return p;
}

Int floor_surd(const Int& p, const Int& q, const Int& sqrt_floor_D) {
    // floor((p + sqrt(D)) / q), q != 0
    if (q > 0) return fdiv(p + sqrt_floor_D, q);
    return -(fdiv(p + sqrt_floor_D, -q) + 1);
}

FieldElement sqrt_D_element(const QuadraticField& k) {
    return mul_rat(sqrt_d(k), Rat(k.omega_kind == OmegaKind::Half ? 1 : 2));
}

// Key identifying the ideal (1/2)(Z q + Z (p + sqrt D)).
std::pair<Int, Int> ideal_key(const Int& p, const Int& q) {
    Int qq = abs_int(q);
    return {qq, mod_floor(p, qq)};
}

struct PrincipalCycle {
    // ideal key -> multiplier h with I_state = (h) as a principal ideal
    std::map<std::pair<Int, Int>, FieldElement> arrivals;
};

const PrincipalCycle& principal_cycle(const QuadraticField& k, long cap) {
    static std::map<long long, PrincipalCycle> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k.d);
    if (it != cache.end()) return it->second;

    PrincipalCycle pc;
    const Int D = k.D;
    const Int s = isqrt_floor(D);
    const FieldElement sqrtD = sqrt_D_element(k);
    Int P = mod_floor(D, Int(2));
    Int Q = 2;
    FieldElement h = from_rational(k, Rat(1));
    for (long step = 0; step < cap; ++step) {
        auto key = ideal_key(P, Q);
        if (pc.arrivals.count(key)) return cache.emplace(k.d, std::move(pc)).first->second;
        pc.arrivals.emplace(key, h);
        Int a = floor_surd(P, Q, s);
        Int Pn = a * Q - P;
        Int Qn = divexact(D - Pn * Pn, Q);
        // J_{i+1} = ((P_{i+1} + sqrt D)/Q_i) * J_i
        h = mul(h, mul_rat(add(from_rational(k, Rat(Pn)), sqrtD), make_rat(1, Q)));
        P = Pn;
        Q = Qn;
    }
    fail(ErrorCode::SearchCapExceeded, "principal cycle longer than cap");
}

const UnitData& cached_unit(const QuadraticField& k) {
    static std::map<long long, UnitData> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k.d);
    if (it == cache.end()) it = cache.emplace(k.d, fundamental_unit(k)).first;
    return it->second;
}

} // namespace

FracIdeal ring_of_integers(const QuadraticField& k) {
    FracIdeal id;
    id.d = k.d;
    id.den = 1;
    id.a = 1;
    id.b = 0;
    id.c = 1;
    return id;
}

FracIdeal ideal_from_generators(const QuadraticField& k, const std::vector<FieldElement>& gens) {
    Int den = 1;
    bool nonzero = false;
    for (const auto& g : gens) {
        if (g.d != k.d) fail(ErrorCode::BadInput, "generator from a different field");
        if (!g.is_zero()) nonzero = true;
        den = lcm(den, lcm(g.a.get_den(), g.b.get_den()));
    }
    if (!nonzero) fail(ErrorCode::ZeroIdeal, "all generators are zero");
    std::vector<Vec2> v;
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        Rat xa = g.a * den, xb = g.b * den;
        Vec2 w{xa.get_num(), xb.get_num()};
        v.push_back(w);
        v.push_back(mul_omega(k.d, w));
    }
    return from_lattice(k.d, den, std::move(v));
}

FracIdeal principal_ideal(const QuadraticField& k, const FieldElement& g) {
    return ideal_from_generators(k, {g});
}

FracIdeal mul(const QuadraticField& k, const FracIdeal& i, const FracIdeal& j) {
    if (i.d != k.d || j.d != k.d) fail(ErrorCode::BadInput, "ideal from a different field");
    // pairwise products of the Z-bases; the span is already O_K-stable
    Vec2 bi[2] = {{i.a, Int(0)}, {i.b, i.c}};
    Vec2 bj[2] = {{j.a, Int(0)}, {j.b, j.c}};
    Int c0, c1;
    omega_square_int(k.d, c0, c1);
    std::vector<Vec2> v;
    for (const auto& p : bi)
        for (const auto& q : bj) {
            // (x1 + y1 w)(x2 + y2 w)
            Int yy = p.y * q.y;
            v.push_back(Vec2{p.x * q.x + yy * c0, p.x * q.y + p.y * q.x + yy * c1});
        }
    return from_lattice(k.d, i.den * j.den, std::move(v));
}

FracIdeal mul_element(const QuadraticField& k, const FracIdeal& i, const FieldElement& g) {
    if (g.is_zero()) fail(ErrorCode::ZeroIdeal, "scaling ideal by zero");
    Int den = lcm(g.a.get_den(), g.b.get_den());
    FieldElement gi = mul_rat(g, Rat(den));
    Int c0, c1;
    omega_square_int(k.d, c0, c1);
    Int gx = gi.a.get_num(), gy = gi.b.get_num();
    auto mulg = [&](const Vec2& p) {
        Int yy = p.y * gy;
        return Vec2{p.x * gx + yy * c0, p.x * gy + p.y * gx + yy * c1};
    };
    std::vector<Vec2> v = {mulg({i.a, Int(0)}), mulg({i.b, i.c})};
    return from_lattice(k.d, i.den * den, std::move(v));
}

Rat ideal_norm(const FracIdeal& i) {
    return make_rat(i.a * i.c, i.den * i.den);
}

FracIdeal inv(const QuadraticField& k, const FracIdeal& i) {
    // I^{-1} = conj(I) / N(I)
    FieldElement e1 = FieldElement(make_rat(i.a, i.den), Rat(0), k.d);
    FieldElement e2 = FieldElement(make_rat(i.b, i.den), make_rat(i.c, i.den), k.d);
    FracIdeal cj = ideal_from_generators(k, {conj(e1), conj(e2)});
    Rat n = ideal_norm(i);
    FracIdeal out = cj;
    // scale by 1/n
    Int num = n.get_num(), den = n.get_den();
    out.a *= den;
    out.b *= den;
    out.c *= den;
    out.den *= num;
    canonicalize(out);
    return out;
}

bool contains(const FracIdeal& i, const FieldElement& x) {
    if (x.d != i.d) fail(ErrorCode::BadInput, "element from a different field");
    Rat u = x.a * i.den, v = x.b * i.den;
    if (!is_integer(u) || !is_integer(v)) return false;
    Int un = u.get_num(), vn = v.get_num();
    if (!divides(i.c, vn)) return false;
    Int m = divexact(vn, i.c);
    return divides(i.a, un - m * i.b);
}

std::pair<FieldElement, FieldElement> ideal_basis(const QuadraticField& k, const FracIdeal& i) {
    return {FieldElement(make_rat(i.a, i.den), Rat(0), k.d),
            FieldElement(make_rat(i.b, i.den), make_rat(i.c, i.den), k.d)};
}

bool ideal_subset(const QuadraticField& k, const FracIdeal& i, const FracIdeal& j) {
    auto [e1, e2] = ideal_basis(k, i);
    return contains(j, e1) && contains(j, e2);
}

bool is_whole_ring(const FracIdeal& i) {
    return i.den == 1 && i.a == 1 && i.b == 0 && i.c == 1;
}

int valuation(const QuadraticField& k, const FracIdeal& i, const FracIdeal& p) {
    FracIdeal pinv = inv(k, p);
    // split fractional I as numerator lattice over (den)
    FracIdeal num = i;
    Int den = i.den;
    num.den = 1;
    auto count = [&](FracIdeal j) {
        int v = 0;
        while (true) {
            FracIdeal next = mul(k, j, pinv);
            if (!next.is_integral()) return v;
            j = next;
            ++v;
            if (v > 100000) fail(ErrorCode::Internal, "runaway valuation");
        }
    };
    int vnum = count(num);
    int vden = 0;
    if (den != 1) {
        FracIdeal dl = principal_ideal(k, from_rational(k, Rat(den)));
        vden = count(dl);
    }
    return vnum - vden;
}

int element_valuation(const QuadraticField& k, const FieldElement& x, const FracIdeal& p) {
    return valuation(k, principal_ideal(k, x), p);
}

// ---------------------------------------------------------------------------
// Prime splitting

namespace {

// Tonelli-Shanks, p an odd prime, (a|p) = 1.
Int sqrt_mod_p(const Int& a0, const Int& p) {
    Int a = mod_floor(a0, p);
    if (a == 0) return 0;
    auto powm = [&](Int base, Int e) {
        Int r;
        mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    };
    if (mod_floor(p, Int(4)) == 3) return powm(a, divexact(p + 1, Int(4)));
    // write p-1 = q * 2^s
    Int q = p - 1;
    unsigned long s = 0;
    while (divides(Int(2), q)) {
        q = divexact(q, Int(2));
        ++s;
    }
    Int z = 2;
    while (kronecker(z, p) != -1) ++z;
    Int m = s, cc = powm(z, q), t = powm(a, q), r = powm(a, divexact(q + 1, Int(2)));
    while (t != 1) {
        Int i = 0, tt = t;
        while (tt != 1) {
            tt = mod_floor(tt * tt, p);
            ++i;
            if (i >= m) fail(ErrorCode::Internal, "sqrt_mod_p: not a residue");
        }
        Int b = cc;
        for (Int j = 0; j < m - i - 1; ++j) b = mod_floor(b * b, p);
        m = i;
        cc = mod_floor(b * b, p);
        t = mod_floor(t * cc, p);
        r = mod_floor(r * b, p);
    }
    return r;
}

// Root of the minimal polynomial of omega modulo odd p, given z^2 = d mod p.
Int omega_root_from_sqrt(const QuadraticField& k, const Int& z, const Int& p) {
    if (k.omega_kind == OmegaKind::Sqrt) return mod_floor(z, p);
    // omega = (1+sqrt d)/2 -> r = (1+z)/2 mod p
    Int inv2;
    mpz_invert(inv2.get_mpz_t(), Int(2).get_mpz_t(), p.get_mpz_t());
    return mod_floor((1 + z) * inv2, p);
}

FracIdeal prime_above(const QuadraticField& k, const Int& p, const Int& r) {
    return ideal_from_generators(
        k, {from_rational(k, Rat(p)), sub(omega(k), from_rational(k, Rat(r)))});
}

} // namespace

PrimeSplitting factor_rational_prime(const QuadraticField& k, const Int& p) {
    PrimeSplitting out{PrimeSplitting::Kind::Inert, {}};
    if (p == 2) {
        Int m8 = mod_floor(k.D, Int(8));
        if (m8 == 1) {
            out.kind = PrimeSplitting::Kind::Split;
            // x^2 - x - (d-1)/4 mod 2 has roots 0 and 1
            out.primes = {prime_above(k, p, Int(0)), prime_above(k, p, Int(1))};
        } else if (m8 == 5) {
            out.kind = PrimeSplitting::Kind::Inert;
            out.primes = {principal_ideal(k, from_rational(k, Rat(2)))};
        } else {
            out.kind = PrimeSplitting::Kind::Ramified;
            Int r = divides(Int(2), Int(k.d)) ? Int(0) : Int(1);
            out.primes = {prime_above(k, p, r)};
        }
        return out;
    }
    int chi = kronecker(k.D, p);
    if (chi == 1) {
        Int z = sqrt_mod_p(Int(k.d), p);
        Int r1 = omega_root_from_sqrt(k, z, p);
        Int r2 = omega_root_from_sqrt(k, p - z, p);
        if (r1 > r2) std::swap(r1, r2);
        out.kind = PrimeSplitting::Kind::Split;
        out.primes = {prime_above(k, p, r1), prime_above(k, p, r2)};
    } else if (chi == -1) {
        out.kind = PrimeSplitting::Kind::Inert;
        out.primes = {principal_ideal(k, from_rational(k, Rat(p)))};
    } else {
        out.kind = PrimeSplitting::Kind::Ramified;
        Int r = omega_root_from_sqrt(k, Int(0), p);
        out.primes = {prime_above(k, p, r)};
    }
    return out;
}

std::vector<FracIdeal> primes_of_norm_up_to(const QuadraticField& k, const Int& bound) {
    std::vector<FracIdeal> out;
    if (bound < 2) return out;
    long b = static_cast<long>(bound.get_si());
    for (long p : primes_up_to(b)) {
        PrimeSplitting ps = factor_rational_prime(k, Int(p));
        switch (ps.kind) {
            case PrimeSplitting::Kind::Split:
            case PrimeSplitting::Kind::Ramified:
                for (const auto& q : ps.primes) out.push_back(q);
                break;
            case PrimeSplitting::Kind::Inert:
                if (Int(p) * Int(p) <= bound) out.push_back(ps.primes[0]);
                break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Principality

namespace {

std::optional<FieldElement> principal_generator_imaginary(const QuadraticField& k, const Int& A,
                                                          const Int& Bt,
                                                          const PrincipalityOptions& opt) {
    // gamma = m*A + n*(Bt + omega); N(gamma) = x^2 + T x n + Nw n^2 with
    // x = m*A + n*Bt. Want N(gamma) = A; |n| <= sqrt(4A/|D|).
    const Int T = trace_omega(k.d), Nw = norm_omega(k.d);
    const Int D = k.D;
    Int nmax = isqrt_floor((Int(4) * A) / abs_int(D)) + 1;
    long budget = 0;
    for (Int n = -nmax; n <= nmax; ++n) {
        if (++budget > opt.cap) fail(ErrorCode::SearchCapExceeded, "principality budget");
        // x^2 + T n x + (Nw n^2 - A) = 0
        Int disc = T * T * n * n - 4 * (Nw * n * n - A);
        if (disc < 0) continue;
        Int z;
        if (!is_perfect_square(disc, &z)) continue;
        for (int sgn_z : {1, -1}) {
            Int x2 = -T * n + sgn_z * z;
            if (!divides(Int(2), x2)) continue;
            Int x = divexact(x2, Int(2));
            if (!divides(A, x - n * Bt)) continue;
            FieldElement g(Rat(x), Rat(n), k.d);
            if (g.is_zero()) continue;
            return g;
            // the caller verifies (g) = I exactly
        }
    }
    return std::nullopt;
}

std::optional<FieldElement> principal_generator_real(const QuadraticField& k, const Int& A,
                                                     const Int& Bt,
                                                     const PrincipalityOptions& opt) {
    const Int D = k.D;
    const Int s = isqrt_floor(D);
    const FieldElement sqrtD = sqrt_D_element(k);
    const PrincipalCycle& pc = principal_cycle(k, opt.cap);

    Int P = 2 * Bt + mod_floor(D, Int(2));
    Int Q = 2 * A;
    FieldElement g = from_rational(k, Rat(1)); // J_i = g * J_0
    std::map<std::pair<Int, Int>, bool> seen;  // raw surd states
    for (long step = 0; step < opt.cap; ++step) {
        auto it = pc.arrivals.find(ideal_key(P, Q));
        if (it != pc.arrivals.end()) {
            // J_i = g * J0 and J_i = (h): J0 = (h / g)
            return div(it->second, g);
        }
        if (!seen.emplace(std::make_pair(P, Q), true).second) return std::nullopt;
        Int a = floor_surd(P, Q, s);
        Int Pn = a * Q - P;
        Int Qn = divexact(D - Pn * Pn, Q);
        g = mul(g, mul_rat(add(from_rational(k, Rat(Pn)), sqrtD), make_rat(1, Q)));
        P = Pn;
        Q = Qn;
    }
    fail(ErrorCode::SearchCapExceeded, "reduction walk exceeded cap");
}

} // namespace

std::optional<FieldElement> is_principal(const QuadraticField& k, const FracIdeal& i,
                                         const PrincipalityOptions& opt) {
    if (i.d != k.d) fail(ErrorCode::BadInput, "ideal from a different field");
    PrimitivePart pp = primitive_part(i);
    std::optional<FieldElement> g0;
    if (pp.A == 1) {
        g0 = from_rational(k, Rat(1));
    } else if (k.d < 0) {
        g0 = principal_generator_imaginary(k, pp.A, pp.Bt, opt);
    } else {
        g0 = principal_generator_real(k, pp.A, pp.Bt, opt);
    }
    if (!g0) return std::nullopt;
    FieldElement g = mul_rat(*g0, pp.content);
    if (!(principal_ideal(k, g) == i))
        fail(ErrorCode::Internal, "principality generator failed verification");

    if (opt.totally_positive && k.d > 0) {
        const UnitData& u = cached_unit(k);
        if (norm(g) < 0) {
            if (u.unit_norm != -1) return std::nullopt;
            g = mul(g, u.fundamental_unit);
        }
        if (sign_at_place(g, 0) < 0) g = neg(g);
        if (!is_totally_positive(g))
            fail(ErrorCode::Internal, "sign adjustment failed");
    }
    return g;
}

bool same_class(const QuadraticField& k, const FracIdeal& i, const FracIdeal& j,
                const PrincipalityOptions& opt) {
    return is_principal(k, mul(k, i, inv(k, j)), opt).has_value();
}

bool steinitz_decide(const QuadraticField& k, const FracIdeal& i1, const FracIdeal& j1,
                     const FracIdeal& i2, const FracIdeal& j2, const PrincipalityOptions& opt) {
    return same_class(k, mul(k, i1, j1), mul(k, i2, j2), opt);
}

} // namespace klein
