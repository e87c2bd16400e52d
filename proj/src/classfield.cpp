#include "klein/classfield.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace klein {

namespace {

// ---------------------------------------------------------------------------
// Canonical class keys. Imaginary fields: the Gauss-reduced form (A, B) of
// the primitive part. Real fields: the minimal continued-fraction state of
// the ideal's reduction cycle, plus (for the narrow group when N(eps) = +1)
// the sign of the norm of the multiplier connecting the ideal to that state.

struct ClassKey {
    Int x, y;
    int tag = 1;
    bool operator<(const ClassKey& o) const {
        if (x != o.x) return x < o.x;
        if (y != o.y) return y < o.y;
        return tag < o.tag;
    }
    bool operator==(const ClassKey& o) const { return x == o.x && y == o.y && tag == o.tag; }
};

struct PrimitiveAB {
    Int A, Bt; // J = Z*A + Z*(Bt + omega)
};

PrimitiveAB primitive_ab(const FracIdeal& i) {
    return {divexact(i.a, i.c), divexact(i.b, i.c)};
}

FracIdeal ideal_from_state(const QuadraticField& k, const Int& P, const Int& Q) {
    // (1/2) (Z*Q + Z*(P + sqrt D)); P + sqrt D = (P - (D mod 2)) + 2*omega
    Int off = mod_floor(k.D, Int(2));
    return ideal_from_generators(k, {element(k, make_rat(Q, 2), Rat(0)),
                                     element(k, make_rat(P - off, 2), Rat(1))});
}

// Gauss reduction for D < 0; returns the reduced (A, B) with
// -A < B <= A <= C and B >= 0 if A == C.
ClassKey reduced_form_key(const QuadraticField& k, const PrimitiveAB& p) {
    const Int D = k.D;
    Int A = p.A;
    Int B = 2 * p.Bt + mod_floor(D, Int(2));
    while (true) {
        // normalize B into (-A, A]
        Int B2 = mod_floor(B + A, 2 * A) - A; // in (-A, A]
        B = B2;
        Int C = divexact(B * B - D, 4 * A);
        if (A > C) {
            B = -B;
            A = C;
            continue;
        }
        if (A == C && B < 0) B = -B;
        return ClassKey{A, B, 1};
    }
}

struct RealWalkResult {
    ClassKey key;           // minimal state in the cycle
    FieldElement to_min;    // g with  (ideal at min state) = g * J0
    FracIdeal min_ideal;
};

std::pair<Int, Int> state_key(const Int& p, const Int& q) {
    Int qq = abs_int(q);
    return {qq, mod_floor(p, qq)};
}

Int floor_surd(const Int& p, const Int& q, const Int& s) {
    if (q > 0) return fdiv(p + s, q);
    return -(fdiv(p + s, -q) + 1);
}

RealWalkResult real_cycle_walk(const QuadraticField& k, const PrimitiveAB& pp, long cap) {
    const Int D = k.D;
    const Int s = isqrt_floor(D);
    const FieldElement sqrtD = mul_rat(sqrt_d(k), Rat(k.omega_kind == OmegaKind::Half ? 1 : 2));
    Int P = 2 * pp.Bt + mod_floor(D, Int(2));
    Int Q = 2 * pp.A;
    FieldElement g = from_rational(k, Rat(1));
    std::map<std::pair<Int, Int>, int> seen;
    std::vector<std::pair<Int, Int>> states;
    std::vector<FieldElement> multipliers;
    int cycle_start = -1;
    for (long step = 0; step < cap; ++step) {
        auto raw = std::make_pair(P, Q);
        auto it = seen.find(raw);
        if (it != seen.end()) {
            cycle_start = it->second;
            break;
        }
        seen.emplace(raw, static_cast<int>(states.size()));
        states.push_back(raw);
        multipliers.push_back(g);
        Int a = floor_surd(P, Q, s);
        Int Pn = a * Q - P;
        Int Qn = divexact(D - Pn * Pn, Q);
        g = mul(g, mul_rat(add(from_rational(k, Rat(Pn)), sqrtD), make_rat(1, Q)));
        P = Pn;
        Q = Qn;
    }
    if (cycle_start < 0) fail(ErrorCode::SearchCapExceeded, "ideal reduction walk exceeded cap");
    int best = cycle_start;
    auto best_key = state_key(states[best].first, states[best].second);
    for (size_t i = static_cast<size_t>(cycle_start); i < states.size(); ++i) {
        auto kk = state_key(states[i].first, states[i].second);
        if (kk < best_key) {
            best_key = kk;
            best = static_cast<int>(i);
        }
    }
    RealWalkResult r;
    r.key = ClassKey{best_key.first, best_key.second, 1};
    r.to_min = multipliers[static_cast<size_t>(best)];
    r.min_ideal = ideal_from_state(k, states[static_cast<size_t>(best)].first,
                                   states[static_cast<size_t>(best)].second);
    return r;
}

struct GroupBuilder {
    const QuadraticField& k;
    bool narrow;
    bool sign_matters; // d > 0, narrow, and N(eps) = +1
    long cap;

    std::map<ClassKey, int> index;
    std::vector<FracIdeal> reps;

    GroupBuilder(const QuadraticField& k_, bool narrow_, long cap_)
        : k(k_), narrow(narrow_), cap(cap_) {
        sign_matters = false;
        if (k.d > 0 && narrow) sign_matters = fundamental_unit(k).unit_norm == 1;
    }

    ClassKey key_of(const FracIdeal& i) {
        PrimitiveAB pp = primitive_ab(i);
        if (k.d < 0) return reduced_form_key(k, pp);
        RealWalkResult w = real_cycle_walk(k, pp, cap);
        ClassKey key = w.key;
        if (sign_matters) key.tag = norm(w.to_min) > 0 ? 1 : -1;
        return key;
    }

    int class_of(const FracIdeal& i) {
        ClassKey key = key_of(i);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(reps.size());
        index.emplace(key, id);
        // store a small representative: the canonical reduced ideal when the
        // key tag is trivial, otherwise the ideal that discovered the class
        if (k.d < 0) {
            reps.push_back(ideal_from_state(k, key.y, 2 * key.x));
        } else if (!sign_matters || key.tag == 1) {
            reps.push_back(real_cycle_walk(k, primitive_ab(i), cap).min_ideal);
        } else {
            FracIdeal j = i;
            j.den = 1; // class is insensitive to rational content
            reps.push_back(j);
        }
        return id;
    }

    int multiply(int x, int y) { return class_of(mul(k, reps[static_cast<size_t>(x)],
                                                     reps[static_cast<size_t>(y)])); }
};

std::vector<Int> divisor_chain_orders(const std::vector<Int>& gen_orders) {
    return gen_orders;
}

AbelianGroupPresentation build_group(const QuadraticField& k, bool narrow, long cap) {
    GroupBuilder gb(k, narrow, cap);
    int identity = gb.class_of(ring_of_integers(k));
    if (identity != 0) fail(ErrorCode::Internal, "identity class not first");

    // generating classes: primes of norm <= Minkowski bound, plus the class
    // of (sqrt d) which generates the kernel of Cl^1 -> Cl in the real case
    std::vector<FracIdeal> gens_pool;
    Int mb = fdiv(k.minkowski_bound.get_num(), k.minkowski_bound.get_den()) + 1;
    for (const auto& p : primes_of_norm_up_to(k, mb)) gens_pool.push_back(p);
    if (narrow && k.d > 0) gens_pool.push_back(principal_ideal(k, sqrt_d(k)));

    std::vector<int> gen_ids;
    for (const auto& g : gens_pool) gen_ids.push_back(gb.class_of(g));

    // closure
    std::vector<int> queue = {identity};
    std::set<int> visited = {identity};
    for (int g : gen_ids)
        if (visited.insert(g).second) queue.push_back(g);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        for (int g : gen_ids) {
            int prod = gb.multiply(queue[qi], g);
            if (visited.insert(prod).second) queue.push_back(prod);
        }
    }
    const int h = static_cast<int>(gb.reps.size());

    // element orders
    auto order_of = [&](int x) {
        int o = 1, y = x;
        while (y != identity) {
            y = gb.multiply(y, x);
            ++o;
            if (o > h + 1) fail(ErrorCode::Internal, "order exceeds group size");
        }
        return o;
    };
    std::vector<int> orders(static_cast<size_t>(h));
    for (int i = 0; i < h; ++i) orders[static_cast<size_t>(i)] = order_of(i);

    // invariant-factor generators, largest order first, by greedy direct sums
    std::vector<int> gens;          // class indices
    std::vector<int> gen_ord;       // their orders
    std::set<int> span = {identity};
    auto span_with = [&](const std::set<int>& base, int x, int ord) {
        std::set<int> out;
        for (int b : base) {
            int cur = b;
            for (int e = 0; e < ord; ++e) {
                out.insert(cur);
                cur = gb.multiply(cur, x);
            }
        }
        return out;
    };
    while (static_cast<int>(span.size()) < h) {
        int best = -1, best_ord = 0;
        for (int x = 0; x < h; ++x) {
            if (span.count(x)) continue;
            int o = orders[static_cast<size_t>(x)];
            // direct-sum candidate: <span, x> must have size |span| * o
            if (o <= best_ord) continue;
            if (!gen_ord.empty() && gen_ord.back() % o != 0 && o % gen_ord.back() != 0) continue;
            std::set<int> bigger = span_with(span, x, o);
            if (static_cast<int>(bigger.size()) == static_cast<int>(span.size()) * o) {
                best = x;
                best_ord = o;
            }
        }
        if (best < 0) fail(ErrorCode::Internal, "no direct complement found");
        gens.push_back(best);
        gen_ord.push_back(best_ord);
        span = span_with(span, best, best_ord);
    }

    AbelianGroupPresentation g;
    g.narrow = narrow;
    g.order = h;
    // ascending divisor chain: smallest factor first
    std::vector<size_t> perm(gens.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(),
              [&](size_t a, size_t b) { return gen_ord[a] < gen_ord[b]; });
    for (size_t i : perm) {
        g.cyclic_orders.push_back(Int(gen_ord[i]));
        g.generators.push_back(gb.reps[static_cast<size_t>(gens[i])]);
    }
    for (size_t i = 0; i + 1 < g.cyclic_orders.size(); ++i)
        if (!divides(g.cyclic_orders[i], g.cyclic_orders[i + 1]))
            fail(ErrorCode::Internal, "orders do not form a divisor chain");

    // enumerate all classes with exponent vectors
    std::vector<int> gclasses;
    for (size_t i : perm) gclasses.push_back(gens[i]);
    std::vector<std::vector<Int>> dlogs;
    std::vector<int> class_ids;
    std::vector<Int> exps(g.cyclic_orders.size(), Int(0));
    auto rec = [&](auto&& self, size_t pos, int cur) -> void {
        if (pos == g.cyclic_orders.size()) {
            class_ids.push_back(cur);
            dlogs.push_back(exps);
            return;
        }
        int x = cur;
        for (Int e = 0; e < g.cyclic_orders[pos]; ++e) {
            exps[pos] = e;
            self(self, pos + 1, x);
            x = gb.multiply(x, gclasses[pos]);
        }
        exps[pos] = 0;
    };
    rec(rec, 0, identity);
    if (static_cast<int>(class_ids.size()) != h)
        fail(ErrorCode::Internal, "class enumeration size mismatch");
    g.class_reps.resize(static_cast<size_t>(h));
    g.class_dlogs.resize(static_cast<size_t>(h));
    for (size_t t = 0; t < class_ids.size(); ++t) {
        g.class_reps[static_cast<size_t>(class_ids[t])] = gb.reps[static_cast<size_t>(class_ids[t])];
        g.class_dlogs[static_cast<size_t>(class_ids[t])] = dlogs[t];
    }
    return g;
}

struct CacheEntry {
    AbelianGroupPresentation ordinary, narrow_g;
    bool have_ordinary = false, have_narrow = false;
};

std::map<long long, CacheEntry>& group_cache() {
    static std::map<long long, CacheEntry> c;
    return c;
}
std::mutex& group_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

Int AbelianGroupPresentation::two_torsion_hom_count() const {
    Int n = 1;
    for (const auto& o : cyclic_orders)
        if (divides(Int(2), o)) n *= 2;
    return n;
}

AbelianGroupPresentation class_group(const QuadraticField& k) {
    {
        std::lock_guard<std::mutex> lock(group_mutex());
        auto it = group_cache().find(k.d);
        if (it != group_cache().end() && it->second.have_ordinary) return it->second.ordinary;
    }
    AbelianGroupPresentation g = build_group(k, false, 1000000);
    std::lock_guard<std::mutex> lock(group_mutex());
    auto& e = group_cache()[k.d];
    e.ordinary = g;
    e.have_ordinary = true;
    return g;
}

AbelianGroupPresentation narrow_class_group(const QuadraticField& k) {
    if (k.d < 0) {
        AbelianGroupPresentation g = class_group(k);
        g.narrow = true;
        return g;
    }
    {
        std::lock_guard<std::mutex> lock(group_mutex());
        auto it = group_cache().find(k.d);
        if (it != group_cache().end() && it->second.have_narrow) return it->second.narrow_g;
    }
    AbelianGroupPresentation g = build_group(k, true, 1000000);
    std::lock_guard<std::mutex> lock(group_mutex());
    auto& e = group_cache()[k.d];
    e.narrow_g = g;
    e.have_narrow = true;
    return g;
}

std::vector<Int> dlog(const QuadraticField& k, const AbelianGroupPresentation& g,
                      const FracIdeal& i) {
    PrincipalityOptions opt;
    opt.totally_positive = g.narrow;
    for (size_t t = 0; t < g.class_reps.size(); ++t) {
        if (is_principal(k, mul(k, i, inv(k, g.class_reps[t])), opt).has_value())
            return g.class_dlogs[t];
    }
    fail(ErrorCode::Internal, "class not found in enumeration");
}

// ---------------------------------------------------------------------------
// Genus theory: factor D into prime fundamental discriminants.

bool is_fundamental_discriminant(const Int& D) {
    if (D == 1) return false;
    Int m4 = mod_floor(D, Int(4));
    if (m4 == 1) return is_squarefree(D);
    if (m4 != 0) return false;
    Int q = divexact(D, Int(4));
    Int q4 = mod_floor(q, Int(4));
    return (q4 == 2 || q4 == 3) && is_squarefree(q);
}

std::vector<Int> prime_discriminants(const Int& D) {
    std::vector<Int> out;
    Int rest = D;
    for (const auto& [p, e] : factorize(D)) {
        if (p == 2) continue;
        Int star = (mod_floor(p, Int(4)) == 1) ? p : -p;
        out.push_back(star);
        rest = divexact(rest, star);
    }
    if (rest != 1) {
        // the 2-part: one of -4, 8, -8
        if (rest != -4 && rest != 8 && rest != -8)
            fail(ErrorCode::Internal, "unexpected 2-part of discriminant");
        out.push_back(rest);
    }
    std::sort(out.begin(), out.end(), [](const Int& a, const Int& b) {
        if (abs_int(a) != abs_int(b)) return abs_int(a) < abs_int(b);
        return a < b;
    });
    return out;
}

std::vector<UnramifiedQuadExt> unramified_quadratic_extensions(const QuadraticField& k) {
    std::vector<Int> pd = prime_discriminants(k.D);
    size_t g = pd.size();
    std::vector<UnramifiedQuadExt> out;
    // unordered pairs {D1, D2}: subsets up to complement, excluding trivial
    std::set<Int> seen;
    for (unsigned long mask = 1; mask + 1 < (1ul << g); ++mask) {
        Int d1 = 1, d2 = 1;
        for (size_t i = 0; i < g; ++i)
            ((mask >> i) & 1 ? d1 : d2) *= pd[i];
        if (abs_int(d2) < abs_int(d1)) std::swap(d1, d2);
        if (!seen.insert(d1).second) continue;
        UnramifiedQuadExt e;
        e.disc_factor_1 = d1;
        e.disc_factor_2 = d2;
        e.delta = from_rational(k, Rat(d1));
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(), [](const UnramifiedQuadExt& a, const UnramifiedQuadExt& b) {
        if (abs_int(a.disc_factor_1) != abs_int(b.disc_factor_1))
            return abs_int(a.disc_factor_1) < abs_int(b.disc_factor_1);
        return a.disc_factor_1 < b.disc_factor_1;
    });

    // Prop-level consistency: count + 1 must equal |Hom(Cl^1, Z/2)|
    AbelianGroupPresentation cl1 = narrow_class_group(k);
    Int expect = cl1.two_torsion_hom_count();
    if (Int(out.size()) + 1 != expect)
        fail(ErrorCode::InconsistentCount,
             "genus count " + std::to_string(out.size()) + " + 1 != |Hom(Cl^1, Z/2)| = " +
                 expect.get_str());
    for (const auto& e : out) verify_unramified(k, e);
    return out;
}

void verify_unramified(const QuadraticField& k, const UnramifiedQuadExt& ext) {
    const Int D = k.D, d1 = ext.disc_factor_1, d2 = ext.disc_factor_2;
    if (d1 * d2 != D)
        fail(ErrorCode::RamifiedFiber, "discriminant factors do not multiply to D");
    if (gcd(d1, d2) != 1) fail(ErrorCode::RamifiedFiber, "discriminant factors not coprime");
    if (!is_fundamental_discriminant(d1) || !is_fundamental_discriminant(d2))
        fail(ErrorCode::RamifiedFiber, "factor is not a fundamental discriminant");
    // delta must not be a square in K: neither d1 nor d1*D is a rational square
    Int r;
    if (is_perfect_square(d1, &r) || is_perfect_square(d1 * D, &r))
        fail(ErrorCode::RamifiedFiber, "delta is a square in K");
    // local criterion at every p | 2D: inertia in the biquadratic closure is
    // determined by ramification in the three quadratic subfields (discs
    // d1, d2, D); a prime of K over p ramifies in L iff the inertia subgroup
    // meets Gal(L/K), i.e. iff p ramifies in both subfields other than K.
    std::vector<Int> ps;
    for (const auto& [p, e] : factorize(2 * D)) ps.push_back(p);
    for (const auto& p : ps) {
        bool r1 = divides(p, d1), r2 = divides(p, d2), rk = divides(p, D);
        if (r1 && r2)
            fail(ErrorCode::RamifiedFiber, "prime " + p.get_str() + " ramifies in L/K");
        if ((r1 || r2) && !rk)
            fail(ErrorCode::Internal, "inconsistent ramification pattern");
    }
}

RayClassData ray_class_data(const QuadraticField& k) {
    RayClassData out;
    out.h = class_group(k).order;
    out.h1 = narrow_class_group(k).order;
    if (k.d > 0) {
        out.r = 2;
        out.t = fundamental_unit(k).t_exponent;
    } else {
        out.r = 0;
        out.t = 0;
    }
    Int expect = pow_int(Int(2), static_cast<unsigned long>(out.r - out.t)) * out.h;
    if (out.h1 != expect)
        fail(ErrorCode::Internal, "ray class order formula violated: h1 = " + out.h1.get_str() +
                                      ", 2^(r-t) h = " + expect.get_str());
    return out;
}

RayClassData rational_ray_class_data() {
    RayClassData out;
    out.h = 1;
    out.h1 = 1;
    out.r = 1;
    out.t = 1;
    return out;
}

} // namespace klein
