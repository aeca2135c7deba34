#include "numfield/number_field.hpp"
#include "exactmath/errors.hpp"

#include <sstream>

namespace msel {

void NFElem::normalize() {
    if (den == 0) throw math_error("NFElem: zero denominator");
    if (den < 0) { den = -den; for (auto& x : v) x = -x; }
    Int g = den;
    for (auto& x : v) g = gcd(g, x);
    if (g > 1) { den /= g; for (auto& x : v) x /= g; }
}

bool NFElem::is_zero() const {
    for (auto& x : v) if (x != 0) return false;
    return true;
}

std::string NFElem::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < v.size(); i++) os << (i ? "," : "") << v[i].get_str();
    os << "]";
    if (den != 1) os << "/" << den.get_str();
    return os.str();
}

namespace {

/* multiply two power-basis rational vectors modulo f */
std::vector<Rat> pow_mul_mod(const std::vector<Rat>& a, const std::vector<Rat>& b,
                             const IntPoly& f) {
    long n = f.deg();
    std::vector<Rat> prod(2 * n - 1, Rat(0));
    for (long i = 0; i < n; i++) {
        if (a[i] == 0) continue;
        for (long j = 0; j < n; j++) prod[i + j] += a[i] * b[j];
    }
    /* reduce by monic f */
    for (long d = 2 * n - 2; d >= n; d--) {
        if (prod[d] == 0) continue;
        Rat c = prod[d];
        prod[d] = 0;
        for (long i = 0; i < n; i++) prod[d - n + i] -= c * Rat(f.coeff(i));
    }
    prod.resize(n);
    return prod;
}

} // namespace

std::vector<IntMat> order_rep_matrices(const IntPoly& f, const IntMat& basis_num,
                                       const Int& basis_den) {
    long n = f.deg();
    RatMat br(n, n);
    for (long i = 0; i < n; i++)
        for (long j = 0; j < n; j++) br.at(i, j) = make_rat(basis_num.at(i, j), basis_den);
    RatMat binv = inverse_rat(br);
    std::vector<std::vector<Rat>> wp(n, std::vector<Rat>(n));
    for (long i = 0; i < n; i++)
        for (long j = 0; j < n; j++) wp[i][j] = br.at(i, j);
    std::vector<IntMat> rep(n, IntMat(n, n));
    for (long i = 0; i < n; i++)
        for (long j = 0; j < n; j++) {
            auto prod = pow_mul_mod(wp[i], wp[j], f);
            for (long k = 0; k < n; k++) {
                Rat y(0);
                for (long t = 0; t < n; t++) y += prod[t] * binv.at(t, k);
                if (y.get_den() != 1) throw math_error("order_rep_matrices: not closed");
                rep[i].at(j, k) = y.get_num();
            }
        }
    return rep;
}

NumberField::NumberField(const IntPoly& poly) : f(poly) {
    if (!f.is_monic() || f.deg() < 1) throw math_error("NumberField: monic polynomial required");
    if (f.deg() > 1 && !ip_is_irreducible_monic(f)) throw math_error("NumberField: reducible polynomial");
    n = f.deg();
    r1 = ip_count_real_roots(f);
    r2 = (n - r1) / 2;

    auto ob = maximal_order(f);
    basis_num = ob.num;
    basis_den = ob.den;

    Int disc_f = ip_discriminant(f);
    /* [O : Z[theta]] = den^n / det(num) */
    Int dt = det_int(basis_num);
    Int dn = pow_int(basis_den, (unsigned long)n);
    if (dt == 0 || fdiv_r(dn, abs(dt)) != 0) throw math_error("NumberField: bad order basis");
    index = dn / abs(dt);
    disc = disc_f / (index * index);

    basis_rat = RatMat(n, n);
    for (long i = 0; i < n; i++)
        for (long j = 0; j < n; j++) basis_rat.at(i, j) = make_rat(basis_num.at(i, j), basis_den);
    basis_inv = inverse_rat(basis_rat);

    rep = order_rep_matrices(f, basis_num, basis_den);
    trace_w.assign(n, Int(0));
    for (long i = 0; i < n; i++)
        for (long j = 0; j < n; j++) trace_w[i] += rep[i].at(j, j);

    w_one.assign(n, Int(0));
    for (long k = 0; k < n; k++) {
        Rat y = basis_inv.at(0, k);
        if (y.get_den() != 1) throw math_error("NumberField: 1 not in order");
        w_one[k] = y.get_num();
    }
}

NFElem NumberField::one() const { return NFElem(w_one); }

NFElem NumberField::theta() const {
    std::vector<Rat> c(n, Rat(0));
    if (n == 1) { c[0] = Rat(-f.coeff(0)); return from_power(c); }
    c[1] = 1;
    return from_power(c);
}

NFElem NumberField::from_rational(const Rat& r) const {
    std::vector<Int> v(n);
    for (long i = 0; i < n; i++) v[i] = w_one[i] * r.get_num();
    return NFElem(std::move(v), r.get_den());
}

NFElem NumberField::from_power(const std::vector<Rat>& c) const {
    if ((long)c.size() > n) throw math_error("from_power: too many coordinates");
    std::vector<Rat> y(n, Rat(0));
    for (long k = 0; k < n; k++)
        for (long t = 0; t < (long)c.size(); t++) y[k] += c[t] * basis_inv.at(t, k);
    Int den = 1;
    for (auto& x : y) den = lcm(den, x.get_den());
    std::vector<Int> v(n);
    for (long k = 0; k < n; k++) v[k] = y[k].get_num() * (den / y[k].get_den());
    return NFElem(std::move(v), den);
}

std::vector<Rat> NumberField::to_power(const NFElem& a) const {
    std::vector<Rat> c(n, Rat(0));
    for (long t = 0; t < n; t++) {
        for (long k = 0; k < n; k++) c[t] += Rat(a.v[k]) * basis_rat.at(k, t);
        c[t] /= Rat(a.den);
        c[t].canonicalize();
    }
    return c;
}

NFElem NumberField::add(const NFElem& a, const NFElem& b) const {
    std::vector<Int> v(n);
    for (long i = 0; i < n; i++) v[i] = a.v[i] * b.den + b.v[i] * a.den;
    return NFElem(std::move(v), a.den * b.den);
}

NFElem NumberField::sub(const NFElem& a, const NFElem& b) const {
    std::vector<Int> v(n);
    for (long i = 0; i < n; i++) v[i] = a.v[i] * b.den - b.v[i] * a.den;
    return NFElem(std::move(v), a.den * b.den);
}

NFElem NumberField::neg(const NFElem& a) const {
    std::vector<Int> v(n);
    for (long i = 0; i < n; i++) v[i] = -a.v[i];
    return NFElem(std::move(v), a.den);
}

NFElem NumberField::mul(const NFElem& a, const NFElem& b) const {
    std::vector<Int> v(n, 0);
    for (long i = 0; i < n; i++) {
        if (a.v[i] == 0) continue;
        for (long j = 0; j < n; j++) {
            if (b.v[j] == 0) continue;
            Int c = a.v[i] * b.v[j];
            for (long k = 0; k < n; k++) v[k] += c * rep[i].at(j, k);
        }
    }
    return NFElem(std::move(v), a.den * b.den);
}

NFElem NumberField::mul_rational(const NFElem& a, const Rat& c) const {
    std::vector<Int> v(n);
    for (long i = 0; i < n; i++) v[i] = a.v[i] * c.get_num();
    return NFElem(std::move(v), a.den * c.get_den());
}

NFElem NumberField::inv(const NFElem& a) const {
    if (a.is_zero()) throw math_error("NFElem inverse of zero");
    /* solve y * M_a = 1 over Q where M_a row j = w coords of a*w_j */
    RatMat m(n, n);
    for (long i = 0; i < n; i++) {
        for (long j = 0; j < n; j++) {
            Rat s(0);
            for (long k = 0; k < n; k++) s += Rat(a.v[k]) * Rat(rep[k].at(i, j));
            m.at(j, i) = s / Rat(a.den); /* transpose for row-vector solve */
        }
    }
    std::vector<Rat> e(n);
    for (long i = 0; i < n; i++) e[i] = Rat(w_one[i]);
    auto y = solve_rat(m, e);
    Int den = 1;
    for (auto& x : y) den = lcm(den, x.get_den());
    std::vector<Int> v(n);
    for (long i = 0; i < n; i++) v[i] = y[i].get_num() * (den / y[i].get_den());
    return NFElem(std::move(v), den);
}

NFElem NumberField::div(const NFElem& a, const NFElem& b) const { return mul(a, inv(b)); }

NFElem NumberField::pow(const NFElem& a, const Int& e) const {
    if (e < 0) return inv(pow(a, Int(-e)));
    NFElem r = one(), base = a;
    Int k = e;
    while (k > 0) {
        if (fdiv_r(k, Int(2)) == 1) r = mul(r, base);
        base = mul(base, base);
        k = fdiv_q(k, Int(2));
    }
    return r;
}

Rat NumberField::trace(const NFElem& a) const {
    Int t(0);
    for (long i = 0; i < n; i++) t += a.v[i] * trace_w[i];
    Rat r(t, a.den);
    r.canonicalize();
    return r;
}

Rat NumberField::norm(const NFElem& a) const {
    IntMat m(n, n);
    for (long i = 0; i < n; i++)
        for (long j = 0; j < n; j++) {
            Int s(0);
            for (long k = 0; k < n; k++) s += a.v[k] * rep[k].at(i, j);
            m.at(i, j) = s;
        }
    Rat r(det_int(m), pow_int(a.den, (unsigned long)n));
    r.canonicalize();
    return r;
}

IntMat NumberField::mul_matrix(const NFElem& a) const {
    if (!a.is_integral()) throw math_error("mul_matrix: integral element required");
    IntMat m(n, n);
    for (long i = 0; i < n; i++)
        for (long j = 0; j < n; j++) {
            Int s(0);
            for (long k = 0; k < n; k++) s += a.v[k] * rep[k].at(i, j);
            m.at(i, j) = s;
        }
    return m;
}

NFElem NumberField::apply_matrix(const IntMat& m, const NFElem& a) const {
    std::vector<Int> v(n, 0);
    for (long i = 0; i < n; i++) {
        if (a.v[i] == 0) continue;
        for (long j = 0; j < n; j++) v[j] += a.v[i] * m.at(i, j);
    }
    return NFElem(std::move(v), a.den);
}

bool NumberField::is_rational(const NFElem& a, Rat* out) const {
    auto c = to_power(a);
    for (long i = 1; i < n; i++) if (c[i] != 0) return false;
    if (out) *out = c[0];
    return true;
}

NFElem NumberField::eval_poly(const IntPoly& g, const NFElem& a) const {
    NFElem r = zero();
    for (long i = g.deg(); i >= 0; i--) {
        r = mul(r, a);
        r = add(r, from_rational(Rat(g.coeff(i))));
    }
    return r;
}

} // namespace msel
