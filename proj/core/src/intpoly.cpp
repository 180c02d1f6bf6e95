#include "vdclab/intpoly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace vdclab {

namespace {

unsigned total_degree(const Exponents& e) {
    unsigned d = 0;
    for (auto v : e) d += v;
    return d;
}

void check_same_vars(const IntPoly& a, const IntPoly& b, const char* op) {
    if (a.n_vars() != b.n_vars())
        throw ContractError(std::string(op) + ": operand variable counts differ");
}

}  // namespace

IntPoly IntPoly::constant(unsigned n_vars, const BigInt& c) {
    IntPoly p(n_vars);
    if (c != 0) p.terms_.emplace(Exponents(n_vars, 0), c);
    return p;
}

IntPoly IntPoly::monomial(unsigned n_vars, unsigned i, unsigned e, const BigInt& c) {
    if (i >= n_vars) throw ContractError("monomial: variable index out of range");
    IntPoly p(n_vars);
    if (c != 0) {
        Exponents ex(n_vars, 0);
        ex[i] = e;
        p.terms_.emplace(std::move(ex), c);
    }
    return p;
}

IntPoly IntPoly::from_terms(unsigned n_vars, const std::vector<std::pair<Exponents, BigInt>>& terms) {
    IntPoly p(n_vars);
    for (const auto& [e, c] : terms) p.add_term(e, c);
    return p;
}

void IntPoly::add_term(const Exponents& e, const BigInt& c) {
    if (e.size() != n_vars_) throw ContractError("add_term: exponent vector length mismatch");
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

int IntPoly::degree() const {
    if (terms_.empty()) return kZeroPolyDegree;
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return static_cast<int>(d);
}

bool IntPoly::is_homogeneous() const {
    if (terms_.empty()) return true;
    unsigned d = total_degree(terms_.begin()->first);
    for (const auto& [e, c] : terms_)
        if (total_degree(e) != d) return false;
    return true;
}

IntPoly IntPoly::operator-() const {
    IntPoly r(n_vars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
    check_same_vars(*this, o, "operator+");
    IntPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

IntPoly IntPoly::operator-(const IntPoly& o) const {
    check_same_vars(*this, o, "operator-");
    IntPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
    check_same_vars(*this, o, "operator*");
    IntPoly r(n_vars_);
    Exponents e(n_vars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            for (unsigned i = 0; i < n_vars_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

IntPoly IntPoly::operator*(const BigInt& c) const {
    IntPoly r(n_vars_);
    if (c == 0) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
    return r;
}

IntPoly IntPoly::homogeneous_part(int d) const {
    IntPoly r(n_vars_);
    if (d < 0) return r;
    for (const auto& [e, c] : terms_)
        if (static_cast<int>(total_degree(e)) == d) r.terms_.emplace(e, c);
    return r;
}

BigInt IntPoly::eval(const std::vector<BigInt>& point) const {
    if (point.size() != n_vars_) throw ContractError("eval: point dimension mismatch");
    BigInt acc = 0;
    for (const auto& [e, c] : terms_) {
        BigInt t = c;
        for (unsigned i = 0; i < n_vars_; ++i)
            if (e[i] > 0) t *= pow_bigint(point[i], e[i]);
        acc += t;
    }
    return acc;
}

std::int64_t IntPoly::eval_mod(const std::vector<std::uint32_t>& point, std::uint32_t m) const {
    if (point.size() != n_vars_) throw ContractError("eval_mod: point dimension mismatch");
    std::uint64_t acc = 0;
    const std::uint64_t mm = m;
    for (const auto& [e, c] : terms_) {
        std::uint64_t t = static_cast<std::uint64_t>((c % m + m).convert_to<std::int64_t>()) % mm;
        for (unsigned i = 0; i < n_vars_; ++i) {
            std::uint64_t base = point[i] % mm;
            for (std::uint32_t k = 0; k < e[i]; ++k) t = (t * base) % mm;
        }
        acc = (acc + t) % mm;
    }
    return static_cast<std::int64_t>(acc);
}

BigInt IntPoly::height() const {
    BigInt h = 0;
    for (const auto& [e, c] : terms_) {
        BigInt a = abs(c);
        if (a > h) h = a;
    }
    return h;
}

BigInt IntPoly::eval_bound(const BigInt& coordinate_bound) const {
    BigInt b = 0;
    for (const auto& [e, c] : terms_)
        b += abs(c) * pow_bigint(coordinate_bound, total_degree(e));
    return b;
}

std::string IntPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        first = false;
        BigInt a = abs(c);
        bool has_var = std::any_of(e.begin(), e.end(), [](std::uint32_t v) { return v > 0; });
        if (a != 1 || !has_var) os << a.str();
        bool star = (a != 1);
        for (unsigned i = 0; i < n_vars_; ++i) {
            if (e[i] == 0) continue;
            if (star) os << "*";
            os << "x" << (i + 1);
            if (e[i] > 1) os << "^" << e[i];
            star = true;
        }
    }
    return os.str();
}

IntPoly leading_form(const IntPoly& p) {
    if (p.is_zero()) throw ContractError("no leading form of zero");
    return p.homogeneous_part(p.degree());
}

IntPoly translate_scale(const IntPoly& p, const std::vector<BigInt>& shift, const BigInt& scale) {
    if (shift.size() != p.n_vars()) throw ContractError("translate_scale: shift dimension mismatch");
    const unsigned n = p.n_vars();

    // offsets t_i = scale * shift_i; expand each term via binomials
    std::vector<BigInt> t(n);
    for (unsigned i = 0; i < n; ++i) t[i] = scale * shift[i];

    IntPoly result(n);
    for (const auto& [e, c] : p.terms()) {
        // running expansion of c * prod (x_i + t_i)^{e_i}
        std::vector<std::pair<Exponents, BigInt>> acc{{Exponents(n, 0), c}};
        for (unsigned i = 0; i < n; ++i) {
            if (e[i] == 0) continue;
            if (t[i] == 0) {
                for (auto& [ex, co] : acc) ex[i] += e[i];
                continue;
            }
            // (x_i + t_i)^{e_i} = sum_j binom(e_i, j) t_i^{e_i - j} x_i^j
            std::vector<BigInt> coef(e[i] + 1);
            BigInt binom = 1;
            for (std::uint32_t j = 0; j <= e[i]; ++j) {
                if (j > 0) binom = binom * (e[i] - j + 1) / j;
                coef[j] = binom * pow_bigint(t[i], e[i] - j);
            }
            std::vector<std::pair<Exponents, BigInt>> next;
            next.reserve(acc.size() * (e[i] + 1));
            for (const auto& [ex, co] : acc) {
                for (std::uint32_t j = 0; j <= e[i]; ++j) {
                    if (coef[j] == 0) continue;
                    Exponents ex2 = ex;
                    ex2[i] += j;
                    next.emplace_back(std::move(ex2), co * coef[j]);
                }
            }
            acc = std::move(next);
        }
        for (const auto& [ex, co] : acc) result.add_term(ex, co);
    }
    return result;
}

IntPoly difference_poly(const IntPoly& f, const BigInt& p, const std::vector<BigInt>& y) {
    return translate_scale(f, y, p) - f;
}

std::vector<IntPoly> gradient(const IntPoly& p) {
    const unsigned n = p.n_vars();
    std::vector<IntPoly> g(n, IntPoly(n));
    for (const auto& [e, c] : p.terms()) {
        for (unsigned i = 0; i < n; ++i) {
            if (e[i] == 0) continue;
            Exponents de = e;
            de[i] -= 1;
            g[i].add_term(de, c * e[i]);
        }
    }
    return g;
}

std::vector<std::vector<IntPoly>> hessian(const IntPoly& p) {
    const unsigned n = p.n_vars();
    auto g = gradient(p);
    std::vector<std::vector<IntPoly>> h(n, std::vector<IntPoly>(n, IntPoly(n)));
    for (unsigned i = 0; i < n; ++i) {
        auto gi = gradient(g[i]);
        for (unsigned j = 0; j < n; ++j) h[i][j] = std::move(gi[j]);
    }
    return h;
}

IntPoly homogenize(const IntPoly& f, int min_degree) {
    const unsigned n = f.n_vars();
    int d = std::max(f.is_zero() ? 0 : f.degree(), min_degree);
    IntPoly g(n + 1);
    for (const auto& [e, c] : f.terms()) {
        Exponents e2(n + 1, 0);
        unsigned td = 0;
        for (unsigned i = 0; i < n; ++i) {
            e2[i + 1] = e[i];
            td += e[i];
        }
        e2[0] = static_cast<std::uint32_t>(d) - td;
        g.add_term(e2, c);
    }
    return g;
}

IntPoly directional_derivative(const IntPoly& f, const std::vector<BigInt>& y) {
    if (y.size() != f.n_vars()) throw ContractError("directional_derivative: dimension mismatch");
    auto g = gradient(f);
    IntPoly r(f.n_vars());
    for (unsigned i = 0; i < f.n_vars(); ++i) r = r + g[i] * y[i];
    return r;
}

PolySystem::PolySystem(unsigned n_vars, std::vector<IntPoly> polys)
    : n_vars_(n_vars), polys_(std::move(polys)) {
    if (polys_.empty()) throw ContractError("PolySystem: needs at least one polynomial");
    leading_forms_.reserve(polys_.size());
    for (const auto& p : polys_) {
        if (p.n_vars() != n_vars_) throw ContractError("PolySystem: variable count mismatch");
        if (p.is_zero()) throw ContractError("PolySystem: zero polynomial in system");
        leading_forms_.push_back(leading_form(p));
    }
}

int PolySystem::max_degree() const {
    int d = kZeroPolyDegree;
    for (const auto& p : polys_) d = std::max(d, p.degree());
    return d;
}

}  // namespace vdclab
